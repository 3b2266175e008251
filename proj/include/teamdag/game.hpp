#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace teamdag {

enum class Side : std::uint8_t { Max = 0, Min = 1 };

constexpr Side opponent(Side s) { return s == Side::Max ? Side::Min : Side::Max; }
constexpr int index_of(Side s) { return static_cast<int>(s); }
std::string_view to_string(Side s);
Side parse_side(std::string_view text);

enum class NodeKind : std::uint8_t { Chance, Player, Terminal };

using NodeId = std::int32_t;
using InfosetId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// Input that violates the game format or the structural assumptions.
class GameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A construction exceeded its configured resource limit.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Action {
  std::string label;
  NodeId child = kNoNode;
  double prob = 0.0;  // chance nodes only
};

struct Node {
  NodeKind kind = NodeKind::Terminal;
  NodeId parent = kNoNode;
  int depth = 0;
  int player = -1;           // acting player (player nodes)
  InfosetId infoset = -1;    // player nodes
  std::vector<Action> actions;
  double utility = 0.0;      // terminals, from the MAX side's point of view

  bool is_terminal() const { return kind == NodeKind::Terminal; }
  bool is_chance() const { return kind == NodeKind::Chance; }
  bool is_player() const { return kind == NodeKind::Player; }
};

struct Infoset {
  int player = -1;
  std::vector<NodeId> members;  // ascending node id
  std::vector<std::string> actions;
};

// Immutable, validated two-sided extensive-form game.
//
// Node ids are dense and assigned in preorder (root = 0, children in action
// order), so every iteration over nodes is deterministic.
class Game {
 public:
  const std::vector<std::string>& players() const { return players_; }
  std::optional<Side> side_of_player(int player) const;
  const std::vector<int>& team(Side s) const { return teams_[index_of(s)]; }

  NodeId root() const { return 0; }
  std::size_t num_nodes() const { return nodes_.size(); }
  const Node& node(NodeId h) const { return nodes_[static_cast<std::size_t>(h)]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Infoset>& infosets() const { return infosets_; }
  const Infoset& infoset(InfosetId i) const { return infosets_[static_cast<std::size_t>(i)]; }

  // Side owning a player node; nullopt for chance and terminal nodes.
  std::optional<Side> owner(NodeId h) const;

  const std::vector<NodeId>& terminals() const { return terminals_; }
  const std::vector<NodeId>& nodes_at_depth(int depth) const { return by_depth_[static_cast<std::size_t>(depth)]; }
  int max_depth() const { return static_cast<int>(by_depth_.size()) - 1; }
  // Largest number of actions at any internal node.
  int branching_factor() const { return branching_; }
  // Product of chance probabilities on the root path.
  double chance_reach(NodeId h) const { return chance_reach_[static_cast<std::size_t>(h)]; }
  bool is_ancestor_or_self(NodeId ancestor, NodeId h) const;
  NodeId ancestor_at_depth(NodeId h, int depth) const;
  // Index of the action taken at ancestor on the way to h (ancestor must be a strict ancestor).
  int action_towards(NodeId ancestor, NodeId h) const;

  bool operator==(const Game& other) const;

 private:
  friend class GameBuilder;
  std::vector<std::string> players_;
  std::vector<std::optional<Side>> player_side_;
  std::vector<int> teams_[2];
  std::vector<Node> nodes_;
  std::vector<Infoset> infosets_;
  std::vector<NodeId> terminals_;
  std::vector<std::vector<NodeId>> by_depth_;
  std::vector<double> chance_reach_;
  std::vector<NodeId> subtree_end_;  // preorder interval end (exclusive)
  int branching_ = 0;
};

// Incremental construction of a Game from arbitrary node ids.
//
// Nodes are created first and wired with add_action; build() checks every
// structural invariant and renumbers into preorder.
class GameBuilder {
 public:
  explicit GameBuilder(std::vector<std::string> players);
  void set_team(Side side, std::vector<int> players);

  NodeId add_chance();
  NodeId add_player(int player, InfosetId infoset);
  NodeId add_terminal(double utility);
  void add_action(NodeId parent, std::string label, NodeId child, double prob = 0.0);

  // Returns a stable infoset id for a key; convenient for generators.
  InfosetId infoset_for(const std::string& key);

  std::size_t size() const { return raw_.size(); }

  Game build(NodeId root) const;

 private:
  std::vector<std::string> players_;
  std::vector<int> teams_[2];
  std::vector<Node> raw_;
  std::map<std::string, InfosetId> infoset_keys_;
};

Game parse_game(std::string_view json_text);
std::string serialize_game(const Game& g, int indent = -1);

// Parses "0.25" style numbers or "num/den" rationals.
double parse_probability(std::string_view text);

}  // namespace teamdag
