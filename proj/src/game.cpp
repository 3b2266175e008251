#include "teamdag/game.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace teamdag {

using json = nlohmann::json;

std::string_view to_string(Side s) { return s == Side::Max ? "max" : "min"; }

Side parse_side(std::string_view text) {
  if (text == "max" || text == "MAX") return Side::Max;
  if (text == "min" || text == "MIN") return Side::Min;
  throw GameError("unknown side '" + std::string(text) + "'");
}

std::optional<Side> Game::side_of_player(int player) const {
  if (player < 0 || player >= static_cast<int>(player_side_.size())) return std::nullopt;
  return player_side_[static_cast<std::size_t>(player)];
}

std::optional<Side> Game::owner(NodeId h) const {
  const Node& n = node(h);
  if (!n.is_player()) return std::nullopt;
  return side_of_player(n.player);
}

bool Game::is_ancestor_or_self(NodeId ancestor, NodeId h) const {
  return ancestor <= h && h < subtree_end_[static_cast<std::size_t>(ancestor)];
}

NodeId Game::ancestor_at_depth(NodeId h, int depth) const {
  while (node(h).depth > depth) h = node(h).parent;
  return node(h).depth == depth ? h : kNoNode;
}

int Game::action_towards(NodeId ancestor, NodeId h) const {
  const auto& acts = node(ancestor).actions;
  // Children are contiguous preorder intervals; pick the one containing h.
  for (std::size_t a = 0; a < acts.size(); ++a) {
    if (is_ancestor_or_self(acts[a].child, h)) return static_cast<int>(a);
  }
  return -1;
}

bool Game::operator==(const Game& o) const {
  if (players_ != o.players_ || teams_[0] != o.teams_[0] || teams_[1] != o.teams_[1]) return false;
  if (nodes_.size() != o.nodes_.size() || infosets_.size() != o.infosets_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& a = nodes_[i];
    const Node& b = o.nodes_[i];
    if (a.kind != b.kind || a.parent != b.parent || a.depth != b.depth || a.player != b.player ||
        a.infoset != b.infoset || a.utility != b.utility || a.actions.size() != b.actions.size())
      return false;
    for (std::size_t k = 0; k < a.actions.size(); ++k) {
      if (a.actions[k].label != b.actions[k].label || a.actions[k].child != b.actions[k].child ||
          a.actions[k].prob != b.actions[k].prob)
        return false;
    }
  }
  for (std::size_t i = 0; i < infosets_.size(); ++i) {
    if (infosets_[i].player != o.infosets_[i].player || infosets_[i].members != o.infosets_[i].members ||
        infosets_[i].actions != o.infosets_[i].actions)
      return false;
  }
  return true;
}

GameBuilder::GameBuilder(std::vector<std::string> players) : players_(std::move(players)) {}

void GameBuilder::set_team(Side side, std::vector<int> players) { teams_[index_of(side)] = std::move(players); }

NodeId GameBuilder::add_chance() {
  Node n;
  n.kind = NodeKind::Chance;
  raw_.push_back(std::move(n));
  return static_cast<NodeId>(raw_.size() - 1);
}

NodeId GameBuilder::add_player(int player, InfosetId infoset) {
  Node n;
  n.kind = NodeKind::Player;
  n.player = player;
  n.infoset = infoset;
  raw_.push_back(std::move(n));
  return static_cast<NodeId>(raw_.size() - 1);
}

NodeId GameBuilder::add_terminal(double utility) {
  Node n;
  n.kind = NodeKind::Terminal;
  n.utility = utility;
  raw_.push_back(std::move(n));
  return static_cast<NodeId>(raw_.size() - 1);
}

void GameBuilder::add_action(NodeId parent, std::string label, NodeId child, double prob) {
  if (parent < 0 || parent >= static_cast<NodeId>(raw_.size()))
    throw GameError("add_action: parent " + std::to_string(parent) + " out of range");
  raw_[static_cast<std::size_t>(parent)].actions.push_back(Action{std::move(label), child, prob});
}

InfosetId GameBuilder::infoset_for(const std::string& key) {
  auto [it, inserted] = infoset_keys_.try_emplace(key, static_cast<InfosetId>(infoset_keys_.size()));
  return it->second;
}

namespace {

std::string at_node(NodeId h) { return "node " + std::to_string(h) + ": "; }

}  // namespace

Game GameBuilder::build(NodeId root) const {
  if (players_.empty()) throw GameError("game has no players");
  if (players_[0] != "chance") throw GameError("player 0 must be \"chance\"");
  const int num_players = static_cast<int>(players_.size());

  Game g;
  g.players_ = players_;
  g.player_side_.assign(players_.size(), std::nullopt);
  for (Side s : {Side::Max, Side::Min}) {
    for (int p : teams_[index_of(s)]) {
      if (p <= 0 || p >= num_players)
        throw GameError("team " + std::string(to_string(s)) + " lists invalid player " + std::to_string(p));
      if (g.player_side_[static_cast<std::size_t>(p)])
        throw GameError("player " + std::to_string(p) + " is on both teams or listed twice");
      g.player_side_[static_cast<std::size_t>(p)] = s;
    }
    g.teams_[index_of(s)] = teams_[index_of(s)];
    std::sort(g.teams_[index_of(s)].begin(), g.teams_[index_of(s)].end());
  }
  for (int p = 1; p < num_players; ++p) {
    if (!g.player_side_[static_cast<std::size_t>(p)])
      throw GameError("player " + std::to_string(p) + " (" + players_[static_cast<std::size_t>(p)] +
                      ") is not assigned to a team");
  }

  const auto n = static_cast<NodeId>(raw_.size());
  if (n == 0) throw GameError("game has no nodes");
  if (root < 0 || root >= n) throw GameError("root " + std::to_string(root) + " out of range");

  std::vector<NodeId> raw_parent(static_cast<std::size_t>(n), kNoNode);
  for (NodeId h = 0; h < n; ++h) {
    const Node& nd = raw_[static_cast<std::size_t>(h)];
    switch (nd.kind) {
      case NodeKind::Terminal:
        if (!nd.actions.empty()) throw GameError(at_node(h) + "terminal node has actions");
        if (!std::isfinite(nd.utility)) throw GameError(at_node(h) + "non-finite utility");
        break;
      case NodeKind::Chance: {
        if (nd.actions.empty()) throw GameError(at_node(h) + "chance node with zero actions");
        double total = 0.0;
        for (const auto& a : nd.actions) {
          if (!(a.prob >= 0.0) || !std::isfinite(a.prob))
            throw GameError(at_node(h) + "invalid chance probability");
          total += a.prob;
        }
        if (std::abs(total - 1.0) > 1e-12)
          throw GameError(at_node(h) + "chance probabilities sum to " + std::to_string(total));
        break;
      }
      case NodeKind::Player:
        if (nd.actions.empty()) throw GameError(at_node(h) + "player node with zero actions");
        if (nd.player <= 0 || nd.player >= num_players)
          throw GameError(at_node(h) + "invalid acting player " + std::to_string(nd.player));
        if (nd.infoset < 0) throw GameError(at_node(h) + "player node without infoset");
        break;
    }
    std::set<std::string_view> labels;
    for (const auto& a : nd.actions) {
      if (a.child < 0 || a.child >= n)
        throw GameError(at_node(h) + "dangling child reference " + std::to_string(a.child));
      if (!labels.insert(a.label).second) throw GameError(at_node(h) + "duplicate action label '" + a.label + "'");
      if (raw_parent[static_cast<std::size_t>(a.child)] != kNoNode || a.child == root)
        throw GameError(at_node(a.child) + "node has more than one parent");
      raw_parent[static_cast<std::size_t>(a.child)] = h;
    }
  }

  // Preorder renumbering.
  std::vector<NodeId> new_id(static_cast<std::size_t>(n), kNoNode);
  std::vector<NodeId> order;
  order.reserve(static_cast<std::size_t>(n));
  {
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
      NodeId h = stack.back();
      stack.pop_back();
      new_id[static_cast<std::size_t>(h)] = static_cast<NodeId>(order.size());
      order.push_back(h);
      const auto& acts = raw_[static_cast<std::size_t>(h)].actions;
      for (auto it = acts.rbegin(); it != acts.rend(); ++it) stack.push_back(it->child);
    }
  }
  if (static_cast<NodeId>(order.size()) != n) {
    for (NodeId h = 0; h < n; ++h)
      if (new_id[static_cast<std::size_t>(h)] == kNoNode) throw GameError(at_node(h) + "unreachable from the root");
  }

  // Dense infoset ids in ascending order of the given ids.
  std::map<InfosetId, InfosetId> infoset_map;
  for (const Node& nd : raw_)
    if (nd.is_player()) infoset_map.emplace(nd.infoset, 0);
  {
    InfosetId next = 0;
    for (auto& [key, value] : infoset_map) value = next++;
  }

  g.nodes_.resize(static_cast<std::size_t>(n));
  g.infosets_.resize(infoset_map.size());
  for (NodeId old = 0; old < n; ++old) {
    const Node& src = raw_[static_cast<std::size_t>(old)];
    Node& dst = g.nodes_[static_cast<std::size_t>(new_id[static_cast<std::size_t>(old)])];
    dst = src;
    dst.parent = raw_parent[static_cast<std::size_t>(old)] == kNoNode
                     ? kNoNode
                     : new_id[static_cast<std::size_t>(raw_parent[static_cast<std::size_t>(old)])];
    for (auto& a : dst.actions) a.child = new_id[static_cast<std::size_t>(a.child)];
    if (!dst.is_chance())
      for (auto& a : dst.actions) a.prob = 0.0;
    if (dst.is_player()) dst.infoset = infoset_map.at(src.infoset);
    else dst.infoset = -1;
    if (!dst.is_player()) dst.player = -1;
    if (!dst.is_terminal()) dst.utility = 0.0;
  }

  g.chance_reach_.assign(static_cast<std::size_t>(n), 1.0);
  g.subtree_end_.assign(static_cast<std::size_t>(n), 0);
  for (NodeId h = 0; h < n; ++h) {
    Node& nd = g.nodes_[static_cast<std::size_t>(h)];
    if (nd.parent != kNoNode) {
      const Node& par = g.nodes_[static_cast<std::size_t>(nd.parent)];
      nd.depth = par.depth + 1;
      double p = g.chance_reach_[static_cast<std::size_t>(nd.parent)];
      if (par.is_chance()) {
        for (const auto& a : par.actions)
          if (a.child == h) p *= a.prob;
      }
      g.chance_reach_[static_cast<std::size_t>(h)] = p;
    } else {
      nd.depth = 0;
    }
    if (static_cast<int>(g.by_depth_.size()) <= nd.depth) g.by_depth_.resize(static_cast<std::size_t>(nd.depth) + 1);
    g.by_depth_[static_cast<std::size_t>(nd.depth)].push_back(h);
    if (nd.is_terminal()) g.terminals_.push_back(h);
    g.branching_ = std::max(g.branching_, static_cast<int>(nd.actions.size()));
  }
  for (NodeId h = n - 1; h >= 0; --h) {
    const Node& nd = g.nodes_[static_cast<std::size_t>(h)];
    g.subtree_end_[static_cast<std::size_t>(h)] =
        nd.actions.empty() ? h + 1 : g.subtree_end_[static_cast<std::size_t>(nd.actions.back().child)];
  }

  for (NodeId h = 0; h < n; ++h) {
    const Node& nd = g.nodes_[static_cast<std::size_t>(h)];
    if (!nd.is_player()) continue;
    Infoset& info = g.infosets_[static_cast<std::size_t>(nd.infoset)];
    if (info.members.empty()) {
      info.player = nd.player;
      for (const auto& a : nd.actions) info.actions.push_back(a.label);
    } else {
      const Node& first = g.nodes_[static_cast<std::size_t>(info.members.front())];
      if (info.player != nd.player) throw GameError(at_node(h) + "infoset shared by different players");
      if (first.depth != nd.depth)
        throw GameError(at_node(h) + "infoset members at depths " + std::to_string(first.depth) + " and " +
                        std::to_string(nd.depth) + " (game is not timeable)");
      if (nd.actions.size() != info.actions.size())
        throw GameError(at_node(h) + "infoset action-list mismatch");
      for (std::size_t a = 0; a < nd.actions.size(); ++a)
        if (nd.actions[a].label != info.actions[a]) throw GameError(at_node(h) + "infoset action-list mismatch");
    }
    info.members.push_back(h);
  }
  return g;
}

double parse_probability(std::string_view text) {
  auto parse_number = [](std::string_view s) {
    std::string tmp(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tmp, &used);
    } catch (const std::exception&) {
      throw GameError("malformed probability '" + tmp + "'");
    }
    if (used != tmp.size()) throw GameError("malformed probability '" + tmp + "'");
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_number(text);
  double num = parse_number(text.substr(0, slash));
  double den = parse_number(text.substr(slash + 1));
  if (den == 0.0) throw GameError("probability with zero denominator");
  return num / den;
}

Game parse_game(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw GameError(std::string("malformed document: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw GameError("malformed document: top level must be an object");
    for (const char* key : {"players", "teams", "root", "nodes"})
      if (!doc.contains(key)) throw GameError(std::string("malformed document: missing \"") + key + "\"");

    GameBuilder b(doc.at("players").get<std::vector<std::string>>());
    const auto& teams = doc.at("teams");
    b.set_team(Side::Max, teams.at("max").get<std::vector<int>>());
    b.set_team(Side::Min, teams.at("min").get<std::vector<int>>());

    const auto& nodes = doc.at("nodes");
    if (!nodes.is_array()) throw GameError("malformed document: \"nodes\" must be an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& nd = nodes[i];
      const std::string kind = nd.at("kind").get<std::string>();
      if (kind == "chance") {
        b.add_chance();
      } else if (kind == "player") {
        if (!nd.contains("player") || !nd.contains("infoset"))
          throw GameError(at_node(static_cast<NodeId>(i)) + "player node needs \"player\" and \"infoset\"");
        b.add_player(nd.at("player").get<int>(), nd.at("infoset").get<int>());
      } else if (kind == "terminal") {
        if (!nd.contains("utility")) throw GameError(at_node(static_cast<NodeId>(i)) + "terminal without utility");
        b.add_terminal(nd.at("utility").get<double>());
      } else {
        throw GameError(at_node(static_cast<NodeId>(i)) + "unknown kind '" + kind + "'");
      }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& nd = nodes[i];
      if (!nd.contains("actions")) continue;
      const bool chance = nd.at("kind") == "chance";
      for (const auto& a : nd.at("actions")) {
        double prob = 0.0;
        if (chance) {
          if (!a.contains("prob")) throw GameError(at_node(static_cast<NodeId>(i)) + "chance action without prob");
          const auto& p = a.at("prob");
          prob = p.is_string() ? parse_probability(p.get<std::string>()) : p.get<double>();
        }
        b.add_action(static_cast<NodeId>(i), a.at("label").get<std::string>(), a.at("child").get<int>(), prob);
      }
    }
    return b.build(doc.at("root").get<int>());
  } catch (const json::exception& e) {
    throw GameError(std::string("malformed document: ") + e.what());
  }
}

std::string serialize_game(const Game& g, int indent) {
  json doc;
  doc["players"] = g.players();
  doc["teams"] = {{"max", g.team(Side::Max)}, {"min", g.team(Side::Min)}};
  doc["root"] = g.root();
  json nodes = json::array();
  for (const Node& nd : g.nodes()) {
    json j;
    switch (nd.kind) {
      case NodeKind::Chance: j["kind"] = "chance"; break;
      case NodeKind::Player:
        j["kind"] = "player";
        j["player"] = nd.player;
        j["infoset"] = nd.infoset;
        break;
      case NodeKind::Terminal:
        j["kind"] = "terminal";
        j["utility"] = nd.utility;
        break;
    }
    if (!nd.is_terminal()) {
      json acts = json::array();
      for (const auto& a : nd.actions) {
        json ja = {{"label", a.label}, {"child", a.child}};
        if (nd.is_chance()) ja["prob"] = a.prob;
        acts.push_back(std::move(ja));
      }
      j["actions"] = std::move(acts);
    }
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(indent);
}

}  // namespace teamdag
