#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "teamdag/analysis.hpp"
#include "teamdag/game.hpp"
#include "teamdag/tbdag.hpp"

namespace teamdag {

enum class BeliefRole : std::uint8_t { MaxPrescribes, MinPrescribes, ChanceResolves, Terminal };

struct BeliefGameOptions {
  std::int64_t node_budget = 10'000'000;
  SplitMode split = SplitMode::Observation;
};

// Perfect-recall game in which each side submits prescriptions at its
// belief, followed by a resolution step in the original game.
//
// Players are {"chance", "max", "min"}. Every original step becomes a MAX
// node, a MIN node and a resolution node; the terminal for z replaces the
// resolution node at the last step.
struct BeliefGame {
  struct Annotation {
    NodeId original = kNoNode;
    int belief[2] = {-1, -1};  // indexed by side
    BeliefRole role = BeliefRole::Terminal;
  };
  struct InfosetLabel {
    Side side = Side::Max;
    int sequence = 0;  // interned prescription sequence
    int belief = -1;
  };

  Game game;
  std::vector<Annotation> annotations;        // per node of `game`
  std::vector<InfosetLabel> infoset_labels;   // per infoset of `game`
  std::vector<std::vector<NodeId>> beliefs;   // interned belief id -> original nodes
  std::vector<std::vector<InfosetId>> belief_infosets[2];  // per side: infosets intersecting the belief
  std::int64_t num_sequences[2] = {1, 1};     // per side, including the empty sequence

  // Sizes with single-child nodes (and single-action infosets) left out.
  std::int64_t compact_nodes = 0;
  std::int64_t compact_infosets[2] = {0, 0};
};

BeliefGame make_belief_game(const Game& g, const StructuralAnalysis& max_analysis,
                            const StructuralAnalysis& min_analysis, const BeliefGameOptions& options = {});

// Game JSON with an "annotations" block: per node the original node, role and
// beliefs, per infoset its sequence and belief, and the belief table.
std::string belief_game_to_json(const BeliefGame& bg, int indent = -1);

// Pure strategy of the belief game induced by one action per original infoset
// of the side: action index per belief-game infoset, -1 where the side does
// not act.
std::vector<int> map_pure_strategy(const Game& g, const BeliefGame& bg, Side side, std::span<const int> pure);

// Reach probability of every node under a pure profile given as one action
// index per infoset (entries for both sides), chance included.
std::vector<double> pure_profile_reach(const Game& g, std::span<const int> action_of_infoset);

// Reach of each original terminal under a belief-game pure profile.
std::vector<double> original_terminal_reach(const Game& g, const BeliefGame& bg, std::span<const int> action_of_infoset);

}  // namespace teamdag
