#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teamdag/analysis.hpp"
#include "teamdag/dag.hpp"
#include "teamdag/game.hpp"

namespace teamdag {

enum class SplitMode { Observation, Public };

std::string_view to_string(SplitMode m);
SplitMode parse_split_mode(std::string_view text);

struct TbDagOptions {
  SplitMode split = SplitMode::Observation;
  bool reduce = true;
  std::int64_t edge_budget = 100'000'000;
  int fanout_cap = 24;  // infosets intersecting one belief
};

struct DagSize {
  std::int64_t decisions = 0;
  std::int64_t observations = 0;
  std::int64_t edges = 0;
};

struct TbDagStats {
  DagSize unreduced;
  DagSize final_size;  // equals unreduced when no reduction ran
  std::int64_t dedup_hits = 0;
  int max_belief = 0;
  std::int64_t max_fanout = 0;   // prescriptions at one belief
  int max_belief_infosets = 0;   // infosets intersecting one belief
  // The single-prescription root belief disappears in the splice pass; the
  // conventional decision count keeps it.
  bool root_belief_spliced = false;
  double build_ms = 0.0;
  double reduce_ms = 0.0;

  std::int64_t conventional_decisions() const { return final_size.decisions + (root_belief_spliced ? 1 : 0); }
};

// Team belief DAG of one side. Decision point ids are topological; each
// decision point carries its belief and the infosets it prescribes at.
// Action c of decision point s is the prescription with mixed-radix code c
// over infosets(s), the first infoset most significant.
struct TbDag {
  Side side = Side::Max;
  SplitMode split = SplitMode::Observation;
  bool reduced = false;
  DagProblem problem;
  std::vector<int> belief_offsets{0};
  std::vector<NodeId> belief_nodes;
  std::vector<int> infoset_offsets{0};
  std::vector<InfosetId> belief_infosets;
  std::vector<NodeId> terminal_of;  // per decision point: z for beliefs {z}, else -1
  TbDagStats stats;

  std::span<const NodeId> belief(int s) const {
    auto b = static_cast<std::size_t>(belief_offsets[static_cast<std::size_t>(s)]);
    auto e = static_cast<std::size_t>(belief_offsets[static_cast<std::size_t>(s) + 1]);
    return {belief_nodes.data() + b, e - b};
  }
  std::span<const InfosetId> infosets(int s) const {
    auto b = static_cast<std::size_t>(infoset_offsets[static_cast<std::size_t>(s)]);
    auto e = static_cast<std::size_t>(infoset_offsets[static_cast<std::size_t>(s) + 1]);
    return {belief_infosets.data() + b, e - b};
  }
  // Action index per infoset of infosets(s) for prescription `code`.
  std::vector<int> prescription(const Game& g, int s, int code) const;
  // Decision point with the given belief, or -1.
  int find_belief(std::span<const NodeId> belief) const;
};

// Builds the side's TB-DAG (side taken from the analysis). Throws
// BudgetExceeded past the edge budget or the fan-out cap.
TbDag build_tbdag(const Game& g, const StructuralAnalysis& a, const TbDagOptions& options = {});

// Terminal merge by side sequence with dead-section pruning, then splicing
// of decision points with one parent and one action.
TbDag reduce(const Game& g, const StructuralAnalysis& a, const TbDag& unreduced);

struct SizeBoundReport {
  std::int64_t num_nodes = 0;
  int k = 1;
  int b = 0;
  double bound = 0.0;  // |H| (b+1)^(k+1)
  std::int64_t unreduced_edges = 0;
  std::int64_t final_edges = 0;
  bool holds = false;
  // E / (|H| log2 b) against 3^(k+1); meaningful on binarized games.
  double log_ratio = 0.0;
  double log_ratio_limit = 0.0;
};

SizeBoundReport check_size_bounds(const TbDag& dag, const Game& g, const StructuralAnalysis& a);

struct SplitComparison {
  DagSize observation_unreduced;
  DagSize observation_reduced;
  DagSize public_unreduced;
  DagSize public_reduced;
};

SplitComparison compare_splits(const Game& g, const StructuralAnalysis& a, const TbDagOptions& options = {});

// belief -> sorted list of (sorted list of child beliefs) per action.
using CanonicalDag = std::map<std::vector<NodeId>, std::vector<std::vector<std::vector<NodeId>>>>;
CanonicalDag canonical_form(const TbDag& dag);

std::string tbdag_to_json(const TbDag& dag, int indent = -1);

}  // namespace teamdag
