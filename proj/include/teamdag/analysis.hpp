#pragma once

#include <span>
#include <vector>

#include "teamdag/game.hpp"

namespace teamdag {

// One side's team merged into a single coordinator.
struct CoordinatorView {
  struct Sequence {
    int parent = -1;  // -1 for the empty sequence
    InfosetId infoset = -1;
    int action = -1;
  };

  Side side = Side::Max;
  std::vector<InfosetId> infosets;   // ascending
  std::vector<int> seq_of_node;      // interned coordinator sequence per node
  std::vector<Sequence> sequences;   // id 0 is the empty sequence

  std::size_t num_sequences() const { return sequences.size(); }
  bool owns_infoset(const Game& g, InfosetId i) const;
};

CoordinatorView coordinator_view(const Game& g, Side side);

// Connectivity cliques, public states and last-infosets for one side.
struct StructuralAnalysis {
  Side side = Side::Max;
  CoordinatorView view;

  // Cliques with at least two nodes, deduplicated; members ascending.
  std::vector<std::vector<NodeId>> cliques;
  // CSR index node -> clique ids.
  std::vector<int> clique_offsets;
  std::vector<int> clique_ids;

  std::vector<int> public_state;  // per node
  int num_public_states = 0;

  // CSR last-infoset sets per node (ascending infoset ids).
  std::vector<int> li_offsets;
  std::vector<InfosetId> li_sets;

  int k = 1;        // information complexity (at least 1)
  int raw_k = 0;    // max union size before clamping
  int kappa = 0;    // max number of the side's infosets inside one public state
  bool perfect_recall = true;
  bool action_recall = true;

  std::span<const int> cliques_of(NodeId h) const {
    auto b = static_cast<std::size_t>(clique_offsets[static_cast<std::size_t>(h)]);
    auto e = static_cast<std::size_t>(clique_offsets[static_cast<std::size_t>(h) + 1]);
    return {clique_ids.data() + b, e - b};
  }
  std::span<const InfosetId> last_infosets(NodeId h) const {
    auto b = static_cast<std::size_t>(li_offsets[static_cast<std::size_t>(h)]);
    auto e = static_cast<std::size_t>(li_offsets[static_cast<std::size_t>(h) + 1]);
    return {li_sets.data() + b, e - b};
  }
  // Union of last-infosets over a public state.
  std::vector<InfosetId> public_state_last_infosets(const Game& g, int public_state_id) const;
};

StructuralAnalysis analyze(const Game& g, Side side);

// J remembers I: some action a of I is, for every h in J, taken at an ancestor of h in I.
bool remembers(const Game& g, InfosetId j, InfosetId i);

// Partition H (same-depth nodes) into connected components of the induced
// connectivity subgraph. Blocks are sorted and ordered by smallest member.
std::vector<std::vector<NodeId>> split_observation(const Game& g, const StructuralAnalysis& a,
                                                   std::span<const NodeId> nodes);
// Partition H by public state.
std::vector<std::vector<NodeId>> split_public(const Game& g, const StructuralAnalysis& a,
                                              std::span<const NodeId> nodes);

// Reusable scratch space for repeated observation splits.
class ObservationSplitter {
 public:
  explicit ObservationSplitter(const StructuralAnalysis& a);
  // Writes component index per input position into `component` and returns the count.
  int split(std::span<const NodeId> nodes, std::vector<int>& component);

 private:
  const StructuralAnalysis* analysis_;
  std::vector<int> clique_first_;  // first position that touched the clique, per stamp
  std::vector<int> clique_stamp_;
  std::vector<int> uf_;
  int stamp_ = 0;
};

}  // namespace teamdag
