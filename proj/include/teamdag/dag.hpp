#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "teamdag/game.hpp"

namespace teamdag {

// DAG-form decision problem in flat CSR storage.
//
// Observation point 0 is the root. Every other observation point has exactly
// one incoming edge, from a decision point; decision points may have several
// parent observation points. Decision ids are a topological order: every
// parent observation point of s is either the root or a child of a decision
// point with a smaller id.
//
// Terminal payoff slots hang off observation points; each terminal node of
// the game owns exactly one slot.
struct DagProblem {
  int num_observations = 1;

  std::vector<int> dec_child_offsets{0};  // per decision, one child obs per action
  std::vector<int> dec_children;
  std::vector<int> dec_parent_offsets{0};
  std::vector<int> dec_parents;

  std::vector<int> obs_child_offsets;  // per observation, child decisions
  std::vector<int> obs_children;
  std::vector<int> obs_parent;         // parent decision, -1 for the root
  std::vector<int> obs_action;         // action index at the parent decision

  std::vector<int> slot_offsets;       // per observation, terminal nodes
  std::vector<NodeId> slots;
  std::vector<int> terminal_obs;       // per game node; -1 for non-terminals

  int num_decisions() const { return static_cast<int>(dec_child_offsets.size()) - 1; }
  int num_actions(int s) const {
    return dec_child_offsets[static_cast<std::size_t>(s) + 1] - dec_child_offsets[static_cast<std::size_t>(s)];
  }
  std::span<const int> children(int s) const { return range(dec_child_offsets, dec_children, s); }
  std::span<const int> parents(int s) const { return range(dec_parent_offsets, dec_parents, s); }
  std::span<const int> obs_decisions(int o) const { return range(obs_child_offsets, obs_children, o); }
  std::span<const NodeId> obs_slots(int o) const {
    auto b = static_cast<std::size_t>(slot_offsets[static_cast<std::size_t>(o)]);
    auto e = static_cast<std::size_t>(slot_offsets[static_cast<std::size_t>(o) + 1]);
    return {slots.data() + b, e - b};
  }
  // Sum over decision points of parents plus children.
  std::int64_t num_edges() const { return static_cast<std::int64_t>(dec_parents.size() + dec_children.size()); }

 private:
  static std::span<const int> range(const std::vector<int>& off, const std::vector<int>& data, int i) {
    auto b = static_cast<std::size_t>(off[static_cast<std::size_t>(i)]);
    auto e = static_cast<std::size_t>(off[static_cast<std::size_t>(i) + 1]);
    return {data.data() + b, e - b};
  }
};

// Adjacency-list form, convenient for tests and small hand-built problems.
struct DagLists {
  std::vector<std::vector<int>> obs_children;       // per observation: child decision ids
  std::vector<std::vector<int>> decision_children;  // per decision: child obs ids, one per action
  std::vector<std::vector<NodeId>> obs_slots;       // per observation (may be empty = no slots)
  std::size_t num_game_nodes = 0;                   // size of terminal_obs
};

// Builds the CSR form, deriving parents and inverse maps. Decision ids must
// already be topological; throws GameError when the structure is invalid.
DagProblem from_lists(const DagLists& lists);

// Checks every structural invariant; throws GameError with a description.
void validate(const DagProblem& p);

std::string dag_to_json(const DagProblem& p, int indent = -1);

}  // namespace teamdag
