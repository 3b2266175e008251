#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "teamdag/dag.hpp"
#include "teamdag/game.hpp"
#include "teamdag/regret.hpp"

namespace teamdag {

// Counterfactual regret minimization on a DAG-form decision problem: one
// local regret minimizer per decision point, a top-down pass for strategies
// and a bottom-up pass for values.
class DagCfr {
 public:
  DagCfr(const DagProblem& problem, RmVariant variant);

  // Flow per observation point (root = 1).
  void next_strategy(std::vector<double>& flow);
  // Utility per observation point; uses the local strategies of the last next_strategy.
  void observe_utility(std::span<const double> utility);

  // Local strategies of the last next_strategy, aligned with dec_children.
  const std::vector<double>& local_strategies() const { return local_; }
  // Edges touched by both passes so far.
  std::int64_t operations() const { return operations_; }

 private:
  const DagProblem* problem_;
  std::vector<LocalRm> rms_;
  std::vector<double> local_;
  std::vector<double> value_;
  std::vector<double> carry_;  // Kahan compensation
  std::vector<double> scratch_;
  bool kahan_ = false;
  std::int64_t operations_ = 0;
};

struct BestResponse {
  double value = 0.0;
  std::vector<int> choice;   // action per decision point
  std::vector<double> flow;  // pure flow per observation point
};

// Maximizes <utility, x> over the flow polytope; ties go to the lowest action.
BestResponse best_response(const DagProblem& problem, std::span<const double> utility);

// Inner product of a flow and a utility vector.
double dot(std::span<const double> a, std::span<const double> b);

// Checks root = 1, conservation at every decision point and nonnegativity.
bool is_feasible_flow(const DagProblem& problem, std::span<const double> flow, double tol = 1e-9);

struct TreeExpansion {
  DagProblem tree;                // no payoff slots
  std::vector<int> obs_map;       // tree observation point -> dag observation point
  std::vector<int> decision_map;  // tree decision point -> dag decision point
};

// Unfolds every root path; throws BudgetExceeded past max_points points.
TreeExpansion expand_to_tree(const DagProblem& problem, std::int64_t max_points = 100000);

// Regret minimizer on the unfolded tree, lifted back to the DAG: utilities are
// pulled through the expansion map and flows are summed over preimages.
class DagGeneric {
 public:
  DagGeneric(const DagProblem& problem, RmVariant variant, std::int64_t max_points = 100000);
  void next_strategy(std::vector<double>& flow);
  void observe_utility(std::span<const double> utility);

 private:
  const DagProblem* problem_;
  TreeExpansion expansion_;
  DagCfr tree_cfr_;
  std::vector<double> tree_flow_;
  std::vector<double> tree_utility_;
};

// Tree-shaped problem for a perfect-recall side: one decision point per
// infoset and one observation point per sequence (0 = empty sequence).
DagProblem sequence_form(const Game& g, Side side);

// Realization weight of every terminal: flow at its slot's observation point.
std::vector<double> terminal_realization(const Game& g, const DagProblem& problem, std::span<const double> flow);

}  // namespace teamdag
