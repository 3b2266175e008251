#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teamdag/game.hpp"
#include "teamdag/regret.hpp"
#include "teamdag/tbdag.hpp"

namespace teamdag {

enum class Algorithm { Cfr, CfrPlus, PcfrPlus, CfrMwu };
enum class UpdateMode { Simultaneous, Alternating };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view text);
std::string_view to_string(UpdateMode m);
UpdateMode parse_update_mode(std::string_view text);
RmVariant variant_of(Algorithm a);

struct SolveConfig {
  Algorithm algorithm = Algorithm::PcfrPlus;
  double epsilon = 1e-3;
  std::int64_t max_iterations = 100'000;
  std::int64_t log_every = 10;  // gap is also checked at t = 1 and at the last iteration
  UpdateMode mode = UpdateMode::Simultaneous;
  std::uint64_t seed = 0;  // oracle sampling only
  TbDagOptions dag;
  // Weighted regrets of both sides at each log point (simultaneous mode).
  bool track_regret = false;

  void validate() const;
};

struct LogPoint {
  std::int64_t iteration = 0;
  double time_ms = 0.0;
  double gap = 0.0;
  double br_max = 0.0;  // max_x x^T U ybar
  double br_min = 0.0;  // max_y -xbar^T U y
  double value = 0.0;   // xbar^T U ybar
  double bound = 0.0;   // |H| sqrt(k log b / t)
  // Filled when track_regret is on.
  double regret_max = 0.0;
  double regret_min = 0.0;
  double weight_sum = 0.0;
};

// Both sides' TB-DAGs plus the constants of the regret bound.
struct SolveProblem {
  TbDag dags[2];
  int k = 1;  // larger of the two sides
  int b = 2;
  std::int64_t num_nodes = 0;
  double init_ms = 0.0;
};

SolveProblem prepare_solve(const Game& g, const TbDagOptions& options = {});

struct SolveReport {
  std::vector<LogPoint> log;
  std::int64_t iterations = 0;
  bool converged = false;
  double gap = 0.0;
  double value = 0.0;
  double certified_low = 0.0;   // -br_min
  double certified_high = 0.0;  // br_max
  std::vector<double> average_flow[2];  // per observation point of each side's dag
  std::vector<double> realization[2];   // per game node, nonzero at terminals only
  double init_ms = 0.0;
  double solve_ms = 0.0;
};

// Utility per observation point of `self` against the opponent's flow:
// u(z) p(z) y_opp[z] at the slot of z, negated for MIN.
std::vector<double> assemble_utility(const Game& g, const TbDag& self, const TbDag& opp, std::span<const double> opp_flow);

struct GapReport {
  double br_max = 0.0;
  double br_min = 0.0;
  double gap = 0.0;
  double value = 0.0;
};

GapReport gap(const Game& g, const TbDag& max_dag, const TbDag& min_dag, std::span<const double> xbar,
              std::span<const double> ybar);

SolveReport solve(const Game& g, const SolveProblem& problem, const SolveConfig& config);
SolveReport solve(const Game& g, const SolveConfig& config);

// iter,time_ms,gap,br_max,br_min,value,bound
std::string log_to_csv(const SolveReport& report);
// {"side": ..., "terminal_realization": {"z": prob}}
std::string strategy_to_json(const Game& g, Side side, std::span<const double> realization, int indent = -1);
// Inverse of strategy_to_json; returns a per-node realization vector.
std::vector<double> parse_strategy_json(const Game& g, std::string_view text, Side* side = nullptr);

struct OracleCheck {
  double dag_br_max = 0.0;
  double oracle_br_max = 0.0;
  double dag_br_min = 0.0;
  double oracle_br_min = 0.0;
  double max_error() const;
};

// Best-response values against fixed realizations, once through the dags and
// once by enumeration on the game tree.
OracleCheck oracle_check(const Game& g, const SolveProblem& problem, std::span<const double> max_realization,
                         std::span<const double> min_realization, std::int64_t budget = 10'000'000);

}  // namespace teamdag
