#include "teamdag/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "teamdag/analysis.hpp"
#include "teamdag/dag_cfr.hpp"
#include "teamdag/oracle.hpp"

namespace teamdag {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

void check_terminal_map(const Game& g, const TbDag& dag) {
  if (dag.problem.terminal_obs.size() != g.num_nodes()) throw GameError("solver: terminal map does not match the game");
  for (NodeId z : g.terminals())
    if (dag.problem.terminal_obs[sz(z)] < 0)
      throw GameError("solver: terminal " + std::to_string(z) + " has no slot in the " + std::string(to_string(dag.side)) + " dag");
}

// Utility per observation point of `self` given the opponent's realization per node.
std::vector<double> utility_from_realization(const Game& g, const TbDag& self, std::span<const double> opp) {
  const DagProblem& p = self.problem;
  const double sign = self.side == Side::Max ? 1.0 : -1.0;
  std::vector<double> u(sz(p.num_observations), 0.0);
  for (NodeId z : g.terminals()) {
    const double w = opp[sz(z)];
    if (w == 0.0) continue;
    u[sz(p.terminal_obs[sz(z)])] += sign * g.node(z).utility * g.chance_reach(z) * w;
  }
  return u;
}

void axpy(double w, std::span<const double> x, std::vector<double>& acc) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * x[i];
}

std::vector<double> scaled(const std::vector<double>& v, double s) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * s;
  return out;
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Cfr: return "cfr";
    case Algorithm::CfrPlus: return "cfr+";
    case Algorithm::PcfrPlus: return "pcfr+";
    case Algorithm::CfrMwu: return "cfr-mwu";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "cfr") return Algorithm::Cfr;
  if (text == "cfr+") return Algorithm::CfrPlus;
  if (text == "pcfr+") return Algorithm::PcfrPlus;
  if (text == "cfr-mwu") return Algorithm::CfrMwu;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "' (cfr, cfr+, pcfr+, cfr-mwu)");
}

std::string_view to_string(UpdateMode m) { return m == UpdateMode::Simultaneous ? "simultaneous" : "alternating"; }

UpdateMode parse_update_mode(std::string_view text) {
  if (text == "simultaneous" || text == "sim") return UpdateMode::Simultaneous;
  if (text == "alternating" || text == "alt") return UpdateMode::Alternating;
  throw std::invalid_argument("unknown update mode '" + std::string(text) + "'");
}

RmVariant variant_of(Algorithm a) {
  switch (a) {
    case Algorithm::Cfr: return RmVariant::Rm;
    case Algorithm::CfrPlus: return RmVariant::RmPlus;
    case Algorithm::PcfrPlus: return RmVariant::PredictiveRmPlus;
    case Algorithm::CfrMwu: return RmVariant::Mwu;
  }
  return RmVariant::Rm;
}

void SolveConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("solve: epsilon must be positive");
  if (max_iterations < 1) throw std::invalid_argument("solve: max iterations must be at least 1");
  if (log_every < 1) throw std::invalid_argument("solve: log cadence must be at least 1");
}

SolveProblem prepare_solve(const Game& g, const TbDagOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SolveProblem sp;
  for (Side side : {Side::Max, Side::Min}) {
    const auto a = analyze(g, side);
    sp.dags[index_of(side)] = build_tbdag(g, a, options);
    sp.k = std::max(sp.k, a.k);
  }
  sp.b = std::max(2, g.branching_factor());
  sp.num_nodes = static_cast<std::int64_t>(g.num_nodes());
  sp.init_ms = ms_since(start);
  return sp;
}

std::vector<double> assemble_utility(const Game& g, const TbDag& self, const TbDag& opp, std::span<const double> opp_flow) {
  check_terminal_map(g, self);
  check_terminal_map(g, opp);
  if (self.side == opp.side) throw GameError("solver: both dags belong to the same side");
  if (opp_flow.size() != sz(opp.problem.num_observations)) throw GameError("solver: flow size mismatch");
  std::vector<double> realization(g.num_nodes(), 0.0);
  for (NodeId z : g.terminals()) realization[sz(z)] = opp_flow[sz(opp.problem.terminal_obs[sz(z)])];
  return utility_from_realization(g, self, realization);
}

GapReport gap(const Game& g, const TbDag& max_dag, const TbDag& min_dag, std::span<const double> xbar,
              std::span<const double> ybar) {
  GapReport r;
  const auto ux = assemble_utility(g, max_dag, min_dag, ybar);
  const auto uy = assemble_utility(g, min_dag, max_dag, xbar);
  r.br_max = best_response(max_dag.problem, ux).value;
  r.br_min = best_response(min_dag.problem, uy).value;
  r.gap = r.br_max + r.br_min;
  r.value = dot(xbar, ux);
  return r;
}

SolveReport solve(const Game& g, const SolveProblem& sp, const SolveConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const TbDag& dx = sp.dags[0];
  const TbDag& dy = sp.dags[1];
  DagCfr px(dx.problem, variant_of(config.algorithm));
  DagCfr py(dy.problem, variant_of(config.algorithm));

  std::vector<double> x, y;
  px.next_strategy(x);
  py.next_strategy(y);
  std::vector<double> sum_x(x.size(), 0.0), sum_y(y.size(), 0.0);
  std::vector<double> cum_ux, cum_uy;
  if (config.track_regret) {
    cum_ux.assign(x.size(), 0.0);
    cum_uy.assign(y.size(), 0.0);
  }
  double weight_sum = 0.0, realized_x = 0.0, realized_y = 0.0;

  SolveReport report;
  report.init_ms = sp.init_ms;
  GapReport last;
  const bool quadratic = config.algorithm == Algorithm::PcfrPlus;
  for (std::int64_t t = 1; t <= config.max_iterations; ++t) {
    const double td = static_cast<double>(t);
    const double w = quadratic ? td * td : td;
    axpy(w, x, sum_x);
    axpy(w, y, sum_y);
    weight_sum += w;

    std::vector<double> ux, uy;
    if (config.mode == UpdateMode::Simultaneous) {
      ux = assemble_utility(g, dx, dy, y);
      uy = assemble_utility(g, dy, dx, x);
      if (config.track_regret) {
        axpy(w, ux, cum_ux);
        axpy(w, uy, cum_uy);
        realized_x += w * dot(ux, x);
        realized_y += w * dot(uy, y);
      }
    }

    const bool final_iteration = t == config.max_iterations;
    if (t == 1 || t % config.log_every == 0 || final_iteration) {
      const auto xbar = scaled(sum_x, 1.0 / weight_sum);
      const auto ybar = scaled(sum_y, 1.0 / weight_sum);
      last = gap(g, dx, dy, xbar, ybar);
      LogPoint lp;
      lp.iteration = t;
      lp.time_ms = ms_since(start);
      lp.gap = last.gap;
      lp.br_max = last.br_max;
      lp.br_min = last.br_min;
      lp.value = last.value;
      lp.bound = static_cast<double>(sp.num_nodes) * std::sqrt(sp.k * std::log(static_cast<double>(sp.b)) / td);
      if (config.track_regret) {
        lp.regret_max = best_response(dx.problem, cum_ux).value - realized_x;
        lp.regret_min = best_response(dy.problem, cum_uy).value - realized_y;
        lp.weight_sum = weight_sum;
      }
      if (!std::isfinite(lp.gap) || !std::isfinite(lp.value)) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "solve: non-finite value at iteration %lld (gap %g, br_max %g, br_min %g)",
                      static_cast<long long>(t), lp.gap, lp.br_max, lp.br_min);
        throw std::runtime_error(msg);
      }
      report.log.push_back(lp);
      report.iterations = t;
      if (last.gap <= config.epsilon) {
        report.converged = true;
        break;
      }
    }
    if (final_iteration) break;

    if (config.mode == UpdateMode::Simultaneous) {
      px.observe_utility(ux);
      py.observe_utility(uy);
      px.next_strategy(x);
      py.next_strategy(y);
    } else {
      px.observe_utility(assemble_utility(g, dx, dy, y));
      px.next_strategy(x);
      py.observe_utility(assemble_utility(g, dy, dx, x));
      py.next_strategy(y);
    }
  }

  report.gap = last.gap;
  report.value = last.value;
  report.certified_low = -last.br_min;
  report.certified_high = last.br_max;
  report.average_flow[0] = scaled(sum_x, 1.0 / weight_sum);
  report.average_flow[1] = scaled(sum_y, 1.0 / weight_sum);
  for (int s = 0; s < 2; ++s)
    report.realization[s] = terminal_realization(g, sp.dags[s].problem, report.average_flow[s]);
  report.solve_ms = ms_since(start);
  return report;
}

SolveReport solve(const Game& g, const SolveConfig& config) {
  config.validate();
  return solve(g, prepare_solve(g, config.dag), config);
}

std::string log_to_csv(const SolveReport& report) {
  std::ostringstream out;
  out << "iter,time_ms,gap,br_max,br_min,value,bound\n";
  char line[256];
  for (const auto& lp : report.log) {
    std::snprintf(line, sizeof line, "%lld,%.3f,%.12g,%.12g,%.12g,%.12g,%.12g\n", static_cast<long long>(lp.iteration),
                  lp.time_ms, lp.gap, lp.br_max, lp.br_min, lp.value, lp.bound);
    out << line;
  }
  return out.str();
}

std::string strategy_to_json(const Game& g, Side side, std::span<const double> realization, int indent) {
  nlohmann::json j;
  j["side"] = std::string(to_string(side));
  auto tr = nlohmann::json::object();
  for (NodeId z : g.terminals()) tr[std::to_string(z)] = realization[sz(z)];
  j["terminal_realization"] = std::move(tr);
  return j.dump(indent);
}

std::vector<double> parse_strategy_json(const Game& g, std::string_view text, Side* side) {
  const auto j = nlohmann::json::parse(text);
  if (side) *side = parse_side(j.at("side").get<std::string>());
  std::vector<double> out(g.num_nodes(), 0.0);
  for (const auto& [key, val] : j.at("terminal_realization").items()) {
    const long id = std::stol(key);
    if (id < 0 || static_cast<std::size_t>(id) >= g.num_nodes() || !g.node(static_cast<NodeId>(id)).is_terminal())
      throw GameError("strategy: " + key + " is not a terminal");
    out[static_cast<std::size_t>(id)] = val.get<double>();
  }
  return out;
}

double OracleCheck::max_error() const {
  return std::max(std::abs(dag_br_max - oracle_br_max), std::abs(dag_br_min - oracle_br_min));
}

OracleCheck oracle_check(const Game& g, const SolveProblem& sp, std::span<const double> max_realization,
                         std::span<const double> min_realization, std::int64_t budget) {
  OracleCheck c;
  c.dag_br_max = best_response(sp.dags[0].problem, utility_from_realization(g, sp.dags[0], min_realization)).value;
  c.dag_br_min = best_response(sp.dags[1].problem, utility_from_realization(g, sp.dags[1], max_realization)).value;
  c.oracle_br_max = enumeration_oracle(g, Side::Max, min_realization, budget).value;
  c.oracle_br_min = enumeration_oracle(g, Side::Min, max_realization, budget).value;
  return c;
}

}  // namespace teamdag
