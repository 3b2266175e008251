// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--known-failure N]...
// Exit status is 0 when every criterion passes, except that criteria listed
// with --known-failure must fail (an unexpected pass is reported as an error).

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "teamdag/belief_game.hpp"
#include "teamdag/dag_cfr.hpp"
#include "teamdag/solver.hpp"
#include "teamdag/tbdag.hpp"
#include "teamdag/transforms.hpp"
#include "teamdag/zoo.hpp"

using namespace teamdag;

namespace {

// Tolerances.
constexpr double kValueTol = 1e-3;          // 1, 7
constexpr double kSignalingSeconds = 5.0;   // 1
constexpr double kIterateTol = 1e-12;       // 3
constexpr int kIterateSteps = 25;           // 3
constexpr int kEquivalenceProfiles = 100;   // 5
constexpr std::size_t kSmallGame = 2000;    // 5, 10
constexpr double kSeparationFactor = 3.0;   // 6
constexpr double kObservationTarget = 1e3;  // 6
constexpr double kPublicTarget = 3e7;       // 6
constexpr double kOracleTol = 1e-6;         // 8
constexpr double kGapTarget = 1e-4;         // 8
constexpr std::int64_t kMaxIterations = 100'000;  // 8
constexpr double kRateFactor = 4.0;         // 9
constexpr std::int64_t kRateIterations = 20'000;  // 9

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Game preset(const std::string& name) { return generate(*find_preset(name)); }

const std::vector<const char*> kKuhnSplits = {"3K3[1,2]", "3K3[1,3]", "3K3[2,3]"};

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, const std::string& s) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += s;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::vector<std::string> small_presets() {
  std::vector<std::string> out;
  for (const auto& p : list_presets())
    if (generate(p.spec).num_nodes() <= kSmallGame) out.push_back(p.name);
  return out;
}

Outcome signaling_value() {
  Outcome o;
  const auto t0 = Clock::now();
  SolveConfig c;
  c.algorithm = Algorithm::PcfrPlus;
  c.epsilon = 1e-3;
  const auto r = solve(preset("fig2"), c);
  const double secs = seconds_since(t0);
  o.pass = r.converged && r.certified_low >= -kValueTol && r.certified_high <= kValueTol && r.certified_low <= 0.0 &&
           r.certified_high >= 0.0 && secs < kSignalingSeconds;
  note(o, fmt("certified [%.3g, %.3g] after %lld iterations in %.3f s", r.certified_low, r.certified_high,
              static_cast<long long>(r.iterations), secs));
  return o;
}

Outcome information_complexity() {
  Outcome o;
  const Game g = preset("fig2");
  const auto a = analyze(g, Side::Max);
  const auto d = build_tbdag(g, a, {.split = SplitMode::Observation, .reduce = false});
  const std::vector<NodeId> bc = {1, 12};
  const int s = d.find_belief(bc);
  const int fanout = s < 0 ? -1 : d.problem.num_actions(s);
  const int b = g.branching_factor();
  const double bound = std::pow(b + 1.0, a.k);
  o.pass = a.k == 3 && fanout == 4 && bound == 27.0;
  note(o, fmt("k_max=%d, fan-out at {b,c}=%d, (b+1)^k=%g with b=%d", a.k, fanout, bound, b));
  return o;
}

double iterate_gap(const DagProblem& p, RmVariant v, std::uint64_t seed) {
  DagCfr dag(p, v);
  DagGeneric generic(p, v);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> a, b;
  double worst = 0.0;
  for (int t = 0; t < kIterateSteps; ++t) {
    dag.next_strategy(a);
    generic.next_strategy(b);
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    std::vector<double> u(a.size());
    for (auto& x : u) x = unit(rng);
    dag.observe_utility(u);
    generic.observe_utility(u);
  }
  return worst;
}

Outcome iterate_equivalence() {
  Outcome o;
  double worst = 0.0;
  int runs = 0;
  std::vector<std::string> games = {"fig2"};
  games.insert(games.end(), kKuhnSplits.begin(), kKuhnSplits.end());
  for (const auto& name : games) {
    const Game g = preset(name);
    for (Side side : {Side::Max, Side::Min}) {
      const auto d = build_tbdag(g, analyze(g, side));
      for (RmVariant v : {RmVariant::Rm, RmVariant::RmPlus, RmVariant::PredictiveRmPlus, RmVariant::Mwu}) {
        worst = std::max(worst, iterate_gap(d.problem, v, 1234 + static_cast<std::uint64_t>(runs)));
        ++runs;
      }
    }
  }
  o.pass = worst <= kIterateTol;
  note(o, fmt("max abs diff %.3g over %d runs of %d iterations", worst, runs, kIterateSteps));
  return o;
}

Outcome edge_bound() {
  Outcome o;
  int checked = 0, skipped = 0;
  double worst_ratio = 0.0;
  std::string worst_name;
  for (const auto& p : list_presets()) {
    const Game g = generate(p.spec);
    for (Side side : {Side::Max, Side::Min})
      for (SplitMode m : {SplitMode::Observation, SplitMode::Public}) {
        const auto a = analyze(g, side);
        try {
          const auto d = build_tbdag(g, a, {.split = m});
          const auto rep = check_size_bounds(d, g, a);
          ++checked;
          const double ratio = static_cast<double>(rep.unreduced_edges) / rep.bound;
          if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst_name = p.name + " " + std::string(to_string(side)) + " " + std::string(to_string(m));
          }
          if (!rep.holds) {
            o.pass = false;
            note(o, fmt("VIOLATED on %s %s: E=%lld > %.4g", p.name.c_str(), std::string(to_string(side)).c_str(),
                        static_cast<long long>(rep.unreduced_edges), rep.bound));
          }
        } catch (const BudgetExceeded&) {
          ++skipped;
        }
      }
  }
  note(o, fmt("%d dags checked, %d over budget, largest E/bound %.3g (%s)", checked, skipped, worst_ratio,
              worst_name.c_str()));
  return o;
}

BeliefGame belief_game_of(const Game& g) { return make_belief_game(g, analyze(g, Side::Max), analyze(g, Side::Min)); }

bool strategically_equivalent(const Game& g, const BeliefGame& bg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int rep = 0; rep < kEquivalenceProfiles; ++rep) {
    std::vector<int> pi(g.infosets().size());
    for (std::size_t i = 0; i < pi.size(); ++i)
      pi[i] = std::uniform_int_distribution<int>(0, static_cast<int>(g.infosets()[i].actions.size()) - 1)(rng);
    auto lifted = map_pure_strategy(g, bg, Side::Max, pi);
    const auto mn = map_pure_strategy(g, bg, Side::Min, pi);
    for (std::size_t i = 0; i < lifted.size(); ++i)
      if (lifted[i] < 0) lifted[i] = mn[i];
    if (oracle::profile_value(bg.game, lifted) != oracle::profile_value(g, pi)) return false;
  }
  return true;
}

Outcome belief_game_bounds() {
  Outcome o;
  struct Case { int k, b, d; };
  for (Case c : {Case{1, 2, 5}, Case{2, 2, 6}}) {
    ZooSpec s;
    s.family = Family::WorstCase;
    s.k = c.k;
    s.branching = c.b;
    s.depth = c.d;
    const Game g = generate(s);
    const auto bg = belief_game_of(g);
    const int k = std::max(analyze(g, Side::Max).k, analyze(g, Side::Min).k);
    const double b = std::max(2, g.branching_factor());
    const double size = static_cast<double>(bg.game.num_nodes());
    const double lower = std::pow(c.b, 2.0 * c.k * (c.d - 4));
    const double log_upper = (2.0 * k * c.d + c.d) * std::log(b);
    const bool ok = size >= lower && std::log(size) <= log_upper;
    o.pass = o.pass && ok;
    note(o, fmt("worst-case k=%d b=%d d=%d: %g <= |H~|=%g <= %d^%g", c.k, c.b, c.d, lower, size, static_cast<int>(b),
                2.0 * k * c.d + c.d));
  }
  int games = 0;
  for (const auto& name : small_presets()) {
    const Game g = preset(name);
    if (!strategically_equivalent(g, belief_game_of(g), 77)) {
      o.pass = false;
      note(o, "profile mismatch on " + name);
    }
    ++games;
  }
  note(o, fmt("%d random profiles matched exactly on %d games", kEquivalenceProfiles, games));
  return o;
}

// Edges of the tree obtained by unfolding every root path of the dag.
double unfolded_edges(const DagProblem& p) {
  std::vector<double> obs_paths(static_cast<std::size_t>(p.num_observations), 0.0);
  obs_paths[0] = 1.0;
  double edges = 0.0;
  for (int s = 0; s < p.num_decisions(); ++s) {
    double paths = 0.0;
    for (int o : p.parents(s)) paths += obs_paths[static_cast<std::size_t>(o)];
    edges += paths * (1.0 + p.num_actions(s));
    for (int o : p.children(s)) obs_paths[static_cast<std::size_t>(o)] = paths;
  }
  return edges;
}

bool within_factor(double got, double want) { return got >= want / kSeparationFactor && got <= want * kSeparationFactor; }

Outcome observation_public_separation() {
  Outcome o;
  const auto t0 = Clock::now();
  const Game g = preset("fig9-C16");
  const auto a = analyze(g, Side::Max);
  const auto obs = build_tbdag(g, a, {.split = SplitMode::Observation});
  const auto pub = build_tbdag(g, a, {.split = SplitMode::Public});
  const double obs_e = static_cast<double>(obs.stats.unreduced.edges);
  const double pub_e = static_cast<double>(pub.stats.unreduced.edges);
  const bool obs_ok = within_factor(obs_e, kObservationTarget);
  const bool pub_ok = within_factor(pub_e, kPublicTarget);
  o.pass = obs_ok && pub_ok;
  note(o, fmt("C=16 observation E=%.0f (reduced %lld) %s", obs_e, static_cast<long long>(obs.stats.final_size.edges),
              obs_ok ? "ok" : "off"));
  note(o, fmt("public E=%.0f (reduced %lld) %s, target %.0e", pub_e, static_cast<long long>(pub.stats.final_size.edges),
              pub_ok ? "ok" : "off", kPublicTarget));
  // Diagnostic: the same dag with every root path unfolded.
  const auto pub_u = build_tbdag(g, a, {.split = SplitMode::Public, .reduce = false});
  note(o, fmt("public unfolded E=%.3g", unfolded_edges(pub_u.problem)));
  note(o, fmt("%.1f s", seconds_since(t0)));

  const Game g8 = preset("fig9-C8");
  const auto a8 = analyze(g8, Side::Max);
  const auto c8 = compare_splits(g8, a8);
  const auto brute_obs = oracle::tbdag_counts(g8, Side::Max, false);
  const auto brute_pub = oracle::tbdag_counts(g8, Side::Max, true);
  const bool match = c8.observation_unreduced.edges == brute_obs.edges && c8.public_unreduced.edges == brute_pub.edges;
  if (!match) o.pass = false;
  note(o, fmt("C=8 public/observation = %lld/%lld = %.4f, brute force %lld/%lld %s",
              static_cast<long long>(c8.public_unreduced.edges), static_cast<long long>(c8.observation_unreduced.edges),
              static_cast<double>(c8.public_unreduced.edges) / static_cast<double>(c8.observation_unreduced.edges),
              static_cast<long long>(brute_pub.edges), static_cast<long long>(brute_obs.edges),
              match ? "agree" : "DISAGREE"));
  return o;
}

Outcome sequence_form_degeneration() {
  Outcome o;
  const Game g = preset("2K3");
  for (Side side : {Side::Max, Side::Min}) {
    int infosets = 0, sequences = 1;
    for (const auto& info : g.infosets())
      if (g.side_of_player(info.player) == side) {
        ++infosets;
        sequences += static_cast<int>(info.actions.size());
      }
    const auto d = build_tbdag(g, analyze(g, side));
    const bool ok = d.stats.conventional_decisions() == infosets + 1 && d.stats.final_size.observations == sequences;
    o.pass = o.pass && ok;
    note(o, fmt("%s |D|=%lld |I|+1=%d |O|=%lld |Sigma|=%d", std::string(to_string(side)).c_str(),
                static_cast<long long>(d.stats.conventional_decisions()), infosets + 1,
                static_cast<long long>(d.stats.final_size.observations), sequences));
  }
  SolveConfig c;
  c.epsilon = 1e-4;
  const auto r = solve(g, c);
  const double truth = -1.0 / 18.0;
  // The interval ends are recomputed by unreduced pure-strategy enumeration.
  const double hi = oracle::naive_best_response(g, Side::Max, r.realization[1]);
  const double lo = -oracle::naive_best_response(g, Side::Min, r.realization[0]);
  const bool ok = std::abs(r.value - truth) <= kValueTol && lo <= truth + 1e-12 && hi >= truth - 1e-12 &&
                  std::abs(hi - r.certified_high) <= 1e-9 && std::abs(lo - r.certified_low) <= 1e-9;
  o.pass = o.pass && ok;
  note(o, fmt("value %.6f, oracle interval [%.6f, %.6f]", r.value, lo, hi));
  return o;
}

Outcome oracle_certification() {
  Outcome o;
  for (const char* name : kKuhnSplits) {
    const Game g = preset(name);
    const auto sp = prepare_solve(g);
    SolveConfig c;
    c.epsilon = kGapTarget;
    c.max_iterations = kMaxIterations;
    const auto r = solve(g, sp, c);
    const auto check = oracle_check(g, sp, r.realization[0], r.realization[1]);
    const bool ok = r.converged && r.gap <= kGapTarget && check.max_error() <= kOracleTol;
    o.pass = o.pass && ok;
    note(o, fmt("%s gap %.2g at t=%lld, oracle error %.2g", name, r.gap, static_cast<long long>(r.iterations),
                check.max_error()));
  }
  return o;
}

Outcome mwu_rate() {
  Outcome o;
  std::vector<std::string> games = {"fig2"};
  games.insert(games.end(), kKuhnSplits.begin(), kKuhnSplits.end());
  for (const auto& name : games) {
    SolveConfig c;
    c.algorithm = Algorithm::CfrMwu;
    c.epsilon = 1e-300;
    c.max_iterations = kRateIterations;
    c.log_every = 10;
    const auto r = solve(preset(name), c);
    double worst = 0.0;
    int points = 0;
    for (const auto& lp : r.log) {
      if (lp.iteration < 10) continue;
      ++points;
      worst = std::max(worst, lp.gap / lp.bound);
    }
    const bool ok = worst <= kRateFactor && points > 0;
    o.pass = o.pass && ok;
    note(o, fmt("%s max gap/bound %.3g over %d points", name.c_str(), worst, points));
  }
  return o;
}

Outcome inflation_invariance() {
  Outcome o;
  int games = 0;
  for (const auto& name : small_presets()) {
    const Game g = preset(name);
    ++games;
    for (Side side : {Side::Max, Side::Min}) {
      const Game gi = inflate(g, side);
      for (bool reduce_pass : {false, true}) {
        const TbDagOptions opt{.reduce = reduce_pass};
        if (canonical_form(build_tbdag(g, analyze(g, side), opt)) != canonical_form(build_tbdag(gi, analyze(gi, side), opt))) {
          o.pass = false;
          note(o, "differs on " + name + " " + std::string(to_string(side)));
        }
      }
    }
  }
  note(o, fmt("%d games, both sides, reduced and unreduced", games));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_failures;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--known-failure") == 0 && i + 1 < argc) {
      known_failures.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--known-failure N]...\n", argv[0]);
      return 2;
    }
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"signaling-game value", signaling_value},
      {"information complexity", information_complexity},
      {"iterate equivalence", iterate_equivalence},
      {"edge bound", edge_bound},
      {"belief-game bounds", belief_game_bounds},
      {"observation vs public split", observation_public_separation},
      {"sequence-form degeneration", sequence_form_degeneration},
      {"oracle certification", oracle_certification},
      {"mwu rate", mwu_rate},
      {"inflation invariance", inflation_invariance},
  };

  int status = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.pass = false;
      note(out, std::string("exception: ") + e.what());
    }
    const bool expected_fail = known_failures.count(id) > 0;
    std::printf("%2d %-28s %s  %s%s\n", id, criteria[i].first, out.pass ? "PASS" : "FAIL", out.detail.c_str(),
                expected_fail ? (out.pass ? "  [listed as known failure but passed]" : "  [known failure]") : "");
    std::fflush(stdout);
    if (out.pass == expected_fail) status = 1;
  }
  return status;
}
