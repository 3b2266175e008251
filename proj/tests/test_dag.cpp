#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "json.hpp"
#include "teamdag/dag.hpp"
#include "teamdag/dag_cfr.hpp"
#include "teamdag/regret.hpp"
#include "teamdag/tbdag.hpp"
#include "teamdag/zoo.hpp"

using namespace teamdag;

namespace {

Game preset(const char* name) { return generate(*find_preset(name)); }

// Root -> s0 (2 actions); both outcomes lead into the shared s1 (2 actions).
//
//   o0 -> s0 -a-> o1 -> s1
//            -b-> o2 -> s1, s2
//   s1 -> o3, o4     s2 -> o5
DagLists diamond() {
  DagLists l;
  l.obs_children = {{0}, {1}, {1, 2}, {}, {}, {}};
  l.decision_children = {{1, 2}, {3, 4}, {5}};
  l.obs_slots = {{}, {}, {}, {0}, {1}, {2}};
  l.num_game_nodes = 3;
  return l;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Brute force over every choice vector of the decision points.
double brute_best(const DagProblem& p, const std::vector<double>& u) {
  const int n = p.num_decisions();
  std::vector<int> choice(static_cast<std::size_t>(n), 0);
  double best = -1e300;
  while (true) {
    std::vector<double> flow(static_cast<std::size_t>(p.num_observations), 0.0);
    flow[0] = 1.0;
    for (int s = 0; s < n; ++s) {
      double in = 0.0;
      for (int o : p.parents(s)) in += flow[static_cast<std::size_t>(o)];
      flow[static_cast<std::size_t>(p.children(s)[static_cast<std::size_t>(choice[static_cast<std::size_t>(s)])])] = in;
    }
    best = std::max(best, dot(flow, u));
    int s = n - 1;
    for (; s >= 0; --s) {
      if (++choice[static_cast<std::size_t>(s)] < p.num_actions(s)) break;
      choice[static_cast<std::size_t>(s)] = 0;
    }
    if (s < 0) break;
  }
  return best;
}

}  // namespace

TEST(DagProblem, FromListsDerivesParents) {
  const auto p = from_lists(diamond());
  EXPECT_EQ(p.num_decisions(), 3);
  EXPECT_EQ(p.num_observations, 6);
  EXPECT_EQ(std::vector<int>(p.parents(1).begin(), p.parents(1).end()), (std::vector<int>{1, 2}));
  EXPECT_EQ(p.obs_parent[3], 1);
  EXPECT_EQ(p.obs_action[4], 1);
  EXPECT_EQ(p.terminal_obs[2], 5);
  EXPECT_EQ(p.num_edges(), 4 + 5);
}

TEST(DagProblem, RejectsBrokenStructure) {
  auto l = diamond();
  l.decision_children[2] = {4};  // o4 gets two parents
  EXPECT_THROW(from_lists(l), GameError);
  l = diamond();
  l.decision_children[1] = {};
  EXPECT_THROW(from_lists(l), GameError);
  l = diamond();
  // s1 now hangs only off o5, a child of the later decision s2.
  l.obs_children[1] = {};
  l.obs_children[2] = {2};
  l.obs_children[5] = {1};
  EXPECT_THROW(from_lists(l), GameError);
  l = diamond();
  l.obs_slots[5] = {7};
  EXPECT_THROW(from_lists(l), GameError);
}

TEST(DagProblem, JsonListsPointsAndSlots) {
  const auto j = nlohmann::json::parse(dag_to_json(from_lists(diamond())));
  EXPECT_EQ(j["observation_points"], 6);
  EXPECT_EQ(j["decision_points"].size(), 3u);
  EXPECT_EQ(j["payoff_slots"]["5"], nlohmann::json::array({2}));
}

TEST(BestResponse, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  const auto diamond_problem = from_lists(diamond());
  const Game g = preset("fig2");
  const auto fig2 = build_tbdag(g, analyze(g, Side::Max)).problem;
  for (const DagProblem* p : {&diamond_problem, &fig2})
    for (int rep = 0; rep < 20; ++rep) {
      const auto u = random_vector(static_cast<std::size_t>(p->num_observations), rng);
      const auto br = best_response(*p, u);
      EXPECT_NEAR(br.value, brute_best(*p, u), 1e-12);
      EXPECT_NEAR(dot(br.flow, u), br.value, 1e-12);
      EXPECT_TRUE(is_feasible_flow(*p, br.flow));
    }
}

TEST(BestResponse, TiesGoToTheFirstAction) {
  const auto p = from_lists(diamond());
  const std::vector<double> zero(6, 0.0);
  const auto br = best_response(p, zero);
  for (int c : br.choice) EXPECT_EQ(c, 0);
}

TEST(Flow, FeasibilityCheck) {
  const auto p = from_lists(diamond());
  std::vector<double> flow = {1, 0.5, 0.5, 0.25, 0.75, 0.5};
  EXPECT_TRUE(is_feasible_flow(p, flow));
  flow[3] = 0.3;
  EXPECT_FALSE(is_feasible_flow(p, flow));
  flow = {1, 1.5, -0.5, 0.5, 0.5, -0.5};
  EXPECT_FALSE(is_feasible_flow(p, flow));
}

TEST(DagCfr, StrategiesAreFeasibleFlows) {
  const Game g = preset("3K3[1,2]");
  const auto p = build_tbdag(g, analyze(g, Side::Min)).problem;
  std::mt19937_64 rng(3);
  for (RmVariant v : {RmVariant::Rm, RmVariant::RmPlus, RmVariant::PredictiveRmPlus, RmVariant::Mwu}) {
    DagCfr cfr(p, v);
    std::vector<double> flow;
    for (int t = 0; t < 30; ++t) {
      cfr.next_strategy(flow);
      ASSERT_TRUE(is_feasible_flow(p, flow, 1e-9)) << to_string(v);
      cfr.observe_utility(random_vector(flow.size(), rng));
    }
    EXPECT_GT(cfr.operations(), 0);
  }
}

TEST(DagCfr, MatchesGenericConstructionOnExpandedTree) {
  const Game fig2 = preset("fig2");
  const Game k3 = preset("3K3[1,3]");
  const std::vector<DagProblem> problems = {from_lists(diamond()),
                                            build_tbdag(fig2, analyze(fig2, Side::Max)).problem,
                                            build_tbdag(k3, analyze(k3, Side::Min)).problem};
  for (const auto& p : problems)
    for (RmVariant v : {RmVariant::Rm, RmVariant::RmPlus, RmVariant::PredictiveRmPlus, RmVariant::Mwu}) {
      DagCfr dag(p, v);
      DagGeneric generic(p, v);
      std::mt19937_64 rng(17);
      std::vector<double> a, b;
      for (int t = 0; t < 25; ++t) {
        dag.next_strategy(a);
        generic.next_strategy(b);
        ASSERT_LE(max_abs_diff(a, b), 1e-12) << to_string(v) << " t=" << t;
        const auto u = random_vector(a.size(), rng);
        dag.observe_utility(u);
        generic.observe_utility(u);
      }
    }
}

TEST(DagCfr, RejectsWrongUtilityLength) {
  const auto p = from_lists(diamond());
  DagCfr cfr(p, RmVariant::Rm);
  std::vector<double> flow;
  cfr.next_strategy(flow);
  EXPECT_THROW(cfr.observe_utility(std::vector<double>(3, 0.0)), std::exception);
}

TEST(TreeExpansion, UnfoldsSharedDecisions) {
  const auto p = from_lists(diamond());
  const auto t = expand_to_tree(p);
  // s1 appears twice in the tree.
  EXPECT_EQ(t.tree.num_decisions(), 4);
  for (int s = 0; s < t.tree.num_decisions(); ++s) EXPECT_EQ(t.tree.parents(s).size(), 1u);
  EXPECT_EQ(t.decision_map.size(), 4u);
  const Game g = preset("fig9-C16");
  TbDagOptions opt;
  opt.split = SplitMode::Public;
  EXPECT_THROW(expand_to_tree(build_tbdag(g, analyze(g, Side::Max), opt).problem, 1000), BudgetExceeded);
}

TEST(SequenceForm, MatchesPerfectRecallSizes) {
  const Game g = preset("2K3");
  for (Side s : {Side::Max, Side::Min}) {
    const auto p = sequence_form(g, s);
    EXPECT_EQ(p.num_decisions(), 6);
    EXPECT_EQ(p.num_observations, 13);
    validate(p);
    for (NodeId z : g.terminals()) EXPECT_GE(p.terminal_obs[static_cast<std::size_t>(z)], 0);
  }
}

TEST(SequenceForm, RealizationOfUniformStrategy) {
  const Game g = preset("2K3");
  const auto p = sequence_form(g, Side::Max);
  DagCfr cfr(p, RmVariant::Rm);
  std::vector<double> flow;
  cfr.next_strategy(flow);
  const auto r = terminal_realization(g, p, flow);
  for (NodeId z : g.terminals()) {
    // One or two own decisions on the way, each uniform over two actions.
    const double x = r[static_cast<std::size_t>(z)];
    EXPECT_TRUE(x == 0.5 || x == 0.25) << z << " " << x;
  }
}

TEST(LocalRm, StartsUniformAndStaysOnSimplex) {
  std::mt19937_64 rng(1);
  for (RmVariant v : {RmVariant::Rm, RmVariant::RmPlus, RmVariant::PredictiveRmPlus, RmVariant::Mwu}) {
    LocalRm rm(v, 3);
    std::vector<double> x(3);
    rm.next_strategy(x);
    for (double xi : x) EXPECT_DOUBLE_EQ(xi, 1.0 / 3.0);
    for (int t = 0; t < 50; ++t) {
      rm.observe(random_vector(3, rng));
      rm.next_strategy(x);
      double total = 0.0;
      for (double xi : x) {
        EXPECT_GE(xi, 0.0);
        total += xi;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
    if (v == RmVariant::RmPlus || v == RmVariant::PredictiveRmPlus)
      for (double r : rm.regrets()) EXPECT_GE(r, 0.0);
  }
}

TEST(LocalRm, ConvergesToDominantAction) {
  for (RmVariant v : {RmVariant::Rm, RmVariant::RmPlus, RmVariant::PredictiveRmPlus, RmVariant::Mwu}) {
    LocalRm rm(v, 2);
    std::vector<double> x(2);
    for (int t = 0; t < 2000; ++t) {
      rm.next_strategy(x);
      rm.observe(std::vector<double>{0.0, 1.0});
    }
    rm.next_strategy(x);
    EXPECT_GT(x[1], 0.95) << to_string(v);
  }
}

TEST(LocalRm, RegretMatchingFollowsPositiveRegret) {
  LocalRm rm(RmVariant::Rm, 2);
  std::vector<double> x(2);
  rm.next_strategy(x);
  rm.observe(std::vector<double>{1.0, 0.0});
  rm.next_strategy(x);
  // Regrets after one step: (0.5, -0.5).
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], 0.0);
}

TEST(LocalRm, VariantNames) {
  for (RmVariant v : {RmVariant::Rm, RmVariant::RmPlus, RmVariant::PredictiveRmPlus, RmVariant::Mwu})
    EXPECT_EQ(parse_rm_variant(to_string(v)), v);
  EXPECT_THROW(parse_rm_variant("adam"), std::exception);
}
