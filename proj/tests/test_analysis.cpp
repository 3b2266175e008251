#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "teamdag/analysis.hpp"
#include "teamdag/zoo.hpp"

using namespace teamdag;

namespace {

Game preset(const char* name) { return generate(*find_preset(name)); }

std::vector<Game> small_zoo() {
  std::vector<Game> out;
  for (const auto& p : list_presets()) {
    Game g = generate(p.spec);
    if (g.num_nodes() <= 2000) out.push_back(std::move(g));
  }
  return out;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (ab.emplace(a[i], b[i]).first->second != b[i]) return false;
    if (ba.emplace(b[i], a[i]).first->second != a[i]) return false;
  }
  return true;
}

}  // namespace

TEST(Analysis, SignalingGameComplexity) {
  const Game g = preset("fig2");
  EXPECT_EQ(analyze(g, Side::Max).k, 3);
  EXPECT_EQ(analyze(g, Side::Min).k, 1);
  EXPECT_FALSE(analyze(g, Side::Max).perfect_recall);
  EXPECT_TRUE(analyze(g, Side::Min).perfect_recall);
}

TEST(Analysis, PerfectRecallKuhnHasUnitComplexity) {
  const Game g = preset("2K3");
  for (Side s : {Side::Max, Side::Min}) {
    const auto a = analyze(g, s);
    EXPECT_EQ(a.k, 1);
    EXPECT_TRUE(a.perfect_recall);
    EXPECT_TRUE(a.action_recall);
  }
}

TEST(Analysis, PublicStatesMatchExplicitAdjacency) {
  for (const Game& g : small_zoo())
    for (Side s : {Side::Max, Side::Min}) {
      const auto a = analyze(g, s);
      EXPECT_TRUE(same_partition(a.public_state, oracle::public_states(g, s)));
      std::set<int> labels(a.public_state.begin(), a.public_state.end());
      EXPECT_EQ(static_cast<int>(labels.size()), a.num_public_states);
    }
}

TEST(Analysis, LastInfosetsAndComplexityMatchDefinition) {
  for (const Game& g : small_zoo())
    for (Side s : {Side::Max, Side::Min}) {
      const auto a = analyze(g, s);
      const auto li = oracle::last_infosets(g, s);
      for (NodeId h = 0; h < static_cast<NodeId>(g.num_nodes()); ++h) {
        const auto got = a.last_infosets(h);
        ASSERT_EQ(std::set<InfosetId>(got.begin(), got.end()), li[static_cast<std::size_t>(h)]) << "node " << h;
      }
      EXPECT_EQ(a.k, oracle::information_complexity(g, s));
      EXPECT_EQ(a.raw_k == 0 ? 1 : a.raw_k, a.k);
    }
}

TEST(Analysis, RemembersMatchesDefinition) {
  for (const char* name : {"fig2", "fig8", "3K3[1,3]", "worst-case-k1b2d5"}) {
    const Game g = preset(name);
    for (InfosetId j = 0; j < static_cast<InfosetId>(g.infosets().size()); ++j)
      for (InfosetId i = 0; i < static_cast<InfosetId>(g.infosets().size()); ++i)
        EXPECT_EQ(remembers(g, j, i), oracle::remembers(g, j, i)) << name << " " << j << " " << i;
  }
}

TEST(Analysis, CliquesAreDeduplicatedAndNonTrivial) {
  for (const Game& g : small_zoo()) {
    const auto a = analyze(g, Side::Max);
    std::set<std::vector<NodeId>> seen;
    for (const auto& c : a.cliques) {
      EXPECT_GE(c.size(), 2u);
      EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
      EXPECT_TRUE(seen.insert(c).second);
      for (NodeId h : c) EXPECT_EQ(g.node(h).depth, g.node(c[0]).depth);
    }
  }
}

TEST(Analysis, ObservationSplitMatchesComponents) {
  std::mt19937 rng(7);
  for (const char* name : {"fig2", "fig8", "fig9-C6", "3K3[1,2]", "3D2[1,3]", "worst-case-k2b2d6"}) {
    const Game g = preset(name);
    for (Side s : {Side::Max, Side::Min}) {
      const auto a = analyze(g, s);
      const auto adj = oracle::adjacency(g, s);
      for (int d = 0; d <= g.max_depth(); ++d) {
        const auto& level = g.nodes_at_depth(d);
        for (int rep = 0; rep < 10; ++rep) {
          std::vector<NodeId> subset;
          for (NodeId h : level)
            if (rng() % 2) subset.push_back(h);
          const auto got = split_observation(g, a, subset);
          auto want = oracle::components(adj, subset);
          std::sort(want.begin(), want.end());
          auto sorted = got;
          std::sort(sorted.begin(), sorted.end());
          EXPECT_EQ(sorted, want) << name;
          for (std::size_t i = 1; i < got.size(); ++i) EXPECT_LT(got[i - 1][0], got[i][0]);
        }
      }
    }
  }
}

TEST(Analysis, PublicSplitGroupsByPublicState) {
  const Game g = preset("fig8");
  const auto a = analyze(g, Side::Max);
  for (int d = 0; d <= g.max_depth(); ++d) {
    const auto& level = g.nodes_at_depth(d);
    const auto blocks = split_public(g, a, level);
    for (const auto& b : blocks)
      for (NodeId h : b) EXPECT_EQ(a.public_state[static_cast<std::size_t>(h)], a.public_state[static_cast<std::size_t>(b[0])]);
    std::set<int> states;
    for (NodeId h : level) states.insert(a.public_state[static_cast<std::size_t>(h)]);
    EXPECT_EQ(blocks.size(), states.size());
  }
}

TEST(Analysis, ObservationSplitRefinesPublicSplit) {
  for (const Game& g : small_zoo()) {
    const auto a = analyze(g, Side::Max);
    for (int d = 0; d <= g.max_depth(); ++d) {
      const auto& level = g.nodes_at_depth(d);
      EXPECT_GE(split_observation(g, a, level).size(), split_public(g, a, level).size());
    }
  }
}

TEST(Analysis, KappaIsAtMostInfosetCount) {
  for (const Game& g : small_zoo())
    for (Side s : {Side::Max, Side::Min}) {
      const auto a = analyze(g, s);
      EXPECT_LE(a.kappa, static_cast<int>(a.view.infosets.size()));
      for (int p = 0; p < a.num_public_states; ++p)
        EXPECT_LE(static_cast<int>(a.public_state_last_infosets(g, p).size()), a.k);
    }
}

TEST(Analysis, CoordinatorSequencesArePrefixClosed) {
  const Game g = preset("3K3[1,3]");
  const auto v = coordinator_view(g, Side::Min);
  EXPECT_EQ(v.sequences[0].parent, -1);
  for (std::size_t s = 1; s < v.sequences.size(); ++s) {
    EXPECT_LT(v.sequences[s].parent, static_cast<int>(s));
    EXPECT_TRUE(v.owns_infoset(g, v.sequences[s].infoset));
  }
  for (NodeId h = 0; h < static_cast<NodeId>(g.num_nodes()); ++h) {
    const NodeId p = g.node(h).parent;
    if (p == kNoNode) continue;
    const int sp = v.seq_of_node[static_cast<std::size_t>(p)];
    const int sh = v.seq_of_node[static_cast<std::size_t>(h)];
    if (g.owner(p) == Side::Min) EXPECT_EQ(v.sequences[static_cast<std::size_t>(sh)].parent, sp);
    else EXPECT_EQ(sh, sp);
  }
}
