#include "teamdag/analysis.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace teamdag {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[static_cast<std::size_t>(a)] = b;  // smaller index stays root
  }
};

std::uint64_t pack3(int a, int b, int c) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 40) ^
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(b)) << 20) ^ static_cast<std::uint32_t>(c);
}

void require_same_depth(const Game& g, std::span<const NodeId> nodes) {
  for (NodeId h : nodes) {
    if (g.node(h).depth != g.node(nodes.front()).depth)
      throw GameError("split requires nodes of a single depth");
  }
}

}  // namespace

bool CoordinatorView::owns_infoset(const Game& g, InfosetId i) const {
  return g.side_of_player(g.infoset(i).player) == side;
}

CoordinatorView coordinator_view(const Game& g, Side side) {
  if (g.team(side).empty()) throw GameError("side " + std::string(to_string(side)) + " has no players");
  CoordinatorView v;
  v.side = side;
  for (InfosetId i = 0; i < static_cast<InfosetId>(g.infosets().size()); ++i)
    if (v.owns_infoset(g, i)) v.infosets.push_back(i);

  v.sequences.push_back({});
  v.seq_of_node.assign(g.num_nodes(), 0);
  std::map<std::tuple<int, InfosetId, int>, int> interned;
  for (NodeId h = 0; h < static_cast<NodeId>(g.num_nodes()); ++h) {
    const Node& nd = g.node(h);
    const int seq = v.seq_of_node[static_cast<std::size_t>(h)];
    const bool mine = g.owner(h) == side;
    for (std::size_t a = 0; a < nd.actions.size(); ++a) {
      int child_seq = seq;
      if (mine) {
        auto key = std::make_tuple(seq, nd.infoset, static_cast<int>(a));
        auto [it, inserted] = interned.try_emplace(key, static_cast<int>(v.sequences.size()));
        if (inserted) v.sequences.push_back({seq, nd.infoset, static_cast<int>(a)});
        child_seq = it->second;
      }
      v.seq_of_node[static_cast<std::size_t>(nd.actions[a].child)] = child_seq;
    }
  }
  return v;
}

bool remembers(const Game& g, InfosetId j, InfosetId i) {
  const Infoset& later = g.infoset(j);
  const Infoset& earlier = g.infoset(i);
  const int depth_i = g.node(earlier.members.front()).depth;
  if (g.node(later.members.front()).depth <= depth_i) return false;
  int action = -1;
  for (NodeId h : later.members) {
    NodeId anc = g.ancestor_at_depth(h, depth_i);
    if (anc == kNoNode || g.node(anc).infoset != i) return false;
    const int a = g.action_towards(anc, h);
    if (action == -1) action = a;
    else if (a != action) return false;
  }
  return true;
}

std::vector<InfosetId> StructuralAnalysis::public_state_last_infosets(const Game& g, int id) const {
  std::vector<InfosetId> out;
  for (NodeId h = 0; h < static_cast<NodeId>(g.num_nodes()); ++h) {
    if (public_state[static_cast<std::size_t>(h)] != id) continue;
    auto li = last_infosets(h);
    out.insert(out.end(), li.begin(), li.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StructuralAnalysis analyze(const Game& g, Side side) {
  StructuralAnalysis a;
  a.side = side;
  a.view = coordinator_view(g, side);
  const auto n = g.num_nodes();

  // Cliques: for every infoset and depth, the ancestors of its members at that depth.
  {
    std::set<std::vector<NodeId>> seen;
    for (InfosetId i : a.view.infosets) {
      std::vector<NodeId> level = g.infoset(i).members;
      while (level.size() >= 2) {
        if (seen.insert(level).second) a.cliques.push_back(level);
        if (g.node(level.front()).parent == kNoNode) break;
        for (NodeId& h : level) h = g.node(h).parent;
        std::sort(level.begin(), level.end());
        level.erase(std::unique(level.begin(), level.end()), level.end());
      }
    }
  }
  std::vector<int> counts(n + 1, 0);
  for (const auto& c : a.cliques)
    for (NodeId h : c) ++counts[static_cast<std::size_t>(h) + 1];
  a.clique_offsets.assign(n + 1, 0);
  for (std::size_t h = 0; h < n; ++h) a.clique_offsets[h + 1] = a.clique_offsets[h] + counts[h + 1];
  a.clique_ids.assign(static_cast<std::size_t>(a.clique_offsets[n]), 0);
  {
    std::vector<int> fill(a.clique_offsets.begin(), a.clique_offsets.end() - 1);
    for (std::size_t c = 0; c < a.cliques.size(); ++c)
      for (NodeId h : a.cliques[c]) a.clique_ids[static_cast<std::size_t>(fill[static_cast<std::size_t>(h)]++)] = static_cast<int>(c);
  }

  // Public states.
  UnionFind uf(n);
  for (const auto& c : a.cliques)
    for (NodeId h : c) uf.unite(c.front(), h);
  a.public_state.assign(n, -1);
  {
    std::vector<int> id_of_root(n, -1);
    for (std::size_t h = 0; h < n; ++h) {
      const int r = uf.find(static_cast<int>(h));
      if (id_of_root[static_cast<std::size_t>(r)] < 0) id_of_root[static_cast<std::size_t>(r)] = a.num_public_states++;
      a.public_state[h] = id_of_root[static_cast<std::size_t>(r)];
    }
  }

  // Last-infosets, incrementally along root paths.
  {
    std::unordered_map<std::uint64_t, bool> memo;
    auto remembers_cached = [&](InfosetId j, InfosetId i) {
      const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(j)) << 32) | static_cast<std::uint32_t>(i);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
      const bool r = remembers(g, j, i);
      memo.emplace(key, r);
      return r;
    };
    std::vector<std::vector<InfosetId>> li(n);
    for (NodeId h = 0; h < static_cast<NodeId>(n); ++h) {
      const Node& nd = g.node(h);
      std::vector<InfosetId> cur;
      if (nd.parent != kNoNode) cur = li[static_cast<std::size_t>(nd.parent)];
      if (g.owner(h) == side) {
        const InfosetId j = nd.infoset;
        std::erase_if(cur, [&](InfosetId i) { return i != j && remembers_cached(j, i); });
        if (std::find(cur.begin(), cur.end(), j) == cur.end()) {
          cur.push_back(j);
          std::sort(cur.begin(), cur.end());
        }
      }
      li[static_cast<std::size_t>(h)] = std::move(cur);
    }
    a.li_offsets.assign(n + 1, 0);
    for (std::size_t h = 0; h < n; ++h) a.li_offsets[h + 1] = a.li_offsets[h] + static_cast<int>(li[h].size());
    a.li_sets.reserve(static_cast<std::size_t>(a.li_offsets[n]));
    for (const auto& s : li) a.li_sets.insert(a.li_sets.end(), s.begin(), s.end());
  }

  // Information complexity and the infoset-count diagnostic.
  {
    std::vector<std::vector<InfosetId>> unions(static_cast<std::size_t>(a.num_public_states));
    for (std::size_t h = 0; h < n; ++h) {
      auto s = a.last_infosets(static_cast<NodeId>(h));
      auto& u = unions[static_cast<std::size_t>(a.public_state[h])];
      u.insert(u.end(), s.begin(), s.end());
    }
    for (auto& u : unions) {
      std::sort(u.begin(), u.end());
      u.erase(std::unique(u.begin(), u.end()), u.end());
      a.raw_k = std::max(a.raw_k, static_cast<int>(u.size()));
    }
    a.k = std::max(1, a.raw_k);

    std::vector<int> infosets_in_state(static_cast<std::size_t>(a.num_public_states), 0);
    for (InfosetId i : a.view.infosets) {
      const NodeId h = g.infoset(i).members.front();
      a.kappa = std::max(a.kappa, ++infosets_in_state[static_cast<std::size_t>(a.public_state[static_cast<std::size_t>(h)])]);
    }
  }

  // Recall flags.
  for (InfosetId i : a.view.infosets) {
    const auto& m = g.infoset(i).members;
    for (NodeId h : m)
      if (a.view.seq_of_node[static_cast<std::size_t>(h)] != a.view.seq_of_node[static_cast<std::size_t>(m.front())])
        a.perfect_recall = false;
  }
  {
    std::vector<int> act_seq(n, 0);
    std::unordered_map<std::uint64_t, int> interned;
    std::unordered_map<std::string, int> label_ids;
    for (NodeId h = 0; h < static_cast<NodeId>(n); ++h) {
      const Node& nd = g.node(h);
      const bool mine = g.owner(h) == side;
      for (const auto& act : nd.actions) {
        int label = -1;
        if (mine) label = label_ids.try_emplace(act.label, static_cast<int>(label_ids.size())).first->second;
        const std::uint64_t key = pack3(act_seq[static_cast<std::size_t>(h)], label + 1, 0);
        auto it = interned.try_emplace(key, static_cast<int>(interned.size()) + 1).first;
        act_seq[static_cast<std::size_t>(act.child)] = it->second;
      }
    }
    for (InfosetId i : a.view.infosets) {
      const auto& m = g.infoset(i).members;
      for (NodeId h : m)
        if (act_seq[static_cast<std::size_t>(h)] != act_seq[static_cast<std::size_t>(m.front())]) a.action_recall = false;
    }
  }
  return a;
}

ObservationSplitter::ObservationSplitter(const StructuralAnalysis& a)
    : analysis_(&a), clique_first_(a.cliques.size(), 0), clique_stamp_(a.cliques.size(), 0) {}

int ObservationSplitter::split(std::span<const NodeId> nodes, std::vector<int>& component) {
  const int n = static_cast<int>(nodes.size());
  uf_.resize(static_cast<std::size_t>(n));
  std::iota(uf_.begin(), uf_.end(), 0);
  auto find = [&](int x) {
    while (uf_[static_cast<std::size_t>(x)] != x) {
      uf_[static_cast<std::size_t>(x)] = uf_[static_cast<std::size_t>(uf_[static_cast<std::size_t>(x)])];
      x = uf_[static_cast<std::size_t>(x)];
    }
    return x;
  };
  ++stamp_;
  for (int i = 0; i < n; ++i) {
    for (int c : analysis_->cliques_of(nodes[static_cast<std::size_t>(i)])) {
      auto cu = static_cast<std::size_t>(c);
      if (clique_stamp_[cu] != stamp_) {
        clique_stamp_[cu] = stamp_;
        clique_first_[cu] = i;
      } else {
        int ra = find(i);
        int rb = find(clique_first_[cu]);
        if (ra != rb) uf_[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
      }
    }
  }
  component.assign(static_cast<std::size_t>(n), -1);
  int count = 0;
  std::vector<int> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = find(i);
  std::vector<int> comp_of_root(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    int r = roots[static_cast<std::size_t>(i)];
    if (comp_of_root[static_cast<std::size_t>(r)] < 0) comp_of_root[static_cast<std::size_t>(r)] = count++;
    component[static_cast<std::size_t>(i)] = comp_of_root[static_cast<std::size_t>(r)];
  }
  return count;
}

std::vector<std::vector<NodeId>> split_observation(const Game& g, const StructuralAnalysis& a,
                                                   std::span<const NodeId> nodes) {
  if (nodes.empty()) return {};
  require_same_depth(g, nodes);
  std::vector<NodeId> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  ObservationSplitter splitter(a);
  std::vector<int> comp;
  const int count = splitter.split(sorted, comp);
  std::vector<std::vector<NodeId>> out(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < sorted.size(); ++i) out[static_cast<std::size_t>(comp[i])].push_back(sorted[i]);
  return out;
}

std::vector<std::vector<NodeId>> split_public(const Game& g, const StructuralAnalysis& a,
                                              std::span<const NodeId> nodes) {
  if (nodes.empty()) return {};
  require_same_depth(g, nodes);
  std::vector<NodeId> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::vector<NodeId>> out;
  std::unordered_map<int, std::size_t> block_of_state;
  for (NodeId h : sorted) {
    const int ps = a.public_state[static_cast<std::size_t>(h)];
    auto [it, inserted] = block_of_state.try_emplace(ps, out.size());
    if (inserted) out.emplace_back();
    out[it->second].push_back(h);
  }
  return out;
}

}  // namespace teamdag
