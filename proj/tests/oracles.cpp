#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>

namespace oracle {

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

bool owned(const Game& g, NodeId h, Side side) {
  const auto& nd = g.node(h);
  return nd.is_player() && g.side_of_player(nd.player) == side;
}

std::vector<NodeId> path_to(const Game& g, NodeId h) {
  std::vector<NodeId> path;
  for (NodeId v = h; v != teamdag::kNoNode; v = g.node(v).parent) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

bool descends(const Game& g, NodeId ancestor, NodeId h) {
  for (NodeId v = h; v != teamdag::kNoNode; v = g.node(v).parent)
    if (v == ancestor) return true;
  return false;
}

std::vector<std::set<NodeId>> adjacency(const Game& g, Side side) {
  std::vector<std::set<NodeId>> adj(g.num_nodes());
  for (const auto& info : g.infosets()) {
    if (g.side_of_player(info.player) != side) continue;
    // Every pair of members contributes all same-depth ancestor pairs.
    for (NodeId a : info.members)
      for (NodeId b : info.members) {
        const auto pa = path_to(g, a), pb = path_to(g, b);
        for (std::size_t d = 0; d < pa.size() && d < pb.size(); ++d)
          if (pa[d] != pb[d]) {
            adj[at(pa[d])].insert(pb[d]);
            adj[at(pb[d])].insert(pa[d]);
          }
      }
  }
  return adj;
}

std::vector<std::vector<NodeId>> components(const std::vector<std::set<NodeId>>& adj, const std::vector<NodeId>& nodes) {
  const std::set<NodeId> inside(nodes.begin(), nodes.end());
  std::set<NodeId> seen;
  std::vector<std::vector<NodeId>> out;
  for (NodeId start : inside) {
    if (seen.count(start)) continue;
    std::vector<NodeId> comp, stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (NodeId w : adj[at(v)])
        if (inside.count(w) && seen.insert(w).second) stack.push_back(w);
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<int> public_states(const Game& g, Side side) {
  const auto adj = adjacency(g, side);
  std::vector<int> label(g.num_nodes(), -1);
  int next = 0;
  for (int d = 0; d <= g.max_depth(); ++d)
    for (const auto& comp : components(adj, g.nodes_at_depth(d))) {
      for (NodeId h : comp) label[at(h)] = next;
      ++next;
    }
  return label;
}

bool remembers(const Game& g, InfosetId j, InfosetId i) {
  const auto& I = g.infoset(i);
  const auto& J = g.infoset(j);
  for (std::size_t a = 0; a < I.actions.size(); ++a) {
    bool all = true;
    for (NodeId h : J.members) {
      bool found = false;
      const auto path = path_to(g, h);
      for (std::size_t p = 0; p + 1 < path.size(); ++p) {
        const auto& nd = g.node(path[p]);
        if (nd.is_player() && nd.infoset == i && nd.actions[a].child == path[p + 1]) found = true;
      }
      if (!found) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

std::vector<std::set<InfosetId>> last_infosets(const Game& g, Side side) {
  std::map<std::pair<InfosetId, InfosetId>, bool> memo;
  auto rem = [&](InfosetId j, InfosetId i) {
    auto key = std::make_pair(j, i);
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, remembers(g, j, i)).first;
    return it->second;
  };
  std::vector<std::set<InfosetId>> li(g.num_nodes());
  for (NodeId h = 0; h < static_cast<NodeId>(g.num_nodes()); ++h) {
    std::vector<InfosetId> traversed;
    for (NodeId v : path_to(g, h))
      if (owned(g, v, side)) traversed.push_back(g.node(v).infoset);
    for (std::size_t p = 0; p < traversed.size(); ++p) {
      bool forgotten = true;
      for (std::size_t q = p + 1; q < traversed.size(); ++q)
        if (rem(traversed[q], traversed[p])) forgotten = false;
      if (forgotten) li[at(h)].insert(traversed[p]);
    }
  }
  return li;
}

int information_complexity(const Game& g, Side side) {
  const auto ps = public_states(g, side);
  const auto li = last_infosets(g, side);
  std::map<int, std::set<InfosetId>> by_state;
  for (NodeId h = 0; h < static_cast<NodeId>(g.num_nodes()); ++h)
    by_state[ps[at(h)]].insert(li[at(h)].begin(), li[at(h)].end());
  int k = 1;
  for (const auto& [state, infos] : by_state) k = std::max(k, static_cast<int>(infos.size()));
  return k;
}

DagCounts tbdag_counts(const Game& g, Side side, bool public_split) {
  const auto adj = adjacency(g, side);
  const auto ps = public_split ? public_states(g, side) : std::vector<int>{};
  using Belief = std::vector<NodeId>;
  std::map<Belief, std::int64_t> parents;  // incoming observation edges per decision
  std::map<Belief, std::int64_t> actions;
  DagCounts c;
  c.observations = 1;

  auto split = [&](const Belief& candidates) {
    if (!public_split) return components(adj, candidates);
    std::map<int, Belief> blocks;
    for (NodeId h : candidates) blocks[ps[at(h)]].push_back(h);
    std::vector<Belief> out;
    for (auto& [label, blk] : blocks) out.push_back(blk);
    return out;
  };

  std::function<void(const Belief&)> visit = [&](const Belief& b) {
    if (parents[b]++ > 0) return;
    std::vector<InfosetId> infos;
    for (NodeId h : b)
      if (owned(g, h, side)) infos.push_back(g.node(h).infoset);
    std::sort(infos.begin(), infos.end());
    infos.erase(std::unique(infos.begin(), infos.end()), infos.end());
    std::int64_t count = 1;
    for (InfosetId i : infos) count *= static_cast<std::int64_t>(g.infoset(i).actions.size());
    actions[b] = count;
    c.observations += count;
    if (b.size() == 1 && g.node(b[0]).is_terminal()) return;
    std::vector<int> choice(infos.size(), 0);
    for (std::int64_t code = 0; code < count; ++code) {
      std::int64_t rest = code;
      for (int d = static_cast<int>(infos.size()) - 1; d >= 0; --d) {
        const auto m = static_cast<std::int64_t>(g.infoset(infos[at(d)]).actions.size());
        choice[at(d)] = static_cast<int>(rest % m);
        rest /= m;
      }
      Belief next;
      for (NodeId h : b) {
        const auto& nd = g.node(h);
        if (owned(g, h, side)) {
          const auto pos = std::find(infos.begin(), infos.end(), nd.infoset) - infos.begin();
          next.push_back(nd.actions[at(choice[static_cast<std::size_t>(pos)])].child);
        } else {
          for (const auto& a : nd.actions) next.push_back(a.child);
        }
      }
      for (const auto& part : split(next)) visit(part);
    }
  };
  visit({g.root()});
  c.decisions = static_cast<std::int64_t>(parents.size());
  for (const auto& [b, n] : parents) c.edges += n + actions[b];
  return c;
}

std::vector<double> profile_reach(const Game& g, const std::vector<int>& action_of_infoset) {
  std::vector<double> reach(g.num_nodes(), 0.0);
  std::function<void(NodeId, double)> walk = [&](NodeId h, double r) {
    reach[at(h)] = r;
    const auto& nd = g.node(h);
    for (std::size_t a = 0; a < nd.actions.size(); ++a) {
      if (nd.is_chance()) walk(nd.actions[a].child, r * nd.actions[a].prob);
      else walk(nd.actions[a].child, action_of_infoset[at(nd.infoset)] == static_cast<int>(a) ? r : 0.0);
    }
  };
  walk(g.root(), 1.0);
  return reach;
}

double profile_value(const Game& g, const std::vector<int>& action_of_infoset) {
  const auto reach = profile_reach(g, action_of_infoset);
  double v = 0.0;
  for (NodeId z : g.terminals()) v += reach[at(z)] * g.node(z).utility;
  return v;
}

double pure_strategy_count(const Game& g, Side side) {
  double n = 1.0;
  for (const auto& info : g.infosets())
    if (g.side_of_player(info.player) == side) n *= static_cast<double>(info.actions.size());
  return n;
}

double naive_best_response(const Game& g, Side side, const std::vector<double>& opponent_realization) {
  std::vector<InfosetId> mine;
  for (InfosetId i = 0; i < static_cast<InfosetId>(g.infosets().size()); ++i)
    if (g.side_of_player(g.infoset(i).player) == side) mine.push_back(i);
  std::vector<int> pure(g.infosets().size(), 0);
  const double sign = side == Side::Max ? 1.0 : -1.0;
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    // Own realization with chance removed: walk with chance probability 1.
    double v = 0.0;
    std::function<void(NodeId, double)> walk = [&](NodeId h, double r) {
      const auto& nd = g.node(h);
      if (nd.is_terminal()) {
        v += sign * nd.utility * g.chance_reach(h) * r * opponent_realization[at(h)];
        return;
      }
      for (std::size_t a = 0; a < nd.actions.size(); ++a) {
        const bool mine_here = owned(g, h, side);
        walk(nd.actions[a].child, !mine_here || pure[at(nd.infoset)] == static_cast<int>(a) ? r : 0.0);
      }
    };
    walk(g.root(), 1.0);
    best = std::max(best, v);
    int d = static_cast<int>(mine.size()) - 1;
    for (; d >= 0; --d) {
      const InfosetId i = mine[at(d)];
      if (++pure[at(i)] < static_cast<int>(g.infoset(i).actions.size())) break;
      pure[at(i)] = 0;
    }
    if (d < 0) break;
  }
  return best;
}

}  // namespace oracle
