#include "teamdag/transforms.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace teamdag {

namespace {

int child_index(const Game& g, NodeId h) {
  const Node& par = g.node(g.node(h).parent);
  for (std::size_t a = 0; a < par.actions.size(); ++a)
    if (par.actions[a].child == h) return static_cast<int>(a);
  return -1;
}

GameBuilder builder_like(const Game& g) {
  GameBuilder b(g.players());
  b.set_team(Side::Max, g.team(Side::Max));
  b.set_team(Side::Min, g.team(Side::Min));
  return b;
}

}  // namespace

Game binarize_actions(const Game& g) {
  for (Side s : {Side::Max, Side::Min}) {
    if (g.team(s).empty()) continue;
    if (!analyze(g, s).action_recall)
      throw GameError("binarize_actions: side " + std::string(to_string(s)) + " lacks action recall");
  }
  int width = 0;
  while ((1 << width) < g.branching_factor()) ++width;

  GameBuilder b = builder_like(g);

  // Recursive expansion of node h; returns the new id of its replacement.
  auto expand = [&](auto&& self, NodeId h) -> NodeId {
    const Node& nd = g.node(h);
    if (nd.is_terminal()) return b.add_terminal(nd.utility);

    const int m = static_cast<int>(nd.actions.size());
    std::vector<int> by_label(static_cast<std::size_t>(m));
    std::iota(by_label.begin(), by_label.end(), 0);
    std::sort(by_label.begin(), by_label.end(), [&](int x, int y) {
      return nd.actions[static_cast<std::size_t>(x)].label < nd.actions[static_cast<std::size_t>(y)].label;
    });
    // code[r] is the rank r; the action sitting at rank r is by_label[r].

    auto make_node = [&](const std::string& prefix) {
      if (nd.is_chance()) return b.add_chance();
      return b.add_player(nd.player, b.infoset_for(std::to_string(nd.infoset) + "/" + prefix));
    };
    auto mass = [&](int lo, int hi) {  // ranks in [lo, hi)
      double total = 0.0;
      for (int r = lo; r < std::min(hi, m); ++r) total += nd.actions[static_cast<std::size_t>(by_label[static_cast<std::size_t>(r)])].prob;
      return total;
    };

    // Node for prefix covering ranks [lo, lo + 2^(width - depth)).
    auto build_prefix = [&](auto&& rec, const std::string& prefix, int lo, int depth) -> NodeId {
      const NodeId node = make_node(prefix);
      if (depth == width) {
        const auto& act = nd.actions[static_cast<std::size_t>(by_label[static_cast<std::size_t>(lo)])];
        const NodeId child = self(self, act.child);
        b.add_action(node, "0", child, nd.is_chance() ? 1.0 : 0.0);
        return node;
      }
      const int half = 1 << (width - depth - 1);
      const double total = nd.is_chance() ? mass(lo, lo + 2 * half) : 0.0;
      int live = (lo < m ? 1 : 0) + (lo + half < m ? 1 : 0);
      for (int bit = 0; bit < 2; ++bit) {
        const int start = lo + bit * half;
        if (start >= m) continue;
        double prob = 0.0;
        if (nd.is_chance()) prob = total > 0.0 ? mass(start, start + half) / total : 1.0 / live;
        const NodeId child = rec(rec, prefix + static_cast<char>('0' + bit), start, depth + 1);
        b.add_action(node, std::string(1, static_cast<char>('0' + bit)), child, prob);
      }
      return node;
    };
    return build_prefix(build_prefix, std::string(), 0, 0);
  };
  const NodeId root = expand(expand, g.root());
  return b.build(root);
}

bool co_playable(const Game& g, Side side, NodeId a, NodeId b) {
  if (g.node(a).depth != g.node(b).depth) return false;
  NodeId ca = a;
  NodeId cb = b;
  while (ca != cb) {
    const NodeId pa = g.node(ca).parent;
    const NodeId pb = g.node(cb).parent;
    const Node& na = g.node(pa);
    const Node& nb = g.node(pb);
    if (na.is_player() && nb.is_player() && na.infoset == nb.infoset && g.owner(pa) == side) {
      if (child_index(g, ca) != child_index(g, cb)) return false;
    }
    ca = pa;
    cb = pb;
  }
  return true;
}

Game inflate(const Game& g, Side side) {
  Game cur = g;
  for (;;) {
    // New infoset id per node; equal to the old one when nothing splits.
    std::vector<InfosetId> new_infoset(cur.num_nodes(), -1);
    InfosetId next = 0;
    bool split = false;
    for (InfosetId i = 0; i < static_cast<InfosetId>(cur.infosets().size()); ++i) {
      const auto& members = cur.infoset(i).members;
      const bool mine = cur.side_of_player(cur.infoset(i).player) == side;
      std::vector<int> comp(members.size(), 0);
      int count = 1;
      if (mine && members.size() > 1) {
        std::vector<int> uf(members.size());
        std::iota(uf.begin(), uf.end(), 0);
        auto find = [&](int x) {
          while (uf[static_cast<std::size_t>(x)] != x) x = uf[static_cast<std::size_t>(x)] = uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(x)])];
          return x;
        };
        for (std::size_t x = 0; x < members.size(); ++x)
          for (std::size_t y = x + 1; y < members.size(); ++y)
            if (find(static_cast<int>(x)) != find(static_cast<int>(y)) && co_playable(cur, side, members[x], members[y])) {
              int rx = find(static_cast<int>(x));
              int ry = find(static_cast<int>(y));
              uf[static_cast<std::size_t>(std::max(rx, ry))] = std::min(rx, ry);
            }
        std::vector<int> label(members.size(), -1);
        count = 0;
        for (std::size_t x = 0; x < members.size(); ++x) {
          int r = find(static_cast<int>(x));
          if (label[static_cast<std::size_t>(r)] < 0) label[static_cast<std::size_t>(r)] = count++;
          comp[x] = label[static_cast<std::size_t>(r)];
        }
      }
      if (count > 1) split = true;
      for (std::size_t x = 0; x < members.size(); ++x) new_infoset[static_cast<std::size_t>(members[x])] = next + comp[x];
      next += count;
    }
    if (!split) return cur;

    GameBuilder b = builder_like(cur);
    for (NodeId h = 0; h < static_cast<NodeId>(cur.num_nodes()); ++h) {
      const Node& nd = cur.node(h);
      if (nd.is_chance()) b.add_chance();
      else if (nd.is_player()) b.add_player(nd.player, new_infoset[static_cast<std::size_t>(h)]);
      else b.add_terminal(nd.utility);
    }
    for (NodeId h = 0; h < static_cast<NodeId>(cur.num_nodes()); ++h)
      for (const auto& a : cur.node(h).actions) b.add_action(h, a.label, a.child, a.prob);
    cur = b.build(cur.root());
  }
}

}  // namespace teamdag
