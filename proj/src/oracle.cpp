#include "teamdag/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace teamdag {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

// Depth-by-depth walk: the nodes still reachable under the partial
// assignment, with every infoset of the side met at a depth fixed jointly.
class Enumerator {
 public:
  Enumerator(const Game& g, Side side, std::span<const double> r) : g_(g), side_(side), r_(r) {
    choice_.assign(g.infosets().size(), -1);
    best_choice_ = choice_;
  }

  std::int64_t count(const std::vector<NodeId>& reached, std::int64_t cap) {
    if (reached.empty()) return 1;
    const auto infos = infosets_in(reached);
    std::int64_t total = 0;
    for_each_assignment(infos, [&] {
      if (total > cap) return false;
      total += count(advance(reached), cap - total);
      return true;
    });
    return std::min(total, cap + 1);
  }

  void search(const std::vector<NodeId>& reached, double acc) {
    for (NodeId h : reached) {
      const Node& nd = g_.node(h);
      if (!nd.is_terminal()) continue;
      const double u = side_ == Side::Max ? nd.utility : -nd.utility;
      acc += u * g_.chance_reach(h) * r_[sz(h)];
    }
    std::vector<NodeId> live;
    for (NodeId h : reached)
      if (!g_.node(h).is_terminal()) live.push_back(h);
    if (live.empty()) {
      ++strategies_;
      if (acc > best_) {
        best_ = acc;
        best_choice_ = choice_;
      }
      return;
    }
    const auto infos = infosets_in(live);
    for_each_assignment(infos, [&] {
      search(advance(live), acc);
      return true;
    });
    for (InfosetId i : infos) choice_[sz(i)] = -1;
  }

  OracleResult result() const { return {best_, best_choice_, strategies_}; }

 private:
  std::vector<InfosetId> infosets_in(const std::vector<NodeId>& nodes) const {
    std::vector<InfosetId> infos;
    for (NodeId h : nodes)
      if (g_.owner(h) == side_) infos.push_back(g_.node(h).infoset);
    std::sort(infos.begin(), infos.end());
    infos.erase(std::unique(infos.begin(), infos.end()), infos.end());
    return infos;
  }

  std::vector<NodeId> advance(const std::vector<NodeId>& nodes) const {
    std::vector<NodeId> next;
    for (NodeId h : nodes) {
      const Node& nd = g_.node(h);
      if (g_.owner(h) == side_) next.push_back(nd.actions[sz(choice_[sz(nd.infoset)])].child);
      else
        for (const auto& a : nd.actions) next.push_back(a.child);
    }
    return next;
  }

  // Odometer over the infosets' actions, first infoset most significant.
  template <class F>
  void for_each_assignment(const std::vector<InfosetId>& infos, F&& body) {
    for (InfosetId i : infos) choice_[sz(i)] = 0;
    while (true) {
      if (!body()) return;
      int d = static_cast<int>(infos.size()) - 1;
      for (; d >= 0; --d) {
        const InfosetId i = infos[sz(d)];
        if (++choice_[sz(i)] < static_cast<int>(g_.infoset(i).actions.size())) break;
        choice_[sz(i)] = 0;
      }
      if (d < 0) return;
    }
  }

  const Game& g_;
  Side side_;
  std::span<const double> r_;
  std::vector<int> choice_;
  std::vector<int> best_choice_;
  double best_ = -std::numeric_limits<double>::infinity();
  std::int64_t strategies_ = 0;
};

}  // namespace

std::int64_t count_reduced_strategies(const Game& g, Side side, std::int64_t cap) {
  Enumerator e(g, side, {});
  return e.count({g.root()}, cap);
}

OracleResult enumeration_oracle(const Game& g, Side side, std::span<const double> opponent_realization,
                                std::int64_t budget) {
  if (opponent_realization.size() != g.num_nodes()) throw GameError("oracle: realization size mismatch");
  const auto n = count_reduced_strategies(g, side, budget);
  if (n > budget)
    throw BudgetExceeded("oracle: more than " + std::to_string(budget) + " reduced pure strategies for " +
                         std::string(to_string(side)));
  Enumerator e(g, side, opponent_realization);
  e.search({g.root()}, 0.0);
  return e.result();
}

}  // namespace teamdag
