#include "teamdag/dag_cfr.hpp"

#include <algorithm>
#include <cmath>

#include "teamdag/analysis.hpp"

namespace teamdag {

namespace {

constexpr std::int64_t kKahanEdgeThreshold = 1000000;

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

}  // namespace

DagCfr::DagCfr(const DagProblem& problem, RmVariant variant)
    : problem_(&problem),
      local_(problem.dec_children.size(), 0.0),
      value_(sz(problem.num_observations), 0.0),
      kahan_(problem.num_edges() > kKahanEdgeThreshold) {
  rms_.reserve(sz(problem.num_decisions()));
  int widest = 1;
  for (int s = 0; s < problem.num_decisions(); ++s) {
    rms_.emplace_back(variant, problem.num_actions(s));
    widest = std::max(widest, problem.num_actions(s));
  }
  scratch_.assign(sz(widest), 0.0);
  if (kahan_) carry_.assign(value_.size(), 0.0);
}

void DagCfr::next_strategy(std::vector<double>& flow) {
  const DagProblem& p = *problem_;
  flow.assign(sz(p.num_observations), 0.0);
  flow[0] = 1.0;
  for (int s = 0; s < p.num_decisions(); ++s) {
    double inflow = 0.0;
    for (int o : p.parents(s)) inflow += flow[sz(o)];
    const auto begin = sz(p.dec_child_offsets[sz(s)]);
    const int m = p.num_actions(s);
    std::span<double> r(local_.data() + begin, sz(m));
    rms_[sz(s)].next_strategy(r);
    auto kids = p.children(s);
    for (int a = 0; a < m; ++a) flow[sz(kids[sz(a)])] = inflow * r[sz(a)];
    operations_ += static_cast<std::int64_t>(p.parents(s).size()) + m;
  }
}

void DagCfr::observe_utility(std::span<const double> utility) {
  const DagProblem& p = *problem_;
  if (utility.size() != value_.size()) throw GameError("observe_utility: utility length mismatch");
  std::copy(utility.begin(), utility.end(), value_.begin());
  if (kahan_) std::fill(carry_.begin(), carry_.end(), 0.0);
  for (int s = p.num_decisions() - 1; s >= 0; --s) {
    auto kids = p.children(s);
    const int m = p.num_actions(s);
    const auto begin = sz(p.dec_child_offsets[sz(s)]);
    double expected = 0.0;
    for (int a = 0; a < m; ++a) {
      // Children of s are complete: their decisions come later in the order.
      const double v = value_[sz(kids[sz(a)])] - (kahan_ ? carry_[sz(kids[sz(a)])] : 0.0);
      scratch_[sz(a)] = v;
      expected += local_[begin + sz(a)] * v;
    }
    rms_[sz(s)].observe(std::span<const double>(scratch_.data(), sz(m)));
    for (int o : p.parents(s)) {
      if (kahan_) {
        const double y = expected - carry_[sz(o)];
        const double t = value_[sz(o)] + y;
        carry_[sz(o)] = (t - value_[sz(o)]) - y;
        value_[sz(o)] = t;
      } else {
        value_[sz(o)] += expected;
      }
    }
    operations_ += static_cast<std::int64_t>(p.parents(s).size()) + m;
  }
}

BestResponse best_response(const DagProblem& p, std::span<const double> utility) {
  if (utility.size() != sz(p.num_observations)) throw GameError("best_response: utility length mismatch");
  BestResponse br;
  std::vector<double> value(utility.begin(), utility.end());
  br.choice.assign(sz(p.num_decisions()), 0);
  for (int s = p.num_decisions() - 1; s >= 0; --s) {
    auto kids = p.children(s);
    int best = 0;
    for (int a = 1; a < p.num_actions(s); ++a)
      if (value[sz(kids[sz(a)])] > value[sz(kids[sz(best)])]) best = a;
    br.choice[sz(s)] = best;
    for (int o : p.parents(s)) value[sz(o)] += value[sz(kids[sz(best)])];
  }
  br.value = value[0];
  br.flow.assign(sz(p.num_observations), 0.0);
  br.flow[0] = 1.0;
  for (int s = 0; s < p.num_decisions(); ++s) {
    double inflow = 0.0;
    for (int o : p.parents(s)) inflow += br.flow[sz(o)];
    br.flow[sz(p.children(s)[sz(br.choice[sz(s)])])] = inflow;
  }
  return br;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

bool is_feasible_flow(const DagProblem& p, std::span<const double> flow, double tol) {
  if (flow.size() != sz(p.num_observations)) return false;
  if (std::abs(flow[0] - 1.0) > tol) return false;
  for (double x : flow)
    if (!(x >= -1e-12)) return false;
  for (int s = 0; s < p.num_decisions(); ++s) {
    double in = 0.0;
    double out = 0.0;
    for (int o : p.parents(s)) in += flow[sz(o)];
    for (int o : p.children(s)) out += flow[sz(o)];
    if (std::abs(in - out) > tol) return false;
  }
  return true;
}

TreeExpansion expand_to_tree(const DagProblem& p, std::int64_t max_points) {
  TreeExpansion ex;
  DagLists lists;
  lists.obs_children.emplace_back();
  ex.obs_map.push_back(0);
  std::int64_t points = 1;
  // Iterative preorder: (tree obs, dag obs) pairs whose children are pending.
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [tree_obs, dag_obs] = stack.back();
    stack.pop_back();
    std::vector<std::pair<int, int>> pending;
    for (int s : p.obs_decisions(dag_obs)) {
      const int tree_dec = static_cast<int>(lists.decision_children.size());
      lists.obs_children[sz(tree_obs)].push_back(tree_dec);
      ex.decision_map.push_back(s);
      std::vector<int> kids;
      for (int o : p.children(s)) {
        const int child = static_cast<int>(lists.obs_children.size());
        lists.obs_children.emplace_back();
        ex.obs_map.push_back(o);
        kids.push_back(child);
        pending.emplace_back(child, o);
      }
      lists.decision_children.push_back(std::move(kids));
      points += 1 + p.num_actions(s);
      if (points > max_points) throw BudgetExceeded("expand_to_tree: more than " + std::to_string(max_points) + " points");
    }
    // Reverse so that the first child is expanded first; decision ids stay topological either way.
    for (auto it = pending.rbegin(); it != pending.rend(); ++it) stack.push_back(*it);
  }
  ex.tree = from_lists(lists);
  return ex;
}

DagGeneric::DagGeneric(const DagProblem& problem, RmVariant variant, std::int64_t max_points)
    : problem_(&problem), expansion_(expand_to_tree(problem, max_points)), tree_cfr_(expansion_.tree, variant) {}

void DagGeneric::next_strategy(std::vector<double>& flow) {
  tree_cfr_.next_strategy(tree_flow_);
  flow.assign(sz(problem_->num_observations), 0.0);
  for (std::size_t t = 0; t < tree_flow_.size(); ++t) flow[sz(expansion_.obs_map[t])] += tree_flow_[t];
}

void DagGeneric::observe_utility(std::span<const double> utility) {
  tree_utility_.resize(expansion_.obs_map.size());
  for (std::size_t t = 0; t < tree_utility_.size(); ++t) tree_utility_[t] = utility[sz(expansion_.obs_map[t])];
  tree_cfr_.observe_utility(tree_utility_);
}

DagProblem sequence_form(const Game& g, Side side) {
  const StructuralAnalysis a = analyze(g, side);
  if (!a.perfect_recall) throw GameError("sequence_form: side " + std::string(to_string(side)) + " has imperfect recall");
  const CoordinatorView& v = a.view;

  std::vector<InfosetId> order = v.infosets;
  std::stable_sort(order.begin(), order.end(), [&](InfosetId x, InfosetId y) {
    return g.node(g.infoset(x).members.front()).depth < g.node(g.infoset(y).members.front()).depth;
  });
  std::vector<int> dec_of(g.infosets().size(), -1);
  for (std::size_t d = 0; d < order.size(); ++d) dec_of[sz(order[d])] = static_cast<int>(d);

  DagLists lists;
  lists.num_game_nodes = g.num_nodes();
  lists.obs_children.assign(v.num_sequences(), {});
  lists.obs_slots.assign(v.num_sequences(), {});
  lists.decision_children.assign(order.size(), {});
  for (std::size_t q = 1; q < v.num_sequences(); ++q) {
    const auto& seq = v.sequences[q];
    auto& kids = lists.decision_children[sz(dec_of[sz(seq.infoset)])];
    if (static_cast<int>(kids.size()) <= seq.action) kids.resize(sz(seq.action) + 1, -1);
    kids[sz(seq.action)] = static_cast<int>(q);
  }
  for (InfosetId i : order) {
    const int parent_seq = v.seq_of_node[sz(g.infoset(i).members.front())];
    lists.obs_children[sz(parent_seq)].push_back(dec_of[sz(i)]);
  }
  for (NodeId z : g.terminals()) lists.obs_slots[sz(v.seq_of_node[sz(z)])].push_back(z);
  return from_lists(lists);
}

std::vector<double> terminal_realization(const Game& g, const DagProblem& p, std::span<const double> flow) {
  std::vector<double> out(g.num_nodes(), 0.0);
  for (NodeId z : g.terminals()) {
    const int o = p.terminal_obs[sz(z)];
    if (o < 0) throw GameError("terminal " + std::to_string(z) + " has no payoff slot");
    out[sz(z)] = flow[sz(o)];
  }
  return out;
}

}  // namespace teamdag
