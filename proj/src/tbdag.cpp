#include "teamdag/tbdag.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "json.hpp"

namespace teamdag {

std::string_view to_string(SplitMode m) { return m == SplitMode::Observation ? "obs" : "pub"; }

SplitMode parse_split_mode(std::string_view text) {
  if (text == "obs" || text == "observation") return SplitMode::Observation;
  if (text == "pub" || text == "public") return SplitMode::Public;
  throw GameError("unknown split mode '" + std::string(text) + "'");
}

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::uint64_t fnv1a(std::span<const NodeId> nodes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (NodeId x : nodes) {
    auto v = static_cast<std::uint32_t>(x);
    for (int i = 0; i < 4; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

// Points in creation order. Child ranges are reserved when a point is
// created, so each list stays contiguous while recursion interleaves.
struct RawDag {
  std::vector<int> dec_off{0};
  std::vector<int> dec_kids;  // raw obs ids
  std::vector<int> obs_off{0};
  std::vector<int> obs_kids;  // raw decision ids
  std::vector<int> slot_off{0};
  std::vector<NodeId> slots;
  std::vector<int> belief_off{0};
  std::vector<NodeId> belief_nodes;
  std::vector<int> info_off{0};
  std::vector<InfosetId> infosets;
  std::vector<NodeId> terminal_of;

  int num_decisions() const { return static_cast<int>(dec_off.size()) - 1; }
  int num_obs() const { return static_cast<int>(obs_off.size()) - 1; }
  std::span<const NodeId> belief(int s) const {
    return {belief_nodes.data() + belief_off[sz(s)], sz(belief_off[sz(s) + 1] - belief_off[sz(s)])};
  }

  int new_obs(int num_kids, std::span<const NodeId> obs_slots) {
    obs_off.push_back(obs_off.back() + num_kids);
    obs_kids.resize(sz(obs_off.back()), -1);
    slots.insert(slots.end(), obs_slots.begin(), obs_slots.end());
    slot_off.push_back(static_cast<int>(slots.size()));
    return num_obs() - 1;
  }
  int new_decision(std::span<const NodeId> belief, std::span<const InfosetId> infos, int num_kids, NodeId terminal) {
    dec_off.push_back(dec_off.back() + num_kids);
    dec_kids.resize(sz(dec_off.back()), -1);
    belief_nodes.insert(belief_nodes.end(), belief.begin(), belief.end());
    belief_off.push_back(static_cast<int>(belief_nodes.size()));
    infosets.insert(infosets.end(), infos.begin(), infos.end());
    info_off.push_back(static_cast<int>(infosets.size()));
    terminal_of.push_back(terminal);
    return num_decisions() - 1;
  }
};

// Open-addressing map from belief to decision id; beliefs live in the RawDag pool.
class BeliefTable {
 public:
  BeliefTable() : ids_(1024, -1), hashes_(1024, 0) {}

  int find(std::uint64_t hash, std::span<const NodeId> belief, const RawDag& raw) const {
    const std::size_t mask = ids_.size() - 1;
    for (std::size_t i = hash & mask; ids_[i] != -1; i = (i + 1) & mask) {
      if (hashes_[i] != hash) continue;
      auto other = raw.belief(ids_[i]);
      if (std::equal(other.begin(), other.end(), belief.begin(), belief.end())) return ids_[i];
    }
    return -1;
  }

  void insert(std::uint64_t hash, int id) {
    if ((count_ + 1) * 2 > ids_.size()) grow();
    place(hash, id);
    ++count_;
  }

 private:
  void place(std::uint64_t hash, int id) {
    const std::size_t mask = ids_.size() - 1;
    std::size_t i = hash & mask;
    while (ids_[i] != -1) i = (i + 1) & mask;
    ids_[i] = id;
    hashes_[i] = hash;
  }
  void grow() {
    std::vector<int> old_ids(ids_.size() * 2, -1);
    std::vector<std::uint64_t> old_hashes(hashes_.size() * 2, 0);
    old_ids.swap(ids_);
    old_hashes.swap(hashes_);
    for (std::size_t i = 0; i < old_ids.size(); ++i)
      if (old_ids[i] != -1) place(old_hashes[i], old_ids[i]);
  }

  std::vector<int> ids_;
  std::vector<std::uint64_t> hashes_;
  std::size_t count_ = 0;
};

// Renumbers decision points topologically (Kahn, FIFO from the root's
// children) and observation points in order of their parent decision.
void finalize(RawDag&& raw, std::size_t num_game_nodes, TbDag& out) {
  const int nd = raw.num_decisions();
  const int no = raw.num_obs();
  auto obs_kids = [&](int o) {
    return std::span<const int>(raw.obs_kids.data() + raw.obs_off[sz(o)], sz(raw.obs_off[sz(o) + 1] - raw.obs_off[sz(o)]));
  };
  auto dec_kids = [&](int s) {
    return std::span<const int>(raw.dec_kids.data() + raw.dec_off[sz(s)], sz(raw.dec_off[sz(s) + 1] - raw.dec_off[sz(s)]));
  };

  std::vector<int> pending(sz(nd), 0);
  for (int o = 1; o < no; ++o)
    for (int s : obs_kids(o)) ++pending[sz(s)];
  std::vector<int> order;
  order.reserve(sz(nd));
  for (int s : obs_kids(0))
    if (pending[sz(s)] == 0) order.push_back(s);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (int o : dec_kids(order[head]))
      for (int s : obs_kids(o))
        if (--pending[sz(s)] == 0) order.push_back(s);
  }
  if (static_cast<int>(order.size()) != nd) throw GameError("tbdag: decision graph is not a rooted DAG");

  std::vector<int> new_dec(sz(nd), -1);
  for (int i = 0; i < nd; ++i) new_dec[sz(order[sz(i)])] = i;
  std::vector<int> new_obs(sz(no), -1);
  std::vector<int> old_obs;
  old_obs.reserve(sz(no));
  new_obs[0] = 0;
  old_obs.push_back(0);
  for (int s : order)
    for (int o : dec_kids(s)) {
      new_obs[sz(o)] = static_cast<int>(old_obs.size());
      old_obs.push_back(o);
    }
  if (static_cast<int>(old_obs.size()) != no) throw GameError("tbdag: unreachable observation point");

  DagProblem& p = out.problem;
  p = DagProblem{};
  p.num_observations = no;
  p.dec_children.reserve(raw.dec_kids.size());
  p.dec_child_offsets.reserve(sz(nd) + 1);
  out.belief_offsets.assign(1, 0);
  out.belief_nodes.clear();
  out.belief_nodes.reserve(raw.belief_nodes.size());
  out.infoset_offsets.assign(1, 0);
  out.belief_infosets.clear();
  out.terminal_of.clear();
  p.obs_parent.assign(sz(no), -1);
  p.obs_action.assign(sz(no), -1);
  for (int i = 0; i < nd; ++i) {
    const int s = order[sz(i)];
    int a = 0;
    for (int o : dec_kids(s)) {
      p.dec_children.push_back(new_obs[sz(o)]);
      p.obs_parent[sz(new_obs[sz(o)])] = i;
      p.obs_action[sz(new_obs[sz(o)])] = a++;
    }
    p.dec_child_offsets.push_back(static_cast<int>(p.dec_children.size()));
    auto b = raw.belief(s);
    out.belief_nodes.insert(out.belief_nodes.end(), b.begin(), b.end());
    out.belief_offsets.push_back(static_cast<int>(out.belief_nodes.size()));
    out.belief_infosets.insert(out.belief_infosets.end(), raw.infosets.begin() + raw.info_off[sz(s)],
                               raw.infosets.begin() + raw.info_off[sz(s) + 1]);
    out.infoset_offsets.push_back(static_cast<int>(out.belief_infosets.size()));
    out.terminal_of.push_back(raw.terminal_of[sz(s)]);
  }

  std::vector<int> parent_count(sz(nd), 0);
  p.obs_child_offsets.assign(1, 0);
  p.obs_children.reserve(raw.obs_kids.size());
  p.slot_offsets.assign(1, 0);
  p.slots.reserve(raw.slots.size());
  p.terminal_obs.assign(num_game_nodes, -1);
  for (int o2 = 0; o2 < no; ++o2) {
    const int o = old_obs[sz(o2)];
    for (int s : obs_kids(o)) {
      p.obs_children.push_back(new_dec[sz(s)]);
      ++parent_count[sz(new_dec[sz(s)])];
    }
    p.obs_child_offsets.push_back(static_cast<int>(p.obs_children.size()));
    for (int k = raw.slot_off[sz(o)]; k < raw.slot_off[sz(o) + 1]; ++k) {
      const NodeId z = raw.slots[sz(k)];
      p.slots.push_back(z);
      p.terminal_obs[sz(z)] = o2;
    }
    p.slot_offsets.push_back(static_cast<int>(p.slots.size()));
  }
  p.dec_parent_offsets.assign(sz(nd) + 1, 0);
  for (int s = 0; s < nd; ++s) p.dec_parent_offsets[sz(s) + 1] = p.dec_parent_offsets[sz(s)] + parent_count[sz(s)];
  p.dec_parents.assign(p.obs_children.size(), -1);
  {
    std::vector<int> fill(p.dec_parent_offsets.begin(), p.dec_parent_offsets.end() - 1);
    for (int o = 0; o < no; ++o)
      for (int s : p.obs_decisions(o)) p.dec_parents[sz(fill[sz(s)]++)] = o;
  }
  validate(p);
}

DagSize size_of(const DagProblem& p) {
  return {p.num_decisions(), p.num_observations, p.num_edges()};
}

class Builder {
 public:
  Builder(const Game& g, const StructuralAnalysis& a, const TbDagOptions& opt)
      : g_(g), a_(a), opt_(opt), splitter_(a) {}

  TbDag run() {
    const std::vector<NodeId> root{g_.root()};
    make_observation(root);
    TbDag out;
    out.side = a_.side;
    out.split = opt_.split;
    out.stats = stats_;
    finalize(std::move(raw_), g_.num_nodes(), out);
    return out;
  }

 private:
  void charge(std::int64_t edges) {
    edges_ += edges;
    if (edges_ > opt_.edge_budget)
      throw BudgetExceeded("tbdag: edge budget of " + std::to_string(opt_.edge_budget) + " exceeded");
  }

  int make_decision(const std::vector<NodeId>& belief) {
    const std::uint64_t hash = fnv1a(belief);
    if (int found = table_.find(hash, belief, raw_); found >= 0) {
      ++stats_.dedup_hits;
      return found;
    }
    stats_.max_belief = std::max(stats_.max_belief, static_cast<int>(belief.size()));

    const Node& first = g_.node(belief.front());
    if (first.is_terminal()) {
      if (belief.size() != 1) throw GameError("tbdag: terminal inside a non-singleton belief");
      const NodeId z = belief.front();
      const int s = raw_.new_decision(belief, {}, 1, z);
      table_.insert(hash, s);
      charge(1);
      const int leaf = raw_.new_obs(0, std::span<const NodeId>(&z, 1));
      raw_.dec_kids[sz(raw_.dec_off[sz(s)])] = leaf;
      return s;
    }

    std::vector<InfosetId> infos;
    for (NodeId h : belief)
      if (g_.owner(h) == a_.side) infos.push_back(g_.node(h).infoset);
    std::sort(infos.begin(), infos.end());
    infos.erase(std::unique(infos.begin(), infos.end()), infos.end());
    if (static_cast<int>(infos.size()) > opt_.fanout_cap)
      throw BudgetExceeded("tbdag: belief in public state " + std::to_string(a_.public_state[sz(belief.front())]) +
                           " intersects " + std::to_string(infos.size()) + " infosets (cap " +
                           std::to_string(opt_.fanout_cap) + ")");
    std::vector<int> radix;
    std::int64_t fanout = 1;
    for (InfosetId i : infos) {
      radix.push_back(static_cast<int>(g_.infoset(i).actions.size()));
      fanout *= radix.back();
      if (fanout > opt_.edge_budget) throw BudgetExceeded("tbdag: prescription fan-out exceeds the edge budget");
    }
    stats_.max_fanout = std::max(stats_.max_fanout, fanout);
    stats_.max_belief_infosets = std::max(stats_.max_belief_infosets, static_cast<int>(infos.size()));
    charge(fanout);

    const int s = raw_.new_decision(belief, infos, static_cast<int>(fanout), -1);
    table_.insert(hash, s);

    std::vector<int> digit_of(belief.size(), -1);
    for (std::size_t p = 0; p < belief.size(); ++p)
      if (g_.owner(belief[p]) == a_.side)
        digit_of[p] = static_cast<int>(std::lower_bound(infos.begin(), infos.end(), g_.node(belief[p]).infoset) - infos.begin());
    std::vector<int> digits(infos.size(), 0);
    std::vector<NodeId> candidates;
    for (std::int64_t code = 0; code < fanout; ++code) {
      candidates.clear();
      for (std::size_t p = 0; p < belief.size(); ++p) {
        const Node& nd = g_.node(belief[p]);
        if (digit_of[p] >= 0) {
          candidates.push_back(nd.actions[sz(digits[sz(digit_of[p])])].child);
        } else {
          for (const auto& act : nd.actions) candidates.push_back(act.child);
        }
      }
      const int o = make_observation(candidates);
      raw_.dec_kids[sz(raw_.dec_off[sz(s)]) + static_cast<std::size_t>(code)] = o;
      for (int d = static_cast<int>(digits.size()) - 1; d >= 0; --d) {
        if (++digits[sz(d)] < radix[sz(d)]) break;
        digits[sz(d)] = 0;
      }
    }
    return s;
  }

  int make_observation(const std::vector<NodeId>& candidates) {
    std::vector<int> component(candidates.size(), 0);
    int count = 0;
    if (opt_.split == SplitMode::Observation) {
      count = splitter_.split(candidates, component);
    } else {
      std::vector<std::pair<int, int>> seen;  // public state -> label
      for (std::size_t p = 0; p < candidates.size(); ++p) {
        const int ps = a_.public_state[sz(candidates[p])];
        auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& e) { return e.first == ps; });
        if (it == seen.end()) {
          seen.emplace_back(ps, count);
          component[p] = count++;
        } else {
          component[p] = it->second;
        }
      }
    }
    charge(count);
    const int o = raw_.new_obs(count, {});
    std::vector<std::vector<NodeId>> blocks(sz(count));
    for (std::size_t p = 0; p < candidates.size(); ++p) blocks[sz(component[p])].push_back(candidates[p]);
    for (int i = 0; i < count; ++i) {
      const int s = make_decision(blocks[sz(i)]);
      raw_.obs_kids[sz(raw_.obs_off[sz(o)] + i)] = s;
    }
    return o;
  }

  const Game& g_;
  const StructuralAnalysis& a_;
  TbDagOptions opt_;
  ObservationSplitter splitter_;
  RawDag raw_;
  BeliefTable table_;
  TbDagStats stats_;
  std::int64_t edges_ = 0;
};

}  // namespace

std::vector<int> TbDag::prescription(const Game& g, int s, int code) const {
  auto infos = infosets(s);
  std::vector<int> out(infos.size(), 0);
  for (int d = static_cast<int>(infos.size()) - 1; d >= 0; --d) {
    const int m = static_cast<int>(g.infoset(infos[sz(d)]).actions.size());
    out[sz(d)] = code % m;
    code /= m;
  }
  return out;
}

int TbDag::find_belief(std::span<const NodeId> target) const {
  for (int s = 0; s < problem.num_decisions(); ++s) {
    auto b = belief(s);
    if (std::equal(b.begin(), b.end(), target.begin(), target.end())) return s;
  }
  return -1;
}

TbDag build_tbdag(const Game& g, const StructuralAnalysis& a, const TbDagOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  TbDag dag = Builder(g, a, options).run();
  dag.stats.unreduced = size_of(dag.problem);
  dag.stats.final_size = dag.stats.unreduced;
  dag.stats.build_ms = ms_since(start);
  if (!options.reduce) return dag;
  return reduce(g, a, dag);
}

TbDag reduce(const Game& g, const StructuralAnalysis& a, const TbDag& u) {
  if (u.reduced) throw GameError("reduce: dag is already reduced");
  const auto start = std::chrono::steady_clock::now();
  const DagProblem& p = u.problem;
  const int nd = p.num_decisions();

  // Terminals with equal side sequence share one payoff point: the smallest z.
  std::unordered_map<int, std::vector<NodeId>> group;
  for (int s = 0; s < nd; ++s)
    if (u.terminal_of[sz(s)] >= 0) group[a.view.seq_of_node[sz(u.terminal_of[sz(s)])]].push_back(u.terminal_of[sz(s)]);
  for (auto& [seq, zs] : group) std::sort(zs.begin(), zs.end());

  std::vector<char> dec_alive(sz(nd), 0);
  std::vector<char> obs_alive(sz(p.num_observations), 0);
  for (int s = nd - 1; s >= 0; --s) {
    const NodeId z = u.terminal_of[sz(s)];
    if (z >= 0) {
      const bool keeper = group[a.view.seq_of_node[sz(z)]].front() == z;
      dec_alive[sz(s)] = keeper;
      obs_alive[sz(p.children(s)[0])] = keeper;
      continue;
    }
    for (int o : p.children(s)) {
      bool live = false;
      for (int c : p.obs_decisions(o)) live = live || dec_alive[sz(c)];
      obs_alive[sz(o)] = live;
      dec_alive[sz(s)] = dec_alive[sz(s)] || live;
    }
  }

  auto merged_slots = [&](int o) -> std::span<const NodeId> {
    const int s = p.obs_parent[sz(o)];
    if (s < 0 || u.terminal_of[sz(s)] < 0 || !dec_alive[sz(s)]) return {};
    const auto& zs = group[a.view.seq_of_node[sz(u.terminal_of[sz(s)])]];
    return {zs.data(), zs.size()};
  };
  auto spliceable = [&](int s) { return p.parents(s).size() == 1 && p.num_actions(s) == 1; };

  RawDag raw;
  std::vector<int> new_dec(sz(nd), -1);

  // Kept decisions and slots of o, looking through spliced decision points.
  auto collect = [&](auto&& self, int o, std::vector<int>& decs, std::vector<NodeId>& slots) -> void {
    auto own = merged_slots(o);
    slots.insert(slots.end(), own.begin(), own.end());
    for (int s : p.obs_decisions(o)) {
      if (!dec_alive[sz(s)]) continue;
      if (spliceable(s)) self(self, p.children(s)[0], decs, slots);
      else decs.push_back(s);
    }
  };
  auto emit_obs = [&](auto&& self_obs, auto&& self_dec, int o) -> int {
    std::vector<int> decs;
    std::vector<NodeId> slots;
    collect(collect, o, decs, slots);
    std::sort(slots.begin(), slots.end());
    const int ro = raw.new_obs(static_cast<int>(decs.size()), slots);
    for (std::size_t i = 0; i < decs.size(); ++i) {
      const int rs = self_dec(self_obs, self_dec, decs[i]);
      raw.obs_kids[sz(raw.obs_off[sz(ro)]) + i] = rs;
    }
    return ro;
  };
  auto emit_dec = [&](auto&& self_obs, auto&& self_dec, int s) -> int {
    if (new_dec[sz(s)] >= 0) return new_dec[sz(s)];
    const int rs = raw.new_decision(u.belief(s), u.infosets(s), p.num_actions(s), u.terminal_of[sz(s)]);
    new_dec[sz(s)] = rs;
    for (int a2 = 0; a2 < p.num_actions(s); ++a2) {
      const int ro = self_obs(self_obs, self_dec, p.children(s)[sz(a2)]);
      raw.dec_kids[sz(raw.dec_off[sz(rs)] + a2)] = ro;
    }
    return rs;
  };
  emit_obs(emit_obs, emit_dec, 0);

  TbDag out;
  out.side = u.side;
  out.split = u.split;
  out.reduced = true;
  out.stats = u.stats;
  finalize(std::move(raw), g.num_nodes(), out);
  out.stats.final_size = size_of(out.problem);
  const std::vector<NodeId> root{g.root()};
  out.stats.root_belief_spliced = u.find_belief(root) >= 0 && out.find_belief(root) < 0;
  out.stats.reduce_ms = ms_since(start);
  for (NodeId z : g.terminals())
    if (out.problem.terminal_obs[sz(z)] < 0) throw GameError("reduce: terminal " + std::to_string(z) + " lost its slot");
  return out;
}

SizeBoundReport check_size_bounds(const TbDag& dag, const Game& g, const StructuralAnalysis& a) {
  SizeBoundReport r;
  r.num_nodes = static_cast<std::int64_t>(g.num_nodes());
  r.k = a.k;
  r.b = g.branching_factor();
  r.bound = static_cast<double>(r.num_nodes) * std::pow(r.b + 1.0, r.k + 1.0);
  r.unreduced_edges = dag.stats.unreduced.edges;
  r.final_edges = dag.stats.final_size.edges;
  r.holds = static_cast<double>(r.unreduced_edges) <= r.bound && static_cast<double>(r.final_edges) <= r.bound;
  const double log_b = r.b > 1 ? std::log2(static_cast<double>(r.b)) : 1.0;
  r.log_ratio = static_cast<double>(r.unreduced_edges) / (static_cast<double>(r.num_nodes) * log_b);
  r.log_ratio_limit = std::pow(3.0, r.k + 1.0);
  return r;
}

SplitComparison compare_splits(const Game& g, const StructuralAnalysis& a, const TbDagOptions& options) {
  SplitComparison c;
  TbDagOptions o = options;
  o.reduce = true;
  o.split = SplitMode::Observation;
  TbDag obs = build_tbdag(g, a, o);
  c.observation_unreduced = obs.stats.unreduced;
  c.observation_reduced = obs.stats.final_size;
  o.split = SplitMode::Public;
  TbDag pub = build_tbdag(g, a, o);
  c.public_unreduced = pub.stats.unreduced;
  c.public_reduced = pub.stats.final_size;
  return c;
}

CanonicalDag canonical_form(const TbDag& dag) {
  CanonicalDag out;
  const DagProblem& p = dag.problem;
  for (int s = 0; s < p.num_decisions(); ++s) {
    auto b = dag.belief(s);
    std::vector<std::vector<std::vector<NodeId>>> actions;
    for (int o : p.children(s)) {
      std::vector<std::vector<NodeId>> kids;
      for (int c : p.obs_decisions(o)) {
        auto cb = dag.belief(c);
        kids.emplace_back(cb.begin(), cb.end());
      }
      std::sort(kids.begin(), kids.end());
      actions.push_back(std::move(kids));
    }
    std::sort(actions.begin(), actions.end());
    out.emplace(std::vector<NodeId>(b.begin(), b.end()), std::move(actions));
  }
  return out;
}

std::string tbdag_to_json(const TbDag& dag, int indent) {
  nlohmann::json j = nlohmann::json::parse(dag_to_json(dag.problem));
  j["side"] = std::string(to_string(dag.side));
  j["split"] = std::string(to_string(dag.split));
  j["reduced"] = dag.reduced;
  auto beliefs = nlohmann::json::array();
  for (int s = 0; s < dag.problem.num_decisions(); ++s) {
    auto b = dag.belief(s);
    auto infos = dag.infosets(s);
    beliefs.push_back({{"nodes", std::vector<NodeId>(b.begin(), b.end())},
                       {"infosets", std::vector<InfosetId>(infos.begin(), infos.end())}});
  }
  j["beliefs"] = std::move(beliefs);
  return j.dump(indent);
}

}  // namespace teamdag
