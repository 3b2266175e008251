#include "teamdag/belief_game.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <tuple>

#include "json.hpp"

namespace teamdag {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

class BeliefGameBuilder {
 public:
  BeliefGameBuilder(const Game& g, const StructuralAnalysis& amax, const StructuralAnalysis& amin,
                    const BeliefGameOptions& opt)
      : g_(g), opt_(opt), builder_({"chance", "max", "min"}), splitters_{ObservationSplitter(amax), ObservationSplitter(amin)} {
    analyses_[0] = &amax;
    analyses_[1] = &amin;
    builder_.set_team(Side::Max, {1});
    builder_.set_team(Side::Min, {2});
  }

  BeliefGame run() {
    const std::vector<NodeId> root{g_.root()};
    const int bmax = intern_belief(root);
    const int bmin = intern_belief(root);
    const NodeId top = make_node(g_.root(), {bmax, bmin}, {0, 0});
    out_.game = builder_.build(top);
    if (out_.game.num_nodes() != out_.annotations.size()) throw GameError("belief game: annotation count mismatch");
    for (int s = 0; s < 2; ++s) out_.num_sequences[s] = static_cast<std::int64_t>(sequences_[s].size()) + 1;
    for (const auto& nd : out_.game.nodes())
      if (nd.actions.size() != 1) ++out_.compact_nodes;
    for (const auto& info : out_.game.infosets())
      if (info.actions.size() > 1) ++out_.compact_infosets[info.player - 1];
    return std::move(out_);
  }

 private:
  using Beliefs = std::array<int, 2>;

  int intern_belief(const std::vector<NodeId>& nodes) {
    auto [it, inserted] = belief_ids_.try_emplace(nodes, static_cast<int>(out_.beliefs.size()));
    if (inserted) {
      out_.beliefs.push_back(nodes);
      for (int s = 0; s < 2; ++s) {
        std::vector<InfosetId> infos;
        for (NodeId h : nodes)
          if (g_.owner(h) == static_cast<Side>(s)) infos.push_back(g_.node(h).infoset);
        std::sort(infos.begin(), infos.end());
        infos.erase(std::unique(infos.begin(), infos.end()), infos.end());
        out_.belief_infosets[s].push_back(std::move(infos));
      }
    }
    return it->second;
  }

  std::int64_t num_prescriptions(int side, int belief) const {
    std::int64_t n = 1;
    for (InfosetId i : out_.belief_infosets[side][sz(belief)]) n *= static_cast<std::int64_t>(g_.infoset(i).actions.size());
    return n;
  }

  std::vector<int> decode(int side, int belief, std::int64_t code) const {
    const auto& infos = out_.belief_infosets[side][sz(belief)];
    std::vector<int> digits(infos.size(), 0);
    for (int d = static_cast<int>(infos.size()) - 1; d >= 0; --d) {
      const auto m = static_cast<std::int64_t>(g_.infoset(infos[sz(d)]).actions.size());
      digits[sz(d)] = static_cast<int>(code % m);
      code /= m;
    }
    return digits;
  }

  std::string prescription_label(int side, int belief, std::int64_t code) const {
    const auto& infos = out_.belief_infosets[side][sz(belief)];
    if (infos.empty()) return "-";
    const auto digits = decode(side, belief, code);
    std::string label;
    for (std::size_t d = 0; d < infos.size(); ++d) {
      if (d) label += ',';
      label += g_.infoset(infos[d]).actions[sz(digits[d])];
    }
    return label;
  }

  // Child node -> next belief of the side, for a belief and prescription.
  const std::vector<std::pair<NodeId, int>>& successors(int side, int belief, std::int64_t code) {
    auto key = std::make_tuple(side, belief, code);
    if (auto it = succ_.find(key); it != succ_.end()) return it->second;
    const auto& nodes = out_.beliefs[sz(belief)];
    const auto& infos = out_.belief_infosets[side][sz(belief)];
    const auto digits = decode(side, belief, code);
    std::vector<NodeId> candidates;
    for (NodeId h : nodes) {
      const Node& nd = g_.node(h);
      if (g_.owner(h) == static_cast<Side>(side)) {
        const auto pos = std::lower_bound(infos.begin(), infos.end(), nd.infoset) - infos.begin();
        candidates.push_back(nd.actions[sz(digits[static_cast<std::size_t>(pos)])].child);
      } else {
        for (const auto& a : nd.actions) candidates.push_back(a.child);
      }
    }
    std::vector<int> component(candidates.size(), 0);
    int count = 0;
    if (opt_.split == SplitMode::Observation) {
      count = splitters_[side].split(candidates, component);
    } else {
      std::map<int, int> label;
      for (std::size_t p = 0; p < candidates.size(); ++p) {
        auto [it, inserted] = label.try_emplace(analyses_[side]->public_state[sz(candidates[p])], count);
        if (inserted) ++count;
        component[p] = it->second;
      }
    }
    std::vector<std::vector<NodeId>> blocks(sz(count));
    for (std::size_t p = 0; p < candidates.size(); ++p) blocks[sz(component[p])].push_back(candidates[p]);
    std::vector<int> ids;
    for (const auto& blk : blocks) ids.push_back(intern_belief(blk));
    std::vector<std::pair<NodeId, int>> out;
    for (std::size_t p = 0; p < candidates.size(); ++p) out.emplace_back(candidates[p], ids[sz(component[p])]);
    std::sort(out.begin(), out.end());
    return succ_.emplace(key, std::move(out)).first->second;
  }

  int next_sequence(int side, int seq, int belief, std::int64_t code) {
    auto [it, inserted] =
        sequences_[side].try_emplace(std::make_tuple(seq, belief, code), static_cast<int>(sequences_[side].size()) + 1);
    return it->second;
  }

  InfosetId infoset_of(int side, int seq, int belief) {
    auto [it, inserted] = infoset_ids_.try_emplace(std::make_tuple(side, seq, belief), static_cast<InfosetId>(out_.infoset_labels.size()));
    if (inserted) out_.infoset_labels.push_back({static_cast<Side>(side), seq, belief});
    return it->second;
  }

  NodeId add(NodeId id, NodeId original, const Beliefs& b, BeliefRole role) {
    out_.annotations.push_back({original, {b[0], b[1]}, role});
    if (builder_.size() > static_cast<std::size_t>(opt_.node_budget))
      throw BudgetExceeded("belief game: node budget of " + std::to_string(opt_.node_budget) + " exceeded");
    return id;
  }

  NodeId make_node(NodeId h, Beliefs b, std::array<int, 2> seq) {
    const Node& nd = g_.node(h);
    const NodeId max_node = add(builder_.add_player(1, infoset_of(0, seq[0], b[0])), h, b, BeliefRole::MaxPrescribes);
    const std::int64_t max_count = num_prescriptions(0, b[0]);
    for (std::int64_t pmax = 0; pmax < max_count; ++pmax) {
      const NodeId min_node = add(builder_.add_player(2, infoset_of(1, seq[1], b[1])), h, b, BeliefRole::MinPrescribes);
      builder_.add_action(max_node, prescription_label(0, b[0], pmax), min_node);
      const std::int64_t min_count = num_prescriptions(1, b[1]);
      for (std::int64_t pmin = 0; pmin < min_count; ++pmin) {
        const std::array<int, 2> next_seq{next_sequence(0, seq[0], b[0], pmax), next_sequence(1, seq[1], b[1], pmin)};
        NodeId resolved;
        if (nd.is_terminal()) {
          resolved = add(builder_.add_terminal(nd.utility), h, b, BeliefRole::Terminal);
        } else {
          resolved = add(builder_.add_chance(), h, b, BeliefRole::ChanceResolves);
          // Copies: recursion below may rehash the successor cache.
          const auto succ_max = successors(0, b[0], pmax);
          const auto succ_min = successors(1, b[1], pmin);
          auto belief_of = [](const std::vector<std::pair<NodeId, int>>& succ, NodeId child) {
            auto it = std::lower_bound(succ.begin(), succ.end(), std::make_pair(child, -1));
            return it->second;
          };
          int chosen = -1;
          if (nd.is_player()) {
            const int side = index_of(*g_.owner(h));
            const auto& infos = out_.belief_infosets[side][sz(b[sz(side)])];
            const auto pos = std::lower_bound(infos.begin(), infos.end(), nd.infoset) - infos.begin();
            chosen = decode(side, b[sz(side)], side == 0 ? pmax : pmin)[static_cast<std::size_t>(pos)];
          }
          for (std::size_t a = 0; a < nd.actions.size(); ++a) {
            if (chosen >= 0 && static_cast<int>(a) != chosen) continue;
            const NodeId child = nd.actions[a].child;
            const Beliefs nb{belief_of(succ_max, child), belief_of(succ_min, child)};
            const NodeId next = make_node(child, nb, next_seq);
            builder_.add_action(resolved, nd.actions[a].label, next, nd.is_chance() ? nd.actions[a].prob : 1.0);
          }
        }
        builder_.add_action(min_node, prescription_label(1, b[1], pmin), resolved);
      }
    }
    return max_node;
  }

  const Game& g_;
  BeliefGameOptions opt_;
  GameBuilder builder_;
  const StructuralAnalysis* analyses_[2];
  ObservationSplitter splitters_[2];
  BeliefGame out_;
  std::map<std::vector<NodeId>, int> belief_ids_;
  std::map<std::tuple<int, int, std::int64_t>, std::vector<std::pair<NodeId, int>>> succ_;
  std::map<std::tuple<int, int, std::int64_t>, int> sequences_[2];
  std::map<std::tuple<int, int, int>, InfosetId> infoset_ids_;
};

}  // namespace

BeliefGame make_belief_game(const Game& g, const StructuralAnalysis& max_analysis, const StructuralAnalysis& min_analysis,
                            const BeliefGameOptions& options) {
  if (max_analysis.side != Side::Max || min_analysis.side != Side::Min)
    throw GameError("make_belief_game: analyses must be for MAX and MIN");
  return BeliefGameBuilder(g, max_analysis, min_analysis, options).run();
}

std::string belief_game_to_json(const BeliefGame& bg, int indent) {
  static constexpr const char* kRoles[] = {"max", "min", "resolve", "terminal"};
  auto j = nlohmann::json::parse(serialize_game(bg.game));
  auto nodes = nlohmann::json::array();
  for (const auto& a : bg.annotations)
    nodes.push_back({{"original", a.original},
                     {"role", kRoles[static_cast<int>(a.role)]},
                     {"belief_max", a.belief[0]},
                     {"belief_min", a.belief[1]}});
  auto infosets = nlohmann::json::array();
  for (const auto& l : bg.infoset_labels)
    infosets.push_back({{"side", std::string(to_string(l.side))}, {"sequence", l.sequence}, {"belief", l.belief}});
  j["annotations"] = {{"nodes", std::move(nodes)}, {"infosets", std::move(infosets)}, {"beliefs", bg.beliefs}};
  return j.dump(indent);
}

std::vector<int> map_pure_strategy(const Game& g, const BeliefGame& bg, Side side, std::span<const int> pure) {
  const int s = index_of(side);
  std::vector<int> out(bg.game.infosets().size(), -1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& label = bg.infoset_labels[i];
    if (label.side != side) continue;
    int code = 0;
    for (InfosetId orig : bg.belief_infosets[s][sz(label.belief)])
      code = code * static_cast<int>(g.infoset(orig).actions.size()) + pure[sz(orig)];
    out[i] = code;
  }
  return out;
}

std::vector<double> pure_profile_reach(const Game& g, std::span<const int> action_of_infoset) {
  std::vector<double> reach(g.num_nodes(), 0.0);
  reach[0] = 1.0;
  for (NodeId h = 0; h < static_cast<NodeId>(g.num_nodes()); ++h) {
    const Node& nd = g.node(h);
    if (reach[sz(h)] == 0.0) continue;
    for (std::size_t a = 0; a < nd.actions.size(); ++a) {
      double r = 0.0;
      if (nd.is_chance()) r = reach[sz(h)] * nd.actions[a].prob;
      else if (action_of_infoset[sz(nd.infoset)] == static_cast<int>(a)) r = reach[sz(h)];
      reach[sz(nd.actions[a].child)] = r;
    }
  }
  return reach;
}

std::vector<double> original_terminal_reach(const Game& g, const BeliefGame& bg, std::span<const int> action_of_infoset) {
  const auto reach = pure_profile_reach(bg.game, action_of_infoset);
  std::vector<double> out(g.num_nodes(), 0.0);
  for (NodeId t : bg.game.terminals()) out[sz(bg.annotations[sz(t)].original)] += reach[sz(t)];
  return out;
}

}  // namespace teamdag
