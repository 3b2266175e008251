#include "teamdag/dag.hpp"

#include <algorithm>

#include "json.hpp"

namespace teamdag {

namespace {

template <class T>
void append_csr(std::vector<int>& offsets, std::vector<T>& data, const std::vector<T>& row) {
  data.insert(data.end(), row.begin(), row.end());
  offsets.push_back(static_cast<int>(data.size()));
}

}  // namespace

DagProblem from_lists(const DagLists& lists) {
  DagProblem p;
  const auto num_obs = lists.obs_children.size();
  const auto num_dec = lists.decision_children.size();
  if (num_obs == 0) throw GameError("dag: no root observation point");
  p.num_observations = static_cast<int>(num_obs);

  p.obs_parent.assign(num_obs, -1);
  p.obs_action.assign(num_obs, -1);
  for (std::size_t s = 0; s < num_dec; ++s) {
    const auto& ch = lists.decision_children[s];
    if (ch.empty()) throw GameError("dag: decision point without actions");
    for (std::size_t a = 0; a < ch.size(); ++a) {
      const int o = ch[a];
      if (o <= 0 || o >= p.num_observations) throw GameError("dag: bad child observation id");
      if (p.obs_parent[static_cast<std::size_t>(o)] != -1) throw GameError("dag: observation point with two parents");
      p.obs_parent[static_cast<std::size_t>(o)] = static_cast<int>(s);
      p.obs_action[static_cast<std::size_t>(o)] = static_cast<int>(a);
    }
    append_csr(p.dec_child_offsets, p.dec_children, ch);
  }

  std::vector<std::vector<int>> parents(num_dec);
  p.obs_child_offsets.assign(1, 0);
  for (std::size_t o = 0; o < num_obs; ++o) {
    for (int s : lists.obs_children[o]) {
      if (s < 0 || static_cast<std::size_t>(s) >= num_dec) throw GameError("dag: bad child decision id");
      parents[static_cast<std::size_t>(s)].push_back(static_cast<int>(o));
    }
    append_csr(p.obs_child_offsets, p.obs_children, lists.obs_children[o]);
  }
  for (const auto& ps : parents) append_csr(p.dec_parent_offsets, p.dec_parents, ps);

  p.slot_offsets.assign(1, 0);
  p.terminal_obs.assign(lists.num_game_nodes, -1);
  for (std::size_t o = 0; o < num_obs; ++o) {
    static const std::vector<NodeId> none;
    const auto& row = o < lists.obs_slots.size() ? lists.obs_slots[o] : none;
    for (NodeId z : row) {
      if (z < 0 || static_cast<std::size_t>(z) >= lists.num_game_nodes) throw GameError("dag: slot out of range");
      p.terminal_obs[static_cast<std::size_t>(z)] = static_cast<int>(o);
    }
    append_csr(p.slot_offsets, p.slots, row);
  }
  validate(p);
  return p;
}

void validate(const DagProblem& p) {
  const int nd = p.num_decisions();
  const int no = p.num_observations;
  auto fail = [](const std::string& what) { throw GameError("dag: " + what); };
  if (no < 1) fail("missing root");
  if (static_cast<int>(p.obs_parent.size()) != no || static_cast<int>(p.obs_child_offsets.size()) != no + 1 ||
      static_cast<int>(p.slot_offsets.size()) != no + 1 || static_cast<int>(p.dec_parent_offsets.size()) != nd + 1)
    fail("inconsistent array sizes");
  if (p.obs_parent[0] != -1) fail("root observation point has a parent");

  std::vector<int> incoming(static_cast<std::size_t>(no), 0);
  for (int s = 0; s < nd; ++s) {
    if (p.num_actions(s) < 1) fail("decision point " + std::to_string(s) + " has no actions");
    if (p.parents(s).empty()) fail("decision point " + std::to_string(s) + " is unreachable");
    int a = 0;
    for (int o : p.children(s)) {
      if (o <= 0 || o >= no) fail("bad observation id");
      ++incoming[static_cast<std::size_t>(o)];
      if (p.obs_parent[static_cast<std::size_t>(o)] != s || p.obs_action[static_cast<std::size_t>(o)] != a)
        fail("parent map of observation point " + std::to_string(o) + " is stale");
      ++a;
    }
    for (int o : p.parents(s)) {
      // Topological ids: parents come from the root or earlier decisions.
      const int ps = p.obs_parent[static_cast<std::size_t>(o)];
      if (ps >= s) fail("decision ids are not topological at " + std::to_string(s));
      const auto kids = p.obs_decisions(o);
      if (std::find(kids.begin(), kids.end(), s) == kids.end()) fail("parent list not mirrored by child list");
    }
  }
  for (int o = 1; o < no; ++o)
    if (incoming[static_cast<std::size_t>(o)] != 1) fail("observation point " + std::to_string(o) + " lacks exactly one parent");
  std::int64_t obs_edges = 0;
  for (int o = 0; o < no; ++o) obs_edges += static_cast<std::int64_t>(p.obs_decisions(o).size());
  if (obs_edges != static_cast<std::int64_t>(p.dec_parents.size())) fail("parent and child edge counts differ");
  for (std::size_t z = 0; z < p.terminal_obs.size(); ++z) {
    const int o = p.terminal_obs[z];
    if (o < 0) continue;
    const auto sl = p.obs_slots(o);
    if (std::find(sl.begin(), sl.end(), static_cast<NodeId>(z)) == sl.end()) fail("terminal map out of sync");
  }
}

std::string dag_to_json(const DagProblem& p, int indent) {
  nlohmann::json j;
  j["observation_points"] = p.num_observations;
  auto decisions = nlohmann::json::array();
  for (int s = 0; s < p.num_decisions(); ++s) {
    auto par = p.parents(s);
    auto ch = p.children(s);
    decisions.push_back({{"id", s},
                         {"parents", std::vector<int>(par.begin(), par.end())},
                         {"children", std::vector<int>(ch.begin(), ch.end())}});
  }
  j["decision_points"] = std::move(decisions);
  auto slots = nlohmann::json::object();
  for (int o = 0; o < p.num_observations; ++o) {
    auto sl = p.obs_slots(o);
    if (!sl.empty()) slots[std::to_string(o)] = std::vector<NodeId>(sl.begin(), sl.end());
  }
  j["payoff_slots"] = std::move(slots);
  return j.dump(indent);
}

}  // namespace teamdag
