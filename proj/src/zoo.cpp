#include "teamdag/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace teamdag {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Kuhn: return "kuhn";
    case Family::Leduc: return "leduc";
    case Family::LiarsDice: return "liars_dice";
    case Family::SignalingFig2: return "signaling_fig2";
    case Family::WorstCase: return "worst_case";
    case Family::PublicCounterexampleFig8: return "public_counterexample_fig8";
    case Family::InflationCounterexampleFig9: return "inflation_counterexample_fig9";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "kuhn") return Family::Kuhn;
  if (s == "leduc") return Family::Leduc;
  if (s == "liars_dice" || s == "liarsdice") return Family::LiarsDice;
  if (s == "signaling_fig2" || s == "fig2" || s == "signaling") return Family::SignalingFig2;
  if (s == "worst_case") return Family::WorstCase;
  if (s == "public_counterexample_fig8" || s == "fig8") return Family::PublicCounterexampleFig8;
  if (s == "inflation_counterexample_fig9" || s == "fig9") return Family::InflationCounterexampleFig9;
  throw GameError("unknown game family '" + std::string(name) + "'");
}

namespace {

void set_teams(GameBuilder& b, const ZooSpec& spec, int num_players) {
  std::vector<int> mx = spec.team_max;
  std::vector<int> mn = spec.team_min;
  if (mx.empty() && mn.empty()) mx = {1};
  auto complement = [&](const std::vector<int>& xs) {
    std::vector<int> out;
    for (int p = 1; p <= num_players; ++p)
      if (std::find(xs.begin(), xs.end(), p) == xs.end()) out.push_back(p);
    return out;
  };
  if (mx.empty()) mx = complement(mn);
  if (mn.empty()) mn = complement(mx);
  b.set_team(Side::Max, mx);
  b.set_team(Side::Min, mn);
}

std::vector<std::string> numbered_players(int n) {
  std::vector<std::string> p{"chance"};
  for (int i = 1; i <= n; ++i) p.push_back("p" + std::to_string(i));
  return p;
}

// Utility of the MAX side from per-player net winnings; asserts zero sum.
double team_total(const std::vector<double>& net, const ZooSpec& spec, int num_players,
                  const std::vector<int>& max_team) {
  double total = 0.0;
  double sum = 0.0;
  for (int p = 1; p <= num_players; ++p) {
    sum += net[static_cast<std::size_t>(p)];
    if (std::find(max_team.begin(), max_team.end(), p) != max_team.end()) total += net[static_cast<std::size_t>(p)];
  }
  if (std::abs(sum) > 1e-9) throw GameError(std::string(family_name(spec.family)) + ": terminal is not zero-sum");
  return total;
}

std::vector<int> resolved_max_team(const ZooSpec& spec, int num_players) {
  if (!spec.team_max.empty()) return spec.team_max;
  if (spec.team_min.empty()) return {1};
  std::vector<int> out;
  for (int p = 1; p <= num_players; ++p)
    if (std::find(spec.team_min.begin(), spec.team_min.end(), p) == spec.team_min.end()) out.push_back(p);
  return out;
}

// All ordered tuples of `count` distinct items out of `pool`, lexicographic.
std::vector<std::vector<int>> ordered_deals(int pool, int count) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::vector<bool> used(static_cast<std::size_t>(pool), false);
  std::function<void()> rec = [&] {
    if (static_cast<int>(cur.size()) == count) {
      out.push_back(cur);
      return;
    }
    for (int c = 0; c < pool; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      used[static_cast<std::size_t>(c)] = true;
      cur.push_back(c);
      rec();
      cur.pop_back();
      used[static_cast<std::size_t>(c)] = false;
    }
  };
  rec();
  return out;
}

std::string join(const std::vector<int>& xs, char sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(xs[i]);
  }
  return s;
}

Game kuhn(const ZooSpec& spec) {
  const int n = spec.players;
  const int r = spec.ranks;
  if (n < 2 || r < n) throw GameError("kuhn: need players >= 2 and ranks >= players");
  GameBuilder b(numbered_players(n));
  set_teams(b, spec, n);
  const auto max_team = resolved_max_team(spec, n);

  const NodeId root = b.add_chance();
  const auto deals = ordered_deals(r, n);
  for (const auto& cards : deals) {
    // Betting: each player checks or bets; after a bet every other player calls or folds once.
    struct State {
      std::string history;
      int bettor = -1;        // player index (0-based) who bet
      int to_act = 0;
      int responses = 0;
      std::vector<bool> folded;
      std::vector<int> contrib;
    };
    std::function<NodeId(State)> play = [&](State s) -> NodeId {
      const bool finished = (s.bettor < 0 && s.to_act == n) || (s.bettor >= 0 && s.responses == n - 1);
      if (finished) {
        int pot = std::accumulate(s.contrib.begin(), s.contrib.end(), 0);
        int winner = -1;
        for (int p = 0; p < n; ++p) {
          if (s.folded[static_cast<std::size_t>(p)]) continue;
          if (winner < 0 || cards[static_cast<std::size_t>(p)] > cards[static_cast<std::size_t>(winner)]) winner = p;
        }
        std::vector<double> net(static_cast<std::size_t>(n) + 1, 0.0);
        for (int p = 0; p < n; ++p) net[static_cast<std::size_t>(p) + 1] = -s.contrib[static_cast<std::size_t>(p)];
        net[static_cast<std::size_t>(winner) + 1] += pot;
        return b.add_terminal(team_total(net, spec, n, max_team));
      }
      const int p = s.to_act;
      const std::string key = "p" + std::to_string(p + 1) + ":" + std::to_string(cards[static_cast<std::size_t>(p)]) +
                              ":" + s.history;
      const NodeId node = b.add_player(p + 1, b.infoset_for(key));
      if (s.bettor < 0) {
        State check = s;
        check.history += 'c';
        check.to_act = p + 1;
        b.add_action(node, "check", play(check));
        State bet = s;
        bet.history += 'b';
        bet.bettor = p;
        bet.contrib[static_cast<std::size_t>(p)] += 1;
        bet.to_act = (p + 1) % n;
        b.add_action(node, "bet", play(bet));
      } else {
        State call = s;
        call.history += 'c';
        call.contrib[static_cast<std::size_t>(p)] += 1;
        call.responses += 1;
        call.to_act = (p + 1) % n;
        b.add_action(node, "call", play(call));
        State fold = s;
        fold.history += 'f';
        fold.folded[static_cast<std::size_t>(p)] = true;
        fold.responses += 1;
        fold.to_act = (p + 1) % n;
        b.add_action(node, "fold", play(fold));
      }
      return node;
    };
    State init;
    init.folded.assign(static_cast<std::size_t>(n), false);
    init.contrib.assign(static_cast<std::size_t>(n), 1);
    const NodeId child = play(init);
    b.add_action(root, join(cards, ','), child, 1.0 / static_cast<double>(deals.size()));
  }
  return b.build(root);
}

Game leduc(const ZooSpec& spec) {
  const int n = spec.players;
  const int deck = spec.ranks * spec.suits;
  if (n < 2 || spec.ranks < 1 || spec.suits < 1 || spec.bets < 1 || deck < n + 1)
    throw GameError("leduc: need players >= 2, bets >= 1 and ranks*suits > players");
  GameBuilder b(numbered_players(n));
  set_teams(b, spec, n);
  const auto max_team = resolved_max_team(spec, n);
  auto rank_of = [&](int card) { return card / spec.suits; };
  const int raise_size[2] = {2, 4};

  struct State {
    std::string history;
    int round = 0;
    int to_act = 0;
    int bets = 0;
    int high = 1;              // current highest contribution
    int acted = 0;             // players acted since the last bet (or round start)
    std::vector<int> contrib;
    std::vector<bool> folded;
    int public_card = -1;
  };

  const NodeId root = b.add_chance();
  const auto deals = ordered_deals(deck, n);
  for (const auto& cards : deals) {
    std::function<NodeId(State)> play;

    auto showdown = [&](const State& s) {
      const int pot = std::accumulate(s.contrib.begin(), s.contrib.end(), 0);
      auto strength = [&](int p) {
        const int rk = rank_of(cards[static_cast<std::size_t>(p)]);
        const bool pair = s.public_card >= 0 && rk == rank_of(s.public_card);
        return (pair ? 1000 : 0) + rk;
      };
      int best = -1;
      for (int p = 0; p < n; ++p)
        if (!s.folded[static_cast<std::size_t>(p)]) best = std::max(best, strength(p));
      std::vector<int> winners;
      for (int p = 0; p < n; ++p)
        if (!s.folded[static_cast<std::size_t>(p)] && strength(p) == best) winners.push_back(p);
      std::vector<double> net(static_cast<std::size_t>(n) + 1, 0.0);
      for (int p = 0; p < n; ++p) net[static_cast<std::size_t>(p) + 1] = -s.contrib[static_cast<std::size_t>(p)];
      for (int w : winners) net[static_cast<std::size_t>(w) + 1] += static_cast<double>(pot) / static_cast<double>(winners.size());
      return b.add_terminal(team_total(net, spec, n, max_team));
    };

    auto next_active = [&](const State& s, int from) {
      for (int step = 1; step <= n; ++step) {
        int p = (from + step) % n;
        if (!s.folded[static_cast<std::size_t>(p)]) return p;
      }
      return from;
    };

    play = [&](State s) -> NodeId {
      int active = 0;
      for (int p = 0; p < n; ++p) active += s.folded[static_cast<std::size_t>(p)] ? 0 : 1;
      if (active == 1) return showdown(s);
      if (s.acted >= active) {
        // Round over.
        if (s.round == 1) return showdown(s);
        const NodeId chance = b.add_chance();
        std::vector<int> remaining;
        for (int c = 0; c < deck; ++c)
          if (std::find(cards.begin(), cards.end(), c) == cards.end()) remaining.push_back(c);
        for (int c : remaining) {
          State t = s;
          t.round = 1;
          t.public_card = c;
          t.bets = 0;
          t.acted = 0;
          t.history += '/';
          t.to_act = s.folded[0] ? next_active(s, 0) : 0;
          b.add_action(chance, "r" + std::to_string(rank_of(c)) + "s" + std::to_string(c % spec.suits), play(t),
                       1.0 / static_cast<double>(remaining.size()));
        }
        return chance;
      }
      const int p = s.to_act;
      std::string key = "p" + std::to_string(p + 1) + ":" + std::to_string(rank_of(cards[static_cast<std::size_t>(p)]));
      if (s.public_card >= 0) key += ":" + std::to_string(rank_of(s.public_card));
      key += ":" + s.history;
      const NodeId node = b.add_player(p + 1, b.infoset_for(key));
      const bool facing = s.contrib[static_cast<std::size_t>(p)] < s.high;
      {
        State t = s;
        t.history += 'c';
        t.contrib[static_cast<std::size_t>(p)] = s.high;
        t.acted += 1;
        t.to_act = next_active(t, p);
        b.add_action(node, facing ? "call" : "check", play(t));
      }
      if (s.bets < spec.bets) {
        State t = s;
        t.history += 'r';
        t.high = s.high + raise_size[s.round];
        t.contrib[static_cast<std::size_t>(p)] = t.high;
        t.bets += 1;
        t.acted = 1;
        t.to_act = next_active(t, p);
        b.add_action(node, facing ? "raise" : "bet", play(t));
      }
      if (facing) {
        State t = s;
        t.history += 'f';
        t.folded[static_cast<std::size_t>(p)] = true;
        t.to_act = next_active(t, p);
        b.add_action(node, "fold", play(t));
      }
      return node;
    };

    State init;
    init.contrib.assign(static_cast<std::size_t>(n), 1);
    init.folded.assign(static_cast<std::size_t>(n), false);
    std::vector<int> labels;
    for (int c : cards) labels.push_back(c);
    b.add_action(root, join(labels, ','), play(init), 1.0 / static_cast<double>(deals.size()));
  }
  return b.build(root);
}

Game liars_dice(const ZooSpec& spec) {
  const int n = spec.players;
  const int d = spec.faces;
  if (n < 2 || d < 2) throw GameError("liars_dice: need players >= 2 and faces >= 2");
  GameBuilder b(numbered_players(n));
  set_teams(b, spec, n);
  const auto max_team = resolved_max_team(spec, n);
  const int num_bids = n * d;  // bid index i means quantity i/d+1 of face i%d+1

  const NodeId root = b.add_chance();
  int outcomes = 1;
  for (int i = 0; i < n; ++i) outcomes *= d;
  for (int o = 0; o < outcomes; ++o) {
    std::vector<int> dice(static_cast<std::size_t>(n));
    for (int i = n - 1, x = o; i >= 0; --i, x /= d) dice[static_cast<std::size_t>(i)] = x % d + 1;

    std::function<NodeId(int, int, std::string)> play = [&](int player, int last_bid, std::string history) -> NodeId {
      const std::string key = "p" + std::to_string(player + 1) + ":" + std::to_string(dice[static_cast<std::size_t>(player)]) +
                              ":" + history;
      const NodeId node = b.add_player(player + 1, b.infoset_for(key));
      for (int bid = last_bid + 1; bid < num_bids; ++bid) {
        const int qty = bid / d + 1;
        const int face = bid % d + 1;
        b.add_action(node, "bid" + std::to_string(qty) + "x" + std::to_string(face),
                     play((player + 1) % n, bid, history + std::to_string(bid) + ","));
      }
      if (last_bid >= 0) {
        const int qty = last_bid / d + 1;
        const int face = last_bid % d + 1;
        const int count = static_cast<int>(std::count(dice.begin(), dice.end(), face));
        const int bidder = (player + n - 1) % n;
        std::vector<double> net(static_cast<std::size_t>(n) + 1, 0.0);
        const int loser = count >= qty ? player : bidder;
        const int winner = count >= qty ? bidder : player;
        net[static_cast<std::size_t>(loser) + 1] = -1.0;
        net[static_cast<std::size_t>(winner) + 1] = 1.0;
        b.add_action(node, "liar", b.add_terminal(team_total(net, spec, n, max_team)));
      }
      return node;
    };
    b.add_action(root, join(dice, ','), play(0, -1, ""), 1.0 / static_cast<double>(outcomes));
  }
  return b.build(root);
}

Game signaling_fig2() {
  GameBuilder b({"chance", "p1", "p2", "p3"});
  b.set_team(Side::Max, {1, 2});
  b.set_team(Side::Min, {3});
  const InfosetId ib = b.infoset_for("p1:b");
  const InfosetId ic = b.infoset_for("p1:c");
  const InfosetId ide = b.infoset_for("p2:de");
  const InfosetId ifg = b.infoset_for("p2:fg");
  const InfosetId ihi = b.infoset_for("p3:hi");
  const InfosetId ilm = b.infoset_for("p3:lm");

  // A P3 guessing node whose first action pays `first` to MAX.
  auto guess = [&](InfosetId info, double first) {
    const NodeId node = b.add_player(3, info);
    b.add_action(node, "0", b.add_terminal(first));
    b.add_action(node, "1", b.add_terminal(-first));
    return node;
  };
  // A P2 node that continues to P3 on action `keep` and loses otherwise.
  auto p2 = [&](InfosetId info, int keep, InfosetId p3_info, double p3_first) {
    const NodeId node = b.add_player(2, info);
    for (int a = 0; a < 2; ++a) {
      const NodeId child = a == keep ? guess(p3_info, p3_first) : b.add_terminal(-1.0);
      b.add_action(node, std::to_string(a), child);
    }
    return node;
  };

  const NodeId a = b.add_chance();
  const NodeId nb = b.add_player(1, ib);
  const NodeId nc = b.add_player(1, ic);
  b.add_action(a, "b", nb, 0.5);
  b.add_action(a, "c", nc, 0.5);
  b.add_action(nb, "l", p2(ide, 0, ihi, 1.0));   // d -> h
  b.add_action(nb, "r", p2(ifg, 0, ilm, 1.0));   // f -> l
  b.add_action(nc, "L", p2(ide, 1, ihi, -1.0));  // e -> i
  b.add_action(nc, "R", p2(ifg, 1, ilm, -1.0));  // g -> m
  return b.build(a);
}

Game worst_case(const ZooSpec& spec) {
  const int k = spec.k;
  const int bf = spec.branching;
  const int d = spec.depth;
  // The lower-bound argument wants branching >= k+1 but the construction itself only needs 2.
  if (d < 4 || k < 1 || bf < 2) throw GameError("worst_case: need depth >= 4, k >= 1, branching >= 2");
  GameBuilder b({"chance", "max", "min"});
  b.set_team(Side::Max, {1});
  b.set_team(Side::Min, {2});
  int terminal_count = 0;
  auto terminal = [&] { return b.add_terminal((terminal_count++ % 2 == 0) ? 1.0 : -1.0); };
  auto second = [&](int player, int depth) {
    const NodeId node = b.add_player(player, b.infoset_for("p" + std::to_string(player) + ":two:" + std::to_string(depth)));
    b.add_action(node, "end", terminal());
    return node;
  };
  auto subgame = [&](int player, int mini, int j) {
    const NodeId node = b.add_player(player, b.infoset_for("p" + std::to_string(player) + ":one:" + std::to_string(mini) +
                                                           ":" + std::to_string(j)));
    const int depth = mini + 1;
    for (int a = 0; a + 1 < bf; ++a) b.add_action(node, "a" + std::to_string(a), second(player, depth + 1));
    const NodeId delay = b.add_chance();
    b.add_action(delay, "go", second(player, depth + 2), 1.0);
    b.add_action(node, "a" + std::to_string(bf - 1), delay);
    return node;
  };
  std::function<NodeId(int)> mini_game = [&](int m) -> NodeId {
    const NodeId root = b.add_chance();
    const bool last = m == d - 4;
    const int children = 2 * k + (last ? 0 : 1);
    const double p = 1.0 / children;
    for (int j = 0; j < k; ++j) b.add_action(root, "max" + std::to_string(j), subgame(1, m, j), p);
    for (int j = 0; j < k; ++j) b.add_action(root, "min" + std::to_string(j), subgame(2, m, j), p);
    if (!last) b.add_action(root, "next", mini_game(m + 1), p);
    return root;
  };
  const NodeId root = mini_game(0);
  return b.build(root);
}

Game fig8(const ZooSpec& spec) {
  const int m = spec.width;
  if (m < 1) throw GameError("public_counterexample_fig8: width must be >= 1");
  GameBuilder b({"chance", "p1", "adversary"});
  b.set_team(Side::Max, {1});
  b.set_team(Side::Min, {2});
  int terminal_count = 0;
  auto terminal = [&] { return b.add_terminal(static_cast<double>(terminal_count++ % 3) - 1.0); };
  // Grandchild g_i shares an infoset with g_{i+1} for odd i.
  auto grandchild = [&](int i) {
    const int last = 4 * m - 1;
    std::string key = "g" + std::to_string(i);
    if (i % 2 == 1 && i < last) key = "g" + std::to_string(i) + "-" + std::to_string(i + 1);
    if (i % 2 == 0 && i > 0) key = "g" + std::to_string(i - 1) + "-" + std::to_string(i);
    const NodeId node = b.add_player(1, b.infoset_for(key));
    b.add_action(node, "x", terminal());
    b.add_action(node, "y", terminal());
    return node;
  };
  auto middle = [&](int x) {
    const NodeId node = b.add_player(1, b.infoset_for("x" + std::to_string(x)));
    b.add_action(node, "0", grandchild(2 * x));
    b.add_action(node, "1", grandchild(2 * x + 1));
    return node;
  };
  const NodeId root = b.add_player(1, b.infoset_for("root"));
  for (int side = 0; side < 2; ++side) {
    const NodeId chance = b.add_chance();
    for (int j = 0; j < m; ++j) b.add_action(chance, "x" + std::to_string(2 * j + side), middle(2 * j + side), 1.0 / m);
    b.add_action(root, side == 0 ? "left" : "right", chance);
  }
  return b.build(root);
}

Game fig9(const ZooSpec& spec) {
  const int C = spec.c;
  if (C < 2) throw GameError("inflation_counterexample_fig9: C must be > 1");
  GameBuilder b({"chance", "p1", "p2", "adversary"});
  b.set_team(Side::Max, {1, 2});
  b.set_team(Side::Min, {3});
  const NodeId root = b.add_chance();
  for (int c = 1; c <= C; ++c) {
    // Final stage: P1 announces c or c+1, P2 guesses.
    auto final_stage = [&]() {
      const NodeId p1 = b.add_player(1, b.infoset_for("final:" + std::to_string(c)));
      for (int n : {c, c + 1}) {
        const NodeId p2 = b.add_player(2, b.infoset_for("guess:" + std::to_string(n)));
        for (int choice = 0; choice < 2; ++choice)
          b.add_action(p2, choice == 0 ? "x" : "y", b.add_terminal(((c + choice) % 2 == 0) ? 1.0 : -1.0));
        b.add_action(p1, "n" + std::to_string(n), p2);
      }
      return p1;
    };
    std::function<NodeId(int)> layer = [&](int t) -> NodeId {
      if (t > C - 2) return final_stage();
      if (c == t || c == t + 2) {
        const NodeId node = b.add_player(1, b.infoset_for("layer:" + std::to_string(t)));
        for (int a : {0, 2}) {
          const NodeId child = (c == t + a) ? layer(t + 1) : b.add_terminal(0.0);
          b.add_action(node, std::to_string(a), child);
        }
        return node;
      }
      const NodeId pass = b.add_chance();
      b.add_action(pass, "pass", layer(t + 1), 1.0);
      return pass;
    };
    b.add_action(root, "c" + std::to_string(c), layer(1), 1.0 / C);
  }
  return b.build(root);
}

}  // namespace

Game generate(const ZooSpec& spec) {
  switch (spec.family) {
    case Family::Kuhn: return kuhn(spec);
    case Family::Leduc: return leduc(spec);
    case Family::LiarsDice: return liars_dice(spec);
    case Family::SignalingFig2: return signaling_fig2();
    case Family::WorstCase: return worst_case(spec);
    case Family::PublicCounterexampleFig8: return fig8(spec);
    case Family::InflationCounterexampleFig9: return fig9(spec);
  }
  throw GameError("unknown family");
}

std::vector<Preset> list_presets() {
  std::vector<Preset> out;
  auto add = [&](std::string name, ZooSpec s) { out.push_back({std::move(name), std::move(s)}); };
  auto of = [](Family f) {
    ZooSpec s;
    s.family = f;
    return s;
  };

  add("fig2", of(Family::SignalingFig2));
  add("fig8", of(Family::PublicCounterexampleFig8));
  for (int c : {6, 8, 16}) {
    ZooSpec s = of(Family::InflationCounterexampleFig9);
    s.c = c;
    add("fig9-C" + std::to_string(c), s);
  }
  add("2K3", of(Family::Kuhn));
  // Bracketed players form the MIN team; the rest form MAX.
  const std::vector<std::vector<int>> splits = {{1, 2}, {1, 3}, {2, 3}};
  for (const auto& mn : splits) {
    const std::string tag = "[" + std::to_string(mn[0]) + "," + std::to_string(mn[1]) + "]";
    ZooSpec s = of(Family::Kuhn);
    s.players = 3;
    s.team_min = mn;
    s.ranks = 3;
    add("3K3" + tag, s);
    s.ranks = 4;
    add("3K4" + tag, s);
    ZooSpec dice = of(Family::LiarsDice);
    dice.players = 3;
    dice.faces = 2;
    dice.team_min = mn;
    add("3D2" + tag, dice);
    ZooSpec leduc = of(Family::Leduc);
    leduc.players = 3;
    leduc.ranks = 3;
    leduc.suits = 3;
    leduc.bets = 1;
    leduc.team_min = mn;
    add("3L133" + tag, leduc);
  }
  {
    ZooSpec s = of(Family::WorstCase);
    s.k = 1;
    s.branching = 2;
    s.depth = 5;
    add("worst-case-k1b2d5", s);
    s.k = 2;
    s.branching = 2;
    s.depth = 6;
    add("worst-case-k2b2d6", s);
  }
  return out;
}

std::optional<ZooSpec> find_preset(std::string_view name) {
  for (auto& p : list_presets())
    if (p.name == name) return p.spec;
  return std::nullopt;
}

}  // namespace teamdag
