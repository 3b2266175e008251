// teamdag: generate, inspect, build and solve team games from the command line.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "teamdag/analysis.hpp"
#include "teamdag/belief_game.hpp"
#include "teamdag/dag_cfr.hpp"
#include "teamdag/oracle.hpp"
#include "teamdag/solver.hpp"
#include "teamdag/tbdag.hpp"
#include "teamdag/transforms.hpp"
#include "teamdag/zoo.hpp"

namespace {

using namespace teamdag;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t fnv64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Everything a run needs to be reproduced; embedded in every artifact.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> argv;
  std::string input_hash;
  std::string started;
  std::string finished;

  json to_json() const {
    return {{"subcommand", subcommand}, {"argv", argv},        {"version", kVersion},
            {"input_hash", input_hash}, {"started", started}, {"finished", finished.empty() ? utc_now() : finished}};
  }
};

RunManifest g_manifest;

// A game file path or a preset name.
Game load_game(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    const auto text = read_file(arg);
    g_manifest.input_hash = hex(fnv64(text));
    return parse_game(text);
  }
  if (auto spec = find_preset(arg)) {
    g_manifest.input_hash = hex(fnv64("preset:" + arg));
    return generate(*spec);
  }
  throw GameError("'" + arg + "' is neither a file nor a preset (see `teamdag gen --list`)");
}

void emit_json(json j) {
  j["manifest"] = g_manifest.to_json();
  std::cout << j.dump(2) << "\n";
}

int side_infosets(const Game& g, Side side) {
  int n = 0;
  for (const auto& info : g.infosets())
    if (g.side_of_player(info.player) == side) ++n;
  return n;
}

json size_json(const Game& g) {
  return {{"nodes", g.num_nodes()},
          {"terminals", g.terminals().size()},
          {"infosets_max", side_infosets(g, Side::Max)},
          {"infosets_min", side_infosets(g, Side::Min)},
          {"branching", g.branching_factor()},
          {"depth", g.max_depth()}};
}

std::string size_line(const Game& g) {
  std::ostringstream s;
  s << "|H|=" << g.num_nodes() << " |Z|=" << g.terminals().size() << " |I_max|=" << side_infosets(g, Side::Max)
    << " |I_min|=" << side_infosets(g, Side::Min) << " b=" << g.branching_factor() << " d=" << g.max_depth();
  return s.str();
}

std::vector<Side> sides_of(const std::string& which) {
  if (which == "both") return {Side::Max, Side::Min};
  return {parse_side(which)};
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string family;
  ZooSpec spec;
  std::string team_max, team_min, out;
  bool list = false;
  bool as_json = false;
};

std::vector<int> parse_team(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

int cmd_gen(GenArgs& a) {
  if (a.list) {
    json names = json::array();
    for (const auto& p : list_presets()) {
      if (a.as_json) names.push_back(p.name);
      else std::cout << p.name << "\n";
    }
    if (a.as_json) emit_json({{"presets", names}});
    return 0;
  }
  if (a.family.empty()) throw std::invalid_argument("gen: missing family or preset name");
  ZooSpec spec = a.spec;
  if (auto preset = find_preset(a.family)) {
    spec = *preset;
  } else {
    spec.family = parse_family(a.family);
    spec.team_max = parse_team(a.team_max);
    spec.team_min = parse_team(a.team_min);
  }
  const Game g = generate(spec);
  g_manifest.input_hash = hex(fnv64(a.family));
  auto doc = json::parse(serialize_game(g));
  doc["manifest"] = g_manifest.to_json();
  if (!a.out.empty()) write_file(a.out, doc.dump(1) + "\n");
  if (a.as_json) {
    json j = {{"sizes", size_json(g)}};
    if (a.out.empty()) j["game"] = doc;
    else j["path"] = a.out;
    emit_json(j);
  } else if (a.out.empty()) {
    std::cout << doc.dump(1) << "\n";
    std::cerr << size_line(g) << "\n";
  } else {
    std::cout << a.out << ": " << size_line(g) << "\n";
  }
  return 0;
}

// ---- info ------------------------------------------------------------------

int cmd_info(const std::string& game_arg, bool as_json) {
  const Game g = load_game(game_arg);
  json sides = json::array();
  for (Side side : {Side::Max, Side::Min}) {
    const auto an = analyze(g, side);
    const double bound = std::pow(g.branching_factor() + 1.0, an.k);
    json s = {{"side", to_string(side)},
              {"perfect_recall", an.perfect_recall},
              {"action_recall", an.action_recall},
              {"public_states", an.num_public_states},
              {"k", an.k},
              {"kappa", an.kappa},
              {"prescription_bound", bound}};
    try {
      TbDagOptions opt;
      opt.reduce = false;
      const auto dag = build_tbdag(g, an, opt);
      s["max_fanout"] = dag.stats.max_fanout;
      s["max_belief"] = dag.stats.max_belief;
    } catch (const BudgetExceeded&) {
      s["max_fanout"] = nullptr;
      s["max_belief"] = nullptr;
    }
    sides.push_back(std::move(s));
  }
  if (as_json) {
    emit_json({{"game", size_json(g)}, {"sides", sides}});
    return 0;
  }
  std::cout << size_line(g) << "\n";
  std::printf("%-5s %-14s %-13s %13s %4s %6s %10s %11s\n", "side", "perfect_recall", "action_recall", "public_states",
              "k", "kappa", "(b+1)^k", "max_fanout");
  for (const auto& s : sides) {
    const std::string fan = s["max_fanout"].is_null() ? "-" : std::to_string(s["max_fanout"].get<long long>());
    std::printf("%-5s %-14s %-13s %13d %4d %6d %10s %11s\n", s["side"].get<std::string>().c_str(),
                s["perfect_recall"].get<bool>() ? "yes" : "no", s["action_recall"].get<bool>() ? "yes" : "no",
                s["public_states"].get<int>(), s["k"].get<int>(), s["kappa"].get<int>(),
                fmt(s["prescription_bound"].get<double>(), "%.0f").c_str(), fan.c_str());
  }
  return 0;
}

// ---- build -----------------------------------------------------------------

struct BuildArgs {
  std::string game;
  std::string side = "both";
  std::string split = "obs";
  bool no_reduce = false;
  bool binarize = false;
  std::string dump_dag;
  std::int64_t budget = 100'000'000;
  bool as_json = false;
};

int cmd_build(const BuildArgs& a) {
  Game g = load_game(a.game);
  if (a.binarize) g = binarize_actions(g);
  TbDagOptions opt;
  opt.split = parse_split_mode(a.split);
  opt.reduce = !a.no_reduce;
  opt.edge_budget = a.budget;
  json rows = json::array();
  json dumps = json::object();
  for (Side side : sides_of(a.side)) {
    const auto an = analyze(g, side);
    const auto dag = build_tbdag(g, an, opt);
    const auto bound = check_size_bounds(dag, g, an);
    const auto& st = dag.stats;
    rows.push_back({{"side", to_string(side)},
                    {"decisions", st.final_size.decisions},
                    {"decisions_conventional", st.conventional_decisions()},
                    {"observations", st.final_size.observations},
                    {"edges", st.final_size.edges},
                    {"unreduced_edges", st.unreduced.edges},
                    {"max_belief", st.max_belief},
                    {"max_fanout", st.max_fanout},
                    {"k", an.k},
                    {"edge_bound", bound.bound},
                    {"bound_holds", bound.holds},
                    {"build_ms", st.build_ms},
                    {"reduce_ms", st.reduce_ms}});
    if (!a.dump_dag.empty()) dumps[std::string(to_string(side))] = json::parse(tbdag_to_json(dag));
    if (!bound.holds) throw std::runtime_error("edge bound violated on the " + std::string(to_string(side)) + " side");
  }
  if (!a.dump_dag.empty()) {
    dumps["manifest"] = g_manifest.to_json();
    write_file(a.dump_dag, dumps.dump(1) + "\n");
  }
  if (a.as_json) {
    emit_json({{"game", size_json(g)}, {"split", a.split}, {"reduced", !a.no_reduce}, {"sides", rows}});
    return 0;
  }
  std::cout << size_line(g) << "  split=" << a.split << (a.no_reduce ? " unreduced" : " reduced") << "\n";
  std::printf("%-5s %9s %9s %11s %10s %8s %4s %12s %8s\n", "side", "|D|", "|O|", "E", "maxbelief", "fanout", "k",
              "bound", "E/bound");
  for (const auto& r : rows)
    std::printf("%-5s %9lld %9lld %11lld %10d %8lld %4d %12.4g %8.2e\n", r["side"].get<std::string>().c_str(),
                r["decisions"].get<long long>(), r["observations"].get<long long>(), r["edges"].get<long long>(),
                r["max_belief"].get<int>(), r["max_fanout"].get<long long>(), r["k"].get<int>(),
                r["edge_bound"].get<double>(), r["edges"].get<double>() / r["edge_bound"].get<double>());
  return 0;
}

// ---- belief-game -----------------------------------------------------------

int cmd_belief_game(const std::string& game_arg, const std::string& out, bool compact, std::int64_t budget,
                    bool as_json) {
  const Game g = load_game(game_arg);
  BeliefGameOptions opt;
  opt.node_budget = budget;
  const auto bg = make_belief_game(g, analyze(g, Side::Max), analyze(g, Side::Min), opt);
  if (!out.empty()) {
    auto doc = json::parse(belief_game_to_json(bg));
    doc["manifest"] = g_manifest.to_json();
    write_file(out, doc.dump(1) + "\n");
  }
  std::int64_t infosets[2] = {0, 0};
  for (const auto& l : bg.infoset_labels) ++infosets[index_of(l.side)];
  const std::int64_t nodes = compact ? bg.compact_nodes : static_cast<std::int64_t>(bg.game.num_nodes());
  if (compact) {
    infosets[0] = bg.compact_infosets[0];
    infosets[1] = bg.compact_infosets[1];
  }
  if (as_json) {
    emit_json({{"original_nodes", g.num_nodes()},
               {"compact", compact},
               {"nodes", nodes},
               {"infosets_max", infosets[0]},
               {"infosets_min", infosets[1]},
               {"sequences_max", bg.num_sequences[0]},
               {"sequences_min", bg.num_sequences[1]},
               {"beliefs", bg.beliefs.size()}});
    return 0;
  }
  std::printf("original |H|=%zu\nbelief game%s: nodes=%lld infosets max=%lld min=%lld sequences max=%lld min=%lld\n",
              g.num_nodes(), compact ? " (compact)" : "", static_cast<long long>(nodes),
              static_cast<long long>(infosets[0]), static_cast<long long>(infosets[1]),
              static_cast<long long>(bg.num_sequences[0]), static_cast<long long>(bg.num_sequences[1]));
  return 0;
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string game;
  std::string algo = "pcfr+";
  std::string mode = "simultaneous";
  std::string split = "obs";
  double eps = 1e-3;
  std::int64_t iters = 100'000;
  std::int64_t log_every = 10;
  std::uint64_t seed = 0;
  std::int64_t budget = 100'000'000;
  std::string csv, avg_out;
  bool as_json = false;
};

json strategies_json(const Game& g, const SolveReport& r) {
  return json::array({json::parse(strategy_to_json(g, Side::Max, r.realization[0])),
                      json::parse(strategy_to_json(g, Side::Min, r.realization[1]))});
}

int cmd_solve(const SolveArgs& a) {
  const Game g = load_game(a.game);
  SolveConfig c;
  c.algorithm = parse_algorithm(a.algo);
  c.mode = parse_update_mode(a.mode);
  c.epsilon = a.eps;
  c.max_iterations = a.iters;
  c.log_every = a.log_every;
  c.seed = a.seed;
  c.dag.split = parse_split_mode(a.split);
  c.dag.edge_budget = a.budget;
  c.validate();
  const auto problem = prepare_solve(g, c.dag);
  const auto r = solve(g, problem, c);
  g_manifest.finished = utc_now();
  if (!a.csv.empty()) write_file(a.csv, "# manifest " + g_manifest.to_json().dump() + "\n" + log_to_csv(r));
  if (!a.avg_out.empty())
    write_file(a.avg_out, json({{"manifest", g_manifest.to_json()}, {"strategies", strategies_json(g, r)}}).dump(1) + "\n");
  if (a.as_json) {
    json log = json::array();
    for (const auto& lp : r.log)
      log.push_back({{"iter", lp.iteration}, {"time_ms", lp.time_ms}, {"gap", lp.gap}, {"br_max", lp.br_max},
                     {"br_min", lp.br_min}, {"value", lp.value}, {"bound", lp.bound}});
    emit_json({{"algorithm", a.algo},
               {"mode", a.mode},
               {"iterations", r.iterations},
               {"converged", r.converged},
               {"gap", r.gap},
               {"value", r.value},
               {"certified", {r.certified_low, r.certified_high}},
               {"init_ms", r.init_ms},
               {"solve_ms", r.solve_ms},
               {"log", log},
               {"strategies", strategies_json(g, r)}});
    return 0;
  }
  std::cout << size_line(g) << "\n";
  std::printf("dags: max |D|=%lld |O|=%lld, min |D|=%lld |O|=%lld, init %.1f ms\n",
              static_cast<long long>(problem.dags[0].stats.final_size.decisions),
              static_cast<long long>(problem.dags[0].stats.final_size.observations),
              static_cast<long long>(problem.dags[1].stats.final_size.decisions),
              static_cast<long long>(problem.dags[1].stats.final_size.observations), problem.init_ms);
  std::printf("%s %s: %s after %lld iterations (%.1f ms)\n", a.algo.c_str(), a.mode.c_str(),
              r.converged ? "converged" : "stopped", static_cast<long long>(r.iterations), r.solve_ms);
  std::printf("gap %.3e  value %.9f  certified [%.9f, %.9f]\n", r.gap, r.value, r.certified_low, r.certified_high);
  return 0;
}

// ---- oracle-check ----------------------------------------------------------

int cmd_oracle_check(const std::string& game_arg, const std::string& avg_path, double tol, std::int64_t budget,
                     bool as_json) {
  const Game g = load_game(game_arg);
  const auto doc = json::parse(read_file(avg_path));
  std::vector<double> real[2];
  const json& list = doc.contains("strategies") ? doc.at("strategies") : json::array({doc});
  for (const auto& item : list) {
    Side side;
    auto r = parse_strategy_json(g, item.dump(), &side);
    real[index_of(side)] = std::move(r);
  }
  if (real[0].empty() || real[1].empty()) throw GameError("oracle-check: need strategies for both sides");
  const auto problem = prepare_solve(g);
  const auto c = oracle_check(g, problem, real[0], real[1], budget);
  const bool ok = c.max_error() <= tol;
  if (as_json) {
    emit_json({{"dag_br_max", c.dag_br_max},
               {"oracle_br_max", c.oracle_br_max},
               {"dag_br_min", c.dag_br_min},
               {"oracle_br_min", c.oracle_br_min},
               {"max_error", c.max_error()},
               {"tolerance", tol},
               {"ok", ok}});
  } else {
    std::printf("max: dag %.12f oracle %.12f\nmin: dag %.12f oracle %.12f\nmax error %.3e (tolerance %.1e) %s\n",
                c.dag_br_max, c.oracle_br_max, c.dag_br_min, c.oracle_br_min, c.max_error(), tol, ok ? "ok" : "MISMATCH");
  }
  return ok ? 0 : 1;
}

// ---- bench -----------------------------------------------------------------

int cmd_bench(std::vector<std::string> games, double eps, std::int64_t iters, std::int64_t budget, bool as_json) {
  if (games.empty())
    games = {"fig2", "2K3", "3K3[1,2]", "3K3[1,3]", "3K3[2,3]", "fig8", "fig9-C6", "worst-case-k1b2d5"};
  g_manifest.input_hash = hex(fnv64([&] {
    std::string all;
    for (const auto& s : games) all += s + ";";
    return all;
  }()));
  json belief_rows = json::array(), dag_rows = json::array();
  for (const auto& name : games) {
    const Game g = load_game(name);
    json brow = {{"game", name}, {"H", g.num_nodes()}};
    try {
      BeliefGameOptions bo;
      bo.node_budget = budget;
      const auto bg = make_belief_game(g, analyze(g, Side::Max), analyze(g, Side::Min), bo);
      std::int64_t inf[2] = {0, 0};
      for (const auto& l : bg.infoset_labels) ++inf[index_of(l.side)];
      brow.update({{"belief_nodes", bg.game.num_nodes()},
                   {"infosets_max", inf[0]},
                   {"infosets_min", inf[1]},
                   {"sequences_max", bg.num_sequences[0]},
                   {"sequences_min", bg.num_sequences[1]}});
    } catch (const BudgetExceeded&) {
      brow.update({{"belief_nodes", nullptr}});
    }
    belief_rows.push_back(brow);

    SolveConfig c;
    c.epsilon = eps;
    c.max_iterations = iters;
    const auto problem = prepare_solve(g, c.dag);
    const auto r = solve(g, problem, c);
    dag_rows.push_back({{"game", name},
                        {"H", g.num_nodes()},
                        {"D_max", problem.dags[0].stats.final_size.decisions},
                        {"O_max", problem.dags[0].stats.final_size.observations},
                        {"D_min", problem.dags[1].stats.final_size.decisions},
                        {"O_min", problem.dags[1].stats.final_size.observations},
                        {"init_ms", problem.init_ms},
                        {"time_to_eps_ms", r.converged ? json(r.solve_ms) : json(nullptr)},
                        {"iterations", r.iterations},
                        {"gap", r.gap},
                        {"value", r.value}});
  }
  if (as_json) {
    emit_json({{"belief_game", belief_rows}, {"tbdag", dag_rows}});
    return 0;
  }
  auto cell = [](const json& v) {
    if (v.is_null()) return std::string();
    if (v.is_number_float()) return fmt(v.get<double>(), "%.6g");
    if (v.is_string()) return "\"" + v.get<std::string>() + "\"";
    return v.dump();
  };
  std::cout << "# manifest " << g_manifest.to_json().dump() << "\n";
  std::cout << "# belief game\ngame,H,belief_nodes,infosets_max,infosets_min,sequences_max,sequences_min\n";
  for (const auto& r : belief_rows) {
    std::cout << cell(r["game"]) << "," << cell(r["H"]) << "," << cell(r["belief_nodes"]);
    for (const char* k : {"infosets_max", "infosets_min", "sequences_max", "sequences_min"})
      std::cout << "," << (r.contains(k) ? cell(r[k]) : "");
    std::cout << "\n";
  }
  std::cout << "# tbdag\ngame,H,D_max,O_max,D_min,O_min,init_ms,time_to_eps_ms,iterations,gap,value\n";
  for (const auto& r : dag_rows) {
    bool first = true;
    for (const char* k : {"game", "H", "D_max", "O_max", "D_min", "O_min", "init_ms", "time_to_eps_ms", "iterations", "gap", "value"}) {
      std::cout << (first ? "" : ",") << cell(r[k]);
      first = false;
    }
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());
  CLI::App app{"Team belief DAG construction and equilibrium solving"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a zoo game (family name or preset)");
  gen_cmd->add_option("family", gen.family, "kuhn, leduc, liars-dice, fig2, worst-case, fig8, fig9, or a preset name");
  gen_cmd->add_option("-n,--players", gen.spec.players, "Number of players")->capture_default_str();
  gen_cmd->add_option("-r,--ranks", gen.spec.ranks, "Card ranks")->capture_default_str();
  gen_cmd->add_option("--bets", gen.spec.bets, "Leduc: maximum bets per round")->capture_default_str();
  gen_cmd->add_option("--suits", gen.spec.suits, "Leduc: suits")->capture_default_str();
  gen_cmd->add_option("--faces", gen.spec.faces, "Liar's dice: die faces")->capture_default_str();
  gen_cmd->add_option("-k", gen.spec.k, "Worst case: information complexity")->capture_default_str();
  gen_cmd->add_option("-b,--branching", gen.spec.branching, "Worst case: branching")->capture_default_str();
  gen_cmd->add_option("-d,--depth", gen.spec.depth, "Worst case: depth")->capture_default_str();
  gen_cmd->add_option("-C", gen.spec.c, "fig9: chain length C")->capture_default_str();
  gen_cmd->add_option("--width", gen.spec.width, "fig8: children per chance node")->capture_default_str();
  gen_cmd->add_option("--team-max", gen.team_max, "Comma-separated player indices of the MAX team");
  gen_cmd->add_option("--team-min", gen.team_min, "Comma-separated player indices of the MIN team");
  gen_cmd->add_option("-o,--out", gen.out, "Output file (default: stdout)");
  gen_cmd->add_flag("--list", gen.list, "List preset names");
  gen_cmd->add_flag("--json", gen.as_json, "Machine-readable output");

  std::string info_game;
  bool info_json = false;
  auto* info_cmd = app.add_subcommand("info", "Structural report: recall, public states, k, kappa");
  info_cmd->add_option("game", info_game, "Game file or preset")->required();
  info_cmd->add_flag("--json", info_json, "Machine-readable output");

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Build TB-DAGs and print size statistics");
  build_cmd->add_option("game", build.game, "Game file or preset")->required();
  build_cmd->add_option("--side", build.side, "max, min or both")->capture_default_str()
      ->check(CLI::IsMember({"max", "min", "both"}));
  build_cmd->add_option("--split", build.split, "obs or pub")->capture_default_str()
      ->check(CLI::IsMember({"obs", "pub"}));
  build_cmd->add_flag("--no-reduce", build.no_reduce, "Skip the reduction pass");
  build_cmd->add_flag("--binarize", build.binarize, "Binarize actions first");
  build_cmd->add_option("--dump-dag", build.dump_dag, "Write the DAGs as JSON");
  build_cmd->add_option("--budget", build.budget, "Edge budget")->capture_default_str();
  build_cmd->add_flag("--json", build.as_json, "Machine-readable output");

  std::string bg_game, bg_out;
  bool bg_compact = false, bg_json = false;
  std::int64_t bg_budget = 10'000'000;
  auto* bg_cmd = app.add_subcommand("belief-game", "Construct the belief game and print its size");
  bg_cmd->add_option("game", bg_game, "Game file or preset")->required();
  bg_cmd->add_option("-o,--out", bg_out, "Write the belief game with annotations");
  bg_cmd->add_flag("--compact", bg_compact, "Count without single-child nodes");
  bg_cmd->add_option("--budget", bg_budget, "Node budget")->capture_default_str();
  bg_cmd->add_flag("--json", bg_json, "Machine-readable output");

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Self-play on both TB-DAGs until the gap is below eps");
  solve_cmd->add_option("game", solve_args.game, "Game file or preset")->required();
  solve_cmd->add_option("--algo", solve_args.algo, "cfr, cfr+, pcfr+ or cfr-mwu")->capture_default_str()
      ->check(CLI::IsMember({"cfr", "cfr+", "pcfr+", "cfr-mwu"}));
  solve_cmd->add_option("--mode", solve_args.mode, "simultaneous (sim) or alternating (alt)")->capture_default_str()
      ->check(CLI::IsMember({"simultaneous", "sim", "alternating", "alt"}));
  solve_cmd->add_option("--split", solve_args.split, "obs or pub")->capture_default_str()
      ->check(CLI::IsMember({"obs", "pub"}));
  solve_cmd->add_option("--eps", solve_args.eps, "Target saddle gap")->capture_default_str();
  solve_cmd->add_option("--iters", solve_args.iters, "Iteration cap")->capture_default_str();
  solve_cmd->add_option("--log-every", solve_args.log_every, "Gap check cadence")->capture_default_str();
  solve_cmd->add_option("--seed", solve_args.seed, "Seed (recorded only; the solver is deterministic)");
  solve_cmd->add_option("--budget", solve_args.budget, "Edge budget per dag")->capture_default_str();
  solve_cmd->add_option("--csv", solve_args.csv, "Write the convergence log as CSV");
  solve_cmd->add_option("--avg-out", solve_args.avg_out, "Write the average strategies as JSON");
  solve_cmd->add_flag("--json", solve_args.as_json, "Machine-readable output");

  std::string oc_game, oc_avg;
  double oc_tol = 1e-6;
  std::int64_t oc_budget = 10'000'000;
  bool oc_json = false;
  auto* oc_cmd = app.add_subcommand("oracle-check", "Compare dag best responses with brute-force enumeration");
  oc_cmd->add_option("game", oc_game, "Game file or preset")->required();
  oc_cmd->add_option("--avg", oc_avg, "Strategies written by solve --avg-out")->required();
  oc_cmd->add_option("--tol", oc_tol, "Allowed difference")->capture_default_str();
  oc_cmd->add_option("--budget", oc_budget, "Reduced pure strategy budget")->capture_default_str();
  oc_cmd->add_flag("--json", oc_json, "Machine-readable output");

  std::vector<std::string> bench_games;
  double bench_eps = 1e-3;
  std::int64_t bench_iters = 100'000;
  std::int64_t bench_budget = 10'000'000;
  bool bench_json = false;
  auto* bench_cmd = app.add_subcommand("bench", "Size and time-to-eps tables over a set of games");
  bench_cmd->add_option("games", bench_games, "Games (default: the acceptance set)");
  bench_cmd->add_option("--eps", bench_eps, "Target gap")->capture_default_str();
  bench_cmd->add_option("--iters", bench_iters, "Iteration cap")->capture_default_str();
  bench_cmd->add_option("--budget", bench_budget, "Belief game node budget")->capture_default_str();
  bench_cmd->add_flag("--json", bench_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  g_manifest.argv.assign(argv, argv + argc);
  g_manifest.started = utc_now();
  g_manifest.subcommand = app.get_subcommands().front()->get_name();
  try {
    if (gen_cmd->parsed()) return cmd_gen(gen);
    if (info_cmd->parsed()) return cmd_info(info_game, info_json);
    if (build_cmd->parsed()) return cmd_build(build);
    if (bg_cmd->parsed()) return cmd_belief_game(bg_game, bg_out, bg_compact, bg_budget, bg_json);
    if (solve_cmd->parsed()) return cmd_solve(solve_args);
    if (oc_cmd->parsed()) return cmd_oracle_check(oc_game, oc_avg, oc_tol, oc_budget, oc_json);
    if (bench_cmd->parsed()) return cmd_bench(bench_games, bench_eps, bench_iters, bench_budget, bench_json);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
