// mnms: states, game values and frontier data for the CHSH and Svetlichny
// games. Every stochastic command takes --seed and echoes it; identical
// argv + seed give byte-identical output.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mnms/acceptance.hpp"
#include "mnms/frontier.hpp"

namespace {

using nlohmann::json;
using namespace mnms;

struct StateArgs {
  std::string family;
  double parameter = 0.0;
  std::string state_file;
};

void add_state_options(CLI::App* cmd, StateArgs& args) {
  auto* family = cmd->add_option("--family", args.family,
                                 "state family (bell, bell-psi-plus, ghz, mems, mnms2, mnms3, "
                                 "diag-mix, planar2, ghz-bitflip)");
  cmd->add_option("--param", args.parameter, "family parameter");
  auto* file = cmd->add_option("--state", args.state_file, "density matrix JSON file");
  file->excludes(family);
}

DensityMatrix load_state(const StateArgs& args) {
  if (!args.state_file.empty()) {
    std::ifstream in(args.state_file);
    if (!in) throw std::runtime_error("cannot open state file: " + args.state_file);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    DensityMatrix rho = density_from_json(text);
    const ValidationReport report = validate(rho);
    if (!report.passed())
      throw std::domain_error("state file " + args.state_file +
                              " is not a valid density matrix");
    return rho;
  }
  if (args.family.empty())
    throw std::domain_error("provide --family or --state");
  return make_state(parse_family(args.family, args.parameter));
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << std::endl;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << text << '\n';
}

json settings_json(const SettingsTable& settings) { return json::parse(settings_to_json(settings)); }

json result_json(const NonlocalityResult& r, int parties, const std::string& convention) {
  const double scale = convention == "raw" ? static_cast<double>(1 << (parties - 1)) : 1.0;
  json j{{"s_value", scale * r.s_value},
         {"convention", convention},
         {"settings", settings_json(r.settings)},
         {"converged", r.converged}};
  switch (r.method) {
    case MaxMethod::HorodeckiExact: j["method"] = "horodecki-exact"; break;
    case MaxMethod::Optimized: j["method"] = "optimized"; break;
    case MaxMethod::ClosedForm: j["method"] = "closed-form"; break;
  }
  return j;
}

SettingsTable settings_for_game(const DensityMatrix& rho, const std::string& settings_file,
                                SettingMode mode, std::uint64_t seed) {
  if (!settings_file.empty()) {
    std::ifstream in(settings_file);
    if (!in) throw std::runtime_error("cannot open settings file: " + settings_file);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return settings_from_json(text);
  }
  // Default to the optimal settings for the state.
  if (rho.qubits == 2) return chsh_max_horodecki(rho).settings;
  MaximizeOptions options;
  options.seed = seed;
  return maximize(rho, mode, options).settings;
}

int run(int argc, char** argv) {
  CLI::App app{"optimal mixed states for the CHSH and Svetlichny games"};
  app.require_subcommand(1);

  std::string out_path;
  app.add_option("--out", out_path, "write the primary output to this file")->capture_default_str();

  // ---- state ----
  CLI::App* state = app.add_subcommand("state", "construct and inspect states");
  state->require_subcommand(1);

  StateArgs make_args;
  CLI::App* state_make = state->add_subcommand("make", "emit a state as JSON");
  add_state_options(state_make, make_args);

  StateArgs entropy_args;
  CLI::App* state_entropy = state->add_subcommand("entropy", "linear entropy of a state");
  add_state_options(state_entropy, entropy_args);

  // ---- nonloc ----
  CLI::App* nonloc = app.add_subcommand("nonloc", "nonlocality maxima and visibility");
  nonloc->require_subcommand(1);
  std::string convention = "normalized";
  nonloc->add_option("--convention", convention, "normalized or raw game value")
      ->check(CLI::IsMember({"normalized", "raw"}))
      ->capture_default_str();

  StateArgs chsh_args;
  CLI::App* chsh_cmd = nonloc->add_subcommand("chsh-max", "exact two-qubit CHSH maximum");
  add_state_options(chsh_cmd, chsh_args);

  StateArgs svet_args;
  std::string svet_mode = "planar";
  std::uint64_t svet_seed = 0;
  int svet_starts = 64;
  CLI::App* svet_cmd = nonloc->add_subcommand("svet-max", "optimized game maximum (2 or 3 qubits)");
  add_state_options(svet_cmd, svet_args);
  svet_cmd->add_option("--mode", svet_mode, "planar or bloch settings")
      ->check(CLI::IsMember({"planar", "bloch"}))
      ->capture_default_str();
  svet_cmd->add_option("--seed", svet_seed, "optimizer seed")->capture_default_str();
  svet_cmd->add_option("--starts", svet_starts, "optimizer restarts")->capture_default_str();

  StateArgs vis_args;
  std::string vis_mode = "planar";
  std::uint64_t vis_seed = 0;
  CLI::App* vis_cmd = nonloc->add_subcommand("visibility", "critical white-noise visibility");
  add_state_options(vis_cmd, vis_args);
  vis_cmd->add_option("--mode", vis_mode)->check(CLI::IsMember({"planar", "bloch"}))->capture_default_str();
  vis_cmd->add_option("--seed", vis_seed)->capture_default_str();

  // ---- game ----
  CLI::App* game = app.add_subcommand("game", "play the N-party XOR game");
  game->require_subcommand(1);

  int classical_n = 2;
  std::string grouping;
  CLI::App* game_classical =
      game->add_subcommand("classical", "exact hybrid bound by strategy enumeration");
  game_classical->add_option("--n", classical_n, "number of parties (2-4)")->capture_default_str();
  game_classical->add_option("--grouping", grouping,
                             "explicit grouping such as 1|23 (default: max over bipartitions)");

  StateArgs exact_args;
  std::string exact_settings_file;
  std::string exact_mode = "planar";
  std::uint64_t exact_seed = 0;
  CLI::App* game_exact = game->add_subcommand("exact", "exact quantum winning probability");
  add_state_options(game_exact, exact_args);
  game_exact->add_option("--settings", exact_settings_file,
                         "settings JSON (default: optimal for the state)");
  game_exact->add_option("--mode", exact_mode)->check(CLI::IsMember({"planar", "bloch"}))->capture_default_str();
  game_exact->add_option("--seed", exact_seed)->capture_default_str();

  StateArgs sim_args;
  std::string sim_settings_file;
  std::string sim_mode = "planar";
  std::int64_t rounds = 100000;
  std::uint64_t sim_seed = 0;
  CLI::App* game_sim = game->add_subcommand("simulate", "Monte Carlo rounds of the game");
  add_state_options(game_sim, sim_args);
  game_sim->add_option("--settings", sim_settings_file);
  game_sim->add_option("--mode", sim_mode)->check(CLI::IsMember({"planar", "bloch"}))->capture_default_str();
  game_sim->add_option("--rounds", rounds, "number of rounds")->capture_default_str();
  game_sim->add_option("--seed", sim_seed)->capture_default_str();

  // ---- frontier ----
  CLI::App* frontier = app.add_subcommand("frontier", "entropy-nonlocality frontier data");
  frontier->require_subcommand(1);

  std::string curve_family = "mnms2";
  int grid = 100;
  CLI::App* frontier_curve = frontier->add_subcommand("curve", "analytic curve samples as CSV");
  frontier_curve->add_option("--family", curve_family, "mnms2, mems2, min2, planar2 or mnms3")
      ->capture_default_str();
  frontier_curve->add_option("--grid", grid, "number of samples")->capture_default_str();

  ScanConfig scan_config;
  std::string scan_mode = "planar";
  CLI::App* frontier_scan = frontier->add_subcommand("scan", "random-state scatter as CSV");
  frontier_scan->add_option("--qubits", scan_config.qubits, "2 or 3")->capture_default_str();
  frontier_scan->add_option("--samples", scan_config.samples)->capture_default_str();
  frontier_scan->add_option("--seed", scan_config.seed)->capture_default_str();
  frontier_scan->add_option("--mode", scan_mode)->check(CLI::IsMember({"planar", "bloch"}))->capture_default_str();
  frontier_scan->add_option("--starts", scan_config.optimizer_starts)->capture_default_str();
  frontier_scan->add_option("--rank", scan_config.rank, "Ginibre factor columns (0 = full)")
      ->capture_default_str();

  // ---- verify ----
  CLI::App* verify = app.add_subcommand("verify", "acceptance checks");
  verify->require_subcommand(1);
  verify->add_subcommand("all", "run the full acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
  }

  if (state_make->parsed()) {
    write_output(density_to_json(load_state(make_args)), out_path);
  } else if (state_entropy->parsed()) {
    const DensityMatrix rho = load_state(entropy_args);
    write_output(json{{"qubits", rho.qubits},
                      {"e_l", linear_entropy(rho)},
                      {"purity", purity(rho)}}
                     .dump(),
                 out_path);
  } else if (chsh_cmd->parsed()) {
    const DensityMatrix rho = load_state(chsh_args);
    write_output(result_json(chsh_max_horodecki(rho), rho.qubits, convention).dump(), out_path);
  } else if (svet_cmd->parsed()) {
    const DensityMatrix rho = load_state(svet_args);
    MaximizeOptions options;
    options.seed = svet_seed;
    options.starts = svet_starts;
    const NonlocalityResult r = maximize(rho, parse_mode(svet_mode), options);
    json j = result_json(r, rho.qubits, convention);
    j["seed"] = svet_seed;
    write_output(j.dump(), out_path);
  } else if (vis_cmd->parsed()) {
    const DensityMatrix rho = load_state(vis_args);
    MaximizeOptions options;
    options.seed = vis_seed;
    const double v = critical_visibility(rho, parse_mode(vis_mode), options);
    write_output(json{{"visibility", v}, {"seed", vis_seed}}.dump(), out_path);
  } else if (game_classical->parsed()) {
    GameResult r;
    if (grouping.empty()) {
      r = classical_bound(classical_n);
    } else {
      const std::size_t bar = grouping.find('|');
      if (bar == std::string::npos)
        throw std::domain_error("grouping must look like 1|23");
      std::vector<int> group1;
      for (char ch : grouping.substr(0, bar)) group1.push_back(ch - '0');
      r = enumerate_classical(GameSpec::with_groups(classical_n, group1));
    }
    json strategy = json::array();
    if (r.strategy) {
      strategy = json{{"group1", r.strategy->group1}, {"group2", r.strategy->group2}};
    }
    write_output(json{{"win_probability", r.win_probability},
                      {"wins", r.wins},
                      {"total", r.total},
                      {"bipartitions", r.bipartitions},
                      {"strategy", strategy}}
                     .dump(),
                 out_path);
  } else if (game_exact->parsed()) {
    const DensityMatrix rho = load_state(exact_args);
    const SettingsTable settings =
        settings_for_game(rho, exact_settings_file, parse_mode(exact_mode), exact_seed);
    const GameSpec spec = GameSpec::with_groups(rho.qubits, std::vector<int>{1});
    const GameResult r = quantum_win_exact(rho, settings, spec);
    write_output(json{{"mode", "exact"},
                      {"win_probability", r.win_probability},
                      {"settings", settings_json(settings)}}
                     .dump(),
                 out_path);
  } else if (game_sim->parsed()) {
    const DensityMatrix rho = load_state(sim_args);
    const SettingsTable settings =
        settings_for_game(rho, sim_settings_file, parse_mode(sim_mode), sim_seed);
    const GameSpec spec = GameSpec::with_groups(rho.qubits, std::vector<int>{1});
    const GameResult r = simulate_rounds(rho, settings, spec, rounds, sim_seed);
    write_output(json{{"mode", "monte-carlo"},
                      {"win_probability", r.win_probability},
                      {"stderr", r.std_error},
                      {"wins", r.wins},
                      {"rounds", r.total},
                      {"seed", sim_seed},
                      {"settings", settings_json(settings)}}
                     .dump(),
                 out_path);
  } else if (frontier_curve->parsed()) {
    const CurveTag tag = parse_curve(curve_family);
    const auto [lo, hi] = curve_domain(tag);
    std::vector<FrontierPoint> points;
    for (int k = 0; k < grid; ++k) {
      const double e = grid == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (grid - 1);
      points.push_back(FrontierPoint{e, curve_value(tag, e), "curve:" + curve_name(tag), e, true});
    }
    if (out_path.empty()) throw std::domain_error("frontier curve requires --out");
    emit_csv(points, out_path);
    std::cout << json{{"family", curve_name(tag)}, {"rows", points.size()}, {"out", out_path}}.dump()
              << std::endl;
  } else if (frontier_scan->parsed()) {
    scan_config.mode = parse_mode(scan_mode);
    const std::vector<FrontierPoint> points = scan(scan_config);
    if (out_path.empty()) throw std::domain_error("frontier scan requires --out");
    emit_csv(points, out_path);
    std::int64_t flagged = 0;
    for (const FrontierPoint& p : points)
      if (!p.converged) ++flagged;
    std::cout << json{{"qubits", scan_config.qubits},
                      {"samples", scan_config.samples},
                      {"seed", scan_config.seed},
                      {"mode", scan_mode},
                      {"nonconverged", flagged},
                      {"out", out_path}}
                     .dump()
              << std::endl;
  } else if (verify->parsed()) {
    const std::vector<CriterionOutcome> outcomes = run_acceptance(&std::cout);
    return all_passed(outcomes) ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
