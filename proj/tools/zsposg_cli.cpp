#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zsposg/hsvi.hpp"
#include "zsposg/io.hpp"
#include "zsposg/lipschitz_hsvi.hpp"
#include "zsposg/sequence_form.hpp"
#include "zsposg/strategies.hpp"

namespace fs = std::filesystem;
using namespace zsposg;

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitBudget = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "600s", "10m", "2h", "1500ms" or plain seconds.
double parse_budget(const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw UsageError("bad --budget '" + text + "'");
  }
  const std::string unit = text.substr(pos);
  double scale = 0.0;
  if (unit.empty() || unit == "s") scale = 1.0;
  else if (unit == "ms") scale = 1e-3;
  else if (unit == "m") scale = 60.0;
  else if (unit == "h") scale = 3600.0;
  if (scale == 0.0 || v <= 0.0) throw UsageError("bad --budget '" + text + "'");
  return v * scale;
}

std::optional<double> parse_rho(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos == text.size() && v > 0.0) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("bad --rho '" + text + "'");
}

PosgModel load_with_horizon(const std::string& path, int horizon) {
  PosgModel m = load_model(path);
  if (horizon > 0) m.horizon = horizon;
  return m;
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p);
  out << j.dump(2) << '\n';
}

struct SolveFlags {
  std::string model;
  int horizon = 0;
  double epsilon = 0.01;
  std::string rho = "auto";
  std::string variant = "cc";
  std::string heuristic = "bmdp";
  std::string lipschitz = "theorem";
  std::string trace;
  std::string budget = "24h";
  std::string out;
};

SolverConfig make_config(const SolveFlags& f) {
  SolverConfig c;
  c.epsilon = f.epsilon;
  c.rho = parse_rho(f.rho);
  c.lipschitz = f.lipschitz == "experimental" ? LipschitzMode::kExperimental : LipschitzMode::kTheorem;
  c.heuristic = f.heuristic == "init" ? Heuristic::kInit : Heuristic::kBmdp;
  c.max_seconds = parse_budget(f.budget);
  return c;
}

int cmd_solve(const SolveFlags& f) {
  const SolverConfig config = make_config(f);
  const PosgModel m = load_with_horizon(f.model, f.horizon);
  SolveResult res;
  json extra;
  if (f.variant == "lc") {
    LipschitzHsviSolver solver(m, LcConfig{config, 0.0});
    res = solver.solve();
    if (!f.out.empty()) extra["bounds"] = cones_to_json(solver.upper(), solver.lower());
  } else {
    HsviSolver solver(m, config);
    res = solver.solve();
    if (!f.out.empty()) {
      extra["bounds"] = bounds_to_json(solver.bounds());
      Extraction p2 = extract_behavioral({&solver.bounds().upper(), res.upper_root, 1});
      Extraction p1 = extract_behavioral({&solver.bounds().lower(), res.lower_root, 0});
      extra["strategy_p1"] = strategy_to_json(m, p1.strategy);
      extra["strategy_p2"] = strategy_to_json(m, p2.strategy);
    }
  }
  json result = result_to_json(res);
  if (!f.trace.empty()) {
    std::ofstream t(f.trace);
    write_trace_csv(t, res.trace);
  }
  if (!f.out.empty()) {
    const fs::path dir(f.out);
    fs::create_directories(dir);
    write_json(dir / "result.json", result);
    for (const auto& [name, j] : extra.items()) write_json(dir / (name + ".json"), j);
    write_json(dir / "occupancy0.json", occupancy_to_json(m, initial_occupancy(m)));
  }
  std::cout << result.dump(2) << '\n';
  return res.status == SolveStatus::kConverged ? kExitConverged : kExitBudget;
}

int cmd_exact(const std::string& model, int horizon, const std::string& out) {
  const PosgModel m = load_with_horizon(model, horizon);
  const auto start = std::chrono::steady_clock::now();
  ExactSolution sol = solve_exact(m, m.horizon);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  json j = {{"value", sol.value},
            {"num_sequences", {sol.num_sequences[0], sol.num_sequences[1]}},
            {"timing", {{"elapsed_ms", ms}}}};
  if (!out.empty()) {
    const fs::path dir(out);
    fs::create_directories(dir);
    write_json(dir / "exact.json", j);
    write_json(dir / "strategy_p1.json", strategy_to_json(m, sol.b1));
    write_json(dir / "strategy_p2.json", strategy_to_json(m, sol.b2));
  }
  std::cout << j.dump(2) << '\n';
  return kExitConverged;
}

BehavioralStrategy read_strategy(const PosgModel& m, const std::string& path, int player) {
  if (path.empty()) return uniform_strategy(m, player);
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(0, path + ": " + e.what());
  }
  BehavioralStrategy s;
  try {
    s = strategy_from_json(m, j);
  } catch (const std::exception& e) {
    throw ParseError(0, path + ": " + e.what());
  }
  if (s.player != player) throw ParseError(0, path + ": strategy is for the other player");
  return s;
}

int cmd_evaluate(const std::string& model, int horizon, const std::string& p1, const std::string& p2) {
  const PosgModel m = load_with_horizon(model, horizon);
  const BehavioralStrategy b1 = read_strategy(m, p1, 0);
  const BehavioralStrategy b2 = read_strategy(m, p2, 1);
  double value = 0.0;
  try {
    value = evaluate_profile(m, b1, b2);
  } catch (const std::exception& e) {
    throw ParseError(0, std::string("strategy does not cover a reachable history: ") + e.what());
  }
  const double vs_p1 = best_response(m, b1, 1).value;
  const double vs_p2 = best_response(m, b2, 0).value;
  json j = {{"value", value}, {"best_response_vs_p1", vs_p1}, {"best_response_vs_p2", vs_p2}};
  std::cout << j.dump(2) << '\n';
  return kExitConverged;
}

std::string cell(const SolveResult& r) {
  std::ostringstream os;
  os.precision(3);
  if (r.status == SolveStatus::kConverged)
    os << std::fixed << r.elapsed_ms / 1000.0 << " s";
  else
    os << "(" << r.gap << ")";
  return os.str();
}

int cmd_bench(const std::string& dir, const std::vector<std::string>& suite, int horizon_max,
              const std::string& budget, double epsilon, double lc_epsilon) {
  const double seconds = parse_budget(budget);
  std::vector<std::pair<std::string, std::string>> games = {{"adv_tiger", "Adversarial Tiger"},
                                                             {"competitive_tiger", "Competitive Tiger"},
                                                             {"mabc", "Mabc"},
                                                             {"recycling_robot", "Recycling Robot"}};
  std::vector<std::pair<std::string, std::string>> chosen;
  for (const auto& g : games)
    for (const auto& s : suite)
      if (s == "all" || s == g.first) chosen.push_back(g);
  if (chosen.empty()) throw UsageError("--suite matches no benchmark");
  std::ostringstream eps_lc, eps_cc;
  eps_lc << lc_epsilon;
  eps_cc << epsilon;
  std::cout << "| Game | H | Sequence form | LC (" << eps_lc.str() << ") | CC init (" << eps_cc.str()
            << ") | CC bMDP (" << eps_cc.str() << ") |\n";
  std::cout << "|---|---|---|---|---|---|\n";
  bool all_converged = true;
  for (const auto& [file, title] : chosen) {
    PosgModel base = load_model(fs::path(dir) / (file + ".zsposg"));
    for (int h = 1; h <= horizon_max; ++h) {
      PosgModel m = base;
      m.horizon = h;
      std::string exact;
      try {
        const auto start = std::chrono::steady_clock::now();
        ExactSolution sol = solve_exact(m, h);
        std::ostringstream os;
        os.precision(3);
        os << std::fixed
           << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s";
        exact = os.str();
      } catch (const std::exception&) {
        exact = "n/a";
      }
      SolverConfig c;
      c.max_seconds = seconds;
      c.epsilon = lc_epsilon;
      std::string lc;
      try {
        lc = cell(lipschitz_hsvi_solve(m, LcConfig{c, 0.0}));
      } catch (const std::invalid_argument&) {
        lc = "n/a";
      }
      c.epsilon = epsilon;
      std::string cc[2];
      int k = 0;
      for (Heuristic heur : {Heuristic::kInit, Heuristic::kBmdp}) {
        c.heuristic = heur;
        HsviSolver solver(m, c);
        SolveResult r = solver.solve();
        all_converged = all_converged && r.status == SolveStatus::kConverged;
        cc[k++] = cell(r);
      }
      std::cout << "| " << title << " | " << h << " | " << exact << " | " << lc << " | " << cc[0] << " | "
                << cc[1] << " |\n";
      std::cout.flush();
    }
  }
  return all_converged ? kExitConverged : kExitBudget;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-sum partially observable stochastic game solver"};
  app.require_subcommand(1);

  SolveFlags sf;
  auto* solve = app.add_subcommand("solve", "Run heuristic search value iteration");
  solve->add_option("--model", sf.model, "Model file")->required();
  solve->add_option("--horizon", sf.horizon, "Horizon (defaults to the file's)")->check(CLI::PositiveNumber);
  solve->add_option("--epsilon", sf.epsilon, "Target gap")->check(CLI::PositiveNumber);
  solve->add_option("--rho", sf.rho, "Radius parameter, a float or auto");
  solve->add_option("--variant", sf.variant)->check(CLI::IsMember({"cc", "lc"}));
  solve->add_option("--heuristic", sf.heuristic)->check(CLI::IsMember({"init", "bmdp"}));
  solve->add_option("--lipschitz", sf.lipschitz)->check(CLI::IsMember({"theorem", "experimental"}));
  solve->add_option("--trace", sf.trace, "Trace CSV path");
  solve->add_option("--budget", sf.budget, "Time budget, e.g. 600s");
  solve->add_option("--out", sf.out, "Output directory");

  std::string model, out, p1, p2;
  int horizon = 0;
  auto* exact = app.add_subcommand("exact", "Solve the sequence-form LP");
  exact->add_option("--model", model)->required();
  exact->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  exact->add_option("--out", out);

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a strategy profile (uniform where omitted)");
  evaluate->add_option("--model", model)->required();
  evaluate->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  evaluate->add_option("--p1", p1, "Player 1 strategy JSON");
  evaluate->add_option("--p2", p2, "Player 2 strategy JSON");

  std::string models_dir = "models", budget = "600s";
  std::vector<std::string> suite{"all"};
  int horizon_max = 3;
  double bench_eps = 0.01, lc_eps = 0.05;
  auto* bench = app.add_subcommand("bench", "Print a benchmark table");
  bench->add_option("--models", models_dir, "Directory holding the model files");
  bench->add_option("--suite", suite, "all or model names");
  bench->add_option("--horizon-max", horizon_max)->check(CLI::PositiveNumber);
  bench->add_option("--budget", budget, "Budget per solver run");
  bench->add_option("--epsilon", bench_eps)->check(CLI::PositiveNumber);
  bench->add_option("--lc-epsilon", lc_eps)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(sf);
    if (*exact) return cmd_exact(model, horizon, out);
    if (*evaluate) return cmd_evaluate(model, horizon, p1, p2);
    if (*bench) return cmd_bench(models_dir, suite, horizon_max, budget, bench_eps, lc_eps);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
