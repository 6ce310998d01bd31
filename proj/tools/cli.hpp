#ifndef ROTTING_TOOLS_CLI_HPP
#define ROTTING_TOOLS_CLI_HPP

// Command-line front end: run, grid, compare, theory, verify.
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rotting/config.hpp"
#include "rotting/harness.hpp"
#include "rotting/io.hpp"
#include "rotting/model_family.hpp"
#include "rotting/theory.hpp"

namespace rotting::cli {

using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;

/// Environment variable holding the default output directory.
constexpr const char* kOutDirEnv = "ROTTING_OUT_DIR";

/// Bad user input (exit code 1) as opposed to a runtime failure.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Json count_json(const MaybeCount& c) { return c ? Json(*c) : Json(nullptr); }

inline Json real_json(double v) { return std::isfinite(v) ? Json(v) : Json(v > 0 ? "inf" : "-inf"); }

inline Json reports_json(const std::vector<DetectabilityReport>& reports) {
  auto arr = Json::array();
  for (const auto& r : reports)
    arr.push_back(Json{{"theta1", r.theta1},
                       {"theta2", r.theta2},
                       {"kind", to_string(r.kind)},
                       {"threshold", r.threshold},
                       {"crossing", count_json(r.crossing)},
                       {"cap", r.cap}});
  return arr;
}

inline std::filesystem::path output_dir(const std::string& flag, const ExperimentConfig& cfg) {
  if (!flag.empty()) return flag;
  if (!cfg.output.empty()) return cfg.output;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "rotting_out";
}

inline ExperimentConfig load_config(const std::string& path) {
  if (!std::filesystem::exists(path)) throw std::runtime_error("config file not found: " + path);
  return parse_config(read_text(path));
}

struct Overrides {
  std::optional<std::int64_t> horizon;
  std::optional<std::int64_t> repetitions;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;

  void apply(ExperimentConfig& cfg) const {
    if (horizon) cfg.horizon = *horizon;
    if (repetitions) cfg.repetitions = *repetitions;
    if (seed) cfg.seed = *seed;
  }
};

inline void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--horizon", o.horizon, "override the horizon T")->check(CLI::PositiveNumber);
  cmd->add_option("--repetitions", o.repetitions, "override the number of trajectories R")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "override the master seed");
  cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
}

inline int run_command(const std::string& config, const std::string& out_flag, const Overrides& o,
                       std::ostream& out) {
  auto cfg = load_config(config);
  o.apply(cfg);
  const auto dir = output_dir(out_flag, cfg);
  const auto result = run_experiment(make_plan(cfg, o.threads));
  const auto files = write_experiment(result, dir);
  Json j{{"output", dir.string()}, {"files", Json::array()}};
  for (const auto& f : files) j["files"].push_back(f.filename().string());
  out << j.dump(2) << "\n";
  return kOk;
}

inline int grid_command(const std::string& config, const std::string& out_flag, const Overrides& o,
                        std::ostream& out) {
  auto cfg = load_config(config);
  o.apply(cfg);
  if (cfg.grids.empty()) throw UsageError("config has no [grid] section");
  const auto dir = output_dir(out_flag, cfg);
  std::filesystem::create_directories(dir);
  const auto base = make_plan(cfg, o.threads);
  auto summary = Json::array();
  for (const auto& g : cfg.grids) {
    const auto res = grid_search(base, grid_candidates(cfg, g));
    const auto file = "grid_" + file_safe(g.policy) + "_" + file_safe(g.parameter) + ".csv";
    write_text(dir / file, grid_csv(res));
    summary.push_back(Json{{"policy", g.policy},
                           {"parameter", g.parameter},
                           {"best_value", g.values.at(res.best)},
                           {"best_mean_end_regret", res.rows.at(res.best).mean_end_regret},
                           {"seed_block", res.seed_block},
                           {"file", file}});
  }
  out << Json{{"output", dir.string()}, {"grids", summary}}.dump(2) << "\n";
  return kOk;
}

inline int compare_command(const std::string& samples, const std::string& out_file, std::ostream& out) {
  if (!std::filesystem::exists(samples)) throw std::runtime_error("samples file not found: " + samples);
  const auto report = comparison_json(compare(parse_end_regret_csv(read_text(samples))));
  const auto text = report.dump(2) + "\n";
  if (out_file.empty())
    out << text;
  else
    write_text(out_file, text);
  return kOk;
}

struct TheoryArgs {
  std::string op;
  std::string family = "power";
  std::vector<double> thetas;
  double sigma2 = 0.0;
  std::optional<double> theta1, theta2;
  std::int64_t n = 1;
  std::int64_t horizon = 0;
  std::int64_t k = 2;
  double delta = 0.1;
  double zeta = 0.0;
  std::string kind = "det";
  std::int64_t n_cap = ScanOptions{}.n_cap;
  std::int64_t window = ScanOptions{}.confirm_window;
  std::int64_t t_cap = ScanOptions{}.t_cap;

  ModelFamily make() const {
    if (thetas.empty()) throw UsageError("--theta is required");
    return make_family(family, thetas);
  }
  ScanOptions scan() const { return {n_cap, window, t_cap}; }
  std::pair<double, double> pair() const {
    if (theta1 && theta2) return {*theta1, *theta2};
    if (thetas.size() >= 2) return {thetas[0], thetas[1]};
    throw UsageError("give --theta1 and --theta2, or at least two values in --theta");
  }
};

inline int theory_command(const TheoryArgs& a, std::ostream& out) {
  const auto family = a.make();
  Json j{{"op", a.op}, {"family", a.family}, {"theta", a.thetas}, {"sigma2", a.sigma2}};
  if (a.op == "det" || a.op == "ddet") {
    const auto [t1, t2] = a.pair();
    const double v = a.op == "det" ? det(family, t1, t2, a.n, a.sigma2) : ddet(family, t1, t2, a.n, a.sigma2);
    j["theta1"] = t1;
    j["theta2"] = t2;
    j["n"] = a.n;
    j["value"] = real_json(v);
  } else if (a.op == "fstar") {
    const auto [t1, t2] = a.pair();
    DetectabilityCalculator calc(family, a.sigma2);
    const auto i1 = family.index_of(t1), i2 = family.index_of(t2);
    std::function<double(std::int64_t)> f;
    if (a.kind == "det")
      f = [&](std::int64_t n) { return calc.det(i1, i2, n); };
    else if (a.kind == "ddet")
      f = [&](std::int64_t n) { return calc.ddet(i1, i2, n); };
    else
      throw UsageError("--kind must be det or ddet");
    j["kind"] = a.kind;
    j["theta1"] = t1;
    j["theta2"] = t2;
    j["zeta"] = a.zeta;
    j["cap"] = a.n_cap;
    j["value"] = count_json(f_star_down(f, a.zeta, a.n_cap, a.window));
  } else if (a.op == "bal") {
    j["n"] = a.n;
    j["value"] = count_json(bal(family, a.n, a.t_cap));
  } else if (a.op == "mdiff") {
    const auto b = m_diff_upper_bound(family, a.delta, a.k, a.sigma2, a.scan());
    j["delta"] = a.delta;
    j["k"] = a.k;
    j["threshold"] = b.threshold;
    j["value"] = b.budget;
    j["pairs"] = reports_json(b.pairs);
  } else if (a.op == "wbound") {
    if (a.horizon < 1) throw UsageError("--T is required for wbound");
    const auto w = w_bound(family, a.horizon, a.k, a.sigma2, a.scan());
    j["T"] = a.horizon;
    j["k"] = a.k;
    j["threshold"] = w.threshold;
    j["value"] = count_json(w.value);
    j["pairs"] = reports_json(w.pairs);
  } else if (a.op == "tsim") {
    const auto t = t_sim_upper_bound(family, a.k, a.sigma2, a.scan());
    j["k"] = a.k;
    j["value"] = t.horizon;
    j["w"] = t.w;
    j["balance"] = t.balance;
    j["iterations"] = t.iterations;
  } else {
    throw UsageError("unknown theory operation '" + a.op + "'");
  }
  out << j.dump(2) << "\n";
  return kOk;
}

struct VerifyArgs {
  std::string family = "power";
  std::vector<double> thetas;
  double sigma2 = 0.0;
  VerifyGrids grids;
};

inline int verify_command(const VerifyArgs& a, std::ostream& out) {
  if (a.thetas.empty()) throw UsageError("--theta is required");
  const auto report = verify_assumptions(make_family(a.family, a.thetas), a.sigma2, a.grids);
  Json checks = Json::array();
  for (const auto& c : report.checks)
    checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"witnesses", c.witnesses}});
  out << Json{{"family", a.family}, {"theta", a.thetas}, {"all_passed", report.all_passed()}, {"checks", checks}}
             .dump(2)
      << "\n";
  return kOk;
}

/// Parses `args` (without the program name) and runs the chosen subcommand.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Rotting bandits simulator and theory calculator", "rotting"};
  app.require_subcommand(1);

  std::string config, out_dir, samples, report_file;
  Overrides overrides;

  auto* run = app.add_subcommand("run", "run an experiment and write regret CSVs and a summary");
  run->add_option("--config", config, "experiment config file")->required();
  run->add_option("--out", out_dir, std::string("output directory (default: config, then $") + kOutDirEnv + ")");
  add_overrides(run, overrides);

  auto* grid = app.add_subcommand("grid", "tune policy parameters on a dedicated seed block");
  grid->add_option("--config", config, "experiment config file with [grid] sections")->required();
  grid->add_option("--out", out_dir, "output directory");
  add_overrides(grid, overrides);

  auto* cmp = app.add_subcommand("compare", "pairwise wins and paired t-tests from an end-regret CSV");
  cmp->add_option("--samples", samples, "end_regret.csv written by run")->required();
  cmp->add_option("--out", report_file, "write the JSON report here instead of stdout");

  TheoryArgs ta;
  auto* theory = app.add_subcommand("theory", "evaluate a theoretical quantity");
  theory->add_option("op", ta.op, "det | ddet | fstar | bal | mdiff | wbound | tsim")
      ->required()
      ->check(CLI::IsMember({"det", "ddet", "fstar", "bal", "mdiff", "wbound", "tsim"}));
  theory->add_option("--family", ta.family, "model family")->check(CLI::IsMember(known_family_names()));
  theory->add_option("--theta", ta.thetas, "parameter set")->delimiter(',');
  theory->add_option("--sigma2", ta.sigma2, "noise variance")->check(CLI::NonNegativeNumber);
  theory->add_option("--theta1", ta.theta1, "first model of the pair");
  theory->add_option("--theta2", ta.theta2, "second model of the pair");
  theory->add_option("--n", ta.n, "pull count (det, ddet) or W (bal)")->check(CLI::PositiveNumber);
  theory->add_option("--T", ta.horizon, "horizon (wbound)");
  theory->add_option("--k", ta.k, "number of arms")->check(CLI::PositiveNumber);
  theory->add_option("--delta", ta.delta, "confidence level (mdiff)");
  theory->add_option("--zeta", ta.zeta, "threshold (fstar)");
  theory->add_option("--kind", ta.kind, "det or ddet (fstar)");
  theory->add_option("--cap", ta.n_cap, "scan cap on n")->check(CLI::PositiveNumber);
  theory->add_option("--window", ta.window, "confirmation window of the dense scan")->check(CLI::PositiveNumber);
  theory->add_option("--t-cap", ta.t_cap, "cap on T (tsim) and on bal")->check(CLI::PositiveNumber);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "check the model-family assumptions numerically");
  verify->add_option("--family", va.family, "model family")->check(CLI::IsMember(known_family_names()));
  verify->add_option("--theta", va.thetas, "parameter set")->delimiter(',')->required();
  verify->add_option("--sigma2", va.sigma2, "noise variance")->check(CLI::NonNegativeNumber);
  verify->add_option("--k", va.grids.num_arms, "number of arms")->check(CLI::PositiveNumber);
  verify->add_option("--deltas", va.grids.deltas, "confidence levels for the D-detection thresholds")
      ->delimiter(',');
  verify->add_option("--dense-n", va.grids.dense_n, "dense monotonicity grid")->check(CLI::PositiveNumber);
  verify->add_option("--geometric-n", va.grids.geometric_n, "end of the geometric grid")
      ->check(CLI::PositiveNumber);
  verify->add_option("--cap", va.grids.scan.n_cap, "scan cap on n")->check(CLI::PositiveNumber);
  verify->add_option("--t-cap", va.grids.scan.t_cap, "largest T examined")->check(CLI::PositiveNumber);

  if (!args.empty() && !args.front().empty() && args.front().front() != '-') {
    const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
    const bool known = std::any_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == args.front(); });
    if (!known) {
      err << "error: unknown subcommand '" << args.front() << "' (expected run, grid, compare, theory or verify)\n";
      return kUsage;
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*run) return run_command(config, out_dir, overrides, out);
    if (*grid) return grid_command(config, out_dir, overrides, out);
    if (*cmp) return compare_command(samples, report_file, out);
    if (*theory) return theory_command(ta, out);
    if (*verify) return verify_command(va, out);
  } catch (const ConfigError& e) {
    err << "invalid config:\n" << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  err << "error: no subcommand\n";
  return kUsage;
}

}  // namespace rotting::cli

#endif  // ROTTING_TOOLS_CLI_HPP
