// gcl: command-line front end.
//
// Exit codes: 0 success / comparison passed, 1 comparison failed,
// 2 usage error (bad flags, malformed config), 3 runtime error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "gcl/error.hpp"
#include "gcl/io.hpp"
#include "gcl/pipeline.hpp"

namespace fs = std::filesystem;
using namespace gcl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

// Thrown for problems the user can fix by changing the invocation.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "Master seed (falls back to the config, then GCL_SEED)");
  cmd->add_option("--threads", common.threads, "Worker threads for replicas")
      ->check(CLI::PositiveNumber);
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("GCL_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const auto value = std::strtoull(raw, &end, 10);
  if (*end != '\0') throw UsageError("GCL_SEED is not an unsigned integer: " + std::string(raw));
  return value;
}

std::string fmt(double v, const char* spec = "%.6g") {
  if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Loads a config file; JSON and schema problems are usage errors.
ConfigFile load_config(const std::string& path, const Common& common, Json* raw_out = nullptr) {
  Json raw;
  ConfigFile config;
  try {
    raw = read_json_file(path);
    config = parse_config(raw, fs::path(path).parent_path());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::Io ||
        e.kind() == ErrorKind::OddDegreeSum || e.kind() == ErrorKind::InvalidArgument) {
      throw UsageError(e.what());
    }
    throw;
  }
  if (common.seed) {
    config.experiment.seed = *common.seed;
  } else if (!raw.contains("seed")) {
    config.experiment.seed = env_seed().value_or(0);
  }
  config.experiment.threads = common.threads;
  if (raw_out) *raw_out = std::move(raw);
  return config;
}

void ensure_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + out + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string dist;
  std::string degfile;
  bool json = false;
  std::optional<double> alpha;
  std::optional<std::uint64_t> n;
  bool full_vk = false;
};

std::string degenerate_note(Regime regime, bool has_alpha) {
  switch (regime) {
    case Regime::DegenerateAllDeg2:
      return "All mass on degrees 0 and 2: every component is a cycle (or an isolated vertex). "
             "H vanishes identically and the largest component has no deterministic limit.";
    case Regime::DegenerateP1Zero:
      return "No vertices of degree 1 with E D(D-2) > 0: xi = 0, so all but o(n) vertices and "
             "edges lie in a single giant component.";
    case Regime::Critical:
      if (has_alpha) return "E D(D-2) = 0: the giant fraction tends to 0; near-critical prediction below.";
      return "E D(D-2) = 0: the giant fraction tends to 0. Pass --alpha (and --n) for the "
             "near-critical prediction of a perturbed sequence.";
    case Regime::Subcritical:
      return "E D(D-2) < 0: all components have o(n) vertices.";
    case Regime::Supercritical:
      break;
  }
  return {};
}

int run_analyze(const AnalyzeArgs& args) {
  std::optional<DegreeDistribution> law;
  std::optional<DegreeSequence> seq;
  Json source;
  try {
    if (!args.dist.empty()) {
      source = Json::parse(args.dist);
      law = parse_distribution(source);
    } else {
      seq = read_degree_file(args.degfile);
      law = DegreeDistribution::empirical(*seq);
      source = {{"kind", "degfile"}, {"path", args.degfile}};
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("--dist: ") + e.what());
  }

  const Degree vk_limit = args.full_vk ? 0 : kDefaultVkLimit;
  const auto report = analyze(*law, kDefaultXiTolerance, vk_limit);
  std::optional<NearCriticalPrediction> near;
  if (args.alpha) {
    const std::uint64_t n = args.n.value_or(seq ? seq->n() : 0);
    if (n == 0) throw UsageError("--alpha needs --n when the source is a distribution");
    near = predict_near_critical(*law, n, *args.alpha, kDefaultCriticalTolerance, vk_limit);
  }
  const std::string note = degenerate_note(report.regime, args.alpha.has_value());

  if (args.json) {
    Json j;
    j["source"] = source;
    j["distribution"] = to_json(*law);
    j["report"] = to_json(report);
    if (seq) {
      j["sequence"] = {{"n", seq->n()},
                       {"m", seq->m()},
                       {"max_degree", seq->max_degree()},
                       {"lambda_n", seq->mean()},
                       {"alpha_n", seq->alpha()},
                       {"beta_n", seq->beta()}};
    }
    if (near) j["near_critical"] = to_json(*near);
    if (!note.empty()) j["note"] = note;
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }

  std::cout << "regime        " << to_string(report.regime) << '\n'
            << "lambda        " << fmt(report.lambda) << '\n'
            << "E D(D-2)      " << fmt(report.criticality) << '\n'
            << "beta          " << fmt(law->beta()) << '\n';
  if (law->tail_mass() > 0) {
    std::cout << "truncation    K = " << law->truncation() << " (tail mass " << fmt(law->tail_mass())
              << ")\n";
  }
  if (seq) {
    std::cout << "n, m          " << seq->n() << ", " << seq->m() << '\n'
              << "alpha_n       " << fmt(seq->alpha()) << '\n'
              << "beta_n        " << fmt(seq->beta()) << '\n';
  }
  if (report.xi) {
    std::cout << "xi            " << fmt(*report.xi) << '\n'
              << "tau           " << (report.tau_infinite() ? "inf" : fmt(report.tau)) << '\n';
  }
  if (report.v_frac) {
    std::cout << "v(C1)/n       " << fmt(*report.v_frac) << '\n'
              << "e(C1)/n       " << fmt(*report.e_frac) << '\n';
  }
  if (!report.vk_frac.empty() && report.xi) {
    std::cout << "\n  k   p_k           v_k(C1)/n\n";
    for (const auto& [k, v] : report.vk_frac) {
      char line[96];
      std::snprintf(line, sizeof line, "%3u   %-12.6g  %.6g\n", k, law->p(k), v);
      std::cout << line;
    }
  }
  if (near) {
    std::cout << "\nnear-critical (n = " << static_cast<std::uint64_t>(near->n)
              << ", alpha_n = " << fmt(near->alpha_n) << ")\n"
              << "2 lambda/beta " << fmt(near->coefficient()) << '\n'
              << "v(C1) = e(C1) " << fmt(near->v_c1) << '\n'
              << "tau (scaled)  " << fmt(near->tau_scaled) << '\n'
              << "n^(1/3) alpha " << fmt(near->n_third_alpha) << '\n';
    for (const auto& [k, v] : near->vk_c1) std::cout << "v_" << k << "(C1)       " << fmt(v) << '\n';
  }
  if (!note.empty()) std::cout << '\n' << note << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string config;
  std::string out;
  std::string dist;
  std::string degfile;
  std::optional<double> target_alpha;
  // Unset fields keep the config's (or the library's) value.
  std::optional<std::uint64_t> n;
  std::optional<std::uint32_t> replicas;
  std::optional<std::string> graph_mode;
  std::optional<std::uint64_t> max_attempts;
  std::optional<double> tol_abs;
};

void apply_overrides(const SimulateArgs& args, ExperimentConfig& config) {
  if (args.n) config.n = *args.n;
  if (args.replicas) config.replicas = *args.replicas;
  if (args.graph_mode) config.graph_mode = *args.graph_mode == "simple" ? GraphMode::Simple : GraphMode::Multigraph;
  if (args.max_attempts) config.max_attempts = *args.max_attempts;
  if (args.tol_abs) config.tolerances.supercritical_abs = args.tol_abs;
}

ExperimentConfig inline_config(const SimulateArgs& args, const Common& common) {
  ExperimentConfig config;
  try {
    if (!args.dist.empty()) {
      auto law = parse_distribution(Json::parse(args.dist));
      if (args.target_alpha) {
        config.source = NearCriticalSource{law, *args.target_alpha};
      } else {
        config.source = law;
      }
    } else if (!args.degfile.empty()) {
      config.source = read_degree_file(args.degfile);
    } else {
      throw UsageError("simulate needs --config, --dist or --degfile");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("--dist: ") + e.what());
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  apply_overrides(args, config);
  config.seed = common.seed ? *common.seed : env_seed().value_or(0);
  config.threads = common.threads;
  return config;
}

int run_simulate(const SimulateArgs& args, const Common& common) {
  ExperimentConfig config;
  if (args.config.empty()) {
    config = inline_config(args, common);
  } else {
    config = load_config(args.config, common).experiment;
    apply_overrides(args, config);
  }
  ensure_dir(args.out);
  const auto outcome = simulate(config);
  write_results_csv(outcome.result, fs::path(args.out) / "results.csv");
  write_json_file(to_json(outcome, config), fs::path(args.out) / "comparison.json");

  std::cout << "replicas " << outcome.result.replicas.size() << " (failed "
            << outcome.result.failed_replicas << "), seed " << config.seed << '\n';
  char line[200];
  std::snprintf(line, sizeof line, "%-16s %-5s %14s %14s %12s %10s  %s\n", "statistic", "red",
                "empirical", "theory", "gap", "tol", "result");
  std::cout << line;
  for (const auto& e : outcome.comparison.entries) {
    std::snprintf(line, sizeof line, "%-16s %-5s %14.6g %14.6g %12.3e %10.3g%s  %s\n",
                  e.statistic.c_str(), e.reduction.c_str(), e.empirical, e.theoretical,
                  e.relative ? e.relative_gap : e.gap, e.tolerance, e.relative ? "r" : " ",
                  e.pass ? "PASS" : "FAIL");
    std::cout << line;
  }
  for (const auto& note : outcome.comparison.notes) std::cout << "note: " << note << '\n';
  const bool pass = outcome.comparison.all_pass();
  std::cout << (pass ? "all checks passed" : "comparison FAILED") << '\n';
  return pass ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// trajectory

int run_trajectory_cmd(const std::string& config_path, const std::string& out, bool near_critical,
                       const Common& common) {
  const auto config = load_config(config_path, common);
  const TraceSpec spec = config.trace.value_or(TraceSpec{});
  ensure_dir(out);
  const auto outcome = run_trajectory(config.experiment, spec, near_critical);

  std::vector<Degree> ks = spec.ks;
  write_trace_csv(outcome.trace, ks, fs::path(out) / "trace.csv");
  write_c1_times_csv(outcome.trace, fs::path(out) / "c1_times.csv");
  if (outcome.near_critical) {
    plot_rescaled_svg(outcome.trace, outcome.sequence, outcome.t0, fs::path(out) / "trace.svg");
  } else {
    plot_trace_svg(outcome.trace, outcome.reference, fs::path(out) / "trace.svg");
  }
  Json j = to_json(outcome);
  j["seed"] = config.experiment.seed;
  write_json_file(j, fs::path(out) / "deviations.json");

  const auto& f = outcome.fluid;
  std::cout << "n " << outcome.sequence.n() << ", m " << outcome.sequence.m() << ", "
            << outcome.trace.checkpoints.size() << " checkpoints, " << outcome.trace.c1_times.size()
            << " C1 firings, seed " << config.experiment.seed << '\n'
            << "sup |L/n - lambda e^-2t|          " << fmt(f.living) << '\n'
            << "sup max_k |V~_k/n - p_k e^-kt|    " << fmt(f.sleeping_vertices_tilde) << '\n'
            << "sup |S~/n - h(e^-t)|              " << fmt(f.sleeping_tilde) << '\n'
            << "sup |A/n - H(e^-t)|" << (f.tau_window ? " (t <= tau)    " : " (all t)      ")
            << fmt(f.active) << '\n'
            << "sup |S~ - S|/n                    " << fmt(f.tilde_gap) << '\n';
  if (outcome.near_critical) {
    std::cout << "rescaled window t0                " << fmt(outcome.t0) << '\n'
              << "sup vs t - beta_n t^2/2           " << fmt(*outcome.rescaled) << '\n'
              << "sup vs alpha^-2 H_n(e^-alpha t)   " << fmt(*outcome.drift) << '\n';
  }
  std::cout << (outcome.pass ? "PASS" : "FAIL") << " (tolerance " << fmt(outcome.tolerance) << ")\n";
  return outcome.pass ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// sweep

int run_sweep_cmd(const std::string& config_path, const std::string& out, const Common& common) {
  const auto config = load_config(config_path, common);
  const auto* nc = std::get_if<NearCriticalSource>(&config.experiment.source);
  if (nc == nullptr) throw UsageError("sweep needs a near_critical source");
  if (!config.sweep) throw UsageError("sweep needs a \"sweep\" section");
  ensure_dir(out);
  const auto rows = near_critical_sweep(nc->base, config.sweep->n_list, config.sweep->alpha_list,
                                        config.experiment.replicas, config.experiment.seed,
                                        config.experiment.threads);
  write_sweep_csv(rows, fs::path(out) / "sweep.csv");
  plot_sweep_svg(rows, fs::path(out) / "sweep.svg");
  char line[200];
  std::snprintf(line, sizeof line, "%10s %10s %10s %12s %10s %10s %10s\n", "n", "alpha_n",
                "n^1/3 a", "v1/(n a)", "predicted", "rel gap", "v2/v1");
  std::cout << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%10llu %10.4g %10.4g %12.5g %10.5g %10.3g %10.3g%s\n",
                  static_cast<unsigned long long>(r.n), r.alpha_n, r.n_third_alpha,
                  r.mean_v1_alpha, r.predicted, r.relative_gap, r.mean_v2_over_v1,
                  r.within_hypotheses ? "" : "  outside the scaling window (n^(1/3) alpha_n < 4)");
    std::cout << line;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Giant components of random graphs with given degrees"};
  app.require_subcommand(1);
  app.allow_extras(false);

  Common common;

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Classify a degree law and predict the giant component");
  auto* dist_opt = analyze_cmd->add_option("--dist", analyze_args.dist, "Distribution as JSON");
  auto* deg_opt = analyze_cmd->add_option("--degfile", analyze_args.degfile, "Degree file (k<TAB>n_k)");
  dist_opt->excludes(deg_opt);
  analyze_cmd->add_flag("--json", analyze_args.json, "Print the report as JSON");
  analyze_cmd->add_option("--alpha", analyze_args.alpha, "alpha_n for the near-critical prediction");
  analyze_cmd->add_option("--n", analyze_args.n, "n for the near-critical prediction");
  analyze_cmd->add_flag("--full-vk", analyze_args.full_vk, "Report v_k for every k in the support");
  add_common(analyze_cmd, common);

  SimulateArgs sim_args;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run replicas and compare with theory");
  auto* sim_config = simulate_cmd->add_option("--config", sim_args.config, "Experiment config JSON");
  simulate_cmd->add_option("--out", sim_args.out, "Output directory")->required();
  auto* sim_dist = simulate_cmd->add_option("--dist", sim_args.dist, "Distribution as JSON");
  auto* sim_deg = simulate_cmd->add_option("--degfile", sim_args.degfile, "Degree file");
  simulate_cmd->add_option("--target-alpha", sim_args.target_alpha,
                           "Near-critical perturbation of --dist")
      ->needs(sim_dist);
  simulate_cmd->add_option("--n", sim_args.n, "Vertices per replica (distribution sources; overrides the config)");
  simulate_cmd->add_option("--replicas", sim_args.replicas, "Replica count")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--graph-mode", sim_args.graph_mode, "multigraph or simple")
      ->check(CLI::IsMember({"multigraph", "simple"}));
  simulate_cmd->add_option("--max-attempts", sim_args.max_attempts, "Simple-graph rejection cap");
  simulate_cmd->add_option("--tol-abs", sim_args.tol_abs, "Absolute tolerance for supercritical checks");
  sim_config->excludes(sim_dist)->excludes(sim_deg);
  sim_dist->excludes(sim_deg);
  add_common(simulate_cmd, common);

  std::string traj_config, traj_out;
  bool near_critical = false;
  auto* traj_cmd = app.add_subcommand("trajectory", "Record exploration trajectories and their deviations");
  traj_cmd->add_option("--config", traj_config, "Experiment config JSON")->required();
  traj_cmd->add_option("--out", traj_out, "Output directory")->required();
  traj_cmd->add_flag("--near-critical", near_critical, "Use the near-critical rescaling");
  add_common(traj_cmd, common);

  std::string sweep_config, sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Near-critical sweep over n and alpha_n");
  sweep_cmd->add_option("--config", sweep_config, "Experiment config JSON with a sweep section")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output directory")->required();
  add_common(sweep_cmd, common);

  try {
    app.parse(argc, argv);
    if (analyze_cmd->parsed() && analyze_args.dist.empty() && analyze_args.degfile.empty()) {
      throw CLI::RequiredError("analyze needs exactly one of --dist or --degfile");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (analyze_cmd->parsed()) return run_analyze(analyze_args);
    if (simulate_cmd->parsed()) return run_simulate(sim_args, common);
    if (traj_cmd->parsed()) return run_trajectory_cmd(traj_config, traj_out, near_critical, common);
    if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_config, sweep_out, common);
  } catch (const UsageError& e) {
    std::cerr << "gcl: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "gcl: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
