#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gcl/degree_model.hpp"
#include "gcl/exploration.hpp"
#include "gcl/theory.hpp"

namespace gcl {

struct NearCriticalSource {
  DegreeDistribution base;
  double target_alpha = 0;
};

// A law is resampled for every replica; an explicit sequence is reused as is.
// monostate means "not set" and is rejected by run_replicas.
using ExperimentSource =
    std::variant<std::monostate, DegreeDistribution, DegreeSequence, NearCriticalSource>;

enum class GraphMode { Multigraph, Simple };

std::string_view to_string(GraphMode mode);

// Defaults are Monte Carlo tolerances around the limiting values.
struct Tolerances {
  // Absolute tolerance for v1/n, e1/n and vk1/n; unset means 5 n^{-1/2} (1 + lambda_n).
  std::optional<double> supercritical_abs;
  double v2_frac = 0.01;
  double subcritical_v1 = 1e-3;
  double near_critical_rel = 0.15;
  double v2_over_v1 = 0.1;
};

struct ExperimentConfig {
  ExperimentSource source;
  std::uint64_t n = 0;  // ignored for explicit sequences
  std::uint32_t replicas = 1;
  std::uint64_t seed = 0;
  GraphMode graph_mode = GraphMode::Multigraph;
  std::uint64_t max_attempts = 1000;
  Degree vk_limit = kDefaultVkLimit;
  Tolerances tolerances;
  unsigned threads = 1;
};

struct ReplicaRecord {
  bool ok = true;
  std::string error;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  double alpha_n = 0;
  std::uint64_t v1 = 0;
  std::uint64_t e1 = 0;
  std::uint64_t v2 = 0;
  std::uint64_t e2 = 0;
  std::map<Degree, std::uint64_t> vk1;
  std::uint64_t attempts = 1;
  std::uint64_t component_count = 0;

  bool operator==(const ReplicaRecord&) const = default;
};

struct Aggregate {
  double mean = 0;
  double std = 0;  // sample standard deviation (n - 1)
  double min = 0;
  double max = 0;
  std::size_t count = 0;

  bool operator==(const Aggregate&) const = default;
};

enum class Normalization { FractionOfN, NearCritical };

struct ExperimentResult {
  Normalization normalization = Normalization::FractionOfN;
  double alpha_n = 0;  // near-critical runs: the achieved alpha_n
  std::vector<ReplicaRecord> replicas;
  // Keys: v1_frac, e1_frac, v2_frac, e2_frac, v2_over_v1, attempts,
  // vk1_frac_<k>; near-critical runs add v1_alpha, e1_alpha, vk1_alpha_<k>.
  std::map<std::string, Aggregate> aggregates;
  std::size_t failed_replicas = 0;

  const Aggregate& at(const std::string& key) const;
  bool operator==(const ExperimentResult&) const = default;
};

// Runs every replica on stream derive_seed(seed, replica); aggregation is a
// sequential fold in replica order, so thread count never changes the result.
ExperimentResult run_replicas(const ExperimentConfig& config);

ExperimentResult aggregate(Normalization normalization, double alpha_n,
                           std::vector<ReplicaRecord> replicas);

struct ComparisonEntry {
  std::string statistic;  // aggregate key
  std::string reduction;  // "mean" or "max"
  double empirical = 0;
  double theoretical = 0;
  double gap = 0;  // empirical - theoretical
  double relative_gap = 0;
  double tolerance = 0;
  bool relative = false;  // tolerance applies to relative_gap
  bool upper_bound = false;  // only empirical <= theoretical + tolerance is required
  bool pass = false;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  std::vector<std::string> notes;
  Tolerances tolerances;
  double supercritical_abs = 0;  // resolved value actually used
  bool all_pass() const;
};

ComparisonReport compare(const ExperimentResult& result, const TheoryReport& theory,
                         const Tolerances& tolerances = {});
ComparisonReport compare(const ExperimentResult& result, const NearCriticalPrediction& theory,
                         const Tolerances& tolerances = {});

struct SweepRow {
  std::uint64_t n = 0;
  double alpha_n = 0;  // achieved
  double n_third_alpha = 0;
  double mean_v1_alpha = 0;  // mean v1 / (n alpha_n)
  double predicted = 0;      // 2 lambda / beta
  double relative_gap = 0;
  double mean_v2_over_v1 = 0;
  bool within_hypotheses = false;  // n^{1/3} alpha_n >= kSweepHypothesisThreshold
};

inline constexpr double kSweepHypothesisThreshold = 4.0;

// Row i uses master seed derive_seed(seed, i).
std::vector<SweepRow> near_critical_sweep(const DegreeDistribution& base,
                                          const std::vector<std::uint64_t>& n_list,
                                          const std::vector<double>& alpha_list,
                                          std::uint32_t replicas, std::uint64_t seed,
                                          unsigned threads = 1);

// CSV emitters. Column orders are fixed; see README.
void write_results_csv(const ExperimentResult& result, const std::filesystem::path& path);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
// Columns t, L, A, S, S_tilde, V_k..., V_tilde_k... for k in ks.
void write_trace_csv(const ExplorationTrace& trace, const std::vector<Degree>& ks,
                     const std::filesystem::path& path);
void write_c1_times_csv(const ExplorationTrace& trace, const std::filesystem::path& path);

// SVG plots.
// n^-1 A(t) and n^-1 A~(t) against H(e^{-t}).
void plot_trace_svg(const ExplorationTrace& trace, const GeneratingFunctions& gf,
                    const std::filesystem::path& path);
// alpha^-2 n^-1 A~(alpha t) against t - beta t^2 / 2.
void plot_rescaled_svg(const ExplorationTrace& trace, const DegreeSequence& seq, double t0,
                       const std::filesystem::path& path);
// mean v1/(n alpha) against n^{1/3} alpha, one curve per n, with the 2 lambda / beta line.
void plot_sweep_svg(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace gcl
