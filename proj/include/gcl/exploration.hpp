#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gcl/config_model.hpp"
#include "gcl/degree_model.hpp"
#include "gcl/rng.hpp"
#include "gcl/theory.hpp"

namespace gcl {

// Combinatorial: the partner of a killed half-edge is a uniform draw from the
// other living half-edges; the clock is the pairing count.
// Timed: every half-edge carries an Exp(1) lifetime and partners are taken in
// order of death; the clock is continuous time.
enum class ExplorationMode { Combinatorial, Timed };

std::string_view to_string(ExplorationMode mode);

// State snapshot, right-continuous: taken after every event at or before `time`.
struct Checkpoint {
  double time = 0;                 // t (timed) or number of pairings (combinatorial)
  std::uint64_t living = 0;        // L
  std::uint64_t active = 0;        // A
  std::uint64_t sleeping = 0;      // S
  std::uint64_t sleeping_tilde = 0;  // S~
  std::vector<std::uint64_t> sleeping_vertices;        // V_k, k = 0..d_max
  std::vector<std::uint64_t> sleeping_vertices_tilde;  // V~_k

  std::uint64_t dead(std::uint64_t half_edges) const { return half_edges - living; }
  // A~ = L - S~
  std::int64_t active_tilde() const {
    return static_cast<std::int64_t>(living) - static_cast<std::int64_t>(sleeping_tilde);
  }
};

struct ExplorationTrace {
  ExplorationMode mode = ExplorationMode::Combinatorial;
  std::uint64_t n = 0;
  std::uint64_t half_edges = 0;  // 2m
  Degree max_degree = 0;
  std::vector<Checkpoint> checkpoints;
  std::vector<double> c1_times;
};

struct ExplorationResult {
  ComponentStats components;
  ExplorationTrace trace;
  Multigraph graph;
};

// Explores components while building the configuration-model matching.
// checkpoint_times must be ascending.
ExplorationResult explore(const DegreeSequence& seq, Rng& rng, ExplorationMode mode,
                          std::span<const double> checkpoint_times = {});

// Spontaneous deaths only: per-vertex survival with no C1/C2 interference, and
// the living count as the two-step death chain started at 2m - 1. Only
// living, sleeping_tilde and sleeping_vertices_tilde are filled.
ExplorationTrace pure_death_trajectory(const DegreeSequence& seq, Rng& rng,
                                       std::span<const double> checkpoint_times);

struct DeviationReport {
  double living = 0;                   // sup |L/n - lambda e^{-2t}|
  double sleeping_vertices_tilde = 0;  // sup max_{k<=K} |V~_k/n - p_k e^{-kt}|
  double sleeping_tilde = 0;           // sup |S~/n - h(e^{-t})|
  double active = 0;                   // sup over t <= tau of |A/n - H(e^{-t})|
  double tilde_gap = 0;                // sup |(S~ - S)/n|
  Degree max_k = 0;
  double tau = 0;
  // False when the reference law is not supercritical; active is then taken
  // over every checkpoint.
  bool tau_window = false;
  std::size_t checkpoints = 0;

  double worst() const;
};

// Sup deviations of a timed trace from the fluid limits of gf.
// max_k defaults to the trace's maximum degree.
DeviationReport trace_deviation(const ExplorationTrace& trace, const GeneratingFunctions& gf,
                                std::optional<Degree> max_k = std::nullopt);

// sup_{t <= t0} |alpha^-2 n^-1 A~(alpha t) - (t - beta t^2 / 2)| over the
// checkpoints, with alpha = alpha_n and beta = beta_n of seq.
double rescaled_near_critical_deviation(const ExplorationTrace& trace, const DegreeSequence& seq,
                                        double t0);

// Same window, measured against the exact finite-n drift alpha^-2 H_n(e^{-alpha t})
// instead of its quadratic approximation.
double rescaled_drift_deviation(const ExplorationTrace& trace, const DegreeSequence& seq, double t0);

// Checkpoint times alpha_n * t for t on an even grid of `points` over [0, t0].
std::vector<double> rescaled_checkpoint_times(const DegreeSequence& seq, double t0,
                                              std::size_t points);

}  // namespace gcl
