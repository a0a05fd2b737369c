#pragma once

#include <optional>
#include <variant>

#include "gcl/experiments.hpp"
#include "gcl/exploration.hpp"
#include "gcl/io.hpp"

namespace gcl {

// Orchestration shared by the CLI and the acceptance runner.

using Prediction = std::variant<TheoryReport, NearCriticalPrediction>;

struct SimulationOutcome {
  ExperimentResult result;
  Prediction theory;
  ComparisonReport comparison;
};

// run_replicas followed by compare against the matching theory:
// the law itself, the empirical law of an explicit sequence, or the
// near-critical prediction at the achieved alpha_n.
SimulationOutcome simulate(const ExperimentConfig& config);

Json to_json(const Prediction& prediction);
Json to_json(const SimulationOutcome& outcome, const ExperimentConfig& config);

struct TrajectoryOutcome {
  DegreeSequence sequence;
  ExplorationTrace trace;
  GeneratingFunctions reference;
  DeviationReport fluid;
  // Largest of the L, V~_k, S~ and A deviations; tilde_gap is reported but not gated.
  double fluid_worst = 0;
  bool near_critical = false;
  double t0 = 0;
  std::optional<double> rescaled;  // against t - beta_n t^2 / 2
  std::optional<double> drift;     // against alpha^-2 H_n(e^{-alpha t})
  double tolerance = 0;
  bool pass = false;
};

// One timed exploration of the config's source. Laws are sampled at size n on
// stream derive_seed(seed, 0); the exploration uses the same stream.
// near_critical switches to the rescaled window [0, t0] with t0 taken from
// spec.rescaled_t0 or 4 / beta_n.
TrajectoryOutcome run_trajectory(const ExperimentConfig& config, const TraceSpec& spec,
                                 bool near_critical);

Json to_json(const TrajectoryOutcome& outcome);

}  // namespace gcl
