#include "gcl/pipeline.hpp"

#include <algorithm>

#include "gcl/error.hpp"

namespace gcl {

namespace {

DegreeDistribution reference_law(const ExperimentSource& source) {
  if (const auto* dist = std::get_if<DegreeDistribution>(&source)) return *dist;
  if (const auto* seq = std::get_if<DegreeSequence>(&source)) return DegreeDistribution::empirical(*seq);
  if (const auto* nc = std::get_if<NearCriticalSource>(&source)) return nc->base;
  throw Error(ErrorKind::InvalidArgument, "experiment source is not set");
}

}  // namespace

SimulationOutcome simulate(const ExperimentConfig& config) {
  auto result = run_replicas(config);
  if (const auto* nc = std::get_if<NearCriticalSource>(&config.source)) {
    auto prediction =
        predict_near_critical(nc->base, config.n, result.alpha_n, kDefaultCriticalTolerance,
                              config.vk_limit);
    auto comparison = compare(result, prediction, config.tolerances);
    return {std::move(result), std::move(prediction), std::move(comparison)};
  }
  auto report = analyze(reference_law(config.source), kDefaultXiTolerance, config.vk_limit);
  auto comparison = compare(result, report, config.tolerances);
  return {std::move(result), std::move(report), std::move(comparison)};
}

Json to_json(const Prediction& prediction) {
  return std::visit([](const auto& p) { return to_json(p); }, prediction);
}

Json to_json(const SimulationOutcome& outcome, const ExperimentConfig& config) {
  Json j = to_json(outcome.comparison);
  j["seed"] = config.seed;
  j["replicas"] = config.replicas;
  j["graph_mode"] = std::string(to_string(config.graph_mode));
  j["theory"] = to_json(outcome.theory);
  j["result"] = to_json(outcome.result);
  return j;
}

TrajectoryOutcome run_trajectory(const ExperimentConfig& config, const TraceSpec& spec,
                                 bool near_critical) {
  Rng rng = make_stream(config.seed, 0);
  std::optional<DegreeSequence> seq;
  if (const auto* s = std::get_if<DegreeSequence>(&config.source)) {
    seq = *s;
  } else if (const auto* dist = std::get_if<DegreeDistribution>(&config.source)) {
    if (config.n == 0) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
    seq = sample_iid(*dist, config.n, rng);
  } else if (const auto* nc = std::get_if<NearCriticalSource>(&config.source)) {
    seq = near_critical_sequence(nc->base, config.n, nc->target_alpha).sequence;
  } else {
    throw Error(ErrorKind::InvalidArgument, "experiment source is not set");
  }

  near_critical = near_critical || spec.rescaled_t0.has_value();
  TraceSpec effective = spec;
  double t0 = 0;
  if (near_critical) {
    if (!(seq->alpha() > 0.0) || !(seq->beta() > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "the rescaled trajectory needs alpha_n > 0 and beta_n > 0");
    }
    t0 = spec.rescaled_t0.value_or(4.0 / seq->beta());
    effective.rescaled_t0 = t0;
  }
  const auto times = effective.times(*seq);
  auto explored = explore(*seq, rng, spec.mode, times);

  auto reference = spec.empirical_reference ? empirical_gf(*seq)
                                            : GeneratingFunctions(reference_law(config.source));
  TrajectoryOutcome out{*seq, std::move(explored.trace), reference, {}, 0, false, 0, {}, {}, 0, false};
  out.near_critical = near_critical;
  out.t0 = t0;
  if (out.trace.mode == ExplorationMode::Timed) {
    out.fluid = trace_deviation(out.trace, out.reference, spec.max_k);
    out.fluid_worst = std::max({out.fluid.living, out.fluid.sleeping_vertices_tilde,
                                out.fluid.sleeping_tilde, out.fluid.active});
  }
  if (near_critical) {
    out.rescaled = rescaled_near_critical_deviation(out.trace, *seq, t0);
    out.drift = rescaled_drift_deviation(out.trace, *seq, t0);
    out.tolerance = spec.rescaled_tolerance;
    out.pass = *out.rescaled < out.tolerance;
  } else {
    if (out.trace.mode != ExplorationMode::Timed) {
      throw Error(ErrorKind::ModeMismatch, "fluid-limit deviations need a timed trace");
    }
    out.tolerance = spec.tolerance;
    out.pass = out.fluid_worst < out.tolerance;
  }
  return out;
}

Json to_json(const TrajectoryOutcome& outcome) {
  Json j;
  j["mode"] = std::string(to_string(outcome.trace.mode));
  j["n"] = outcome.sequence.n();
  j["m"] = outcome.sequence.m();
  j["alpha_n"] = outcome.sequence.alpha();
  j["beta_n"] = outcome.sequence.beta();
  j["near_critical"] = outcome.near_critical;
  j["fluid"] = to_json(outcome.fluid);
  j["fluid_worst"] = outcome.fluid_worst;
  if (outcome.near_critical) {
    j["rescaled"] = {{"t0", outcome.t0},
                     {"parabola_deviation", *outcome.rescaled},
                     {"drift_deviation", *outcome.drift}};
  }
  j["tolerance"] = outcome.tolerance;
  j["pass"] = outcome.pass;
  return j;
}

}  // namespace gcl
