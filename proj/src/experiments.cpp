#include "gcl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <thread>

#include "gcl/config_model.hpp"
#include "gcl/error.hpp"
#include "gcl/svg_plot.hpp"

namespace gcl {

std::string_view to_string(GraphMode mode) {
  return mode == GraphMode::Simple ? "simple" : "multigraph";
}

const Aggregate& ExperimentResult::at(const std::string& key) const {
  const auto it = aggregates.find(key);
  if (it == aggregates.end()) throw Error(ErrorKind::InvalidArgument, "no aggregate named " + key);
  return it->second;
}

namespace {

ReplicaRecord summarize_replica(const DegreeSequence& seq, const ComponentStats& stats,
                                Degree vk_limit) {
  ReplicaRecord r;
  r.n = seq.n();
  r.m = seq.m();
  r.alpha_n = seq.alpha();
  r.component_count = stats.component_count();
  if (!stats.components.empty()) {
    const auto& c1 = stats.components[0];
    r.v1 = c1.vertices;
    r.e1 = c1.edges;
    for (const auto& [k, count] : c1.degree_histogram) {
      if (vk_limit == 0 || k <= vk_limit) r.vk1[k] = count;
    }
  }
  if (stats.components.size() > 1) {
    r.v2 = stats.components[1].vertices;
    r.e2 = stats.components[1].edges;
  }
  return r;
}

ReplicaRecord run_one(const ExperimentConfig& config, const DegreeSequence* fixed,
                      std::uint32_t replica) {
  Rng rng = make_stream(config.seed, replica);
  std::optional<DegreeSequence> sampled;
  if (!fixed) sampled = sample_iid(std::get<DegreeDistribution>(config.source), config.n, rng);
  const DegreeSequence& seq = fixed ? *fixed : *sampled;

  try {
    if (config.graph_mode == GraphMode::Simple) {
      auto sample = sample_simple(seq, rng, config.max_attempts);
      auto record = summarize_replica(seq, components_unionfind(sample.graph), config.vk_limit);
      record.attempts = sample.attempts;
      return record;
    }
    const auto result = explore(seq, rng, ExplorationMode::Combinatorial);
    return summarize_replica(seq, result.components, config.vk_limit);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MaxAttemptsExceeded) throw;
    ReplicaRecord failed;
    failed.ok = false;
    failed.error = e.what();
    failed.n = seq.n();
    failed.m = seq.m();
    failed.alpha_n = seq.alpha();
    failed.attempts = config.max_attempts;
    return failed;
  }
}

Aggregate fold(const std::vector<double>& values) {
  Aggregate a;
  a.count = values.size();
  if (values.empty()) return a;
  double sum = 0;
  a.min = a.max = values.front();
  for (const double v : values) {
    sum += v;
    a.min = std::min(a.min, v);
    a.max = std::max(a.max, v);
  }
  a.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0;
    for (const double v : values) ss += (v - a.mean) * (v - a.mean);
    a.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return a;
}

}  // namespace

ExperimentResult aggregate(Normalization normalization, double alpha_n,
                           std::vector<ReplicaRecord> replicas) {
  ExperimentResult result;
  result.normalization = normalization;
  result.alpha_n = alpha_n;
  result.replicas = std::move(replicas);

  std::set<Degree> ks;
  std::vector<const ReplicaRecord*> ok;
  for (const auto& r : result.replicas) {
    if (!r.ok) {
      ++result.failed_replicas;
      continue;
    }
    ok.push_back(&r);
    for (const auto& [k, count] : r.vk1) ks.insert(k);
  }
  if (ok.empty()) return result;

  auto collect = [&](auto&& value) {
    std::vector<double> values;
    values.reserve(ok.size());
    for (const auto* r : ok) values.push_back(value(*r));
    return fold(values);
  };
  auto frac = [](std::uint64_t count, const ReplicaRecord& r) {
    return static_cast<double>(count) / static_cast<double>(r.n);
  };
  auto vk = [](const ReplicaRecord& r, Degree k) {
    const auto it = r.vk1.find(k);
    return it == r.vk1.end() ? 0.0 : static_cast<double>(it->second);
  };

  auto& agg = result.aggregates;
  agg["v1_frac"] = collect([&](const ReplicaRecord& r) { return frac(r.v1, r); });
  agg["e1_frac"] = collect([&](const ReplicaRecord& r) { return frac(r.e1, r); });
  agg["v2_frac"] = collect([&](const ReplicaRecord& r) { return frac(r.v2, r); });
  agg["e2_frac"] = collect([&](const ReplicaRecord& r) { return frac(r.e2, r); });
  agg["v2_over_v1"] = collect([](const ReplicaRecord& r) {
    return r.v1 == 0 ? 0.0 : static_cast<double>(r.v2) / static_cast<double>(r.v1);
  });
  agg["attempts"] = collect([](const ReplicaRecord& r) { return static_cast<double>(r.attempts); });
  for (const Degree k : ks) {
    agg["vk1_frac_" + std::to_string(k)] =
        collect([&](const ReplicaRecord& r) { return vk(r, k) / static_cast<double>(r.n); });
  }
  if (normalization == Normalization::NearCritical) {
    auto unit = [](const ReplicaRecord& r) { return static_cast<double>(r.n) * r.alpha_n; };
    agg["v1_alpha"] = collect([&](const ReplicaRecord& r) { return r.v1 / unit(r); });
    agg["e1_alpha"] = collect([&](const ReplicaRecord& r) { return r.e1 / unit(r); });
    for (const Degree k : ks) {
      agg["vk1_alpha_" + std::to_string(k)] =
          collect([&](const ReplicaRecord& r) { return vk(r, k) / unit(r); });
    }
  }
  return result;
}

ExperimentResult run_replicas(const ExperimentConfig& config) {
  if (config.replicas == 0) throw Error(ErrorKind::InvalidArgument, "replicas must be >= 1");
  if (std::holds_alternative<std::monostate>(config.source)) {
    throw Error(ErrorKind::InvalidArgument, "experiment source is not set");
  }

  std::optional<DegreeSequence> fixed;
  Normalization normalization = Normalization::FractionOfN;
  double alpha_n = 0;
  if (const auto* seq = std::get_if<DegreeSequence>(&config.source)) {
    fixed = *seq;
  } else if (const auto* nc = std::get_if<NearCriticalSource>(&config.source)) {
    auto built = near_critical_sequence(nc->base, config.n, nc->target_alpha);
    if (!(built.achieved_alpha > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "near-critical runs need alpha_n > 0");
    }
    alpha_n = built.achieved_alpha;
    fixed = std::move(built.sequence);
    normalization = Normalization::NearCritical;
  } else if (config.n == 0) {
    throw Error(ErrorKind::InvalidArgument, "n must be >= 1 when sampling from a distribution");
  }

  std::vector<ReplicaRecord> records(config.replicas);
  const DegreeSequence* shared = fixed ? &*fixed : nullptr;
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, config.replicas));
  if (threads == 1) {
    for (std::uint32_t i = 0; i < config.replicas; ++i) records[i] = run_one(config, shared, i);
  } else {
    std::atomic<std::uint32_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::uint32_t i = next++; i < config.replicas; i = next++) {
            records[i] = run_one(config, shared, i);
          }
        } catch (...) {
          errors[t] = std::current_exception();
          next = config.replicas;
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  auto result = aggregate(normalization, alpha_n, std::move(records));
  if (result.failed_replicas == result.replicas.size()) {
    throw Error(ErrorKind::MaxAttemptsExceeded, "every replica failed to produce a simple graph");
  }
  return result;
}

// ---------------------------------------------------------------------------
// Comparison

bool ComparisonReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
}

namespace {

ComparisonEntry make_entry(const ExperimentResult& result, const std::string& key,
                           bool use_max, double theoretical, double tolerance, bool relative,
                           bool upper_bound) {
  ComparisonEntry e;
  e.statistic = key;
  e.reduction = use_max ? "max" : "mean";
  const auto it = result.aggregates.find(key);
  if (it != result.aggregates.end()) e.empirical = use_max ? it->second.max : it->second.mean;
  e.theoretical = theoretical;
  e.gap = e.empirical - theoretical;
  e.relative_gap = theoretical != 0.0 ? e.gap / std::abs(theoretical) : 0.0;
  e.tolerance = tolerance;
  e.relative = relative;
  e.upper_bound = upper_bound;
  const double measured = relative ? e.relative_gap : e.gap;
  e.pass = upper_bound ? measured <= tolerance : std::abs(measured) <= tolerance;
  return e;
}

const ReplicaRecord& first_ok(const ExperimentResult& result) {
  for (const auto& r : result.replicas) {
    if (r.ok) return r;
  }
  throw Error(ErrorKind::InvalidArgument, "result has no successful replicas");
}

}  // namespace

ComparisonReport compare(const ExperimentResult& result, const TheoryReport& theory,
                         const Tolerances& tolerances) {
  if (result.normalization != Normalization::FractionOfN) {
    throw Error(ErrorKind::UnitMismatch,
                "near-critical results are in units of n*alpha_n; compare with a near-critical "
                "prediction");
  }
  const auto& ref = first_ok(result);
  ComparisonReport report;
  report.tolerances = tolerances;
  const double n = static_cast<double>(ref.n);
  const double lambda_n = 2.0 * static_cast<double>(ref.m) / n;
  report.supercritical_abs =
      tolerances.supercritical_abs.value_or(5.0 / std::sqrt(n) * (1.0 + lambda_n));

  switch (theory.regime) {
    case Regime::Supercritical:
    case Regime::DegenerateP1Zero: {
      const double tol = report.supercritical_abs;
      report.entries.push_back(make_entry(result, "v1_frac", false, *theory.v_frac, tol, false, false));
      report.entries.push_back(make_entry(result, "e1_frac", false, *theory.e_frac, tol, false, false));
      for (const auto& [k, value] : theory.vk_frac) {
        if (k == 0) continue;
        report.entries.push_back(
            make_entry(result, "vk1_frac_" + std::to_string(k), false, value, tol, false, false));
      }
      report.entries.push_back(make_entry(result, "v2_frac", true, 0.0, tolerances.v2_frac, false, true));
      report.entries.push_back(make_entry(result, "e2_frac", true, 0.0, tolerances.v2_frac, false, true));
      break;
    }
    case Regime::Subcritical:
      report.entries.push_back(
          make_entry(result, "v1_frac", true, 0.0, tolerances.subcritical_v1, false, true));
      break;
    case Regime::Critical:
      report.notes.push_back(
          "critical law: v1/n tends to 0 only at rate n^{-1/3}; no fixed-tolerance check applied");
      break;
    case Regime::DegenerateAllDeg2:
      report.notes.push_back(
          "all mass on degrees 0 and 2: the largest component has no deterministic limit");
      break;
  }
  return report;
}

ComparisonReport compare(const ExperimentResult& result, const NearCriticalPrediction& theory,
                         const Tolerances& tolerances) {
  if (result.normalization != Normalization::NearCritical) {
    throw Error(ErrorKind::UnitMismatch,
                "near-critical predictions are in units of n*alpha_n; the result is in fractions "
                "of n");
  }
  ComparisonReport report;
  report.tolerances = tolerances;
  const double coefficient = theory.coefficient();
  const double rel = tolerances.near_critical_rel;
  report.entries.push_back(make_entry(result, "v1_alpha", false, coefficient, rel, true, false));
  report.entries.push_back(make_entry(result, "e1_alpha", false, coefficient, rel, true, false));
  report.entries.push_back(
      make_entry(result, "v2_over_v1", false, 0.0, tolerances.v2_over_v1, false, true));
  const double scale = theory.n * theory.alpha_n;
  for (const auto& [k, value] : theory.vk_c1) {
    const auto key = "vk1_alpha_" + std::to_string(k);
    const auto it = result.aggregates.find(key);
    char note[160];
    std::snprintf(note, sizeof note, "%s: empirical %.6g vs predicted %.6g (diagnostic)",
                  key.c_str(), it == result.aggregates.end() ? 0.0 : it->second.mean,
                  value / scale);
    report.notes.emplace_back(note);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sweep

std::vector<SweepRow> near_critical_sweep(const DegreeDistribution& base,
                                          const std::vector<std::uint64_t>& n_list,
                                          const std::vector<double>& alpha_list,
                                          std::uint32_t replicas, std::uint64_t seed,
                                          unsigned threads) {
  std::vector<SweepRow> rows;
  if (n_list.empty() || alpha_list.empty()) return rows;
  const double predicted = 2.0 * base.mean() / base.beta();
  std::uint64_t index = 0;
  for (const auto n : n_list) {
    for (const double alpha : alpha_list) {
      ExperimentConfig config;
      config.source = NearCriticalSource{base, alpha};
      config.n = n;
      config.replicas = replicas;
      config.seed = derive_seed(seed, index++);
      config.threads = threads;
      const auto result = run_replicas(config);
      SweepRow row;
      row.n = n;
      row.alpha_n = result.alpha_n;
      row.n_third_alpha = std::cbrt(static_cast<double>(n)) * result.alpha_n;
      row.mean_v1_alpha = result.at("v1_alpha").mean;
      row.predicted = predicted;
      row.relative_gap = (row.mean_v1_alpha - predicted) / predicted;
      row.mean_v2_over_v1 = result.at("v2_over_v1").mean;
      row.within_hypotheses = row.n_third_alpha >= kSweepHypothesisThreshold;
      rows.push_back(row);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace

void write_results_csv(const ExperimentResult& result, const std::filesystem::path& path) {
  std::set<Degree> ks;
  for (const auto& r : result.replicas) {
    for (const auto& [k, c] : r.vk1) ks.insert(k);
  }
  auto out = open_for_write(path);
  out << "replica,ok,n,m,alpha_n,v1,e1,v2,e2,attempts,component_count,v1_frac,e1_frac,v2_frac,e2_frac";
  for (const Degree k : ks) out << ",vk1_" << k;
  out << '\n';
  for (std::size_t i = 0; i < result.replicas.size(); ++i) {
    const auto& r = result.replicas[i];
    const double n = static_cast<double>(r.n);
    out << i << ',' << (r.ok ? 1 : 0) << ',' << r.n << ',' << r.m << ',' << num(r.alpha_n) << ','
        << r.v1 << ',' << r.e1 << ',' << r.v2 << ',' << r.e2 << ',' << r.attempts << ','
        << r.component_count << ',' << num(r.v1 / n) << ',' << num(r.e1 / n) << ','
        << num(r.v2 / n) << ',' << num(r.e2 / n);
    for (const Degree k : ks) {
      const auto it = r.vk1.find(k);
      out << ',' << (it == r.vk1.end() ? 0 : it->second);
    }
    out << '\n';
  }
  finish(out, path);
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "n,alpha_n,n_third_alpha,mean_v1_alpha,predicted,relative_gap,mean_v2_over_v1,"
         "within_hypotheses\n";
  for (const auto& r : rows) {
    out << r.n << ',' << num(r.alpha_n) << ',' << num(r.n_third_alpha) << ','
        << num(r.mean_v1_alpha) << ',' << num(r.predicted) << ',' << num(r.relative_gap) << ','
        << num(r.mean_v2_over_v1) << ',' << (r.within_hypotheses ? 1 : 0) << '\n';
  }
  finish(out, path);
}

void write_trace_csv(const ExplorationTrace& trace, const std::vector<Degree>& ks,
                     const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "t,L,A,S,S_tilde";
  for (const Degree k : ks) out << ",V_" << k;
  for (const Degree k : ks) out << ",V_tilde_" << k;
  out << '\n';
  auto at = [](const std::vector<std::uint64_t>& v, Degree k) -> std::uint64_t {
    return k < v.size() ? v[k] : 0;
  };
  for (const auto& c : trace.checkpoints) {
    out << num(c.time) << ',' << c.living << ',' << c.active << ',' << c.sleeping << ','
        << c.sleeping_tilde;
    for (const Degree k : ks) out << ',' << at(c.sleeping_vertices, k);
    for (const Degree k : ks) out << ',' << at(c.sleeping_vertices_tilde, k);
    out << '\n';
  }
  finish(out, path);
}

void write_c1_times_csv(const ExplorationTrace& trace, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "index,time\n";
  for (std::size_t i = 0; i < trace.c1_times.size(); ++i) out << i << ',' << num(trace.c1_times[i]) << '\n';
  finish(out, path);
}

// ---------------------------------------------------------------------------
// Plots

void plot_trace_svg(const ExplorationTrace& trace, const GeneratingFunctions& gf,
                    const std::filesystem::path& path) {
  SvgPlot plot("Active half-edges against the fluid limit", "t", "fraction of n");
  const double n = static_cast<double>(trace.n);
  SvgPlot::Series active{"A(t)/n", {}, "#1f77b4"};
  SvgPlot::Series active_tilde{"A~(t)/n", {}, "#ff7f0e"};
  for (const auto& c : trace.checkpoints) {
    active.points.emplace_back(c.time, c.active / n);
    active_tilde.points.emplace_back(c.time, static_cast<double>(c.active_tilde()) / n);
  }
  SvgPlot::Series limit{"H(exp(-t))", {}, "#2ca02c", true};
  if (!trace.checkpoints.empty()) {
    const double t_end = trace.checkpoints.back().time;
    const double t_begin = trace.checkpoints.front().time;
    constexpr int kSamples = 400;
    for (int i = 0; i <= kSamples; ++i) {
      const double t = t_begin + (t_end - t_begin) * i / kSamples;
      limit.points.emplace_back(t, gf.H(std::exp(-t)));
    }
  }
  plot.add_series(std::move(active));
  plot.add_series(std::move(active_tilde));
  plot.add_series(std::move(limit));
  plot.add_horizontal_line(0.0, "", "#999999");
  const Regime regime = classify(gf.distribution());
  if (regime == Regime::Supercritical) {
    plot.add_vertical_line(-std::log(solve_xi(gf.distribution())), "tau = -ln xi", "#d62728");
  }
  plot.write(path);
}

void plot_rescaled_svg(const ExplorationTrace& trace, const DegreeSequence& seq, double t0,
                       const std::filesystem::path& path) {
  const double alpha = seq.alpha();
  const double beta = seq.beta();
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "rescaling needs alpha_n > 0");
  const auto gf = empirical_gf(seq);
  const double scale = 1.0 / (alpha * alpha * static_cast<double>(trace.n));
  SvgPlot plot("Rescaled exploration near criticality", "t", "alpha^-2 n^-1 A~(alpha t)");
  SvgPlot::Series observed{"observed", {}, "#1f77b4"};
  for (const auto& c : trace.checkpoints) {
    const double t = c.time / alpha;
    if (t > t0 * (1.0 + 1e-12)) break;
    observed.points.emplace_back(t, scale * static_cast<double>(c.active_tilde()));
  }
  SvgPlot::Series parabola{"t - beta_n t^2/2", {}, "#2ca02c", true};
  SvgPlot::Series drift{"alpha^-2 H_n(exp(-alpha t))", {}, "#9467bd", true};
  constexpr int kSamples = 400;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = t0 * i / kSamples;
    parabola.points.emplace_back(t, t - 0.5 * beta * t * t);
    drift.points.emplace_back(t, gf.H(std::exp(-alpha * t)) / (alpha * alpha));
  }
  plot.add_series(std::move(observed));
  plot.add_series(std::move(parabola));
  plot.add_series(std::move(drift));
  plot.add_horizontal_line(0.0, "", "#999999");
  plot.add_vertical_line(2.0 / beta, "2/beta_n", "#d62728");
  plot.write(path);
}

void plot_sweep_svg(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  SvgPlot plot("Near-critical giant component", "n^(1/3) alpha_n", "mean v1 / (n alpha_n)");
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
  std::vector<std::uint64_t> ns;
  for (const auto& r : rows) {
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
  }
  for (std::size_t i = 0; i < ns.size(); ++i) {
    SvgPlot::Series s{"n = " + std::to_string(ns[i]), {}, kColors[i % 6], false, true};
    for (const auto& r : rows) {
      if (r.n == ns[i]) s.points.emplace_back(r.n_third_alpha, r.mean_v1_alpha);
    }
    std::sort(s.points.begin(), s.points.end());
    plot.add_series(std::move(s));
  }
  if (!rows.empty()) plot.add_horizontal_line(rows.front().predicted, "2 lambda / beta", "#d62728");
  plot.add_vertical_line(kSweepHypothesisThreshold, "n^(1/3) alpha = 4", "#7f7f7f");
  plot.write(path);
}

}  // namespace gcl
