#include "gcl/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gcl/error.hpp"

namespace gcl {

namespace {

[[noreturn]] void parse_error(const std::string& origin, const std::string& what) {
  throw Error(ErrorKind::Parse, origin + ": " + what);
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto a : allowed) known = known || key == a;
    if (!known) parse_error(where, "unknown key \"" + key + "\"");
  }
}

Degree parse_degree_key(const std::string& key, const std::string& where) {
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || key.empty() || key[0] == '-' || value > 0xffffffffUL) {
    parse_error(where, "degree key \"" + key + "\" is not a non-negative integer");
  }
  return static_cast<Degree>(value);
}

}  // namespace

// ---------------------------------------------------------------------------
// Degree files

DegreeSequence parse_degree_text(std::istream& in, const std::string& origin) {
  DegreeCounts counts;
  std::string line;
  std::size_t line_no = 0;
  std::optional<Degree> previous;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long long k = -1;
    long long count = -1;
    std::string extra;
    if (!(fields >> k >> count) || (fields >> extra) || k < 0 || count < 0) {
      parse_error(origin + ":" + std::to_string(line_no), "expected \"k<TAB>n_k\"");
    }
    if (previous && static_cast<Degree>(k) <= *previous) {
      parse_error(origin + ":" + std::to_string(line_no), "degrees must be strictly ascending");
    }
    previous = static_cast<Degree>(k);
    counts[static_cast<Degree>(k)] = static_cast<std::uint64_t>(count);
  }
  return DegreeSequence::from_counts(counts);
}

DegreeSequence read_degree_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return parse_degree_text(in, path.string());
}

void write_degree_file(const DegreeSequence& seq, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << "# k\tn_k\n";
  for (const auto& [k, count] : seq.counts()) out << k << '\t' << count << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Distributions

DegreeDistribution parse_distribution(const Json& j) {
  const std::string where = "distribution";
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    parse_error(where, "expected an object with a string \"kind\"");
  }
  const auto kind = j["kind"].get<std::string>();
  try {
    if (kind == "poisson") {
      reject_unknown_keys(j, {"kind", "lambda"}, where);
      return DegreeDistribution::poisson(j.at("lambda").get<double>());
    }
    if (kind == "finite") {
      reject_unknown_keys(j, {"kind", "pk"}, where);
      std::map<Degree, double> pk;
      for (const auto& [key, value] : j.at("pk").items()) {
        pk[parse_degree_key(key, where)] = value.get<double>();
      }
      return DegreeDistribution::finite(pk);
    }
    if (kind == "power_law") {
      reject_unknown_keys(j, {"kind", "exponent", "cutoff"}, where);
      return DegreeDistribution::power_law(j.at("exponent").get<double>(),
                                           j.at("cutoff").get<Degree>());
    }
  } catch (const nlohmann::json::exception& e) {
    parse_error(where, e.what());
  }
  parse_error(where, "unknown kind \"" + kind + "\"");
}

Json to_json(const DegreeDistribution& dist) {
  Json j;
  switch (dist.tail_kind()) {
    case TailKind::Poisson:
      j["kind"] = "poisson";
      j["lambda"] = dist.parameter();
      break;
    case TailKind::TruncatedPowerLaw:
      j["kind"] = "power_law";
      j["exponent"] = dist.parameter();
      j["cutoff"] = dist.cutoff();
      break;
    case TailKind::FiniteSupport: {
      j["kind"] = "finite";
      Json pk = Json::object();
      const auto p = dist.probabilities();
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] > 0) pk[std::to_string(k)] = p[k];
      }
      j["pk"] = pk;
      break;
    }
  }
  return j;
}

// ---------------------------------------------------------------------------
// Reports

Json to_json(const TheoryReport& report) {
  Json j;
  j["regime"] = std::string(to_string(report.regime));
  j["lambda"] = report.lambda;
  j["criticality"] = report.criticality;
  j["xi"] = report.xi ? Json(*report.xi) : Json(nullptr);
  j["tau"] = finite_or_null(report.tau);
  j["tau_infinite"] = report.tau_infinite();
  j["v_frac"] = report.v_frac ? Json(*report.v_frac) : Json(nullptr);
  j["e_frac"] = report.e_frac ? Json(*report.e_frac) : Json(nullptr);
  Json vk = Json::object();
  for (const auto& [k, v] : report.vk_frac) vk[std::to_string(k)] = v;
  j["vk_frac"] = vk;
  return j;
}

Json to_json(const NearCriticalPrediction& p) {
  Json j;
  j["lambda"] = p.lambda;
  j["beta"] = p.beta;
  j["n"] = p.n;
  j["alpha_n"] = p.alpha_n;
  j["coefficient"] = p.coefficient();
  j["v_c1"] = p.v_c1;
  j["e_c1"] = p.e_c1;
  Json vk = Json::object();
  for (const auto& [k, v] : p.vk_c1) vk[std::to_string(k)] = v;
  j["vk_c1"] = vk;
  j["tau_scaled"] = p.tau_scaled;
  j["validity"] = {{"n_third_alpha", p.n_third_alpha}};
  return j;
}

Json to_json(const ComparisonReport& report) {
  Json j;
  j["all_pass"] = report.all_pass();
  j["supercritical_abs"] = report.supercritical_abs;
  const auto& t = report.tolerances;
  j["tolerances"] = {
      {"supercritical_abs", t.supercritical_abs ? Json(*t.supercritical_abs) : Json("auto")},
      {"v2_frac", t.v2_frac},
      {"subcritical_v1", t.subcritical_v1},
      {"near_critical_rel", t.near_critical_rel},
      {"v2_over_v1", t.v2_over_v1},
  };
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"statistic", e.statistic},
                       {"reduction", e.reduction},
                       {"empirical", e.empirical},
                       {"theoretical", e.theoretical},
                       {"gap", e.gap},
                       {"relative_gap", e.relative_gap},
                       {"tolerance", e.tolerance},
                       {"relative", e.relative},
                       {"upper_bound", e.upper_bound},
                       {"pass", e.pass}});
  }
  j["entries"] = entries;
  j["notes"] = report.notes;
  return j;
}

Json to_json(const DeviationReport& r) {
  Json j;
  j["living"] = r.living;
  j["sleeping_vertices_tilde"] = r.sleeping_vertices_tilde;
  j["sleeping_tilde"] = r.sleeping_tilde;
  j["active"] = r.active;
  j["tilde_gap"] = r.tilde_gap;
  j["max_k"] = r.max_k;
  j["tau"] = finite_or_null(r.tau);
  j["tau_window"] = r.tau_window;
  j["checkpoints"] = r.checkpoints;
  return j;
}

Json to_json(const ExperimentResult& result) {
  Json j;
  j["normalization"] =
      result.normalization == Normalization::NearCritical ? "near_critical" : "fraction_of_n";
  j["alpha_n"] = result.alpha_n;
  j["replicas"] = result.replicas.size();
  j["failed_replicas"] = result.failed_replicas;
  Json agg = Json::object();
  for (const auto& [key, a] : result.aggregates) {
    agg[key] = {{"mean", a.mean}, {"std", a.std}, {"min", a.min}, {"max", a.max}, {"count", a.count}};
  }
  j["aggregates"] = agg;
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_error(path.string(), e.what());
  }
}

void write_json_file(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Experiment configs

std::vector<double> TraceSpec::times(const DegreeSequence& seq) const {
  if (rescaled_t0) return rescaled_checkpoint_times(seq, *rescaled_t0, points);
  std::vector<double> out;
  out.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    out.push_back(points == 1 ? 0.0 : t_max * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return out;
}

namespace {

ExperimentSource parse_source(const Json& j, const std::filesystem::path& base_dir) {
  const std::string where = "source";
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    parse_error(where, "expected an object with a string \"kind\"");
  }
  const auto kind = j["kind"].get<std::string>();
  if (kind == "sequence") {
    reject_unknown_keys(j, {"kind", "counts"}, where);
    DegreeCounts counts;
    for (const auto& [key, value] : j.at("counts").items()) {
      counts[parse_degree_key(key, where)] = value.get<std::uint64_t>();
    }
    return DegreeSequence::from_counts(counts);
  }
  if (kind == "degfile") {
    reject_unknown_keys(j, {"kind", "path"}, where);
    std::filesystem::path path = j.at("path").get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    return read_degree_file(path);
  }
  if (kind == "near_critical") {
    reject_unknown_keys(j, {"kind", "base", "target_alpha"}, where);
    return NearCriticalSource{parse_distribution(j.at("base")), j.at("target_alpha").get<double>()};
  }
  return parse_distribution(j);
}

}  // namespace

ConfigFile parse_config(const Json& j, const std::filesystem::path& base_dir) {
  const std::string where = "config";
  if (!j.is_object()) parse_error(where, "expected a JSON object");
  reject_unknown_keys(j, {"schema_version", "description", "source", "n", "replicas", "seed",
                          "graph_mode", "max_attempts", "vk_limit", "threads", "tolerances",
                          "trace", "sweep"},
                      where);
  ConfigFile out;
  try {
    const int version = j.value("schema_version", kConfigSchemaVersion);
    if (version != kConfigSchemaVersion) {
      parse_error(where, "unsupported schema_version " + std::to_string(version));
    }
    if (!j.contains("source")) parse_error(where, "missing \"source\"");
    auto& e = out.experiment;
    e.source = parse_source(j["source"], base_dir);
    e.n = j.value("n", std::uint64_t{0});
    e.replicas = j.value("replicas", std::uint32_t{1});
    e.seed = j.value("seed", std::uint64_t{0});
    const auto mode = j.value("graph_mode", std::string("multigraph"));
    if (mode == "multigraph") {
      e.graph_mode = GraphMode::Multigraph;
    } else if (mode == "simple") {
      e.graph_mode = GraphMode::Simple;
    } else {
      parse_error(where, "graph_mode must be \"multigraph\" or \"simple\"");
    }
    e.max_attempts = j.value("max_attempts", std::uint64_t{1000});
    e.vk_limit = j.value("vk_limit", kDefaultVkLimit);
    e.threads = j.value("threads", 1u);
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      reject_unknown_keys(t, {"supercritical_abs", "v2_frac", "subcritical_v1", "near_critical_rel",
                              "v2_over_v1"},
                          "tolerances");
      if (t.contains("supercritical_abs")) e.tolerances.supercritical_abs = t["supercritical_abs"].get<double>();
      e.tolerances.v2_frac = t.value("v2_frac", e.tolerances.v2_frac);
      e.tolerances.subcritical_v1 = t.value("subcritical_v1", e.tolerances.subcritical_v1);
      e.tolerances.near_critical_rel = t.value("near_critical_rel", e.tolerances.near_critical_rel);
      e.tolerances.v2_over_v1 = t.value("v2_over_v1", e.tolerances.v2_over_v1);
    }
    if (j.contains("trace")) {
      const auto& t = j["trace"];
      reject_unknown_keys(t, {"mode", "t_max", "points", "rescaled_t0", "ks", "max_k", "reference",
                              "tolerance", "rescaled_tolerance"},
                          "trace");
      TraceSpec spec;
      const auto tmode = t.value("mode", std::string("timed"));
      if (tmode == "timed") {
        spec.mode = ExplorationMode::Timed;
      } else if (tmode == "combinatorial") {
        spec.mode = ExplorationMode::Combinatorial;
      } else {
        parse_error("trace", "mode must be \"timed\" or \"combinatorial\"");
      }
      spec.t_max = t.value("t_max", spec.t_max);
      spec.points = t.value("points", spec.points);
      if (t.contains("rescaled_t0")) spec.rescaled_t0 = t["rescaled_t0"].get<double>();
      if (t.contains("ks")) spec.ks = t["ks"].get<std::vector<Degree>>();
      if (t.contains("max_k")) spec.max_k = t["max_k"].get<Degree>();
      const auto reference = t.value("reference", std::string("limit"));
      if (reference != "limit" && reference != "empirical") {
        parse_error("trace", "reference must be \"limit\" or \"empirical\"");
      }
      spec.empirical_reference = reference == "empirical";
      spec.tolerance = t.value("tolerance", spec.tolerance);
      spec.rescaled_tolerance = t.value("rescaled_tolerance", spec.rescaled_tolerance);
      out.trace = spec;
    }
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      reject_unknown_keys(s, {"n_list", "alpha_list"}, "sweep");
      out.sweep = SweepSpec{s.value("n_list", std::vector<std::uint64_t>{}),
                            s.value("alpha_list", std::vector<double>{})};
    }
  } catch (const nlohmann::json::exception& e) {
    parse_error(where, e.what());
  }
  return out;
}

}  // namespace gcl
