#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcl/degree_model.hpp"
#include "gcl/experiments.hpp"
#include "gcl/exploration.hpp"
#include "gcl/theory.hpp"

namespace gcl {

using Json = nlohmann::ordered_json;

// Degree files: "k<TAB>n_k" per line, ascending k, '#' starts a comment.
DegreeSequence parse_degree_text(std::istream& in, const std::string& origin = "<input>");
DegreeSequence read_degree_file(const std::filesystem::path& path);
void write_degree_file(const DegreeSequence& seq, const std::filesystem::path& path);

// {"kind": "poisson", "lambda": 2.0} | {"kind": "finite", "pk": {"1": 0.5, "3": 0.5}}
// | {"kind": "power_law", "exponent": 3.5, "cutoff": 1000}
DegreeDistribution parse_distribution(const Json& j);
Json to_json(const DegreeDistribution& dist);

Json to_json(const TheoryReport& report);
Json to_json(const NearCriticalPrediction& prediction);
Json to_json(const ComparisonReport& report);
Json to_json(const DeviationReport& report);
Json to_json(const ExperimentResult& result);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const Json& j, const std::filesystem::path& path);

inline constexpr int kConfigSchemaVersion = 1;

// "trace" section of an experiment config.
struct TraceSpec {
  ExplorationMode mode = ExplorationMode::Timed;
  double t_max = 2.0;           // checkpoints on [0, t_max]
  std::size_t points = 201;
  std::optional<double> rescaled_t0;  // near-critical: checkpoints alpha_n * t, t in [0, t0]
  std::vector<Degree> ks = {1, 2, 3};
  std::optional<Degree> max_k;  // deviation over V~_k, k <= max_k
  bool empirical_reference = false;  // compare against g_n rather than the law
  double tolerance = 0.01;           // sup deviation threshold
  double rescaled_tolerance = 0.15;

  std::vector<double> times(const DegreeSequence& seq) const;
};

struct SweepSpec {
  std::vector<std::uint64_t> n_list;
  std::vector<double> alpha_list;
};

struct ConfigFile {
  ExperimentConfig experiment;
  std::optional<TraceSpec> trace;
  std::optional<SweepSpec> sweep;
};

// Relative "path" entries (degfile sources) resolve against base_dir.
ConfigFile parse_config(const Json& j, const std::filesystem::path& base_dir = {});

}  // namespace gcl
