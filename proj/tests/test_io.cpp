#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcl/io.hpp"
#include "gcl/pipeline.hpp"
#include "test_support.hpp"

using namespace gcl;
using gcl::testing::error_kind;
namespace fs = std::filesystem;

namespace {

DegreeSequence parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_degree_text(in, "test");
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "gcl_io_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("degree text format") {
  const auto seq = parse_text("# degrees\n1\t500\n\n3\t500  # trailing comment\n");
  CHECK(seq.counts() == DegreeCounts{{1, 500}, {3, 500}});
  CHECK(parse_text("0 3\n2 1\n").n() == 4);

  CHECK(error_kind([] { parse_text("3\t1\n1\t2\n"); }) == ErrorKind::Parse);
  CHECK(error_kind([] { parse_text("1\t2\n1\t2\n"); }) == ErrorKind::Parse);
  CHECK(error_kind([] { parse_text("1\n"); }) == ErrorKind::Parse);
  CHECK(error_kind([] { parse_text("1\t2\t3\n"); }) == ErrorKind::Parse);
  CHECK(error_kind([] { parse_text("-1\t2\n"); }) == ErrorKind::Parse);
  CHECK(error_kind([] { parse_text("a\tb\n"); }) == ErrorKind::Parse);
  CHECK(error_kind([] { parse_text("1\t3\n"); }) == ErrorKind::OddDegreeSum);
  CHECK(error_kind([] { read_degree_file("/nonexistent/degrees.txt"); }) == ErrorKind::Io);
}

TEST_CASE("degree file round trip") {
  const auto path = scratch_dir() / "round.deg";
  const auto seq = DegreeSequence::from_counts({{0, 4}, {2, 7}, {5, 2}});
  write_degree_file(seq, path);
  CHECK(read_degree_file(path) == seq);
}

TEST_CASE("distribution json") {
  const auto finite = parse_distribution(Json::parse(R"({"kind":"finite","pk":{"1":0.5,"3":0.5}})"));
  CHECK(finite.p(1) == 0.5);
  CHECK(finite.p(3) == 0.5);
  const auto poisson = parse_distribution(Json::parse(R"({"kind":"poisson","lambda":2.0})"));
  CHECK(poisson.parameter() == 2.0);
  const auto power = parse_distribution(Json::parse(R"({"kind":"power_law","exponent":3.5,"cutoff":1000})"));
  CHECK(power.cutoff() == 1000);

  for (const auto& d : {finite, poisson, power}) {
    const auto again = parse_distribution(to_json(d));
    REQUIRE(again.probabilities().size() == d.probabilities().size());
    for (std::size_t k = 0; k < d.probabilities().size(); ++k) {
      CHECK(again.p(k) == doctest::Approx(d.p(k)).epsilon(1e-15));
    }
  }

  for (const char* bad : {R"({"kind":"gamma"})", R"({"lambda":2})", R"({"kind":"poisson"})",
                          R"({"kind":"poisson","lambda":"two"})",
                          R"({"kind":"poisson","lambda":2,"extra":1})",
                          R"({"kind":"finite","pk":{"x":1.0}})", R"([1,2])"}) {
    CAPTURE(bad);
    CHECK(error_kind([&] { parse_distribution(Json::parse(bad)); }) == ErrorKind::Parse);
  }
  CHECK(error_kind([] { parse_distribution(Json::parse(R"({"kind":"finite","pk":{"1":0.7}})")); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("theory report json") {
  const auto report = predict_supercritical(DegreeDistribution::finite({{1, 0.5}, {3, 0.5}}));
  const auto j = to_json(report);
  CHECK(j["regime"] == "Supercritical");
  CHECK(j["xi"].get<double>() == doctest::Approx(1.0 / 3));
  CHECK(j["tau_infinite"] == false);
  CHECK(j["vk_frac"]["3"].get<double>() == doctest::Approx(13.0 / 27));

  const auto cubic = to_json(predict_supercritical(DegreeDistribution::finite({{3, 1.0}})));
  CHECK(cubic["xi"] == 0.0);
  CHECK(cubic["tau"].is_null());
  CHECK(cubic["tau_infinite"] == true);

  const auto cycles = to_json(analyze(DegreeDistribution::finite({{2, 1.0}})));
  CHECK(cycles["v_frac"].is_null());
  CHECK(cycles["xi"].is_null());

  const auto near = to_json(predict_near_critical(
      DegreeDistribution::finite({{1, 0.3}, {2, 0.6}, {3, 0.1}}), 1'000'000, 0.02));
  CHECK(near["v_c1"].get<double>() == doctest::Approx(120000));
  CHECK(near["validity"]["n_third_alpha"].get<double>() == doctest::Approx(2.0));
  CHECK(near["tau_scaled"].get<double>() == doctest::Approx(10.0 / 3));
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(Json::parse(R"({
    "schema_version": 1,
    "source": {"kind": "sequence", "counts": {"1": 10, "3": 10}},
    "replicas": 3, "seed": 42, "graph_mode": "simple", "max_attempts": 7, "vk_limit": 5,
    "tolerances": {"supercritical_abs": 0.02, "v2_frac": 0.05},
    "trace": {"mode": "timed", "t_max": 1.5, "points": 11, "ks": [1, 3], "max_k": 5,
              "reference": "empirical", "tolerance": 0.02},
    "sweep": {"n_list": [1000], "alpha_list": [0.1, 0.2]}
  })"));
  const auto& e = cfg.experiment;
  CHECK(std::get<DegreeSequence>(e.source).n() == 20);
  CHECK(e.replicas == 3);
  CHECK(e.seed == 42);
  CHECK(e.graph_mode == GraphMode::Simple);
  CHECK(e.max_attempts == 7);
  CHECK(e.vk_limit == 5);
  CHECK(*e.tolerances.supercritical_abs == 0.02);
  CHECK(e.tolerances.v2_frac == 0.05);
  CHECK(e.tolerances.subcritical_v1 == 1e-3);
  REQUIRE(cfg.trace);
  CHECK(cfg.trace->empirical_reference);
  CHECK(cfg.trace->ks == std::vector<Degree>{1, 3});
  CHECK(*cfg.trace->max_k == 5);
  const auto times = cfg.trace->times(std::get<DegreeSequence>(e.source));
  REQUIRE(times.size() == 11);
  CHECK(times.back() == 1.5);
  REQUIRE(cfg.sweep);
  CHECK(cfg.sweep->alpha_list.size() == 2);
}

TEST_CASE("config sources") {
  const auto near = parse_config(Json::parse(R"({
    "source": {"kind": "near_critical", "base": {"kind": "finite", "pk": {"1": 0.3, "2": 0.6, "3": 0.1}},
               "target_alpha": 0.02}, "n": 1000})"));
  CHECK(std::get<NearCriticalSource>(near.experiment.source).target_alpha == 0.02);

  const auto law = parse_config(Json::parse(R"({"source": {"kind": "poisson", "lambda": 2}, "n": 10})"));
  CHECK(std::holds_alternative<DegreeDistribution>(law.experiment.source));

  const auto dir = scratch_dir();
  write_degree_file(DegreeSequence::from_counts({{1, 4}}), dir / "four.deg");
  const auto file = parse_config(Json::parse(R"({"source": {"kind": "degfile", "path": "four.deg"}})"), dir);
  CHECK(std::get<DegreeSequence>(file.experiment.source).n() == 4);
}

TEST_CASE("malformed configs") {
  for (const char* bad : {
           R"({"source": {"kind": "poisson", "lambda": 2}, "colour": "blue"})",
           R"({"schema_version": 2, "source": {"kind": "poisson", "lambda": 2}})",
           R"({"n": 10})",
           R"({"source": {"kind": "poisson", "lambda": 2}, "graph_mode": "hyper"})",
           R"({"source": {"kind": "poisson", "lambda": 2}, "replicas": "many"})",
           R"({"source": {"kind": "poisson", "lambda": 2}, "trace": {"mode": "slow"}})",
           R"({"source": {"kind": "poisson", "lambda": 2}, "trace": {"reference": "other"}})",
           R"({"source": {"kind": "poisson", "lambda": 2}, "tolerances": {"abs": 1}})",
           R"({"source": {"kind": "sequence", "counts": {"one": 2}}})",
           R"([])",
       }) {
    CAPTURE(bad);
    CHECK(error_kind([&] { parse_config(Json::parse(bad)); }) == ErrorKind::Parse);
  }
}

TEST_CASE("json files") {
  const auto path = scratch_dir() / "x.json";
  write_json_file(Json{{"a", 1}}, path);
  CHECK(read_json_file(path)["a"] == 1);
  std::ofstream(scratch_dir() / "bad.json") << "{not json";
  CHECK(error_kind([&] { read_json_file(scratch_dir() / "bad.json"); }) == ErrorKind::Parse);
  CHECK(error_kind([&] { read_json_file(scratch_dir() / "missing.json"); }) == ErrorKind::Io);
}

TEST_CASE("simulation outcome json") {
  ExperimentConfig c;
  c.source = DegreeSequence::from_counts({{1, 5000}, {3, 5000}});
  c.replicas = 2;
  c.seed = 1;
  const auto outcome = simulate(c);
  const auto j = to_json(outcome, c);
  CHECK(j["all_pass"].is_boolean());
  CHECK(j["theory"]["regime"] == "Supercritical");
  CHECK(j["result"]["aggregates"].contains("v1_frac"));
  CHECK(j["tolerances"]["supercritical_abs"] == "auto");
  CHECK(j["entries"][0]["statistic"] == "v1_frac");
}

TEST_CASE("trajectory outcome") {
  ExperimentConfig c;
  c.source = DegreeSequence::from_counts({{1, 20000}, {3, 20000}});
  c.seed = 2;
  TraceSpec spec;
  spec.t_max = 1.5;
  spec.points = 31;
  spec.tolerance = 0.05;
  const auto out = run_trajectory(c, spec, false);
  CHECK(out.trace.checkpoints.size() == 31);
  CHECK(out.pass);
  CHECK_FALSE(out.rescaled);
  const auto j = to_json(out);
  CHECK(j["fluid"]["tau_window"] == true);
  CHECK_FALSE(j.contains("rescaled"));

  ExperimentConfig near;
  near.source = NearCriticalSource{DegreeDistribution::finite({{1, 0.3}, {2, 0.6}, {3, 0.1}}), 0.05};
  near.n = 100000;
  const auto r = run_trajectory(near, TraceSpec{}, true);
  CHECK(r.near_critical);
  CHECK(r.t0 == doctest::Approx(4.0 / r.sequence.beta()));
  CHECK(r.rescaled);
  CHECK(r.drift);
  CHECK(to_json(r)["rescaled"].contains("parabola_deviation"));
}

}  // TEST_SUITE
