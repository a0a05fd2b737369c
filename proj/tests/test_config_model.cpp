#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcl/config_model.hpp"
#include "test_support.hpp"

using namespace gcl;
using gcl::testing::error_kind;

namespace {

bool is_involution(const Multigraph& g) {
  const auto p = g.partner();
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == x || p[p[x]] != x) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("config_model") {

TEST_CASE("layout is vertex by vertex in ascending degree order") {
  const auto seq = DegreeSequence::from_counts({{0, 1}, {1, 3}, {3, 1}});
  CHECK(half_edge_layout(seq) == std::vector<Vertex>{1, 2, 3, 4, 4, 4});
}

TEST_CASE("trivial matchings") {
  Rng rng(1);
  const auto edge = pair_uniform(DegreeSequence::from_counts({{1, 2}}), rng);
  CHECK(edge.n() == 2);
  CHECK(edge.m() == 1);
  CHECK(edge.partner()[0] == 1);

  const auto loop = pair_uniform(DegreeSequence::from_counts({{2, 1}}), rng);
  CHECK(loop.m() == 1);
  CHECK(loop.half_edge_owner()[0] == loop.half_edge_owner()[1]);
}

TEST_CASE("generated graphs are valid and keep degrees") {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const auto seq = gcl::testing::random_small_sequence(rng, 40, 6);
    const auto g = pair_uniform(seq, rng);
    CHECK(is_involution(g));
    CHECK(g.degrees() == seq.degrees());
    CHECK(g.m() == seq.m());
  }
}

TEST_CASE("multigraph constructor validates") {
  CHECK(error_kind([] { Multigraph(2, {0, 1}, {0, 1}); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { Multigraph(2, {0, 1, 1}, {1, 0, 2}); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { Multigraph(1, {0, 1}, {1, 0}); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { Multigraph(2, {0, 0, 1, 1}, {1, 2, 3, 0}); }) == ErrorKind::InvalidArgument);
  CHECK_NOTHROW(Multigraph(2, {0, 0, 1, 1}, {2, 3, 0, 1}));
}

TEST_CASE("two degree-2 vertices: the three matchings") {
  // Half-edges 0,1 belong to v0 and 2,3 to v1.
  Rng rng(3);
  constexpr int kRuns = 300000;
  int loops = 0, double_edge = 0;
  std::array<double, 3> by_matching{};
  for (int i = 0; i < kRuns; ++i) {
    const auto g = pair_uniform(DegreeSequence::from_counts({{2, 2}}), rng);
    const auto p = g.partner()[0];
    ++by_matching[p - 1];
    if (p == 1) {
      ++loops;
    } else {
      ++double_edge;
    }
  }
  CHECK(std::abs(double_edge / double(kRuns) - 2.0 / 3) < 0.005);
  CHECK(std::abs(loops / double(kRuns) - 1.0 / 3) < 0.005);
  CHECK(gcl::testing::chi_square_p({by_matching.begin(), by_matching.end()}, {1. / 3, 1. / 3, 1. / 3}) >
        0.001);
}

TEST_CASE("matching law is uniform over all perfect matchings") {
  // {1:2, 3:2} has 8 half-edges and 105 matchings.
  const auto seq = DegreeSequence::from_counts({{1, 2}, {3, 2}});
  const auto matchings = gcl::testing::all_matchings(seq.half_edges());
  REQUIRE(matchings.size() == 105);
  std::map<std::vector<HalfEdge>, std::size_t> index;
  for (std::size_t i = 0; i < matchings.size(); ++i) index[matchings[i]] = i;

  Rng rng(4);
  std::vector<double> counts(matchings.size(), 0);
  constexpr int kRuns = 105 * 400;
  for (int i = 0; i < kRuns; ++i) {
    const auto g = pair_uniform(seq, rng);
    const std::vector<HalfEdge> key(g.partner().begin(), g.partner().end());
    REQUIRE(index.count(key) == 1);
    ++counts[index[key]];
  }
  const std::vector<double> probs(matchings.size(), 1.0 / matchings.size());
  CHECK(gcl::testing::chi_square_p(counts, probs) > 0.001);
}

TEST_CASE("simplicity") {
  Rng rng(5);
  const auto loop = pair_uniform(DegreeSequence::from_counts({{2, 1}}), rng);
  const auto r = is_simple(loop);
  CHECK_FALSE(r.simple);
  CHECK(r.loops == 1);

  CHECK(is_simple(pair_uniform(DegreeSequence::from_counts({{1, 2}}), rng)).simple);

  const Multigraph doubled(2, {0, 0, 1, 1}, {2, 3, 0, 1});
  const auto d = is_simple(doubled);
  CHECK_FALSE(d.simple);
  CHECK(d.loops == 0);
  CHECK(d.multi_edge_pairs == 1);

  // Triple edge counts as a single multi-edge pair.
  const Multigraph tripled(2, {0, 0, 0, 1, 1, 1}, {3, 4, 5, 0, 1, 2});
  CHECK(is_simple(tripled).multi_edge_pairs == 1);
}

TEST_CASE("rejection sampling") {
  Rng rng(6);
  const auto one = sample_simple(DegreeSequence::from_counts({{1, 2}}), rng, 5);
  CHECK(one.attempts == 1);
  CHECK(error_kind([&] { sample_simple(DegreeSequence::from_counts({{2, 1}}), rng, 50); }) ==
        ErrorKind::MaxAttemptsExceeded);
  CHECK(error_kind([&] { sample_simple(DegreeSequence::from_counts({{1, 2}}), rng, 0); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("simple-graph acceptance rate is bounded away from zero") {
  Rng rng(7);
  const auto seq = sample_iid(DegreeDistribution::poisson(2.0), 10000, rng);
  std::uint64_t attempts = 0;
  constexpr int kSamples = 40;
  for (int i = 0; i < kSamples; ++i) {
    const auto s = sample_simple(seq, rng, 10000);
    CHECK(is_simple(s.graph).simple);
    attempts += s.attempts;
  }
  const double acceptance = kSamples / static_cast<double>(attempts);
  CHECK(acceptance >= 0.05);
  CHECK(acceptance <= 0.7);
}

TEST_CASE("simple graphs are uniform") {
  // Degrees (1,1,2,2): the simple graphs are the paths a-x-y-b, with the two
  // endpoints attached in 2 ways, so 2 labelled graphs.
  const auto seq = DegreeSequence::from_counts({{1, 2}, {2, 2}});
  Rng rng(8);
  std::map<std::vector<std::pair<Vertex, Vertex>>, double> seen;
  for (int i = 0; i < 20000; ++i) {
    const auto s = sample_simple(seq, rng, 1000);
    std::vector<std::pair<Vertex, Vertex>> edges;
    s.graph.for_each_edge([&](Vertex u, Vertex v) { edges.emplace_back(std::min(u, v), std::max(u, v)); });
    std::sort(edges.begin(), edges.end());
    seen[edges] += 1;
  }
  REQUIRE(seen.size() == 2);
  std::vector<double> observed;
  for (const auto& [edges, count] : seen) observed.push_back(count);
  CHECK(gcl::testing::chi_square_p(observed, {0.5, 0.5}) > 0.001);
}

TEST_CASE("union-find examples") {
  Rng rng(9);
  const auto pair = components_unionfind(pair_uniform(DegreeSequence::from_counts({{1, 2}}), rng));
  REQUIRE(pair.component_count() == 1);
  CHECK(pair.components[0].vertices == 2);
  CHECK(pair.components[0].edges == 1);

  const auto isolated = components_unionfind(pair_uniform(DegreeSequence::from_counts({{0, 3}}), rng));
  REQUIRE(isolated.component_count() == 3);
  for (const auto& c : isolated.components) {
    CHECK(c.vertices == 1);
    CHECK(c.edges == 0);
    CHECK(c.degree_histogram == std::vector<DegreeCount>{{0, 1}});
  }

  const Multigraph two_loops(2, {0, 0, 1, 1}, {1, 0, 3, 2});
  const auto loops = components_unionfind(two_loops);
  REQUIRE(loops.component_count() == 2);
  CHECK(loops.components[0] == Component{1, 1, {{2, 1}}});
  CHECK(loops.components[1] == Component{1, 1, {{2, 1}}});
}

TEST_CASE("component statistics reconcile and agree with breadth-first search") {
  Rng rng(10);
  for (int trial = 0; trial < 300; ++trial) {
    const auto seq = gcl::testing::random_small_sequence(rng, 60, 5);
    const auto g = pair_uniform(seq, rng);
    const auto stats = components_unionfind(g);
    std::uint64_t vertices = 0, edges = 0, endpoints = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sizes;
    for (const auto& c : stats.components) {
      vertices += c.vertices;
      edges += c.edges;
      std::uint64_t local = 0;
      for (const auto& [k, count] : c.degree_histogram) local += k * count;
      CHECK(local == 2 * c.edges);
      endpoints += local;
      sizes.emplace_back(c.edges, c.vertices);
    }
    CHECK(vertices == seq.n());
    CHECK(edges == seq.m());
    CHECK(endpoints == seq.half_edges());
    CHECK(stats.n == seq.n());
    CHECK(stats.m == seq.m());
    CHECK(std::is_sorted(stats.components.begin(), stats.components.end(),
                         [](const Component& a, const Component& b) {
                           return std::tie(a.edges, a.vertices) > std::tie(b.edges, b.vertices);
                         }));
    CHECK(sizes == gcl::testing::bfs_component_sizes(g));
  }
}

TEST_CASE("edge list export") {
  const Multigraph g(3, {0, 0, 1, 2}, {1, 0, 3, 2});
  const auto path = std::filesystem::temp_directory_path() / "gcl_edges_test.txt";
  write_edge_list(g, path);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == "0 0\n1 2\n");
  std::filesystem::remove(path);
  CHECK(error_kind([&] { write_edge_list(g, "/nonexistent-dir/x/edges.txt"); }) == ErrorKind::Io);
}

}  // TEST_SUITE
