#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gcl/degree_model.hpp"
#include "gcl/error.hpp"

using namespace gcl;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected gcl::Error");
  return ErrorKind::Io;
}

// Moments straight from an expanded degree list.
struct ListMoments {
  double alpha = 0;
  double beta = 0;
};

ListMoments list_moments(const std::vector<Degree>& d) {
  long double s_alpha = 0, s_beta = 0;
  for (const Degree k : d) {
    s_alpha += static_cast<long double>(k) * (static_cast<long double>(k) - 2);
    s_beta += static_cast<long double>(k) * (k - 1.0L) * (k - 2.0L);
  }
  return {static_cast<double>(s_alpha / d.size()), static_cast<double>(s_beta / d.size())};
}

}  // namespace

TEST_SUITE("degree_model") {

TEST_CASE("from_counts summaries") {
  const auto two = DegreeSequence::from_counts({{1, 2}});
  CHECK(two.n() == 2);
  CHECK(two.m() == 1);
  CHECK(two.mean() == 1.0);
  CHECK(two.alpha() == -1.0);

  const auto mixed = DegreeSequence::from_counts({{1, 500}, {3, 500}});
  CHECK(mixed.n() == 1000);
  CHECK(mixed.m() == 1000);
  CHECK(mixed.mean() == 2.0);
  CHECK(mixed.alpha() == 1.0);
  CHECK(mixed.beta() == 3.0);
  CHECK(mixed.max_degree() == 3);
}

TEST_CASE("from_counts rejects odd sums and empty input") {
  CHECK(kind_of([] { DegreeSequence::from_counts({{1, 3}}); }) == ErrorKind::OddDegreeSum);
  CHECK(kind_of([] { DegreeSequence::from_counts({}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { DegreeSequence::from_counts({{4, 0}}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("zero counts are dropped") {
  const auto seq = DegreeSequence::from_counts({{0, 0}, {2, 3}, {5, 0}});
  CHECK(seq.counts().size() == 1);
  CHECK(seq.count(5) == 0);
  CHECK(seq.max_degree() == 2);
}

TEST_CASE("moments agree with the expanded degree list") {
  Rng rng(7);
  std::uniform_int_distribution<int> deg(0, 9), cnt(0, 40);
  for (int trial = 0; trial < 200; ++trial) {
    DegreeCounts counts;
    for (int j = 0; j < 5; ++j) counts[deg(rng)] += cnt(rng);
    std::uint64_t sum = 0, total = 0;
    for (const auto& [k, c] : counts) {
      sum += k * c;
      total += c;
    }
    if (total == 0) continue;
    if (sum % 2) counts[1] += 1;
    const auto seq = DegreeSequence::from_counts(counts);
    const auto degrees = seq.degrees();
    REQUIRE(degrees.size() == seq.n());
    CHECK(std::is_sorted(degrees.begin(), degrees.end()));
    CHECK(std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0}) == seq.half_edges());
    const auto oracle = list_moments(degrees);
    CHECK(seq.alpha() == doctest::Approx(oracle.alpha).epsilon(1e-12));
    CHECK(seq.beta() == doctest::Approx(oracle.beta).epsilon(1e-12));
    // Exact integer identities before division.
    const __int128 s1 = seq.power_sum(1), s2 = seq.power_sum(2), s3 = seq.power_sum(3);
    CHECK(static_cast<double>(s2 - 2 * s1) / seq.n() == seq.alpha());
    CHECK(static_cast<double>(s3 - 3 * s2 + 2 * s1) / seq.n() == seq.beta());
  }
}

TEST_CASE("distribution validation") {
  CHECK(kind_of([] { DegreeDistribution::finite({{1, 0.5}, {3, 0.4}}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([] { DegreeDistribution::finite({{1, 1.2}, {3, -0.2}}); }) ==
        ErrorKind::InvalidArgument);
  const auto d = DegreeDistribution::finite({{1, 0.5}, {3, 0.5}});
  CHECK(d.mean() == doctest::Approx(2.0));
  CHECK(d.criticality() == doctest::Approx(1.0));
  CHECK(d.beta() == doctest::Approx(3.0));
  CHECK(d.truncation() == 3);
  CHECK(d.tail_mass() == 0.0);
}

TEST_CASE("poisson moments match closed forms") {
  for (const double lambda : {0.5, 1.0, 2.0, 3.5, 10.0}) {
    const auto d = DegreeDistribution::poisson(lambda);
    double total = 0;
    for (const double p : d.probabilities()) total += p;
    CHECK(std::abs(total - 1.0) <= 1e-12);
    CHECK(d.tail_mass() < 1e-12);
    CHECK(d.mean() == doctest::Approx(lambda).epsilon(1e-10));
    CHECK(d.criticality() == doctest::Approx(lambda * lambda - lambda).epsilon(1e-10));
    CHECK(d.beta() == doctest::Approx(lambda * lambda * lambda).epsilon(1e-8));  // cubic weight on the cut tail
    CHECK(d.p(2) == doctest::Approx(std::exp(-lambda) * lambda * lambda / 2).epsilon(1e-12));
  }
}

TEST_CASE("power law normalization") {
  const auto d = DegreeDistribution::power_law(2.5, 50);
  double z = 0;
  for (int k = 1; k <= 50; ++k) z += std::pow(k, -2.5);
  CHECK(d.p(0) == 0.0);
  CHECK(d.p(1) == doctest::Approx(1.0 / z).epsilon(1e-12));
  CHECK(d.p(50) == doctest::Approx(std::pow(50, -2.5) / z).epsilon(1e-12));
  CHECK(d.truncation() == 50);
  CHECK(kind_of([] { DegreeDistribution::power_law(2.5, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("empirical law mirrors counts") {
  const auto seq = DegreeSequence::from_counts({{0, 2}, {1, 4}, {3, 2}});
  const auto d = DegreeDistribution::empirical(seq);
  CHECK(d.p(0) == 0.25);
  CHECK(d.p(1) == 0.5);
  CHECK(d.p(3) == 0.25);
  CHECK(d.mean() == doctest::Approx(seq.mean()));
  CHECK(d.criticality() == doctest::Approx(seq.alpha()));
}

TEST_CASE("sample_iid point masses and parity fixup") {
  Rng rng(3);
  const auto two = sample_iid(DegreeDistribution::finite({{2, 1.0}}), 5, rng);
  CHECK(two.counts() == DegreeCounts{{2, 5}});

  const auto ones = sample_iid(DegreeDistribution::finite({{1, 1.0}}), 3, rng);
  CHECK(ones.counts() == DegreeCounts{{1, 2}, {2, 1}});
  CHECK(ones.half_edges() % 2 == 0);
}

TEST_CASE("sample_iid parity fixup changes the total by at most one") {
  const auto law = DegreeDistribution::finite({{1, 0.3}, {2, 0.3}, {3, 0.4}});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng a(seed), b(seed);
    std::uint64_t raw = 0;
    for (int i = 0; i < 101; ++i) raw += law.sample(a);
    const auto seq = sample_iid(law, 101, b);
    CHECK(seq.half_edges() % 2 == 0);
    CHECK(seq.half_edges() - raw <= 1);
    CHECK(seq.n() == 101);
  }
}

TEST_CASE("sample_iid poisson law of large numbers") {
  Rng rng(11);
  const auto seq = sample_iid(DegreeDistribution::poisson(2.0), 1'000'000, rng);
  CHECK(std::abs(seq.mean() - 2.0) < 0.01);
}

TEST_CASE("sampling frequencies follow the law") {
  const auto law = DegreeDistribution::finite({{0, 0.1}, {1, 0.2}, {4, 0.7}});
  Rng rng(5);
  std::array<int, 5> hits{};
  constexpr int kDraws = 200000;
  for (int i = 0; i < kDraws; ++i) ++hits[law.sample(rng)];
  CHECK(hits[2] == 0);
  CHECK(hits[3] == 0);
  for (const Degree k : {0u, 1u, 4u}) {
    const double p = law.p(k);
    const double se = std::sqrt(p * (1 - p) / kDraws);
    CHECK(std::abs(hits[k] / double(kDraws) - p) < 5 * se);
  }
}

TEST_CASE("check_conditions flags") {
  const auto cycles = check_conditions(DegreeSequence::from_counts({{2, 100}}));
  CHECK(cycles.has(DegenerateFlag::AllMassOn0And2));
  CHECK_FALSE(cycles.has(DegenerateFlag::P1ZeroSupercritical));

  const auto cubic = check_conditions(DegreeSequence::from_counts({{3, 100}}));
  CHECK(cubic.has(DegenerateFlag::P1ZeroSupercritical));
  CHECK_FALSE(cubic.has_degree_one);

  const auto mixed = check_conditions(DegreeSequence::from_counts({{1, 50}, {3, 50}}));
  CHECK(mixed.degenerate_flags.empty());
  CHECK(mixed.has_degree_one);
  CHECK(mixed.even_sum);
  CHECK(mixed.second_moment == doctest::Approx(5.0));
  CHECK(mixed.fourth_moment_4plus_eta ==
        doctest::Approx(0.5 + 0.5 * std::pow(3.0, 4.1)).epsilon(1e-12));
}

TEST_CASE("near_critical_sequence hits the target") {
  const auto base = DegreeDistribution::finite({{1, 0.3}, {2, 0.6}, {3, 0.1}});
  const auto built = near_critical_sequence(base, 1'000'000, 0.02);
  CHECK(built.achieved_alpha >= 0.0199);
  CHECK(built.achieved_alpha <= 0.0201);
  CHECK(built.sequence.mean() == doctest::Approx(1.8).epsilon(1e-12));
  CHECK(built.sequence.n() == 1'000'000);
  CHECK(built.moved == 10000);
  // Moves are degree-sum neutral.
  const auto plain = near_critical_sequence(base, 1'000'000, 0.0);
  CHECK(plain.sequence.power_sum(1) == built.sequence.power_sum(1));
  CHECK(plain.moved == 0);
  CHECK(std::abs(plain.achieved_alpha) < 1e-5);
}

TEST_CASE("near_critical_sequence errors") {
  const auto base = DegreeDistribution::finite({{1, 0.3}, {2, 0.6}, {3, 0.1}});
  CHECK(kind_of([&] { near_critical_sequence(DegreeDistribution::poisson(2.0), 1000, 0.02); }) ==
        ErrorKind::NotCritical);
  CHECK(kind_of([&] { near_critical_sequence(base, 1000, 1.5); }) ==
        ErrorKind::InsufficientDegreeTwoMass);
  CHECK(kind_of([&] { near_critical_sequence(base, 1000, -0.1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("near_critical_sequence always has an even degree sum") {
  const auto base = DegreeDistribution::finite({{1, 0.3}, {2, 0.6}, {3, 0.1}});
  for (std::uint64_t n = 1000; n < 1100; ++n) {
    const auto built = near_critical_sequence(base, n, 0.05);
    CHECK(built.sequence.half_edges() % 2 == 0);
    CHECK(built.sequence.n() == n);
  }
}

}  // TEST_SUITE
