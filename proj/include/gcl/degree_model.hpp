#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "gcl/rng.hpp"

namespace gcl {

using Degree = std::uint32_t;
using DegreeCounts = std::map<Degree, std::uint64_t>;

enum class TailKind { FiniteSupport, Poisson, TruncatedPowerLaw };

// Closed-form laws are truncated at the smallest K whose tail mass is below this.
inline constexpr double kTruncationTailMass = 1e-12;

class DegreeSequence;

// Asymptotic degree law (p_k). Probabilities are stored densely for k = 0..K,
// where K is the support maximum (finite laws) or the truncation point.
class DegreeDistribution {
 public:
  // pk must be non-negative and sum to 1 within 1e-12.
  static DegreeDistribution finite(const std::map<Degree, double>& pk);
  static DegreeDistribution poisson(double lambda);
  // p_k proportional to k^-exponent on 1..cutoff.
  static DegreeDistribution power_law(double exponent, Degree cutoff);
  // p_k = n_k / n.
  static DegreeDistribution empirical(const DegreeSequence& seq);

  TailKind tail_kind() const noexcept { return kind_; }
  // Poisson rate or power-law exponent; 0 for finite laws.
  double parameter() const noexcept { return parameter_; }
  Degree cutoff() const noexcept { return cutoff_; }

  std::span<const double> probabilities() const noexcept { return pk_; }
  double p(Degree k) const noexcept { return k < pk_.size() ? pk_[k] : 0.0; }
  Degree truncation() const noexcept { return static_cast<Degree>(pk_.size() - 1); }
  double tail_mass() const noexcept { return tail_mass_; }

  double mean() const noexcept { return mean_; }                // lambda = E D
  double criticality() const noexcept { return criticality_; }  // E D(D-2)
  double beta() const noexcept { return beta_; }                // E D(D-1)(D-2)
  double second_moment() const noexcept { return second_moment_; }

  // Inverse-CDF draw; mass beyond the truncation is assigned to K.
  Degree sample(Rng& rng) const;

 private:
  DegreeDistribution(TailKind kind, double parameter, Degree cutoff, std::vector<double> pk,
                     double tail_mass);

  TailKind kind_;
  double parameter_;
  Degree cutoff_;
  std::vector<double> pk_;
  std::vector<double> cdf_;
  double tail_mass_;
  double mean_ = 0;
  double criticality_ = 0;
  double beta_ = 0;
  double second_moment_ = 0;
};

// Finite-n degree sequence summarized by its counts n_k. Vertices are laid out
// in ascending degree order, which fixes the half-edge numbering downstream.
class DegreeSequence {
 public:
  // Throws OddDegreeSum if sum k*n_k is odd; InvalidArgument if empty.
  static DegreeSequence from_counts(const DegreeCounts& counts);

  const DegreeCounts& counts() const noexcept { return counts_; }
  std::uint64_t count(Degree k) const;
  std::uint64_t n() const noexcept { return n_; }
  std::uint64_t m() const noexcept { return degree_sum_ / 2; }
  std::uint64_t half_edges() const noexcept { return degree_sum_; }
  Degree max_degree() const noexcept { return max_degree_; }

  double mean() const noexcept;   // lambda_n = 2m/n
  double alpha() const noexcept;  // E D_n(D_n-2)
  double beta() const noexcept;   // E D_n(D_n-1)(D_n-2)

  // Exact power sums sum_k k^j n_k, j = 1..3.
  __int128 power_sum(int j) const noexcept;

  // Degree of every vertex, ascending.
  std::vector<Degree> degrees() const;

  bool operator==(const DegreeSequence& other) const { return counts_ == other.counts_; }

 private:
  explicit DegreeSequence(DegreeCounts counts);

  DegreeCounts counts_;
  std::uint64_t n_ = 0;
  std::uint64_t degree_sum_ = 0;
  Degree max_degree_ = 0;
  __int128 s2_ = 0;
  __int128 s3_ = 0;
};

// n i.i.d. draws; an odd total is repaired by adding 1 to one uniformly chosen vertex.
DegreeSequence sample_iid(const DegreeDistribution& dist, std::uint64_t n, Rng& rng);

enum class DegenerateFlag { P1ZeroSupercritical, AllMassOn0And2 };

struct ConditionReport {
  bool even_sum = true;
  bool has_degree_one = false;
  double second_moment = 0;          // sum d_i^2 / n
  double fourth_moment_4plus_eta = 0;  // sum d_i^(4+eta) / n
  double eta = 0.1;
  std::vector<DegenerateFlag> degenerate_flags;

  bool has(DegenerateFlag flag) const;
};

ConditionReport check_conditions(const DegreeSequence& seq, double eta = 0.1);

struct NearCriticalSequence {
  DegreeSequence sequence;
  double achieved_alpha = 0;
  std::uint64_t moved = 0;  // c: vertices moved 2->3 (and as many 2->1)
};

// Rounds n*p_k, then shifts c = round(n*alpha/2) vertices 2->3 and c vertices 2->1.
NearCriticalSequence near_critical_sequence(const DegreeDistribution& base, std::uint64_t n,
                                            double target_alpha);

}  // namespace gcl
