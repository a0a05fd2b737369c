#include "gcl/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gcl/error.hpp"

namespace gcl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OddDegreeSum: return "OddDegreeSum";
    case ErrorKind::InsufficientDegreeTwoMass: return "InsufficientDegreeTwoMass";
    case ErrorKind::NotCritical: return "NotCritical";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotSupercritical: return "NotSupercritical";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::BetaZero: return "BetaZero";
    case ErrorKind::MaxAttemptsExceeded: return "MaxAttemptsExceeded";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::UnitMismatch: return "UnitMismatch";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// DegreeDistribution

DegreeDistribution::DegreeDistribution(TailKind kind, double parameter, Degree cutoff,
                                       std::vector<double> pk, double tail_mass)
    : kind_(kind), parameter_(parameter), cutoff_(cutoff), pk_(std::move(pk)),
      tail_mass_(tail_mass) {
  if (pk_.empty()) throw Error(ErrorKind::InvalidArgument, "empty degree distribution");
  double total = 0;
  cdf_.reserve(pk_.size());
  for (std::size_t k = 0; k < pk_.size(); ++k) {
    const double p = pk_[k];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorKind::InvalidArgument, "negative or non-finite probability at k=" +
                                                  std::to_string(k));
    }
    const double kd = static_cast<double>(k);
    total += p;
    cdf_.push_back(total);
    mean_ += kd * p;
    second_moment_ += kd * kd * p;
    criticality_ += kd * (kd - 2.0) * p;
    beta_ += kd * (kd - 1.0) * (kd - 2.0) * p;
  }
  if (std::abs(total + tail_mass_ - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << total << " (tail mass " << tail_mass_ << ")";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  // Drop trailing zeros so that truncation() is the support maximum.
  while (pk_.size() > 1 && pk_.back() == 0.0) {
    pk_.pop_back();
    cdf_.pop_back();
  }
}

DegreeDistribution DegreeDistribution::finite(const std::map<Degree, double>& pk) {
  if (pk.empty()) throw Error(ErrorKind::InvalidArgument, "empty degree distribution");
  std::vector<double> dense(pk.rbegin()->first + 1, 0.0);
  for (const auto& [k, p] : pk) dense[k] = p;
  return DegreeDistribution(TailKind::FiniteSupport, 0.0, pk.rbegin()->first, std::move(dense),
                            0.0);
}

DegreeDistribution DegreeDistribution::poisson(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidArgument, "Poisson rate must be positive");
  }
  std::vector<double> pk;
  double cumulative = 0;
  double log_p = -lambda;
  for (Degree k = 0;; ++k) {
    if (k > 0) log_p += std::log(lambda) - std::log(static_cast<double>(k));
    const double p = std::exp(log_p);
    pk.push_back(p);
    cumulative += p;
    if (static_cast<double>(k) > lambda && 1.0 - cumulative < kTruncationTailMass) break;
  }
  const double tail = std::max(0.0, 1.0 - cumulative);
  const auto cutoff = static_cast<Degree>(pk.size() - 1);
  return DegreeDistribution(TailKind::Poisson, lambda, cutoff, std::move(pk), tail);
}

DegreeDistribution DegreeDistribution::power_law(double exponent, Degree cutoff) {
  if (!std::isfinite(exponent) || exponent <= 0.0) {
    throw Error(ErrorKind::InvalidArgument, "power-law exponent must be positive");
  }
  if (cutoff < 1) throw Error(ErrorKind::InvalidArgument, "power-law cutoff must be >= 1");
  std::vector<double> pk(cutoff + 1, 0.0);
  double norm = 0;
  // Sum smallest terms first.
  for (Degree k = cutoff; k >= 1; --k) {
    pk[k] = std::pow(static_cast<double>(k), -exponent);
    norm += pk[k];
  }
  for (auto& p : pk) p /= norm;
  return DegreeDistribution(TailKind::TruncatedPowerLaw, exponent, cutoff, std::move(pk), 0.0);
}

DegreeDistribution DegreeDistribution::empirical(const DegreeSequence& seq) {
  std::vector<double> dense(seq.max_degree() + 1, 0.0);
  const auto n = static_cast<double>(seq.n());
  for (const auto& [k, count] : seq.counts()) dense[k] = static_cast<double>(count) / n;
  // n_k/n need not sum to 1 bit-exactly; the constructor checks 1e-12.
  return DegreeDistribution(TailKind::FiniteSupport, 0.0, seq.max_degree(), std::move(dense), 0.0);
}

Degree DegreeDistribution::sample(Rng& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, cdf_.back())(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return truncation();
  return static_cast<Degree>(it - cdf_.begin());
}

// ---------------------------------------------------------------------------
// DegreeSequence

DegreeSequence::DegreeSequence(DegreeCounts counts) : counts_(std::move(counts)) {
  unsigned __int128 s1 = 0;
  for (const auto& [k, count] : counts_) {
    const auto kk = static_cast<__int128>(k);
    n_ += count;
    s1 += static_cast<unsigned __int128>(kk * count);
    s2_ += kk * kk * count;
    s3_ += kk * kk * kk * count;
    max_degree_ = std::max(max_degree_, k);
  }
  degree_sum_ = static_cast<std::uint64_t>(s1);
}

DegreeSequence DegreeSequence::from_counts(const DegreeCounts& counts) {
  DegreeCounts cleaned;
  for (const auto& [k, count] : counts) {
    if (count > 0) cleaned.emplace(k, count);
  }
  if (cleaned.empty()) throw Error(ErrorKind::InvalidArgument, "degree sequence has no vertices");
  DegreeSequence seq(std::move(cleaned));
  if (seq.degree_sum_ % 2 != 0) {
    throw Error(ErrorKind::OddDegreeSum,
                "sum of degrees is " + std::to_string(seq.degree_sum_) + ", which is odd");
  }
  return seq;
}

std::uint64_t DegreeSequence::count(Degree k) const {
  const auto it = counts_.find(k);
  return it == counts_.end() ? 0 : it->second;
}

__int128 DegreeSequence::power_sum(int j) const noexcept {
  switch (j) {
    case 0: return n_;
    case 1: return degree_sum_;
    case 2: return s2_;
    case 3: return s3_;
    default: return 0;
  }
}

double DegreeSequence::mean() const noexcept {
  return static_cast<double>(degree_sum_) / static_cast<double>(n_);
}

double DegreeSequence::alpha() const noexcept {
  const __int128 num = s2_ - 2 * static_cast<__int128>(degree_sum_);
  return static_cast<double>(num) / static_cast<double>(n_);
}

double DegreeSequence::beta() const noexcept {
  const __int128 num = s3_ - 3 * s2_ + 2 * static_cast<__int128>(degree_sum_);
  return static_cast<double>(num) / static_cast<double>(n_);
}

std::vector<Degree> DegreeSequence::degrees() const {
  std::vector<Degree> out;
  out.reserve(n_);
  for (const auto& [k, count] : counts_) out.insert(out.end(), count, k);
  return out;
}

// ---------------------------------------------------------------------------

DegreeSequence sample_iid(const DegreeDistribution& dist, std::uint64_t n, Rng& rng) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  std::vector<std::uint64_t> dense(dist.truncation() + 2, 0);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Degree k = dist.sample(rng);
    ++dense[k];
    total += k;
  }
  if (total % 2 != 0) {
    // Vertices are exchangeable, so picking a rank in degree order is a
    // uniform vertex choice.
    auto rank = std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
    for (std::size_t k = 0; k < dense.size(); ++k) {
      if (rank < dense[k]) {
        --dense[k];
        ++dense[k + 1];
        break;
      }
      rank -= dense[k];
    }
  }
  DegreeCounts counts;
  for (std::size_t k = 0; k < dense.size(); ++k) {
    if (dense[k] > 0) counts.emplace(static_cast<Degree>(k), dense[k]);
  }
  return DegreeSequence::from_counts(counts);
}

bool ConditionReport::has(DegenerateFlag flag) const {
  return std::find(degenerate_flags.begin(), degenerate_flags.end(), flag) !=
         degenerate_flags.end();
}

ConditionReport check_conditions(const DegreeSequence& seq, double eta) {
  ConditionReport report;
  report.eta = eta;
  report.even_sum = seq.half_edges() % 2 == 0;
  report.has_degree_one = seq.count(1) > 0;
  const auto n = static_cast<double>(seq.n());
  report.second_moment = static_cast<double>(seq.power_sum(2)) / n;
  double fourth = 0;
  std::uint64_t above_two = 0;
  for (const auto& [k, count] : seq.counts()) {
    fourth += std::pow(static_cast<double>(k), 4.0 + eta) * static_cast<double>(count);
    if (k >= 3) above_two += count;
  }
  report.fourth_moment_4plus_eta = fourth / n;
  if (seq.count(0) + seq.count(2) == seq.n()) {
    report.degenerate_flags.push_back(DegenerateFlag::AllMassOn0And2);
  } else if (seq.count(1) == 0 && above_two > 0) {
    report.degenerate_flags.push_back(DegenerateFlag::P1ZeroSupercritical);
  }
  return report;
}

NearCriticalSequence near_critical_sequence(const DegreeDistribution& base, std::uint64_t n,
                                            double target_alpha) {
  if (std::abs(base.criticality()) > 1e-12) {
    std::ostringstream msg;
    msg << "base distribution has E D(D-2) = " << base.criticality() << ", expected 0";
    throw Error(ErrorKind::NotCritical, msg.str());
  }
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (!(target_alpha >= 0.0) || !std::isfinite(target_alpha)) {
    throw Error(ErrorKind::InvalidArgument, "target alpha must be a non-negative number");
  }

  std::vector<std::int64_t> counts(std::max<std::size_t>(base.truncation() + 1, 4), 0);
  std::int64_t assigned = 0;
  for (std::size_t k = 0; k < base.probabilities().size(); ++k) {
    counts[k] = std::llround(static_cast<double>(n) * base.probabilities()[k]);
    assigned += counts[k];
  }
  // Degree 2 is neutral for both alpha and beta, so it absorbs the rounding residual.
  counts[2] += static_cast<std::int64_t>(n) - assigned;
  std::int64_t half_edges = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) half_edges += static_cast<std::int64_t>(k) * counts[k];
  if (half_edges % 2 != 0) {
    --counts[2];
    ++counts[1];
  }

  const auto moved = static_cast<std::int64_t>(std::llround(static_cast<double>(n) * target_alpha / 2.0));
  if (counts[2] < 2 * moved) {
    throw Error(ErrorKind::InsufficientDegreeTwoMass,
                "need " + std::to_string(2 * moved) + " degree-2 vertices, have " +
                    std::to_string(counts[2]));
  }
  counts[2] -= 2 * moved;
  counts[1] += moved;
  counts[3] += moved;

  DegreeCounts out;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] > 0) out.emplace(static_cast<Degree>(k), static_cast<std::uint64_t>(counts[k]));
  }
  auto seq = DegreeSequence::from_counts(out);
  const double achieved = seq.alpha();
  return NearCriticalSequence{std::move(seq), achieved, static_cast<std::uint64_t>(moved)};
}

}  // namespace gcl
