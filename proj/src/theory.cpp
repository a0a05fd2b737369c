#include "gcl/theory.hpp"

#include <cmath>
#include <sstream>

#include "gcl/error.hpp"

namespace gcl {

namespace {

void check_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream msg;
    msg << "generating functions are evaluated on [0,1], got x = " << x;
    throw Error(ErrorKind::DomainError, msg.str());
  }
}

// sum_k weight(k) p_k x^(k - shift), skipping terms whose exponent would be negative.
template <typename Weight>
double series(std::span<const double> pk, double x, unsigned shift, Weight weight) {
  double sum = 0;
  double power = 1;  // x^(k - shift)
  for (std::size_t k = shift; k < pk.size(); ++k) {
    if (pk[k] != 0.0) sum += weight(static_cast<double>(k)) * pk[k] * power;
    power *= x;
  }
  return sum;
}

}  // namespace

GeneratingFunctions::GeneratingFunctions(DegreeDistribution dist) : dist_(std::move(dist)) {}

double GeneratingFunctions::g(double x) const {
  check_unit_interval(x);
  return series(dist_.probabilities(), x, 0, [](double) { return 1.0; });
}

double GeneratingFunctions::h(double x) const {
  check_unit_interval(x);
  return x * dg(x);
}

double GeneratingFunctions::H(double x) const {
  check_unit_interval(x);
  const auto pk = dist_.probabilities();
  const double x2 = x * x;
  double sum = 0;
  double power = 1;
  for (std::size_t k = 0; k < pk.size(); ++k) {
    if (pk[k] != 0.0) sum += static_cast<double>(k) * pk[k] * (x2 - power);
    power *= x;
  }
  return sum;
}

double GeneratingFunctions::dg(double x) const {
  check_unit_interval(x);
  return series(dist_.probabilities(), x, 1, [](double k) { return k; });
}

double GeneratingFunctions::d2g(double x) const {
  check_unit_interval(x);
  return series(dist_.probabilities(), x, 2, [](double k) { return k * (k - 1); });
}

double GeneratingFunctions::dh(double x) const {
  check_unit_interval(x);
  return series(dist_.probabilities(), x, 1, [](double k) { return k * k; });
}

double GeneratingFunctions::d2h(double x) const {
  check_unit_interval(x);
  return series(dist_.probabilities(), x, 2, [](double k) { return k * k * (k - 1); });
}

double GeneratingFunctions::dH(double x) const { return 2.0 * lambda() * x - dh(x); }

double GeneratingFunctions::d2H(double x) const { return 2.0 * lambda() - d2h(x); }

GeneratingFunctions empirical_gf(const DegreeSequence& seq) {
  return GeneratingFunctions(DegreeDistribution::empirical(seq));
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Subcritical: return "Subcritical";
    case Regime::Critical: return "Critical";
    case Regime::Supercritical: return "Supercritical";
    case Regime::DegenerateP1Zero: return "DegenerateP1Zero";
    case Regime::DegenerateAllDeg2: return "DegenerateAllDeg2";
  }
  return "Unknown";
}

Regime classify(const DegreeDistribution& dist, double tol_crit) {
  if (std::abs(dist.p(0) + dist.p(2) - 1.0) <= 1e-12) return Regime::DegenerateAllDeg2;
  const double crit = dist.criticality();
  if (dist.p(1) == 0.0 && crit > tol_crit) return Regime::DegenerateP1Zero;
  if (std::abs(crit) <= tol_crit) return Regime::Critical;
  return crit > 0 ? Regime::Supercritical : Regime::Subcritical;
}

double solve_xi(const DegreeDistribution& dist, double tol) {
  const Regime regime = classify(dist);
  if (regime == Regime::DegenerateP1Zero) return 0.0;
  if (regime != Regime::Supercritical) {
    throw Error(ErrorKind::NotSupercritical,
                "no root of H in (0,1) for a " + std::string(to_string(regime)) + " distribution");
  }
  const GeneratingFunctions gf(dist);

  // H < 0 just right of 0 and H > 0 just left of 1; walk both ends inward
  // until the signs are confirmed.
  constexpr int kMaxRefinements = 64;
  double lo = 0.5;
  int steps = 0;
  while (!(gf.H(lo) < 0.0)) {
    if (++steps > kMaxRefinements) throw Error(ErrorKind::BracketFailure, "no x with H(x) < 0 near 0");
    lo *= 0.5;
  }
  double hi = 0.5;
  double gap = 0.5;
  steps = 0;
  while (!(gf.H(hi) > 0.0)) {
    if (++steps > kMaxRefinements) throw Error(ErrorKind::BracketFailure, "no x with H(x) > 0 near 1");
    gap *= 0.5;
    hi = 1.0 - gap;
  }
  if (hi < lo) throw Error(ErrorKind::BracketFailure, "inconsistent sign structure of H");

  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < kMaxRefinements; ++i) {
    mid = 0.5 * (lo + hi);
    const double value = gf.H(mid);
    if (value == 0.0) return mid;
    (value < 0.0 ? lo : hi) = mid;
    if (hi - lo <= tol && std::abs(value) <= tol) break;
  }
  return 0.5 * (lo + hi);
}

TheoryReport predict_supercritical(const DegreeDistribution& dist, double tol, Degree vk_limit) {
  const Regime regime = classify(dist);
  if (regime != Regime::Supercritical && regime != Regime::DegenerateP1Zero) {
    throw Error(ErrorKind::NotSupercritical,
                "cannot predict a giant component for a " + std::string(to_string(regime)) +
                    " distribution");
  }
  const GeneratingFunctions gf(dist);
  TheoryReport report;
  report.regime = regime;
  report.lambda = dist.mean();
  report.criticality = dist.criticality();
  const double xi = solve_xi(dist, tol);
  report.xi = xi;
  report.tau = xi > 0.0 ? -std::log(xi) : std::numeric_limits<double>::infinity();
  report.v_frac = 1.0 - gf.g(xi);
  report.e_frac = 0.5 * report.lambda * (1.0 - xi * xi);
  const auto pk = dist.probabilities();
  const std::size_t last = vk_limit == 0 ? pk.size() - 1 : std::min<std::size_t>(pk.size() - 1, vk_limit);
  double xk = 1;
  for (std::size_t k = 0; k <= last; ++k) {
    if (pk[k] > 0.0) report.vk_frac[static_cast<Degree>(k)] = pk[k] * (1.0 - xk);
    xk *= xi;
  }
  return report;
}

TheoryReport analyze(const DegreeDistribution& dist, double tol, Degree vk_limit, double tol_crit) {
  const Regime regime = classify(dist, tol_crit);
  if (regime == Regime::Supercritical || regime == Regime::DegenerateP1Zero) {
    return predict_supercritical(dist, tol, vk_limit);
  }
  TheoryReport report;
  report.regime = regime;
  report.lambda = dist.mean();
  report.criticality = dist.criticality();
  if (regime != Regime::DegenerateAllDeg2) {
    report.v_frac = 0.0;
    report.e_frac = 0.0;
  }
  return report;
}

NearCriticalPrediction predict_near_critical(const DegreeDistribution& dist, std::uint64_t n,
                                             double alpha_n, double tol_crit, Degree vk_limit) {
  const Regime regime = classify(dist, tol_crit);
  if (regime != Regime::Critical) {
    throw Error(ErrorKind::NotCritical,
                "near-critical prediction needs a Critical base, got " +
                    std::string(to_string(regime)));
  }
  if (!(alpha_n > 0.0)) throw Error(ErrorKind::InvalidArgument, "alpha_n must be positive");
  const double beta = dist.beta();
  if (beta <= 1e-12) throw Error(ErrorKind::BetaZero, "E D(D-1)(D-2) vanishes");

  NearCriticalPrediction out;
  out.lambda = dist.mean();
  out.beta = beta;
  out.n = static_cast<double>(n);
  out.alpha_n = alpha_n;
  const double scale = out.n * alpha_n;
  out.v_c1 = out.coefficient() * scale;
  out.e_c1 = out.v_c1;
  const auto pk = dist.probabilities();
  const std::size_t last = vk_limit == 0 ? pk.size() - 1 : std::min<std::size_t>(pk.size() - 1, vk_limit);
  for (std::size_t k = 1; k <= last; ++k) {
    if (pk[k] > 0.0) out.vk_c1[static_cast<Degree>(k)] = 2.0 / beta * static_cast<double>(k) * pk[k] * scale;
  }
  out.tau_scaled = 2.0 / beta;
  out.n_third_alpha = std::cbrt(out.n) * alpha_n;
  return out;
}

}  // namespace gcl
