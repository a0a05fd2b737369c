#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string_view>

#include "gcl/degree_model.hpp"

namespace gcl {

// g(x) = sum p_k x^k, h(x) = x g'(x), H(x) = lambda x^2 - h(x), evaluated on [0,1].
// H is summed as sum k p_k (x^2 - x^k) so that H(1) = 0 holds identically.
class GeneratingFunctions {
 public:
  explicit GeneratingFunctions(DegreeDistribution dist);

  const DegreeDistribution& distribution() const noexcept { return dist_; }
  double lambda() const noexcept { return dist_.mean(); }
  // Bound on |g error| from the truncated tail.
  double tail_mass() const noexcept { return dist_.tail_mass(); }

  double g(double x) const;
  double h(double x) const;
  double H(double x) const;
  double dg(double x) const;
  double dh(double x) const;
  double dH(double x) const;
  double d2g(double x) const;
  double d2h(double x) const;
  double d2H(double x) const;

 private:
  DegreeDistribution dist_;
};

// Exact finite-sum g_n, h_n, H_n of a degree sequence (coefficient 2m/n on x^2).
GeneratingFunctions empirical_gf(const DegreeSequence& seq);

enum class Regime { Subcritical, Critical, Supercritical, DegenerateP1Zero, DegenerateAllDeg2 };

std::string_view to_string(Regime regime);

inline constexpr double kDefaultCriticalTolerance = 1e-10;
inline constexpr double kDefaultXiTolerance = 1e-12;
inline constexpr Degree kDefaultVkLimit = 64;

Regime classify(const DegreeDistribution& dist, double tol_crit = kDefaultCriticalTolerance);

// Root of H in (0,1) by bracketed bisection; 0 for the p1 = 0 degenerate case.
double solve_xi(const DegreeDistribution& dist, double tol = kDefaultXiTolerance);

struct TheoryReport {
  Regime regime = Regime::Subcritical;
  double lambda = 0;
  double criticality = 0;  // E D(D-2)
  std::optional<double> xi;
  // -ln xi; +inf when xi = 0.
  double tau = std::numeric_limits<double>::quiet_NaN();
  // Absent for DegenerateAllDeg2, which has no law of large numbers.
  std::optional<double> v_frac;
  std::optional<double> e_frac;
  std::map<Degree, double> vk_frac;

  bool tau_infinite() const { return xi && *xi == 0.0; }
};

// vk_limit = 0 reports every k in the support.
TheoryReport predict_supercritical(const DegreeDistribution& dist, double tol = kDefaultXiTolerance,
                                   Degree vk_limit = kDefaultVkLimit);

// Any regime: supercritical branches delegate to predict_supercritical;
// subcritical and critical laws predict zero fractions.
TheoryReport analyze(const DegreeDistribution& dist, double tol = kDefaultXiTolerance,
                     Degree vk_limit = kDefaultVkLimit,
                     double tol_crit = kDefaultCriticalTolerance);

struct NearCriticalPrediction {
  double lambda = 0;
  double beta = 0;
  double n = 0;
  double alpha_n = 0;
  double v_c1 = 0;
  double e_c1 = 0;
  std::map<Degree, double> vk_c1;
  double tau_scaled = 0;    // 2 / beta
  double n_third_alpha = 0;  // n^{1/3} alpha_n

  double coefficient() const { return 2.0 * lambda / beta; }
};

NearCriticalPrediction predict_near_critical(const DegreeDistribution& dist, std::uint64_t n,
                                             double alpha_n,
                                             double tol_crit = kDefaultCriticalTolerance,
                                             Degree vk_limit = kDefaultVkLimit);

}  // namespace gcl
