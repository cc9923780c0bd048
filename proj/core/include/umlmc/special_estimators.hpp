#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "umlmc/rng.hpp"
#include "umlmc/unbiased_sample.hpp"

namespace umlmc {

/// alpha * x^k with multi-index k = (k_1, ..., k_m).
struct PolynomialTerm {
  std::vector<unsigned> exponents;
  double coefficient = 0.0;
};

/// Unbiased estimator of a multivariate polynomial g(m(pi)) = sum_k alpha_k m(pi)^k
/// of total degree <= degree. Draws `degree` independent samples H_1..H_n; for
/// each term the first k_1 samples supply coordinate 1, the next k_2 samples
/// coordinate 2, and so on, so every factor comes from a distinct sample.
///
/// Throws ConfigError when a term's total degree exceeds `degree` or its
/// multi-index length differs from the sample dimension.
double polynomial_estimator(const std::vector<PolynomialTerm>& terms, unsigned degree,
                            const Subroutine& subroutine, RngStream& s);

/// Distribution of the random truncation level in the power-series estimator.
struct LevelLaw {
  std::function<std::uint64_t(RngStream&)> draw;
  std::function<double(std::uint64_t)> pmf;
};

LevelLaw poisson_level_law(double lambda);
/// P(N = n) = r (1 - r)^n on {0, 1, ...}.
LevelLaw geometric_level_law(double r);
LevelLaw point_mass_level_law(std::uint64_t level);

/// Unbiased estimator of g(m(pi)) = sum_n a_n (m(pi) - a)^n for a scalar
/// subroutine: N ~ level_law, then (a_N / q_N) prod_{j=1}^{N} (H_j - a).
/// No extra 1/N! factor; coefficients carry any factorials themselves.
double power_series_estimator(const std::function<double(std::uint64_t)>& coefficient, double center,
                              const LevelLaw& level_law, const Subroutine& subroutine, RngStream& s);

}  // namespace umlmc
