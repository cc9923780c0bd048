#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "umlmc/rng.hpp"
#include "umlmc/unbiased_sample.hpp"

namespace umlmc {

/// Scalar outer map g: D subset R^m -> R. evaluate is only ever called on
/// points for which in_domain returns true.
struct GFunction {
  std::size_t arity = 1;
  std::function<double(std::span<const double>)> evaluate;
  std::function<bool(std::span<const double>)> in_domain;
  std::string label;

  /// Throws DomainError carrying the point when it is outside the domain.
  double operator()(std::span<const double> x) const;
};

/// g(x) = a . x + b, defined everywhere.
GFunction affine_g(std::vector<double> slope, double intercept);
/// g(x) = prod_i 1 / x_i on {x : all x_i != 0}.
GFunction inverse_product_g(std::size_t arity);
/// g(x) = x_0 / x_1 on {x_1 != 0}.
GFunction ratio_g();
/// g(x) = max_i x_i.
GFunction max_g(std::size_t arity);

struct MlmcConfig {
  double p = 0.7;                ///< geometric success probability, 1/2 < p < 1
  std::optional<double> delta;   ///< enables the delta-transformation when set
  int max_level = 40;

  /// Throws ConfigError for p outside (1/2, 1), delta <= 0 or max_level < 1.
  /// With gamma known, returns a warning when p >= 1 - 2^{-(1+gamma)} (the
  /// variance bound no longer applies).
  std::vector<std::string> validate(std::optional<double> gamma = std::nullopt) const;
};

struct MlmcEstimate {
  double w = 0.0;
  int level = 0;
  std::uint64_t cost = 0;        ///< summed subroutine cost
  std::uint64_t n_subcalls = 0;  ///< 2^level
  std::uint64_t max_tau = 0;
};

/// P(N = n) for N ~ Geo(p) on {1, 2, ...}.
double level_probability(double p, int n);

/// E[2^N] = 2p / (2p - 1), the expected number of subroutine calls.
double expected_subcalls(double p);

/// p = 1 - 2^{-1 - gamma/2}, which minimises the work-normalised variance
/// bound; kept strictly inside (1/2, 1 - 2^{-(1+gamma)}). ConfigError for
/// gamma <= 0.
double recommended_p(double gamma);

/// Antithetic difference of the 2^n samples:
///   g(mean of all) - (g(mean of odd-indexed) + g(mean of even-indexed)) / 2
/// with odd = 1st, 3rd, ... in generation order. Throws DomainError when any of
/// the three means is outside g's domain.
double antithetic_delta(std::span<const std::vector<double>> samples, const GFunction& g, int n);

/// Same quantity from the running sums of the odd- and even-indexed samples,
/// each over 2^{n-1} terms. The full sum is formed as odd + even so that an
/// affine g cancels exactly.
double antithetic_delta_from_sums(std::span<const double> odd_sum, std::span<const double> even_sum,
                                  const GFunction& g, int n);

/// H -> H if ||H|| >= delta, else H + 2 delta B (1, ..., 1) with B uniform on
/// {-1, +1}. Preserves the mean.
std::vector<double> delta_transform(std::span<const double> h, double delta, RngStream& s);

/// One draw of Delta_n at a fixed level n >= 1 (2^n subroutine calls, delta
/// transform applied when configured). Used for decay diagnostics.
double sample_level_delta(const Subroutine& subroutine, const GFunction& g, int n,
                          std::optional<double> delta, RngStream& s);

/// Randomised multilevel estimator: N ~ Geo(p), 2^N fresh samples,
/// W = Delta_N / p_N + g(H_1) where H_1 is the first (transformed) sample of
/// the batch. E[W] = g(m(pi)).
///
/// Throws LevelCapError when N > max_level, DomainError per the domain policy.
MlmcEstimate mlmc_estimate(const MlmcConfig& cfg, const Subroutine& subroutine,
                           const GFunction& g, RngStream& s);

}  // namespace umlmc
