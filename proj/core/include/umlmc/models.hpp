#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "umlmc/ising.hpp"
#include "umlmc/mlmc.hpp"
#include "umlmc/unbiased_sample.hpp"

namespace umlmc {

/// Plug-in MCMC estimate g(ergodic average) run for a budget in the same
/// cost units as UnbiasedSample::cost; the first 10% of each chain is
/// discarded as burn-in.
using PluginEstimator = std::function<double(RngStream&, std::uint64_t budget)>;

/// Everything needed to run one experiment: the unbiased subroutine for
/// m(pi), the outer map g, an optional recommended delta, the exact answer
/// when it is known, and the matching plug-in comparator.
struct Target {
  std::string name;
  Subroutine subroutine;
  GFunction g;
  std::optional<double> delta;
  std::optional<double> truth;
  PluginEstimator plugin;
};

/// Chain settings shared by the experiment targets.
struct JoaSettings {
  std::uint64_t k = 10;
  std::uint64_t m = 50;
  std::uint64_t max_steps = 1'000'000;
};

/// X_i ~ Beta(i, 1) independently, i = 1..K; g_K(E[X]) = prod 1 / E[X_i] = K + 1.
/// Coordinate i is estimated by a coupled random-walk MH chain started from
/// U(0, 1).
struct BetaOptions {
  int K = 1;
  double step_size = 0.5;
  JoaSettings joa{100, 400, 1'000'000};
};
Target beta_product_target(const BetaOptions& opts);

/// log density of Beta(a, 1) up to a constant; -inf outside (0, 1).
double beta_a1_log_density(double a, double x);

/// Z(theta1) / Z(theta2) = E_{theta2}[e^{theta2 H}] / E_{theta1}[e^{theta1 H}].
/// The subroutine returns (JOA for the numerator under p_{theta2}, JOA for the
/// denominator under p_{theta1}); g(x) = x_0 / x_1. truth is set for n <= 4.
struct IsingRatioOptions {
  int n = 4;
  double theta1 = 0.1;
  double theta2 = 0.0;
  JoaSettings joa{5, 20, 1'000'000};
};
Target ising_ratio_target(const IsingRatioOptions& opts);

/// 1 / E_theta[h] with h = -H, g(x) = 1/x and the delta transform enabled.
struct IsingNaturalStatOptions {
  int n = 4;
  double theta = 0.3;
  double delta = 0.5;
  JoaSettings joa{5, 20, 1'000'000};
};
Target ising_natural_stat_target(const IsingNaturalStatOptions& opts);

}  // namespace umlmc
