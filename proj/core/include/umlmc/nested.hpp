#pragma once

#include <functional>
#include <span>
#include <vector>

#include "umlmc/mlmc.hpp"

namespace umlmc {

/// What the inner stage needs for one outer draw x: a subroutine producing
/// unbiased estimates of E[phi(x, Y) | x], and the fixed setup cost paid to
/// build it (counted into the estimate's cost).
struct ConditionalSubroutine {
  Subroutine subroutine;
  std::uint64_t setup_cost = 0;
};

/// E_pi[ f(x, E[phi(x, y) | x]) ] with x directly samplable and y | x reachable
/// only through MCMC.
struct NestedSpec {
  std::function<std::vector<double>(RngStream&)> outer_sampler;
  std::function<ConditionalSubroutine(std::span<const double> x)> conditional_factory;
  /// g_x = f(x, .) as a scalar function of the conditional mean.
  std::function<GFunction(std::span<const double> x)> outer_map;
  MlmcConfig inner;
};

struct NestedEstimate {
  double value = 0.0;
  std::vector<double> x;
  MlmcEstimate inner;
};

/// One outer draw x, then one randomised multilevel estimate of f(x, gamma(x)).
/// Inner failures are rethrown with x attached via
/// ReplicationError::set_conditioning.
NestedEstimate nested_estimate(const NestedSpec& spec, RngStream& s);

}  // namespace umlmc
