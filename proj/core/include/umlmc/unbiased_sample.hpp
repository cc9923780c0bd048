#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "umlmc/rng.hpp"

namespace umlmc {

/// One output of an unbiased estimator of m(pi) in R^m.
///
/// cost is counted in coupled steps (one coupled step = one transition of the
/// pair, i.e. two kernel applications before meeting); tau is the meeting time,
/// or for concatenated samples the largest component meeting time.
struct UnbiasedSample {
  std::vector<double> value;
  std::uint64_t cost = 0;
  std::uint64_t tau = 0;
};

/// Source of i.i.d. unbiased samples; every call must use a fresh trajectory.
using Subroutine = std::function<UnbiasedSample(RngStream&)>;

/// Calls each part in order and concatenates the values; costs add up, tau is
/// the maximum. Parts are independent because they draw from disjoint stretches
/// of the same stream.
Subroutine concatenate(std::vector<Subroutine> parts);

}  // namespace umlmc
