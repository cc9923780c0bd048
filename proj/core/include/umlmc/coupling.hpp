#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>

#include "umlmc/rng.hpp"

namespace umlmc {

/// A pi-invariant transition kernel acting in place on its State.
/// check_state throws DimensionError for states of the wrong shape.
template <class K>
concept MarkovKernel = requires(const K& kernel, typename K::State& x, RngStream& s) {
  typename K::State;
  { kernel.step(x, s) } -> std::same_as<void>;
  { kernel.check_state(std::as_const(x)) } -> std::same_as<void>;
};

/// A faithful coupling of a kernel with itself. coupled_step advances both
/// states jointly, each marginal following step(); returns true when the two
/// states are equal afterwards. Equal inputs must give equal outputs.
template <class K>
concept CoupledKernel =
    MarkovKernel<K> && std::equality_comparable<typename K::State> &&
    requires(const K& kernel, typename K::State& x, typename K::State& y, RngStream& s) {
      { kernel.coupled_step(x, y, s) } -> std::same_as<bool>;
    };

template <class State>
using InitialSampler = std::function<State(RngStream&)>;

/// (Y_t, Z_{t-1}) under a faithful coupling. Y_0 is kept because the
/// estimator with burn-in index 0 needs f(Y_0).
template <class State>
struct CoupledChainPair {
  State y0;
  State y;  ///< Y_t
  State z;  ///< Z_{t-1}
  std::uint64_t t = 0;
  bool met = false;
  std::optional<std::uint64_t> tau;
};

/// Y_0 ~ pi0, Y_1 ~ P(Y_0, .), Z_0 ~ pi0 independently; leaves t = 1.
template <CoupledKernel K>
CoupledChainPair<typename K::State> init_coupled(const K& kernel,
                                                 const InitialSampler<typename K::State>& pi0,
                                                 RngStream& s) {
  CoupledChainPair<typename K::State> pair;
  pair.y0 = pi0(s);
  kernel.check_state(pair.y0);
  pair.y = pair.y0;
  kernel.step(pair.y, s);
  pair.z = pi0(s);
  kernel.check_state(pair.z);
  pair.t = 1;
  if (pair.y == pair.z) {
    pair.met = true;
    pair.tau = 1;
  }
  return pair;
}

/// One coupled transition. Once met, a single kernel step is applied and
/// copied, so the pair can never separate again.
template <CoupledKernel K>
void step_coupled(CoupledChainPair<typename K::State>& pair, const K& kernel, RngStream& s) {
  if (pair.met) {
    kernel.step(pair.y, s);
    pair.z = pair.y;
    ++pair.t;
    return;
  }
  const bool equal = kernel.coupled_step(pair.y, pair.z, s);
  ++pair.t;
  if (equal) {
    pair.met = true;
    pair.tau = pair.t;
  }
}

}  // namespace umlmc
