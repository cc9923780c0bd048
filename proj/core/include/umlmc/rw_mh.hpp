#pragma once

#include <functional>
#include <span>
#include <vector>

#include "umlmc/rng.hpp"

namespace umlmc {

using LogDensity = std::function<double(std::span<const double>)>;

/// Gaussian random-walk Metropolis-Hastings on R^d with per-coordinate
/// proposal scales.
///
/// The coupled step draws the two proposals from a reflection-maximal
/// coupling of N(x, diag(scale^2)) and N(y, diag(scale^2)); on the coupling
/// event the second proposal is assigned the first one verbatim, so meeting is
/// exact equality of doubles. Both chains use one common uniform for the
/// accept/reject decision.
///
/// A log density of -inf at a proposal means "outside the support" and the
/// proposal is rejected. A non-finite log density at the current state throws
/// NonFiniteTargetError.
class RandomWalkMhKernel {
 public:
  using State = std::vector<double>;

  RandomWalkMhKernel(LogDensity log_target, std::vector<double> step_scales);

  std::size_t dimension() const noexcept { return scales_.size(); }
  const std::vector<double>& step_scales() const noexcept { return scales_; }
  double log_target(std::span<const double> x) const { return log_target_(x); }

  void check_state(const State& x) const;
  void step(State& x, RngStream& s) const;
  bool coupled_step(State& x, State& y, RngStream& s) const;

  /// Like step() but reports whether the proposal was accepted.
  bool step_accepting(State& x, RngStream& s) const;

 private:
  double checked_current(const State& x) const;

  LogDensity log_target_;
  std::vector<double> scales_;
};

/// Isotropic convenience form: step_size on every coordinate.
RandomWalkMhKernel make_rw_mh_coupling(LogDensity log_target, double step_size,
                                       std::size_t dimension = 1);

}  // namespace umlmc
