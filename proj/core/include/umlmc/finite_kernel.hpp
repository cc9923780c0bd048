#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "umlmc/rng.hpp"

namespace umlmc {

/// Discrete chain on {0, ..., k-1} driven by a row-stochastic matrix, with
/// the exact maximal coupling of the two current rows at every step. Used as
/// a test oracle: every law it produces can be enumerated.
class FiniteKernel {
 public:
  using State = std::size_t;

  /// Throws ConfigError unless the matrix is square, non-negative and each
  /// row sums to 1 within 1e-12.
  explicit FiniteKernel(std::vector<std::vector<double>> transition);

  std::size_t size() const noexcept { return rows_.size(); }
  const std::vector<double>& row(State x) const { return rows_.at(x); }

  void check_state(const State& x) const;
  void step(State& x, RngStream& s) const;
  bool coupled_step(State& x, State& y, RngStream& s) const;

  /// 1 - TV(row(x), row(y)): the probability that coupled_step merges x and y.
  double meeting_probability(State x, State y) const;

 private:
  std::vector<std::vector<double>> rows_;
};

FiniteKernel make_finite_test_kernel(std::vector<std::vector<double>> transition);

/// Draws an index from unnormalised non-negative weights by inversion.
std::size_t draw_discrete(RngStream& s, std::span<const double> weights, double total);

}  // namespace umlmc
