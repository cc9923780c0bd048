#include "umlmc/finite_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "umlmc/errors.hpp"

namespace umlmc {

std::size_t draw_discrete(RngStream& s, std::span<const double> weights, double total) {
  const double u = draw_uniform(s) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;  // round-off at the top of the CDF
}

FiniteKernel::FiniteKernel(std::vector<std::vector<double>> transition)
    : rows_(std::move(transition)) {
  if (rows_.empty()) throw ConfigError("transition matrix is empty");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (r.size() != rows_.size()) throw ConfigError("transition matrix is not square");
    double sum = 0.0;
    for (double v : r) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ConfigError("transition matrix has a negative or non-finite entry in row " +
                          std::to_string(i));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ConfigError("row " + std::to_string(i) + " of the transition matrix sums to " +
                        std::to_string(sum));
    }
  }
}

void FiniteKernel::check_state(const State& x) const {
  if (x >= rows_.size()) {
    throw DimensionError("finite state " + std::to_string(x) + " outside {0.." +
                         std::to_string(rows_.size() - 1) + "}");
  }
}

void FiniteKernel::step(State& x, RngStream& s) const { x = draw_discrete(s, rows_[x], 1.0); }

double FiniteKernel::meeting_probability(State x, State y) const {
  double overlap = 0.0;
  for (std::size_t j = 0; j < size(); ++j) overlap += std::min(rows_[x][j], rows_[y][j]);
  return overlap;
}

bool FiniteKernel::coupled_step(State& x, State& y, RngStream& s) const {
  const auto& p = rows_[x];
  const auto& q = rows_[y];
  std::vector<double> common(size());
  double overlap = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    common[j] = std::min(p[j], q[j]);
    overlap += common[j];
  }
  if (draw_uniform(s) < overlap) {
    x = y = draw_discrete(s, common, overlap);
    return true;
  }
  // Residuals have disjoint supports, so the chains land on different states.
  std::vector<double> rx(size()), ry(size());
  for (std::size_t j = 0; j < size(); ++j) {
    rx[j] = p[j] - common[j];
    ry[j] = q[j] - common[j];
  }
  const double rest = 1.0 - overlap;
  x = draw_discrete(s, rx, rest);
  y = draw_discrete(s, ry, rest);
  return x == y;
}

FiniteKernel make_finite_test_kernel(std::vector<std::vector<double>> transition) {
  return FiniteKernel(std::move(transition));
}

}  // namespace umlmc
