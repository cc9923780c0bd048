#include "umlmc/ising.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "umlmc/errors.hpp"

namespace umlmc {
namespace {

constexpr int kMaxEnumerationSide = 4;

void require_enumerable(int n) {
  if (n < 2 || n > kMaxEnumerationSide) {
    throw ConfigError("exact Ising enumeration needs 2 <= n <= 4, got n = " + std::to_string(n));
  }
}

}  // namespace

IsingState::IsingState(int side, std::int8_t fill)
    : n(side), spins(static_cast<std::size_t>(side * side), fill) {}

int ising_hamiltonian(const IsingState& sigma) {
  const int n = sigma.n;
  int sum = 0;
  for (int r = 0; r < n; ++r) {
    const int down = (r + 1) % n;
    for (int c = 0; c < n; ++c) {
      const int right = (c + 1) % n;
      sum += sigma.at(r, c) * (sigma.at(r, right) + sigma.at(down, c));
    }
  }
  return -sum;
}

int ising_local_field(const IsingState& sigma, int r, int c) {
  const int n = sigma.n;
  return sigma.at(r, (c + 1) % n) + sigma.at(r, (c + n - 1) % n) + sigma.at((r + 1) % n, c) +
         sigma.at((r + n - 1) % n, c);
}

IsingState ising_state_from_code(int n, std::uint64_t code) {
  IsingState sigma(n, -1);
  for (std::size_t i = 0; i < sigma.spins.size(); ++i) {
    if ((code >> i) & 1u) sigma.spins[i] = 1;
  }
  return sigma;
}

IsingState draw_ising_uniform(int n, RngStream& s) {
  IsingState sigma(n, -1);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sigma.spins.size(); ++i) {
    if (i % 64 == 0) bits = s();
    sigma.spins[i] = (bits & 1u) ? 1 : -1;
    bits >>= 1;
  }
  return sigma;
}

IsingGibbsKernel::IsingGibbsKernel(int n, double theta) : n_(n), theta_(theta) {
  if (n < 2) throw ConfigError("Ising lattice side must be >= 2, got " + std::to_string(n));
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw ConfigError("Ising inverse temperature must be >= 0");
  }
  // p(+1 | field h) = e^{theta h} / (e^{theta h} + e^{-theta h})
  for (int k = 0; k < 5; ++k) {
    const double h = 2.0 * k - 4.0;
    prob_up_[static_cast<std::size_t>(k)] = 1.0 / (1.0 + std::exp(-2.0 * theta_ * h));
  }
}

void IsingGibbsKernel::check_state(const State& x) const {
  if (x.n != n_ || x.spins.size() != static_cast<std::size_t>(n_ * n_)) {
    throw DimensionError("Ising state has side " + std::to_string(x.n) + ", kernel expects " +
                         std::to_string(n_));
  }
}

void IsingGibbsKernel::step(State& x, RngStream& s) const {
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c < n_; ++c) {
      const double u = draw_uniform(s);
      x.at(r, c) = u < prob_up(ising_local_field(x, r, c)) ? 1 : -1;
    }
  }
}

bool IsingGibbsKernel::coupled_step(State& x, State& y, RngStream& s) const {
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c < n_; ++c) {
      const double u = draw_uniform(s);
      x.at(r, c) = u < prob_up(ising_local_field(x, r, c)) ? 1 : -1;
      y.at(r, c) = u < prob_up(ising_local_field(y, r, c)) ? 1 : -1;
    }
  }
  return x == y;
}

IsingGibbsKernel make_ising_gibbs_coupling(int n, double theta) { return IsingGibbsKernel(n, theta); }

double ising_theta_limit(int n) {
  return std::log(std::numeric_limits<double>::max()) / (2.0 * n * n);
}

std::function<double(const IsingState&)> ising_ratio_f(int n, double theta) {
  if (!(theta >= 0.0)) throw ConfigError("theta must be >= 0");
  if (theta > ising_theta_limit(n)) {
    throw OverflowError("exp(theta * H) overflows for n = " + std::to_string(n) +
                        ", theta = " + std::to_string(theta) + " (limit theta <= " +
                        std::to_string(ising_theta_limit(n)) + ")");
  }
  return [theta](const IsingState& sigma) { return std::exp(theta * ising_hamiltonian(sigma)); };
}

double ising_expectation_oracle(int n, double theta,
                                const std::function<double(const IsingState&)>& g) {
  require_enumerable(n);
  const std::uint64_t count = std::uint64_t{1} << (n * n);
  double z = 0.0;
  double acc = 0.0;
  for (std::uint64_t code = 0; code < count; ++code) {
    const IsingState sigma = ising_state_from_code(n, code);
    const double w = std::exp(-theta * ising_hamiltonian(sigma));
    z += w;
    acc += w * g(sigma);
  }
  return acc / z;
}

double ising_partition_function(int n, double theta) {
  require_enumerable(n);
  const std::uint64_t count = std::uint64_t{1} << (n * n);
  double z = 0.0;
  for (std::uint64_t code = 0; code < count; ++code) {
    z += std::exp(-theta * ising_hamiltonian(ising_state_from_code(n, code)));
  }
  return z;
}

double ising_z_ratio_oracle(int n, double theta1, double theta2) {
  require_enumerable(n);
  if (theta1 == theta2) return 1.0;
  return ising_partition_function(n, theta1) / ising_partition_function(n, theta2);
}

}  // namespace umlmc
