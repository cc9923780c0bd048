#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "umlmc/rng.hpp"

namespace umlmc {

/// n x n spin configuration on the torus, row-major, entries exactly +-1.
struct IsingState {
  int n = 0;
  std::vector<std::int8_t> spins;

  IsingState() = default;
  IsingState(int side, std::int8_t fill);

  std::int8_t& at(int row, int col) { return spins[static_cast<std::size_t>(row * n + col)]; }
  std::int8_t at(int row, int col) const { return spins[static_cast<std::size_t>(row * n + col)]; }

  bool operator==(const IsingState&) const = default;
};

/// H(sigma) = -sum over sites of sigma_i (sigma_right + sigma_down), periodic.
/// That is 2 n^2 bonds, each counted once; on the 2 x 2 torus the right and
/// left neighbour coincide, so those bonds appear twice.
int ising_hamiltonian(const IsingState& sigma);

/// Sum of the four periodic neighbours of (row, col), with multiplicity.
int ising_local_field(const IsingState& sigma, int row, int col);

/// Configuration index `code` read as bits (bit i set -> spin i is +1).
IsingState ising_state_from_code(int n, std::uint64_t code);

IsingState draw_ising_uniform(int n, RngStream& s);

/// Single-site heat-bath Gibbs sampler for p_theta(sigma) ~ exp(-theta H),
/// raster scan; one step() is one full sweep. coupled_step feeds the same
/// uniform to both chains at every site (monotone common-random-number
/// coupling).
class IsingGibbsKernel {
 public:
  using State = IsingState;

  IsingGibbsKernel(int n, double theta);

  int side() const noexcept { return n_; }
  double theta() const noexcept { return theta_; }
  /// P(sigma_i = +1 | neighbours) for local field 2k - 4, k = 0..4.
  double prob_up(int local_field) const { return prob_up_[static_cast<std::size_t>((local_field + 4) / 2)]; }

  void check_state(const State& x) const;
  void step(State& x, RngStream& s) const;
  bool coupled_step(State& x, State& y, RngStream& s) const;

 private:
  int n_;
  double theta_;
  std::array<double, 5> prob_up_{};
};

IsingGibbsKernel make_ising_gibbs_coupling(int n, double theta);

/// Largest theta for which exp(theta * H) is representable on an n x n
/// lattice, |H| <= 2 n^2.
double ising_theta_limit(int n);

/// f_theta(sigma) = exp(theta H(sigma)). Throws OverflowError when
/// theta > ising_theta_limit(n), ConfigError when theta < 0.
std::function<double(const IsingState&)> ising_ratio_f(int n, double theta);

/// Exact Z(theta) by summing over all 2^(n^2) configurations; n <= 4.
double ising_partition_function(int n, double theta);

/// Exact Z(theta1) / Z(theta2); n <= 4, ConfigError otherwise.
double ising_z_ratio_oracle(int n, double theta1, double theta2);

/// Exact E_theta[g(sigma)] by enumeration; n <= 4.
double ising_expectation_oracle(int n, double theta, const std::function<double(const IsingState&)>& g);

}  // namespace umlmc
