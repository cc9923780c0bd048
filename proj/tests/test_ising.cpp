#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "stats.hpp"
#include "umlmc/errors.hpp"
#include "umlmc/ising.hpp"

namespace umlmc {
namespace {

// Independent Hamiltonian: list every (site, right) and (site, down) bond.
int bond_sum_energy(const IsingState& sigma) {
  const int n = sigma.n;
  int e = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      e -= sigma.at(r, c) * sigma.at(r, (c + 1) % n);
      e -= sigma.at(r, c) * sigma.at((r + 1) % n, c);
    }
  }
  return e;
}

TEST(IsingHamiltonian, AllUpIsMinusTwoNSquared) {
  for (int n = 2; n <= 6; ++n) EXPECT_EQ(ising_hamiltonian(IsingState(n, 1)), -2 * n * n) << n;
}

TEST(IsingHamiltonian, OneFlipCostsEight) {
  for (int n = 3; n <= 6; ++n) {
    IsingState sigma(n, 1);
    sigma.at(1, 2 % n) = -1;
    EXPECT_EQ(ising_hamiltonian(sigma), -2 * n * n + 8) << n;
  }
}

TEST(IsingHamiltonian, CheckerboardOnTwoByTwo) {
  IsingState sigma(2, 1);
  sigma.at(0, 1) = -1;
  sigma.at(1, 0) = -1;
  EXPECT_EQ(ising_hamiltonian(sigma), bond_sum_energy(sigma));
  EXPECT_EQ(ising_hamiltonian(sigma), 8);
}

TEST(IsingHamiltonian, MatchesBondListOnAllSmallConfigurations) {
  for (int n = 2; n <= 3; ++n) {
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * n)); ++code) {
      const auto sigma = ising_state_from_code(n, code);
      ASSERT_EQ(ising_hamiltonian(sigma), bond_sum_energy(sigma));
    }
  }
}

TEST(IsingGibbs, ThetaZeroMeetsAfterOneSweep) {
  const auto kernel = make_ising_gibbs_coupling(5, 0.0);
  RngStream s(1, 0);
  for (int rep = 0; rep < 100; ++rep) {
    auto x = draw_ising_uniform(5, s), y = draw_ising_uniform(5, s);
    EXPECT_TRUE(kernel.coupled_step(x, y, s));
  }
}

TEST(IsingGibbs, IdenticalStartsNeverDiverge) {
  const auto kernel = make_ising_gibbs_coupling(4, 0.4);
  RngStream s(2, 0);
  auto x = draw_ising_uniform(4, s);
  auto y = x;
  for (int i = 0; i < 200; ++i) ASSERT_TRUE(kernel.coupled_step(x, y, s));
}

TEST(IsingGibbs, DetailedBalanceOfSiteUpdates) {
  RngStream s(3, 0);
  for (int n : {2, 3, 4}) {
    for (double theta : {0.1, 0.4, 1.0}) {
      const IsingGibbsKernel kernel(n, theta);
      for (int trial = 0; trial < 50; ++trial) {
        const auto sigma = draw_ising_uniform(n, s);
        for (int r = 0; r < n; ++r) {
          for (int c = 0; c < n; ++c) {
            auto flipped = sigma;
            flipped.at(r, c) = static_cast<std::int8_t>(-sigma.at(r, c));
            const double p_up = kernel.prob_up(ising_local_field(sigma, r, c));
            auto move_prob = [&](std::int8_t to) { return to == 1 ? p_up : 1.0 - p_up; };
            const double lhs = std::exp(-theta * ising_hamiltonian(sigma)) * move_prob(flipped.at(r, c));
            const double rhs = std::exp(-theta * ising_hamiltonian(flipped)) * move_prob(sigma.at(r, c));
            ASSERT_NEAR(lhs, rhs, 1e-12 * std::max(lhs, rhs));
          }
        }
      }
    }
  }
}

TEST(IsingGibbs, StationaryLawOnTwoByTwo) {
  const double theta = 0.3;
  const IsingGibbsKernel kernel(2, theta);
  std::vector<double> probs(16);
  const double z = ising_partition_function(2, theta);
  for (std::uint64_t code = 0; code < 16; ++code) {
    probs[code] = std::exp(-theta * ising_hamiltonian(ising_state_from_code(2, code))) / z;
  }
  std::vector<std::uint64_t> counts(16, 0);
  RngStream s(4, 0);
  for (int rep = 0; rep < 100'000; ++rep) {
    auto x = draw_ising_uniform(2, s);
    for (int sweep = 0; sweep < 30; ++sweep) kernel.step(x, s);
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < 4; ++i) code |= std::uint64_t{x.spins[i] == 1} << i;
    ++counts[code];
  }
  EXPECT_GT(testing::chi_square_pvalue(counts, probs), 0.01);
}

// E_theta[e^{theta H}] = 2^{n^2} / Z(theta).
void check_ratio_numerator(int n, double theta, std::uint64_t seed) {
  const auto f = ising_ratio_f(n, theta);
  const double oracle = ising_expectation_oracle(n, theta, f);
  EXPECT_NEAR(oracle, std::ldexp(1.0, n * n) / ising_partition_function(n, theta), 1e-12 * oracle);
  const IsingGibbsKernel kernel(n, theta);
  RngStream s(seed, 0);
  std::vector<double> xs(20'000);
  for (auto& v : xs) {
    auto x = draw_ising_uniform(n, s);
    for (int sweep = 0; sweep < 40; ++sweep) kernel.step(x, s);
    v = f(x);
  }
  EXPECT_LT(std::abs(testing::z_score(testing::moments(xs), oracle)), 3.0);
}

TEST(IsingRatioF, TwoByTwoAgainstEnumeration) { check_ratio_numerator(2, 0.1, 5); }
TEST(IsingRatioF, FourByFourAgainstEnumeration) { check_ratio_numerator(4, 0.15, 6); }

TEST(IsingRatioF, ThetaZeroIsConstantOne) {
  const auto f = ising_ratio_f(3, 0.0);
  RngStream s(7, 0);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(f(draw_ising_uniform(3, s)), 1.0);
}

TEST(IsingRatioF, GuardsAgainstOverflow) {
  EXPECT_THROW(ising_ratio_f(12, ising_theta_limit(12) * 1.01), OverflowError);
  EXPECT_NO_THROW(ising_ratio_f(12, 0.5));
  EXPECT_THROW(ising_ratio_f(4, -0.1), ConfigError);
}

TEST(IsingOracle, EqualThetasGiveOne) {
  EXPECT_EQ(ising_z_ratio_oracle(2, 0.1, 0.1), 1.0);
  EXPECT_EQ(ising_z_ratio_oracle(4, 0.37, 0.37), 1.0);
}

TEST(IsingOracle, TwoByTwoSixteenTermSum) {
  double sum = 0.0;
  for (std::uint64_t code = 0; code < 16; ++code) {
    sum += std::exp(-0.1 * bond_sum_energy(ising_state_from_code(2, code)));
  }
  EXPECT_NEAR(ising_z_ratio_oracle(2, 0.1, 0.0), sum / 16.0, 1e-14);
}

TEST(IsingOracle, Telescopes) {
  for (auto [a, mid, b] : {std::array{0.05, 0.1, 0.2}, std::array{0.3, 0.0, 0.15}}) {
    const double direct = ising_z_ratio_oracle(3, a, b);
    const double product = ising_z_ratio_oracle(3, a, mid) * ising_z_ratio_oracle(3, mid, b);
    EXPECT_NEAR(direct, product, 1e-12 * direct);
  }
}

TEST(IsingOracle, RejectsLargeLattices) {
  EXPECT_THROW(ising_z_ratio_oracle(5, 0.1, 0.0), ConfigError);
  EXPECT_THROW(ising_partition_function(1, 0.1), ConfigError);
}

TEST(IsingGibbs, RejectsBadParameters) {
  EXPECT_THROW(IsingGibbsKernel(1, 0.1), ConfigError);
  EXPECT_THROW(IsingGibbsKernel(3, -0.1), ConfigError);
  const IsingGibbsKernel kernel(3, 0.1);
  EXPECT_THROW(kernel.check_state(IsingState(4, 1)), DimensionError);
}

}  // namespace
}  // namespace umlmc
