#include <gtest/gtest.h>

#include <vector>

#include "stats.hpp"
#include "umlmc/coupling.hpp"
#include "umlmc/errors.hpp"
#include "umlmc/finite_kernel.hpp"

namespace umlmc {
namespace {

using Matrix = std::vector<std::vector<double>>;

const Matrix kThreeState = {{0.5, 0.3, 0.2}, {0.2, 0.6, 0.2}, {0.1, 0.3, 0.6}};
const std::vector<double> kPi0 = {0.2, 0.5, 0.3};

InitialSampler<std::size_t> categorical(std::vector<double> w) {
  return [w](RngStream& s) { return draw_discrete(s, w, 1.0); };
}

// Joint law of (Y_t, Z_{t-1}) under the maximal coupling, by direct
// propagation over the 9 pairs.
Matrix exact_pair_law(const Matrix& p, const std::vector<double>& pi0, int t) {
  const std::size_t k = p.size();
  Matrix law(k, std::vector<double>(k, 0.0));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t b = 0; b < k; ++b) law[i][b] += pi0[a] * p[a][i] * pi0[b];
  for (int step = 1; step < t; ++step) {
    Matrix next(k, std::vector<double>(k, 0.0));
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = 0; y < k; ++y) {
        const double w = law[x][y];
        if (w == 0.0) continue;
        if (x == y) {
          for (std::size_t j = 0; j < k; ++j) next[j][j] += w * p[x][j];
          continue;
        }
        double overlap = 0.0;
        for (std::size_t j = 0; j < k; ++j) overlap += std::min(p[x][j], p[y][j]);
        for (std::size_t j = 0; j < k; ++j) next[j][j] += w * std::min(p[x][j], p[y][j]);
        if (overlap < 1.0) {
          for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
              next[i][j] += w * (p[x][i] - std::min(p[x][i], p[y][i])) *
                            (p[y][j] - std::min(p[x][j], p[y][j])) / (1.0 - overlap);
        }
      }
    }
    law = next;
  }
  return law;
}

TEST(FiniteKernel, RejectsBadMatrices) {
  EXPECT_THROW(FiniteKernel(Matrix{}), ConfigError);
  EXPECT_THROW(FiniteKernel(Matrix{{0.5, 0.5}}), ConfigError);
  EXPECT_THROW(FiniteKernel(Matrix{{0.5, 0.4}, {0.5, 0.5}}), ConfigError);
  EXPECT_THROW(FiniteKernel(Matrix{{1.5, -0.5}, {0.5, 0.5}}), ConfigError);
}

TEST(FiniteKernel, MeetingProbabilityFromOverlap) {
  const FiniteKernel equal({{0.3, 0.7}, {0.3, 0.7}});
  EXPECT_DOUBLE_EQ(equal.meeting_probability(0, 1), 1.0);
  const FiniteKernel disjoint({{1.0, 0.0}, {0.0, 1.0}});
  EXPECT_DOUBLE_EQ(disjoint.meeting_probability(0, 1), 0.0);
  const FiniteKernel half({{0.5, 0.5}, {0.25, 0.75}});
  EXPECT_DOUBLE_EQ(half.meeting_probability(0, 1), 0.75);
}

TEST(FiniteKernel, EqualRowsAlwaysMeet) {
  const FiniteKernel kernel({{0.3, 0.7}, {0.3, 0.7}});
  RngStream s(1, 0);
  for (int i = 0; i < 1000; ++i) {
    std::size_t x = 0, y = 1;
    ASSERT_TRUE(kernel.coupled_step(x, y, s));
  }
}

TEST(FiniteKernel, DisjointRowsNeverMeet) {
  const FiniteKernel kernel({{1.0, 0.0}, {0.0, 1.0}});
  RngStream s(1, 0);
  for (int i = 0; i < 1000; ++i) {
    std::size_t x = 0, y = 1;
    ASSERT_FALSE(kernel.coupled_step(x, y, s));
  }
}

TEST(FiniteKernel, MeetingFrequencyThreeQuarters) {
  const FiniteKernel kernel({{0.5, 0.5}, {0.25, 0.75}});
  RngStream s(2, 0);
  std::vector<double> met(100'000);
  for (auto& m : met) {
    std::size_t x = 0, y = 1;
    m = kernel.coupled_step(x, y, s) ? 1.0 : 0.0;
  }
  EXPECT_LT(std::abs(testing::z_score(testing::moments(met), 0.75)), 3.0);
}

TEST(FiniteKernel, CoupledMarginalsFollowRows) {
  const FiniteKernel kernel(kThreeState);
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 3; ++y) {
      RngStream s(3, x * 3 + y);
      std::vector<std::uint64_t> cx(3, 0), cy(3, 0);
      for (int i = 0; i < 50'000; ++i) {
        std::size_t a = x, b = y;
        kernel.coupled_step(a, b, s);
        ++cx[a];
        ++cy[b];
      }
      EXPECT_GT(testing::chi_square_pvalue(cx, kThreeState[x]), 0.001) << x << "," << y;
      EXPECT_GT(testing::chi_square_pvalue(cy, kThreeState[y]), 0.001) << x << "," << y;
    }
  }
}

TEST(CoupledChains, PointMassWithIdentityKernelMeetsAtOne) {
  const FiniteKernel identity({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  InitialSampler<std::size_t> pi0 = [](RngStream&) { return std::size_t{2}; };
  RngStream s(1, 0);
  const auto pair = init_coupled(identity, pi0, s);
  EXPECT_EQ(pair.y, 2u);
  EXPECT_EQ(pair.z, 2u);
  EXPECT_TRUE(pair.met);
  ASSERT_TRUE(pair.tau.has_value());
  EXPECT_EQ(*pair.tau, 1u);
  EXPECT_EQ(pair.t, 1u);
}

TEST(CoupledChains, InitLeavesTimeOne) {
  const FiniteKernel kernel(kThreeState);
  RngStream s(1, 0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(init_coupled(kernel, categorical(kPi0), s).t, 1u);
}

TEST(CoupledChains, FirstStateFollowsPi0TimesP) {
  const FiniteKernel kernel(kThreeState);
  std::vector<double> law(3, 0.0);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t j = 0; j < 3; ++j) law[j] += kPi0[a] * kThreeState[a][j];
  RngStream s(7, 0);
  std::vector<std::uint64_t> counts(3, 0), z_counts(3, 0);
  for (int i = 0; i < 100'000; ++i) {
    const auto pair = init_coupled(kernel, categorical(kPi0), s);
    ++counts[pair.y];
    ++z_counts[pair.z];
  }
  EXPECT_GT(testing::chi_square_pvalue(counts, law), 0.01);
  EXPECT_GT(testing::chi_square_pvalue(z_counts, kPi0), 0.01);
}

TEST(CoupledChains, PairLawMatchesEnumeration) {
  const FiniteKernel kernel(kThreeState);
  for (int t : {1, 2, 4}) {
    const auto law = exact_pair_law(kThreeState, kPi0, t);
    std::vector<double> probs;
    for (const auto& row : law) probs.insert(probs.end(), row.begin(), row.end());
    std::vector<std::uint64_t> counts(9, 0);
    RngStream s(11, static_cast<std::uint64_t>(t));
    for (int i = 0; i < 100'000; ++i) {
      auto pair = init_coupled(kernel, categorical(kPi0), s);
      while (pair.t < static_cast<std::uint64_t>(t)) step_coupled(pair, kernel, s);
      ++counts[pair.y * 3 + pair.z];
    }
    EXPECT_GT(testing::chi_square_pvalue(counts, probs), 0.01) << "t = " << t;
  }
}

TEST(CoupledChains, MetPairNeverSeparates) {
  const FiniteKernel kernel(kThreeState);
  RngStream s(5, 0);
  for (int rep = 0; rep < 200; ++rep) {
    auto pair = init_coupled(kernel, categorical(kPi0), s);
    while (!pair.met) step_coupled(pair, kernel, s);
    const auto tau = *pair.tau;
    for (int i = 0; i < 100; ++i) {
      step_coupled(pair, kernel, s);
      ASSERT_TRUE(pair.met);
      ASSERT_EQ(pair.y, pair.z);
      ASSERT_EQ(*pair.tau, tau);
    }
  }
}

TEST(CoupledChains, EqualStatesStayEqualUnderCoupledStep) {
  const FiniteKernel kernel(kThreeState);
  RngStream s(6, 0);
  for (int i = 0; i < 1000; ++i) {
    std::size_t x = static_cast<std::size_t>(i % 3), y = x;
    ASSERT_TRUE(kernel.coupled_step(x, y, s));
    ASSERT_EQ(x, y);
  }
}

}  // namespace
}  // namespace umlmc
