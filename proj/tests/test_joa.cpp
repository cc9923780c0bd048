#include <gtest/gtest.h>

#include <memory>
#include <vector>

#include "stats.hpp"
#include "umlmc/errors.hpp"
#include "umlmc/finite_kernel.hpp"
#include "umlmc/joa.hpp"
#include "umlmc/models.hpp"
#include "umlmc/rw_mh.hpp"

namespace umlmc {
namespace {

using Matrix = std::vector<std::vector<double>>;
const Matrix kThreeState = {{0.5, 0.3, 0.2}, {0.2, 0.6, 0.2}, {0.1, 0.3, 0.6}};

JoaConfig<FiniteKernel> finite_config(const Matrix& p, std::vector<double> pi0, std::uint64_t k,
                                      std::uint64_t m) {
  JoaConfig<FiniteKernel> cfg;
  cfg.kernel = std::make_shared<const FiniteKernel>(p);
  cfg.pi0 = [pi0](RngStream& s) { return draw_discrete(s, pi0, 1.0); };
  cfg.f = scalar_test_function<std::size_t>([](std::size_t x) { return x == 1 ? 1.0 : 0.0; });
  cfg.k = k;
  cfg.m_avg = m;
  return cfg;
}

std::vector<double> run(const JoaConfig<FiniteKernel>& cfg, int reps, std::uint64_t seed) {
  std::vector<double> values(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    RngStream s(seed, static_cast<std::uint64_t>(r));
    values[static_cast<std::size_t>(r)] = sample_joa(cfg, s).value[0];
  }
  return values;
}

TEST(Joa, StationaryStartWithImmediateMeeting) {
  const std::vector<double> pi = {0.2, 0.5, 0.3};
  const Matrix p(3, pi);
  const auto values = run(finite_config(p, pi, 0, 0), 100'000, 1);
  EXPECT_LT(std::abs(testing::z_score(testing::moments(values), 0.5)), 3.0);
}

TEST(Joa, ThreeStateIndicatorIsUnbiased) {
  const auto pi = testing::stationary_vector(kThreeState);
  const auto values = run(finite_config(kThreeState, {1.0, 0.0, 0.0}, 0, 0), 1'000'000, 2);
  EXPECT_LT(std::abs(testing::z_score(testing::moments(values), pi[1])), 3.0);
}

TEST(Joa, ThreeStateWithTimeAveraging) {
  const auto pi = testing::stationary_vector(kThreeState);
  const auto values = run(finite_config(kThreeState, {0.0, 0.0, 1.0}, 2, 6), 200'000, 3);
  EXPECT_LT(std::abs(testing::z_score(testing::moments(values), pi[1])), 3.0);
}

TEST(Joa, CostCoversMeetingAndWindow) {
  auto cfg = finite_config(kThreeState, {1.0, 0.0, 0.0}, 3, 7);
  for (int r = 0; r < 1000; ++r) {
    RngStream s(4, static_cast<std::uint64_t>(r));
    const auto out = sample_joa(cfg, s);
    ASSERT_GE(out.tau, 1u);
    ASSERT_EQ(out.cost, std::max<std::uint64_t>(out.tau, 7));
  }
}

TEST(Joa, VectorOutput) {
  auto cfg = finite_config(kThreeState, {1.0, 0.0, 0.0}, 0, 3);
  cfg.output_dim = 3;
  cfg.f = [](const std::size_t& x, std::span<double> out) {
    for (std::size_t j = 0; j < 3; ++j) out[j] = x == j ? 1.0 : 0.0;
  };
  const auto pi = testing::stationary_vector(kThreeState);
  std::vector<std::vector<double>> cols(3);
  for (int r = 0; r < 100'000; ++r) {
    RngStream s(5, static_cast<std::uint64_t>(r));
    const auto out = sample_joa(cfg, s);
    ASSERT_EQ(out.value.size(), 3u);
    ASSERT_NEAR(out.value[0] + out.value[1] + out.value[2], 1.0, 1e-12);
    for (std::size_t j = 0; j < 3; ++j) cols[j].push_back(out.value[j]);
  }
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_LT(std::abs(testing::z_score(testing::moments(cols[j]), pi[j])), 3.0) << j;
  }
}

TEST(Joa, BetaMeanViaRandomWalk) {
  for (int i = 1; i <= 3; ++i) {
    JoaConfig<RandomWalkMhKernel> cfg;
    cfg.kernel = std::make_shared<const RandomWalkMhKernel>(make_rw_mh_coupling(
        [i](std::span<const double> x) { return beta_a1_log_density(i, x[0]); }, 0.5));
    cfg.pi0 = [](RngStream& s) { return std::vector<double>{draw_uniform(s)}; };
    cfg.f = [](const std::vector<double>& x, std::span<double> out) { out[0] = x[0]; };
    cfg.k = 10;
    cfg.m_avg = 50;
    std::vector<double> values(20'000);
    for (std::size_t r = 0; r < values.size(); ++r) {
      RngStream s(6 + static_cast<std::uint64_t>(i), r);
      values[r] = sample_joa(cfg, s).value[0];
    }
    EXPECT_LT(std::abs(testing::z_score(testing::moments(values), i / (i + 1.0))), 3.0) << i;
  }
}

TEST(Joa, MeetingCapIsAnError) {
  const Matrix identity = {{1, 0}, {0, 1}};
  JoaConfig<FiniteKernel> cfg;
  cfg.kernel = std::make_shared<const FiniteKernel>(identity);
  std::uint64_t calls = 0;
  cfg.pi0 = [calls](RngStream&) mutable { return std::size_t{calls++ % 2 == 0 ? 0u : 1u}; };
  cfg.f = scalar_test_function<std::size_t>([](std::size_t x) { return static_cast<double>(x); });
  cfg.max_steps = 100;
  RngStream s(1, 0);
  try {
    sample_joa(cfg, s);
    FAIL() << "expected MeetingCapError";
  } catch (const MeetingCapError& e) {
    EXPECT_EQ(e.reason(), "meeting_cap");
  }
}

TEST(Joa, ValidatesWindow) {
  auto cfg = finite_config(kThreeState, {1.0, 0.0, 0.0}, 5, 4);
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.m_avg = 5;
  EXPECT_NO_THROW(cfg.validate());
  cfg.max_steps = 3;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(make_joa_subroutine(cfg), ConfigError);
}

}  // namespace
}  // namespace umlmc
