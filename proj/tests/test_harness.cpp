#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "stats.hpp"
#include "umlmc/errors.hpp"
#include "umlmc/harness.hpp"
#include "umlmc/report_io.hpp"

namespace umlmc {
namespace {

ReplicationJob normal_job(double mean = 0.0) {
  return [mean](RngStream& s) { return ReplicationOutcome{draw_normal(s, mean, 1.0), 1 + s() % 5, 0}; };
}

TEST(Harness, ConstantJob) {
  RunOptions opts;
  opts.replications = 100;
  opts.truth = 7.0;
  const auto rep = run_replications([](RngStream&) { return ReplicationOutcome{7.0, 3, 0}; }, opts);
  EXPECT_EQ(rep.mean, 7.0);
  EXPECT_EQ(rep.variance, 0.0);
  EXPECT_EQ(rep.ci_low, 7.0);
  EXPECT_EQ(rep.ci_high, 7.0);
  EXPECT_EQ(rep.total_cost, 300u);
  EXPECT_EQ(rep.work_normalized_variance, 0.0);
  EXPECT_EQ(rep.relative_error, 0.0);
  EXPECT_FALSE(rep.meeting_time.has_value());
}

TEST(Harness, ReportInvariants) {
  RunOptions opts;
  opts.replications = 5000;
  const auto rep = run_replications(normal_job(), opts);
  EXPECT_DOUBLE_EQ(rep.ci_high - rep.mean, 1.96 * rep.std_error);
  EXPECT_DOUBLE_EQ(rep.std_error, std::sqrt(rep.variance / static_cast<double>(rep.n_ok)));
  EXPECT_DOUBLE_EQ(rep.work_normalized_variance, rep.variance * rep.mean_cost);

  // Cost conservation: total equals the per-replication sum.
  std::uint64_t total = 0;
  for (std::uint64_t r = 0; r < opts.replications; ++r) {
    RngStream s(opts.seed, r);
    total += normal_job()(s).cost;
  }
  EXPECT_EQ(rep.total_cost, total);
}

TEST(Harness, MillionNormalsCoverZero) {
  RunOptions opts;
  opts.replications = 1'000'000;
  const auto rep = run_replications(normal_job(), opts);
  EXPECT_LE(rep.ci_low, 0.0);
  EXPECT_GE(rep.ci_high, 0.0);
}

TEST(Harness, CoverageIsNearNominal) {
  int covered = 0;
  constexpr int kRuns = 400;
  for (int run = 0; run < kRuns; ++run) {
    RunOptions opts;
    opts.replications = 500;
    opts.seed = 1000 + static_cast<std::uint64_t>(run);
    const auto rep = run_replications(normal_job(), opts);
    covered += rep.ci_low <= 0.0 && 0.0 <= rep.ci_high;
  }
  const double rate = covered / double(kRuns);
  EXPECT_NEAR(rate, 0.95, 3.0 * std::sqrt(0.95 * 0.05 / kRuns));
}

TEST(Harness, ThreadCountDoesNotChangeReport) {
  RunOptions opts;
  opts.replications = 20'000;
  opts.truth = 0.1;
  opts.label = "normal";
  auto job = [](RngStream& s) {
    const double v = draw_normal(s);
    if (v > 3.5) throw DomainError({v}, "tail");
    return ReplicationOutcome{v, 1 + s() % 7, 1 + s() % 100};
  };
  opts.threads = 1;
  const auto one = run_replications(job, opts);
  opts.threads = 8;
  const auto eight = run_replications(job, opts);
  EXPECT_EQ(report_to_json(one), report_to_json(eight));
  EXPECT_EQ(report_to_csv(one), report_to_csv(eight));
  EXPECT_GT(one.n_errors, 0u);
}

ReplicationJob failing_job(double fraction) {
  return [fraction](RngStream& s) {
    if (draw_uniform(s) < fraction) throw MeetingCapError("capped");
    return ReplicationOutcome{1.0, 1, 0};
  };
}

TEST(Harness, ErrorsAreCountedNotDropped) {
  RunOptions opts;
  opts.replications = 10'000;
  const auto rare = run_replications(failing_job(0.002), opts);
  EXPECT_GT(rare.n_errors, 0u);
  EXPECT_EQ(rare.n_ok + rare.n_errors, rare.n_replications);
  EXPECT_EQ(rare.error_reasons.at("meeting_cap"), rare.n_errors);
  EXPECT_TRUE(rare.warnings.empty());

  const auto frequent = run_replications(failing_job(0.05), opts);
  ASSERT_EQ(frequent.warnings.size(), 1u);
  EXPECT_NE(frequent.warnings[0].find("WARNING"), std::string::npos);

  EXPECT_THROW(run_replications(failing_job(0.6), opts), RunFailedError);
}

TEST(Harness, OtherExceptionsAbortTheRun) {
  RunOptions opts;
  opts.replications = 100;
  opts.threads = 4;
  auto job = [](RngStream& s) -> ReplicationOutcome {
    if (s.stream_id() == 37) throw std::logic_error("bug");
    return {0.0, 1, 0};
  };
  EXPECT_THROW(run_replications(job, opts), std::logic_error);
}

TEST(Harness, NeedsTwoReplications) {
  RunOptions opts;
  opts.replications = 1;
  EXPECT_THROW(run_replications(normal_job(), opts), ConfigError);
}

TEST(Harness, MeetingTimeSummary) {
  RunOptions opts;
  opts.replications = 4;
  std::vector<std::uint64_t> taus = {1, 3, 4, 9};
  auto job = [&](RngStream& s) { return ReplicationOutcome{0.0, 1, taus[s.stream_id()]}; };
  const auto rep = run_replications(job, opts);
  ASSERT_TRUE(rep.meeting_time.has_value());
  EXPECT_DOUBLE_EQ(rep.meeting_time->mean, 17.0 / 4.0);
  EXPECT_EQ(rep.meeting_time->max, 9u);
  EXPECT_EQ(rep.meeting_time->log2_histogram.at(0), 1u);
  EXPECT_EQ(rep.meeting_time->log2_histogram.at(1), 1u);
  EXPECT_EQ(rep.meeting_time->log2_histogram.at(2), 1u);
  EXPECT_EQ(rep.meeting_time->log2_histogram.at(3), 1u);
}

TEST(Harness, ThreadCountFromEnvironment) {
  ::setenv("UMLMC_THREADS", "3", 1);
  EXPECT_EQ(default_thread_count(), 3u);
  ::setenv("UMLMC_THREADS", "zero", 1);
  EXPECT_GE(default_thread_count(), 1u);
  ::unsetenv("UMLMC_THREADS");
}

TEST(LogLogSlope, ExactPowerLaw) {
  std::vector<CurvePoint> pts;
  for (std::uint64_t c : {1u, 10u, 100u, 1000u}) pts.push_back({c, 3.0 / std::sqrt(double(c)), 1});
  EXPECT_NEAR(loglog_slope(pts), -0.5, 1e-12);
}

TEST(Compare, UnbiasedPluginMatchesUnbiasedCurve) {
  CompareOptions opts;
  opts.processor_counts = {1, 4, 16, 64};
  opts.replications = 64'000;
  opts.truth = 2.0;
  auto plugin = [](RngStream& s, std::uint64_t) { return draw_normal(s, 2.0, 1.0); };
  const auto res = compare_equal_compute(normal_job(2.0), plugin, opts);
  ASSERT_EQ(res.unbiased.points.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& u = res.unbiased.points[i];
    const auto& p = res.plugin.points[i];
    EXPECT_EQ(u.processors, opts.processor_counts[i]);
    const double tol = 4.0 * std::sqrt(1.0 / static_cast<double>(u.groups));
    EXPECT_NEAR(u.relative_error / p.relative_error, 1.0, tol) << u.processors;
  }
  EXPECT_NEAR(res.unbiased_slope, -0.5, 0.1);
}

TEST(Compare, PluginBudgetFollowsRecordedCost) {
  CompareOptions opts;
  opts.processor_counts = {1, 2};
  opts.replications = 50;
  opts.truth = 1.0;
  opts.budget_scale = 2.5;
  std::vector<std::uint64_t> seen(opts.replications);
  auto job = [](RngStream& s) { return ReplicationOutcome{1.0, s.stream_id() + 1, 0}; };
  auto plugin = [&](RngStream& s, std::uint64_t budget) {
    seen[s.stream_id() - (std::uint64_t{1} << 63)] = budget;
    return 1.0;
  };
  compare_equal_compute(job, plugin, opts);
  for (std::uint64_t r = 0; r < opts.replications; ++r) {
    EXPECT_EQ(seen[r], static_cast<std::uint64_t>(std::floor(2.5 * static_cast<double>(r + 1))));
  }
}

TEST(Compare, ValidatesOptions) {
  CompareOptions opts;
  opts.processor_counts = {4, 2};
  opts.truth = 1.0;
  auto plugin = [](RngStream&, std::uint64_t) { return 0.0; };
  EXPECT_THROW(compare_equal_compute(normal_job(), plugin, opts), ConfigError);
  opts.processor_counts = {1, 2};
  opts.truth = 0.0;
  EXPECT_THROW(compare_equal_compute(normal_job(), plugin, opts), ConfigError);
}

}  // namespace
}  // namespace umlmc
