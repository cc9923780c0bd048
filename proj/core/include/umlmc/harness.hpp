#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "umlmc/errors.hpp"
#include "umlmc/models.hpp"
#include "umlmc/nested.hpp"
#include "umlmc/rng.hpp"

namespace umlmc {

/// Result of one replication of an estimator.
struct ReplicationOutcome {
  double value = 0.0;
  std::uint64_t cost = 0;
  std::uint64_t tau = 0;  ///< largest meeting time seen, 0 if not applicable
};

using ReplicationJob = std::function<ReplicationOutcome(RngStream&)>;

/// Thread count from UMLMC_THREADS, else the hardware concurrency (>= 1).
unsigned default_thread_count();

/// Calls fn(i) for i in [0, count) on up to `threads` workers pulling indices
/// from a shared counter. fn must only write to slot i of its output; the
/// first exception thrown by fn is rethrown after all workers join.
template <class Fn>
void parallel_for_index(std::uint64_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  constexpr std::uint64_t kChunk = 16;
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::uint64_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::uint64_t end = std::min(count, begin + kChunk);
      try {
        for (std::uint64_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const auto n_workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

struct MeetingTimeSummary {
  double mean = 0.0;
  std::uint64_t median = 0;
  std::uint64_t max = 0;
  /// Counts of tau in [2^b, 2^{b+1}) keyed by b.
  std::map<int, std::uint64_t> log2_histogram;
};

/// Across-replication summary. Error replications are excluded from every
/// moment but counted by reason. Costs are in coupled kernel steps.
struct AggregateReport {
  std::string label;
  std::uint64_t n_replications = 0;  ///< requested
  std::uint64_t n_ok = 0;
  std::uint64_t n_errors = 0;
  std::map<std::string, std::uint64_t> error_reasons;
  double mean = 0.0;
  double variance = 0.0;   ///< unbiased sample variance
  double std_error = 0.0;  ///< sqrt(variance / n_ok)
  double ci_low = 0.0;     ///< mean -+ 1.96 std_error
  double ci_high = 0.0;
  std::uint64_t total_cost = 0;
  double mean_cost = 0.0;
  double work_normalized_variance = 0.0;  ///< variance * mean_cost
  std::optional<double> truth;
  std::optional<double> relative_error;  ///< |mean - truth| / |truth|
  std::optional<double> relative_rmse;   ///< sqrt(mean (W_i - truth)^2) / |truth|
  std::optional<MeetingTimeSummary> meeting_time;
  std::vector<std::string> warnings;
};

class RunFailedError : public Error {
 public:
  using Error::Error;
};

struct RunOptions {
  std::uint64_t replications = 1000;
  unsigned threads = 1;
  std::uint64_t seed = RngStream::kDefaultSeed;
  std::optional<double> truth;
  std::string label;
};

/// Per-replication results in index order; nullopt marks an error.
struct ReplicationLog {
  std::vector<std::optional<ReplicationOutcome>> outcomes;
  std::vector<std::string> error_reasons;  ///< parallel to outcomes, empty when ok
};

/// Replication r runs on RngStream(seed, r). ReplicationError is caught and
/// recorded per replication; any other exception aborts the run.
ReplicationLog collect_replications(const ReplicationJob& job, std::uint64_t replications,
                                    unsigned threads, std::uint64_t seed);

/// Ordered reduction of a log into a report; identical for any thread count.
/// Throws RunFailedError when more than half of the replications failed.
AggregateReport aggregate(const ReplicationLog& log, const RunOptions& opts);

/// collect_replications + aggregate. Requires replications >= 2.
AggregateReport run_replications(const ReplicationJob& job, const RunOptions& opts);

/// Wraps a Target into a job producing one randomised multilevel estimate.
ReplicationJob mlmc_job(const Target& target, const MlmcConfig& cfg);

/// Wraps a nested specification into a job producing one nested estimate.
ReplicationJob nested_job(NestedSpec spec);

struct CurvePoint {
  std::uint64_t processors = 0;
  double relative_error = 0.0;
  std::uint64_t groups = 0;  ///< independent averages the error was computed from
};

struct ProcessorCurve {
  std::string estimator;
  std::vector<CurvePoint> points;
};

struct CompareOptions {
  std::vector<std::uint64_t> processor_counts;
  std::uint64_t replications = 10000;  ///< pool size; must cover the largest count
  unsigned threads = 1;
  std::uint64_t seed = RngStream::kDefaultSeed;
  double budget_scale = 1.0;  ///< plug-in budget = budget_scale * unbiased cost
  double truth = 0.0;
};

struct CompareResult {
  ProcessorCurve unbiased;
  ProcessorCurve plugin;
  std::uint64_t n_ok = 0;
  std::uint64_t n_errors = 0;
  double unbiased_slope = 0.0;  ///< least-squares slope of log error vs log processors
  double plugin_slope = 0.0;
  double plugin_mean = 0.0;
  double unbiased_mean = 0.0;
};

/// Equal-compute comparison. For every replication r the unbiased job runs on
/// stream (seed, r) and records its cost C_r; the plug-in estimator then runs
/// on stream (seed, 2^63 + r) with budget floor(budget_scale * C_r). For each
/// processor count c the pool is cut into consecutive groups of c, each group
/// is averaged, and the relative error sqrt(mean (avg - truth)^2) / |truth| is
/// taken over groups.
CompareResult compare_equal_compute(const ReplicationJob& unbiased_job, const PluginEstimator& plugin,
                                    const CompareOptions& opts);

/// Least-squares slope of log(relative_error) against log(processors).
double loglog_slope(const std::vector<CurvePoint>& points);

}  // namespace umlmc
