#include "umlmc/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

namespace umlmc {

unsigned default_thread_count() {
  if (const char* env = std::getenv("UMLMC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ReplicationLog collect_replications(const ReplicationJob& job, std::uint64_t replications,
                                    unsigned threads, std::uint64_t seed) {
  ReplicationLog log;
  log.outcomes.resize(replications);
  log.error_reasons.resize(replications);
  parallel_for_index(replications, threads, [&](std::uint64_t r) {
    RngStream stream(seed, r);
    try {
      log.outcomes[r] = job(stream);
    } catch (const ReplicationError& e) {
      log.error_reasons[r] = e.reason();
    }
  });
  return log;
}

namespace {

MeetingTimeSummary summarize_tau(std::vector<std::uint64_t> taus) {
  MeetingTimeSummary out;
  if (taus.empty()) return out;
  double acc = 0.0;
  for (auto t : taus) {
    acc += static_cast<double>(t);
    out.log2_histogram[static_cast<int>(std::bit_width(t)) - 1]++;
  }
  out.mean = acc / static_cast<double>(taus.size());
  std::sort(taus.begin(), taus.end());
  out.median = taus[taus.size() / 2];
  out.max = taus.back();
  return out;
}

}  // namespace

AggregateReport aggregate(const ReplicationLog& log, const RunOptions& opts) {
  AggregateReport rep;
  rep.label = opts.label;
  rep.n_replications = log.outcomes.size();
  rep.truth = opts.truth;

  std::vector<std::uint64_t> taus;
  double sum = 0.0;
  for (std::size_t r = 0; r < log.outcomes.size(); ++r) {
    if (!log.outcomes[r]) {
      ++rep.n_errors;
      rep.error_reasons[log.error_reasons[r]]++;
      continue;
    }
    const auto& o = *log.outcomes[r];
    ++rep.n_ok;
    sum += o.value;
    rep.total_cost += o.cost;
    if (o.tau > 0) taus.push_back(o.tau);
  }

  if (2 * rep.n_errors > rep.n_replications) {
    std::ostringstream os;
    os << rep.n_errors << " of " << rep.n_replications << " replications failed (";
    bool first = true;
    for (const auto& [reason, count] : rep.error_reasons) {
      os << (first ? "" : ", ") << reason << ": " << count;
      first = false;
    }
    os << ")";
    throw RunFailedError(os.str());
  }
  if (rep.n_ok < 2) throw RunFailedError("fewer than two successful replications");

  const double n = static_cast<double>(rep.n_ok);
  rep.mean = sum / n;
  double ss = 0.0, sq_err = 0.0;
  for (const auto& o : log.outcomes) {
    if (!o) continue;
    const double d = o->value - rep.mean;
    ss += d * d;
    if (opts.truth) sq_err += (o->value - *opts.truth) * (o->value - *opts.truth);
  }
  rep.variance = ss / (n - 1.0);
  rep.std_error = std::sqrt(rep.variance / n);
  rep.ci_low = rep.mean - 1.96 * rep.std_error;
  rep.ci_high = rep.mean + 1.96 * rep.std_error;
  rep.mean_cost = static_cast<double>(rep.total_cost) / n;
  rep.work_normalized_variance = rep.variance * rep.mean_cost;
  if (opts.truth && *opts.truth != 0.0) {
    rep.relative_error = std::abs(rep.mean - *opts.truth) / std::abs(*opts.truth);
    rep.relative_rmse = std::sqrt(sq_err / n) / std::abs(*opts.truth);
  }
  if (!taus.empty()) rep.meeting_time = summarize_tau(std::move(taus));

  const double error_fraction = static_cast<double>(rep.n_errors) / static_cast<double>(rep.n_replications);
  if (error_fraction > 0.01) {
    std::ostringstream os;
    os << "WARNING: " << rep.n_errors << " of " << rep.n_replications
       << " replications failed; the estimate is unbiased only conditionally on no truncation";
    rep.warnings.push_back(os.str());
  }
  return rep;
}

AggregateReport run_replications(const ReplicationJob& job, const RunOptions& opts) {
  if (opts.replications < 2) throw ConfigError("run_replications needs at least 2 replications");
  return aggregate(collect_replications(job, opts.replications, opts.threads, opts.seed), opts);
}

ReplicationJob mlmc_job(const Target& target, const MlmcConfig& cfg) {
  MlmcConfig effective = cfg;
  if (!effective.delta && target.delta) effective.delta = target.delta;
  effective.validate();
  return [subroutine = target.subroutine, g = target.g, effective](RngStream& s) {
    const MlmcEstimate est = mlmc_estimate(effective, subroutine, g, s);
    return ReplicationOutcome{est.w, est.cost, est.max_tau};
  };
}

ReplicationJob nested_job(NestedSpec spec) {
  spec.inner.validate();
  return [spec = std::move(spec)](RngStream& s) {
    const NestedEstimate est = nested_estimate(spec, s);
    return ReplicationOutcome{est.value, est.inner.cost, est.inner.max_tau};
  };
}

double loglog_slope(const std::vector<CurvePoint>& points) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double count = 0.0;
  for (const auto& p : points) {
    if (!(p.relative_error > 0.0)) continue;
    const double x = std::log(static_cast<double>(p.processors));
    const double y = std::log(p.relative_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    count += 1.0;
  }
  if (count < 2.0) return 0.0;
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

namespace {

ProcessorCurve build_curve(const std::string& name, const std::vector<double>& values,
                           const std::vector<std::uint64_t>& counts, double truth) {
  ProcessorCurve curve;
  curve.estimator = name;
  for (std::uint64_t c : counts) {
    const std::uint64_t groups = values.size() / c;
    double sq = 0.0;
    for (std::uint64_t g = 0; g < groups; ++g) {
      double acc = 0.0;
      for (std::uint64_t i = g * c; i < (g + 1) * c; ++i) acc += values[i];
      const double err = acc / static_cast<double>(c) - truth;
      sq += err * err;
    }
    curve.points.push_back({c, std::sqrt(sq / static_cast<double>(groups)) / std::abs(truth), groups});
  }
  return curve;
}

}  // namespace

CompareResult compare_equal_compute(const ReplicationJob& unbiased_job, const PluginEstimator& plugin,
                                    const CompareOptions& opts) {
  if (!(std::isfinite(opts.truth) && opts.truth != 0.0)) {
    throw ConfigError("equal-compute comparison needs a finite non-zero truth");
  }
  if (opts.processor_counts.empty()) throw ConfigError("no processor counts given");
  for (std::size_t i = 0; i < opts.processor_counts.size(); ++i) {
    if (opts.processor_counts[i] == 0 ||
        (i > 0 && opts.processor_counts[i] <= opts.processor_counts[i - 1])) {
      throw ConfigError("processor counts must be positive and strictly increasing");
    }
  }
  if (!(opts.budget_scale > 0.0)) throw ConfigError("budget scale must be > 0");

  constexpr std::uint64_t kPluginStreamBase = std::uint64_t{1} << 63;
  struct Pair {
    double unbiased = 0.0;
    double plugin = 0.0;
  };
  std::vector<std::optional<Pair>> pool(opts.replications);
  parallel_for_index(opts.replications, opts.threads, [&](std::uint64_t r) {
    try {
      RngStream us(opts.seed, r);
      const ReplicationOutcome u = unbiased_job(us);
      RngStream ps(opts.seed, kPluginStreamBase + r);
      const auto budget =
          static_cast<std::uint64_t>(std::floor(opts.budget_scale * static_cast<double>(u.cost)));
      pool[r] = Pair{u.value, plugin(ps, budget)};
    } catch (const ReplicationError&) {
    }
  });

  std::vector<double> unbiased, plug;
  CompareResult result;
  for (const auto& p : pool) {
    if (!p) {
      ++result.n_errors;
      continue;
    }
    unbiased.push_back(p->unbiased);
    plug.push_back(p->plugin);
  }
  result.n_ok = unbiased.size();
  if (result.n_ok < opts.processor_counts.back()) {
    throw RunFailedError("pool of " + std::to_string(result.n_ok) +
                         " successful replications is smaller than the largest processor count");
  }
  if (2 * result.n_errors > opts.replications) throw RunFailedError("more than half the replications failed");

  double su = 0.0, sp = 0.0;
  for (std::size_t i = 0; i < unbiased.size(); ++i) {
    su += unbiased[i];
    sp += plug[i];
  }
  result.unbiased_mean = su / static_cast<double>(result.n_ok);
  result.plugin_mean = sp / static_cast<double>(result.n_ok);
  result.unbiased = build_curve("unbiased", unbiased, opts.processor_counts, opts.truth);
  result.plugin = build_curve("plugin", plug, opts.processor_counts, opts.truth);
  result.unbiased_slope = loglog_slope(result.unbiased.points);
  result.plugin_slope = loglog_slope(result.plugin.points);
  return result;
}

}  // namespace umlmc
