#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "umlmc/coupling.hpp"
#include "umlmc/errors.hpp"
#include "umlmc/unbiased_sample.hpp"

namespace umlmc {

/// Parameters of the time-averaged coupled-chain estimator H_{k:m}.
template <CoupledKernel K>
struct JoaConfig {
  using State = typename K::State;
  using TestFunction = std::function<void(const State&, std::span<double>)>;

  std::shared_ptr<const K> kernel;
  InitialSampler<State> pi0;
  /// f: State -> R^output_dim, written into the span.
  TestFunction f;
  std::size_t output_dim = 1;
  std::uint64_t k = 0;      ///< burn-in index
  std::uint64_t m_avg = 0;  ///< averaging upper index, >= k
  std::uint64_t max_steps = 1'000'000;

  void validate() const {
    if (!kernel) throw ConfigError("JOA configuration has no kernel");
    if (!pi0) throw ConfigError("JOA configuration has no initial distribution");
    if (!f) throw ConfigError("JOA configuration has no test function");
    if (output_dim == 0) throw ConfigError("JOA output dimension must be >= 1");
    if (m_avg < k) {
      throw ConfigError("JOA needs m >= k, got k = " + std::to_string(k) +
                        ", m = " + std::to_string(m_avg));
    }
    if (max_steps < std::max<std::uint64_t>(m_avg, 1)) {
      throw ConfigError("max_steps must be at least max(m, 1)");
    }
  }
};

/// H_{k:m}(Y, Z) from one fresh coupled trajectory:
///
///   (m-k+1)^{-1} sum_{t=k}^{m} f(Y_t)
///     + sum_{t=k+1}^{tau-1} min(1, (t-k)/(m-k+1)) (f(Y_t) - f(Z_{t-1}))
///
/// which is the average of H_l for l = k..m. The pair is run until
/// t >= max(tau, m). Throws MeetingCapError if the chains have not met by
/// max_steps; truncating instead would bias the estimate.
template <CoupledKernel K>
UnbiasedSample sample_joa(const JoaConfig<K>& cfg, RngStream& s) {
  const K& kernel = *cfg.kernel;
  const std::size_t dim = cfg.output_dim;
  const double span_len = static_cast<double>(cfg.m_avg - cfg.k + 1);

  std::vector<double> average(dim, 0.0), correction(dim, 0.0);
  std::vector<double> fy(dim), fz(dim);

  auto pair = init_coupled(kernel, cfg.pi0, s);

  if (cfg.k == 0) {
    cfg.f(pair.y0, fy);
    for (std::size_t j = 0; j < dim; ++j) average[j] += fy[j];
  }

  // Invariant on entry: pair holds (Y_t, Z_{t-1}) at t = pair.t.
  while (true) {
    const std::uint64_t t = pair.t;
    const bool in_window = t >= cfg.k && t <= cfg.m_avg;
    const bool needs_correction = !pair.met && t >= cfg.k + 1;
    if (in_window || needs_correction) cfg.f(pair.y, fy);
    if (in_window) {
      for (std::size_t j = 0; j < dim; ++j) average[j] += fy[j];
    }
    if (needs_correction) {
      cfg.f(pair.z, fz);
      const double weight = std::min(1.0, static_cast<double>(t - cfg.k) / span_len);
      for (std::size_t j = 0; j < dim; ++j) correction[j] += weight * (fy[j] - fz[j]);
    }
    if (pair.met && t >= cfg.m_avg) break;
    if (t >= cfg.max_steps) {
      throw MeetingCapError("coupled chains did not meet within max_steps = " +
                            std::to_string(cfg.max_steps));
    }
    step_coupled(pair, kernel, s);
  }

  UnbiasedSample out;
  out.value.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    out.value[j] = average[j] / span_len + correction[j];
    if (!std::isfinite(out.value[j])) {
      throw ReplicationError("non_finite_value", "JOA estimate is not finite");
    }
  }
  out.cost = pair.t;
  out.tau = *pair.tau;
  return out;
}

template <CoupledKernel K>
Subroutine make_joa_subroutine(JoaConfig<K> cfg) {
  cfg.validate();
  return [cfg = std::move(cfg)](RngStream& s) { return sample_joa(cfg, s); };
}

/// Scalar test function adaptor.
template <class State, class F>
auto scalar_test_function(F f) {
  return [f = std::move(f)](const State& x, std::span<double> out) { out[0] = f(x); };
}

}  // namespace umlmc
