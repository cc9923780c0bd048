#include "umlmc/models.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "umlmc/errors.hpp"
#include "umlmc/joa.hpp"
#include "umlmc/rw_mh.hpp"

namespace umlmc {
namespace {

void validate_joa(const JoaSettings& joa) {
  if (joa.m < joa.k) throw ConfigError("JOA needs m >= k");
  if (joa.max_steps < std::max<std::uint64_t>(joa.m, 1)) {
    throw ConfigError("max_steps must be at least max(m, 1)");
  }
}

/// Runs a plain chain for `steps` transitions, drops the first 10% and
/// returns the average of f over the rest (or f(x0) when steps == 0).
template <MarkovKernel K, class F>
double plain_chain_average(const K& kernel, typename K::State x, std::uint64_t steps, F f,
                           RngStream& s) {
  if (steps == 0) return f(x);
  const std::uint64_t burn = steps / 10;
  double acc = 0.0;
  for (std::uint64_t t = 1; t <= steps; ++t) {
    kernel.step(x, s);
    if (t > burn) acc += f(x);
  }
  return acc / static_cast<double>(steps - burn);
}

std::shared_ptr<const RandomWalkMhKernel> beta_kernel(int i, double step_size) {
  const double a = static_cast<double>(i);
  return std::make_shared<const RandomWalkMhKernel>(
      [a](std::span<const double> x) { return beta_a1_log_density(a, x[0]); },
      std::vector<double>{step_size});
}

}  // namespace

double beta_a1_log_density(double a, double x) {
  if (!(x > 0.0 && x < 1.0)) return -std::numeric_limits<double>::infinity();
  return (a - 1.0) * std::log(x);
}

Target beta_product_target(const BetaOptions& opts) {
  if (opts.K < 1) throw ConfigError("K must be >= 1");
  if (!(opts.step_size > 0.0)) throw ConfigError("step size must be > 0");
  validate_joa(opts.joa);

  std::vector<std::shared_ptr<const RandomWalkMhKernel>> kernels;
  std::vector<Subroutine> parts;
  for (int i = 1; i <= opts.K; ++i) {
    auto kernel = beta_kernel(i, opts.step_size);
    kernels.push_back(kernel);
    JoaConfig<RandomWalkMhKernel> cfg;
    cfg.kernel = kernel;
    cfg.pi0 = [](RngStream& s) { return std::vector<double>{draw_uniform(s)}; };
    cfg.f = [](const std::vector<double>& x, std::span<double> out) { out[0] = x[0]; };
    cfg.output_dim = 1;
    cfg.k = opts.joa.k;
    cfg.m_avg = opts.joa.m;
    cfg.max_steps = opts.joa.max_steps;
    parts.push_back(make_joa_subroutine(std::move(cfg)));
  }

  Target target;
  target.name = "beta_product_K" + std::to_string(opts.K);
  target.subroutine = concatenate(std::move(parts));
  target.g = inverse_product_g(static_cast<std::size_t>(opts.K));
  target.truth = static_cast<double>(opts.K + 1);
  const GFunction g = target.g;
  target.plugin = [kernels, g](RngStream& s, std::uint64_t budget) {
    const std::uint64_t per_chain = budget / kernels.size();
    std::vector<double> means;
    for (const auto& kernel : kernels) {
      std::vector<double> x0{draw_uniform(s)};
      means.push_back(plain_chain_average(*kernel, std::move(x0), per_chain,
                                          [](const std::vector<double>& x) { return x[0]; }, s));
    }
    return g(means);
  };
  return target;
}

namespace {

Subroutine ising_joa(int n, double theta, std::function<double(const IsingState&)> f,
                     const JoaSettings& joa) {
  JoaConfig<IsingGibbsKernel> cfg;
  cfg.kernel = std::make_shared<const IsingGibbsKernel>(n, theta);
  cfg.pi0 = [n](RngStream& s) { return draw_ising_uniform(n, s); };
  cfg.f = [f = std::move(f)](const IsingState& x, std::span<double> out) { out[0] = f(x); };
  cfg.output_dim = 1;
  cfg.k = joa.k;
  cfg.m_avg = joa.m;
  cfg.max_steps = joa.max_steps;
  return make_joa_subroutine(std::move(cfg));
}

constexpr int kEnumerationLimit = 4;

}  // namespace

Target ising_ratio_target(const IsingRatioOptions& opts) {
  validate_joa(opts.joa);
  if (opts.n < 2) throw ConfigError("lattice side must be >= 2");
  const auto f_num = ising_ratio_f(opts.n, opts.theta2);
  const auto f_den = ising_ratio_f(opts.n, opts.theta1);

  Target target;
  target.name = "ising_ratio";
  target.subroutine = concatenate({ising_joa(opts.n, opts.theta2, f_num, opts.joa),
                                   ising_joa(opts.n, opts.theta1, f_den, opts.joa)});
  target.g = ratio_g();
  if (opts.n <= kEnumerationLimit) {
    target.truth = ising_z_ratio_oracle(opts.n, opts.theta1, opts.theta2);
  }
  const IsingGibbsKernel k_num(opts.n, opts.theta2);
  const IsingGibbsKernel k_den(opts.n, opts.theta1);
  const GFunction g = target.g;
  const int n = opts.n;
  target.plugin = [=](RngStream& s, std::uint64_t budget) {
    const std::uint64_t per_chain = budget / 2;
    const double num = plain_chain_average(k_num, draw_ising_uniform(n, s), per_chain, f_num, s);
    const double den = plain_chain_average(k_den, draw_ising_uniform(n, s), per_chain, f_den, s);
    const std::vector<double> x{num, den};
    return g(x);
  };
  return target;
}

Target ising_natural_stat_target(const IsingNaturalStatOptions& opts) {
  validate_joa(opts.joa);
  if (opts.n < 2) throw ConfigError("lattice side must be >= 2");
  if (!(opts.theta >= 0.0)) throw ConfigError("theta must be >= 0");
  if (!(opts.delta > 0.0)) throw ConfigError("delta must be > 0");
  auto h = [](const IsingState& sigma) { return -static_cast<double>(ising_hamiltonian(sigma)); };

  Target target;
  target.name = "ising_natural_stat";
  target.subroutine = ising_joa(opts.n, opts.theta, h, opts.joa);
  target.g = inverse_product_g(1);
  target.g.label = "reciprocal";
  target.delta = opts.delta;
  if (opts.n <= kEnumerationLimit) {
    const double mean_h = ising_expectation_oracle(opts.n, opts.theta, h);
    target.truth = 1.0 / mean_h;
  }
  const IsingGibbsKernel kernel(opts.n, opts.theta);
  const GFunction g = target.g;
  const int n = opts.n;
  target.plugin = [=](RngStream& s, std::uint64_t budget) {
    const std::vector<double> x{plain_chain_average(kernel, draw_ising_uniform(n, s), budget, h, s)};
    return g(x);
  };
  return target;
}

}  // namespace umlmc
