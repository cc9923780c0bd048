#include "umlmc/mlmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "umlmc/errors.hpp"

namespace umlmc {
namespace {

std::string format_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

double euclidean_norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace

double GFunction::operator()(std::span<const double> x) const {
  if (x.size() != arity) {
    throw DimensionError("g '" + label + "' has arity " + std::to_string(arity) +
                         ", got a point of dimension " + std::to_string(x.size()));
  }
  if (in_domain && !in_domain(x)) {
    throw DomainError(std::vector<double>(x.begin(), x.end()),
                      "point " + format_point(x) + " is outside the domain of g '" + label + "'");
  }
  return evaluate(x);
}

GFunction affine_g(std::vector<double> slope, double intercept) {
  GFunction g;
  g.arity = slope.size();
  g.label = "affine";
  g.evaluate = [slope = std::move(slope), intercept](std::span<const double> x) {
    double acc = intercept;
    for (std::size_t i = 0; i < x.size(); ++i) acc += slope[i] * x[i];
    return acc;
  };
  g.in_domain = [](std::span<const double>) { return true; };
  return g;
}

GFunction inverse_product_g(std::size_t arity) {
  GFunction g;
  g.arity = arity;
  g.label = "inverse_product";
  g.evaluate = [](std::span<const double> x) {
    double acc = 1.0;
    for (double v : x) acc /= v;
    return acc;
  };
  g.in_domain = [](std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v != 0.0; });
  };
  return g;
}

GFunction ratio_g() {
  GFunction g;
  g.arity = 2;
  g.label = "ratio";
  g.evaluate = [](std::span<const double> x) { return x[0] / x[1]; };
  g.in_domain = [](std::span<const double> x) { return x[1] != 0.0; };
  return g;
}

GFunction max_g(std::size_t arity) {
  GFunction g;
  g.arity = arity;
  g.label = "max";
  g.evaluate = [](std::span<const double> x) { return *std::max_element(x.begin(), x.end()); };
  g.in_domain = [](std::span<const double>) { return true; };
  return g;
}

std::vector<std::string> MlmcConfig::validate(std::optional<double> gamma) const {
  if (!(p > 0.5)) {
    throw ConfigError("p must satisfy p > 1/2 (for p <= 1/2 the expected number of subroutine "
                      "calls 2p/(2p-1) is infinite), got p = " + std::to_string(p));
  }
  if (!(p < 1.0)) throw ConfigError("p must satisfy p < 1, got p = " + std::to_string(p));
  if (delta && !(*delta > 0.0)) throw ConfigError("delta must be > 0");
  if (max_level < 1 || max_level > 62) throw ConfigError("max_level must lie in [1, 62]");
  std::vector<std::string> warnings;
  if (gamma) {
    const double upper = 1.0 - std::pow(2.0, -(1.0 + *gamma));
    if (p >= upper) {
      std::ostringstream os;
      os << "p = " << p << " >= 1 - 2^-(1+gamma) = " << upper
         << " for gamma = " << *gamma << "; the finite-variance guarantee does not apply";
      warnings.push_back(os.str());
    }
  }
  return warnings;
}

double level_probability(double p, int n) { return std::pow(1.0 - p, n - 1) * p; }

double expected_subcalls(double p) { return 2.0 * p / (2.0 * p - 1.0); }

double recommended_p(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("gamma must be > 0, got " + std::to_string(gamma));
  }
  const double lower = 0.5;
  const double upper = 1.0 - std::pow(2.0, -(1.0 + gamma));
  const double p = 1.0 - std::pow(2.0, -1.0 - gamma / 2.0);
  return std::clamp(p, std::nextafter(lower, 1.0), std::nextafter(upper, 0.0));
}

double antithetic_delta_from_sums(std::span<const double> odd_sum, std::span<const double> even_sum,
                                  const GFunction& g, int n) {
  if (n < 1) throw ConfigError("antithetic difference needs level n >= 1");
  if (odd_sum.size() != even_sum.size()) throw DimensionError("odd/even sums differ in dimension");
  const double half = std::ldexp(1.0, n - 1);
  const std::size_t dim = odd_sum.size();
  std::vector<double> all(dim), odd(dim), even(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    all[j] = (odd_sum[j] + even_sum[j]) / (2.0 * half);
    odd[j] = odd_sum[j] / half;
    even[j] = even_sum[j] / half;
  }
  const double g_all = g(all);
  const double g_odd = g(odd);
  const double g_even = g(even);
  return g_all - 0.5 * (g_odd + g_even);
}

double antithetic_delta(std::span<const std::vector<double>> samples, const GFunction& g, int n) {
  if (n < 1) throw ConfigError("antithetic difference needs level n >= 1");
  const std::size_t expected = std::size_t{1} << n;
  if (samples.size() != expected) {
    throw ConfigError("antithetic difference at level " + std::to_string(n) + " needs " +
                      std::to_string(expected) + " samples, got " + std::to_string(samples.size()));
  }
  const std::size_t dim = samples.front().size();
  std::vector<double> odd(dim, 0.0), even(dim, 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != dim) throw DimensionError("samples differ in dimension");
    auto& target = (i % 2 == 0) ? odd : even;  // index 0 is the 1st (odd) sample
    for (std::size_t j = 0; j < dim; ++j) target[j] += samples[i][j];
  }
  return antithetic_delta_from_sums(odd, even, g, n);
}

std::vector<double> delta_transform(std::span<const double> h, double delta, RngStream& s) {
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  std::vector<double> out(h.begin(), h.end());
  if (euclidean_norm(h) >= delta) return out;
  const double shift = 2.0 * delta * draw_sign(s);
  for (double& v : out) v += shift;
  return out;
}

namespace {

struct LevelBatch {
  std::vector<double> first;
  std::vector<double> odd_sum;
  std::vector<double> even_sum;
  std::uint64_t cost = 0;
  std::uint64_t max_tau = 0;
};

LevelBatch run_level(const Subroutine& subroutine, std::size_t arity, int n,
                     std::optional<double> delta, RngStream& s) {
  LevelBatch batch;
  batch.odd_sum.assign(arity, 0.0);
  batch.even_sum.assign(arity, 0.0);
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t i = 0; i < count; ++i) {
    UnbiasedSample sample = subroutine(s);
    if (sample.value.size() != arity) {
      throw ConfigError("subroutine returned dimension " + std::to_string(sample.value.size()) +
                        " but g has arity " + std::to_string(arity));
    }
    std::vector<double> h = delta ? delta_transform(sample.value, *delta, s) : std::move(sample.value);
    auto& target = (i % 2 == 0) ? batch.odd_sum : batch.even_sum;
    for (std::size_t j = 0; j < arity; ++j) target[j] += h[j];
    if (i == 0) batch.first = std::move(h);
    batch.cost += sample.cost;
    batch.max_tau = std::max(batch.max_tau, sample.tau);
  }
  return batch;
}

}  // namespace

double sample_level_delta(const Subroutine& subroutine, const GFunction& g, int n,
                          std::optional<double> delta, RngStream& s) {
  if (n < 1 || n > 62) throw ConfigError("level must lie in [1, 62]");
  const LevelBatch batch = run_level(subroutine, g.arity, n, delta, s);
  return antithetic_delta_from_sums(batch.odd_sum, batch.even_sum, g, n);
}

MlmcEstimate mlmc_estimate(const MlmcConfig& cfg, const Subroutine& subroutine, const GFunction& g,
                           RngStream& s) {
  cfg.validate();
  const std::uint64_t level = draw_geometric(s, cfg.p);
  if (level > static_cast<std::uint64_t>(cfg.max_level)) {
    throw LevelCapError(static_cast<int>(std::min<std::uint64_t>(level, std::numeric_limits<int>::max())),
                        "sampled level " + std::to_string(level) + " exceeds max_level = " +
                            std::to_string(cfg.max_level));
  }
  const int n = static_cast<int>(level);
  const LevelBatch batch = run_level(subroutine, g.arity, n, cfg.delta, s);
  const double delta_n = antithetic_delta_from_sums(batch.odd_sum, batch.even_sum, g, n);

  MlmcEstimate est;
  est.level = n;
  est.w = delta_n / level_probability(cfg.p, n) + g(batch.first);
  est.cost = batch.cost;
  est.n_subcalls = std::uint64_t{1} << n;
  est.max_tau = batch.max_tau;
  return est;
}

}  // namespace umlmc
