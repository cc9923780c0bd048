#include "umlmc/rw_mh.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "umlmc/errors.hpp"

namespace umlmc {

RandomWalkMhKernel::RandomWalkMhKernel(LogDensity log_target, std::vector<double> step_scales)
    : log_target_(std::move(log_target)), scales_(std::move(step_scales)) {
  if (!log_target_) throw ConfigError("random-walk MH needs a log target");
  if (scales_.empty()) throw ConfigError("random-walk MH needs dimension >= 1");
  for (double v : scales_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("proposal scale must be > 0");
  }
}

void RandomWalkMhKernel::check_state(const State& x) const {
  if (x.size() != scales_.size()) {
    throw DimensionError("state has dimension " + std::to_string(x.size()) + ", kernel expects " +
                         std::to_string(scales_.size()));
  }
}

double RandomWalkMhKernel::checked_current(const State& x) const {
  const double lp = log_target_(x);
  if (!std::isfinite(lp)) {
    throw NonFiniteTargetError("log target is not finite at the current state (x[0] = " +
                               std::to_string(x[0]) + ")");
  }
  return lp;
}

bool RandomWalkMhKernel::step_accepting(State& x, RngStream& s) const {
  const double current = checked_current(x);
  State proposal(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) proposal[i] = x[i] + scales_[i] * draw_normal(s);
  const double log_u = std::log(draw_uniform(s));
  const double lp = log_target_(proposal);
  if (std::isnan(lp)) throw NonFiniteTargetError("log target returned NaN at a proposal");
  if (log_u < lp - current) {
    x = std::move(proposal);
    return true;
  }
  return false;
}

void RandomWalkMhKernel::step(State& x, RngStream& s) const { step_accepting(x, s); }

bool RandomWalkMhKernel::coupled_step(State& x, State& y, RngStream& s) const {
  const std::size_t d = x.size();
  const double current_x = checked_current(x);
  const double current_y = checked_current(y);

  // Standardised offset z = (x - y) / scale and the first proposal's noise.
  std::vector<double> z(d), xi(d);
  double z_norm2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    z[i] = (x[i] - y[i]) / scales_[i];
    z_norm2 += z[i] * z[i];
    xi[i] = draw_normal(s);
  }

  State prop_x(d), prop_y(d);
  for (std::size_t i = 0; i < d; ++i) prop_x[i] = x[i] + scales_[i] * xi[i];

  // Maximal part: accept eta = xi + z with prob min(1, phi(xi + z) / phi(xi)),
  // which puts both proposals on the same point. Otherwise reflect xi about
  // the hyperplane orthogonal to z.
  double xi_dot_z = 0.0;
  for (std::size_t i = 0; i < d; ++i) xi_dot_z += xi[i] * z[i];
  const double log_ratio = -xi_dot_z - 0.5 * z_norm2;  // log phi(xi + z) - log phi(xi)
  if (z_norm2 == 0.0 || std::log(draw_uniform(s)) < log_ratio) {
    prop_y = prop_x;
  } else {
    const double coef = 2.0 * xi_dot_z / z_norm2;
    for (std::size_t i = 0; i < d; ++i) prop_y[i] = y[i] + scales_[i] * (xi[i] - coef * z[i]);
  }

  const double log_u = std::log(draw_uniform(s));
  const double lp_x = log_target_(prop_x);
  const double lp_y = (prop_y == prop_x) ? lp_x : log_target_(prop_y);
  if (std::isnan(lp_x) || std::isnan(lp_y)) {
    throw NonFiniteTargetError("log target returned NaN at a proposal");
  }
  if (log_u < lp_x - current_x) x = std::move(prop_x);
  if (log_u < lp_y - current_y) y = std::move(prop_y);
  return x == y;
}

RandomWalkMhKernel make_rw_mh_coupling(LogDensity log_target, double step_size,
                                       std::size_t dimension) {
  if (!(step_size > 0.0)) throw ConfigError("step_size must be > 0");
  return RandomWalkMhKernel(std::move(log_target), std::vector<double>(dimension, step_size));
}

}  // namespace umlmc
