#include "umlmc/cut_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "umlmc/errors.hpp"
#include "umlmc/joa.hpp"
#include "umlmc/rw_mh.hpp"

namespace umlmc {

void CutModelData::validate() const {
  if (records.size() != kRecords) {
    throw ConfigError("cut-model data needs exactly 13 records, got " + std::to_string(records.size()));
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.z < 0 || r.n < 0 || r.x1 < 0 || r.x2 < 0) {
      throw ConfigError("cut-model record " + std::to_string(i + 1) + " has a negative count");
    }
    if (r.z > r.n) {
      throw ConfigError("cut-model record " + std::to_string(i + 1) + " has Z > N");
    }
  }
  if (!(prior_variance > 0.0)) throw ConfigError("prior variance must be > 0");
}

CutModelData load_cut_model_data(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open cut-model data file " + path.string());
  CutModelData data;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    CutModelRecord r;
    std::string extra;
    if (!(fields >> r.z >> r.n >> r.x1 >> r.x2) || (fields >> extra)) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected four integers \"Z N X1 X2\"");
    }
    data.records.push_back(r);
  }
  data.validate();
  return data;
}

CutModelData synthetic_cut_model_data() {
  CutModelData data;
  data.records = {{484, 1900, 5, 0},  {352, 1325, 37, 2}, {211, 1431, 24, 2}, {197, 1814, 18, 2},
                  {142, 1240, 50, 3}, {153, 1596, 30, 2}, {235, 1700, 10, 1}, {111, 605, 35, 2},
                  {63, 299, 23, 2},   {210, 740, 5, 0},   {174, 713, 5, 0},   {358, 1772, 25, 2},
                  {531, 1842, 16, 1}};
  return data;
}

std::vector<double> cut_theta1_posterior_mean(const CutModelData& data) {
  std::vector<double> mean;
  for (const auto& r : data.records) {
    mean.push_back((1.0 + static_cast<double>(r.z)) / (2.0 + static_cast<double>(r.n)));
  }
  return mean;
}

double cut_log_posterior(const CutModelData& data, std::span<const double> theta1,
                         std::span<const double> theta2) {
  double acc = -(theta2[0] * theta2[0] + theta2[1] * theta2[1]) / (2.0 * data.prior_variance);
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    const auto& r = data.records[i];
    const double lambda = theta2[0] + theta1[i] * theta2[1] + static_cast<double>(r.x2);
    acc += static_cast<double>(r.x1) * lambda - std::exp(lambda);
  }
  return std::isnan(acc) ? -std::numeric_limits<double>::infinity() : acc;
}

CutModeFit cut_posterior_mode(const CutModelData& data, std::span<const double> theta1,
                              std::optional<std::array<double, 2>> start) {
  std::array<double, 2> x{};
  if (start) {
    x = *start;
  } else {
    double mean_x1 = 0.0, mean_x2 = 0.0;
    for (const auto& r : data.records) {
      mean_x1 += static_cast<double>(r.x1);
      mean_x2 += static_cast<double>(r.x2);
    }
    mean_x1 /= static_cast<double>(data.records.size());
    mean_x2 /= static_cast<double>(data.records.size());
    x = {std::log(std::max(mean_x1, 0.5)) - mean_x2, 0.0};
  }
  const double inv_v = 1.0 / data.prior_variance;

  CutModeFit fit;
  double h00 = 0.0, h01 = 0.0, h11 = 0.0;  // negative Hessian
  for (int iter = 1; iter <= 200; ++iter) {
    double g0 = -x[0] * inv_v, g1 = -x[1] * inv_v;
    h00 = inv_v;
    h01 = 0.0;
    h11 = inv_v;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      const auto& r = data.records[i];
      const double t = theta1[i];
      const double mu = std::exp(x[0] + t * x[1] + static_cast<double>(r.x2));
      const double resid = static_cast<double>(r.x1) - mu;
      g0 += resid;
      g1 += t * resid;
      h00 += mu;
      h01 += t * mu;
      h11 += t * t * mu;
    }
    const double det = h00 * h11 - h01 * h01;
    if (!(det > 0.0) || !std::isfinite(det)) {
      throw ConfigError("Newton iteration for the theta2 posterior mode broke down");
    }
    std::array<double, 2> dir = {(h11 * g0 - h01 * g1) / det, (h00 * g1 - h01 * g0) / det};
    const double current = cut_log_posterior(data, theta1, x);
    double step = 1.0;
    std::array<double, 2> next{};
    for (int halvings = 0; halvings < 60; ++halvings, step *= 0.5) {
      next = {x[0] + step * dir[0], x[1] + step * dir[1]};
      if (cut_log_posterior(data, theta1, next) >= current) break;
    }
    x = next;
    fit.iterations = iter;
    if (std::abs(step * dir[0]) + std::abs(step * dir[1]) < 1e-12) break;
  }
  const double det = h00 * h11 - h01 * h01;
  fit.mode = x;
  fit.posterior_sd = {std::sqrt(h11 / det), std::sqrt(h00 / det)};
  return fit;
}

namespace {

std::shared_ptr<const RandomWalkMhKernel> cut_kernel(const CutModelData& data,
                                                     std::vector<double> theta1,
                                                     const std::array<double, 2>& scales) {
  return std::make_shared<const RandomWalkMhKernel>(
      [data, theta1 = std::move(theta1)](std::span<const double> th2) {
        return cut_log_posterior(data, theta1, th2);
      },
      std::vector<double>{scales[0], scales[1]});
}

std::vector<std::size_t> resolve_countries(const CutModelData& data,
                                           const std::vector<std::size_t>& requested) {
  if (requested.empty()) {
    std::vector<std::size_t> all(data.records.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
  for (std::size_t d : requested) {
    if (d >= data.records.size()) throw ConfigError("country index out of range");
  }
  return requested;
}

}  // namespace

PilotResult tune_cut_proposal(const CutModelData& data, std::uint64_t seed) {
  data.validate();
  const auto theta1 = cut_theta1_posterior_mean(data);
  const CutModeFit fit = cut_posterior_mode(data, theta1);
  constexpr int kPilotSteps = 2000;
  constexpr int kMaxRounds = 30;

  PilotResult result;
  result.scales = {2.38 / std::sqrt(2.0) * fit.posterior_sd[0],
                   2.38 / std::sqrt(2.0) * fit.posterior_sd[1]};
  for (int round = 1; round <= kMaxRounds; ++round) {
    const auto kernel = cut_kernel(data, theta1, result.scales);
    RngStream s(seed, static_cast<std::uint64_t>(round));
    std::vector<double> x{fit.mode[0], fit.mode[1]};
    int accepted = 0;
    for (int t = 0; t < kPilotSteps; ++t) accepted += kernel->step_accepting(x, s) ? 1 : 0;
    result.acceptance = static_cast<double>(accepted) / kPilotSteps;
    result.rounds = round;
    if (result.acceptance >= 0.2 && result.acceptance <= 0.4) break;
    const double factor = std::clamp(result.acceptance / 0.3, 0.2, 5.0);
    result.scales[0] *= factor;
    result.scales[1] *= factor;
  }
  return result;
}

ConditionalSubroutine cut_lambda_subroutine(const CutModelData& data, const CutModelOptions& opts,
                                            const std::array<double, 2>& scales,
                                            std::span<const double> theta1) {
  if (theta1.size() != data.records.size()) throw DimensionError("theta1 has the wrong dimension");
  std::vector<double> t1(theta1.begin(), theta1.end());
  const CutModeFit fit = cut_posterior_mode(data, t1);
  const auto countries = resolve_countries(data, opts.countries);

  std::vector<double> x2;
  for (const auto& r : data.records) x2.push_back(static_cast<double>(r.x2));

  JoaConfig<RandomWalkMhKernel> cfg;
  cfg.kernel = cut_kernel(data, t1, scales);
  cfg.pi0 = [mode = fit.mode, scales](RngStream& s) {
    return std::vector<double>{draw_normal(s, mode[0], scales[0]), draw_normal(s, mode[1], scales[1])};
  };
  cfg.f = [t1, x2, countries](const std::vector<double>& th2, std::span<double> out) {
    for (std::size_t j = 0; j < countries.size(); ++j) {
      const std::size_t d = countries[j];
      out[j] = th2[0] + t1[d] * th2[1] + x2[d];
    }
  };
  cfg.output_dim = countries.size();
  cfg.k = opts.joa.k;
  cfg.m_avg = opts.joa.m;
  cfg.max_steps = opts.joa.max_steps;

  ConditionalSubroutine out;
  out.subroutine = make_joa_subroutine(std::move(cfg));
  out.setup_cost = static_cast<std::uint64_t>(fit.iterations);
  return out;
}

NestedSpec cut_model_target(const CutModelData& data, const CutModelOptions& opts) {
  data.validate();
  opts.inner.validate();
  const auto countries = resolve_countries(data, opts.countries);
  const std::array<double, 2> scales =
      opts.step_scales ? *opts.step_scales : tune_cut_proposal(data, opts.pilot_seed).scales;

  NestedSpec spec;
  spec.inner = opts.inner;
  spec.outer_sampler = [data](RngStream& s) {
    std::vector<double> theta1;
    for (const auto& r : data.records) {
      theta1.push_back(draw_beta(s, 1.0 + static_cast<double>(r.z),
                                 1.0 + static_cast<double>(r.n - r.z)));
    }
    return theta1;
  };
  spec.conditional_factory = [data, opts, scales](std::span<const double> theta1) {
    return cut_lambda_subroutine(data, opts, scales, theta1);
  };
  const std::size_t arity = countries.size();
  spec.outer_map = [arity](std::span<const double>) { return max_g(arity); };
  return spec;
}

}  // namespace umlmc
