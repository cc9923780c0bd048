#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "umlmc/models.hpp"
#include "umlmc/nested.hpp"

namespace umlmc {

/// One country: HPV module (Z infected out of N) and cancer module
/// (X1 cases, covariate X2 entering the log-rate directly).
struct CutModelRecord {
  std::int64_t z = 0;
  std::int64_t n = 0;
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;
};

struct CutModelData {
  static constexpr std::size_t kRecords = 13;

  std::vector<CutModelRecord> records;
  double prior_variance = 1e3;  ///< per component of theta2

  /// Throws ConfigError unless there are exactly 13 records, all counts are
  /// non-negative and Z <= N.
  void validate() const;
};

/// Reads "Z N X1 X2" integer records, one per line. Blank lines and lines
/// starting with '#' are ignored; exactly 13 records are required.
CutModelData load_cut_model_data(const std::filesystem::path& path);

/// The synthetic default shipped as data/cut_model_synthetic.txt. Not real data.
CutModelData synthetic_cut_model_data();

/// Log posterior of theta2 given theta1 (Poisson regression with log-rate
/// theta2_0 + theta1_i theta2_1 + X2_i, N(0, prior_variance I) prior), up to
/// a constant.
double cut_log_posterior(const CutModelData& data, std::span<const double> theta1,
                         std::span<const double> theta2);

/// Posterior mode of theta2 given theta1 by damped Newton iterations.
struct CutModeFit {
  std::array<double, 2> mode{};
  std::array<double, 2> posterior_sd{};  ///< from the inverse negative Hessian
  int iterations = 0;
};
CutModeFit cut_posterior_mode(const CutModelData& data, std::span<const double> theta1,
                              std::optional<std::array<double, 2>> start = std::nullopt);

/// Posterior mean of theta1: (1 + Z_i) / (2 + N_i).
std::vector<double> cut_theta1_posterior_mean(const CutModelData& data);

struct CutModelOptions {
  JoaSettings joa{20, 60, 1'000'000};
  MlmcConfig inner{};
  /// Countries (0-based) entering max_d; empty means all.
  std::vector<std::size_t> countries;
  /// Diagonal random-walk scales for theta2; tuned by a pilot run when absent.
  std::optional<std::array<double, 2>> step_scales;
  std::uint64_t pilot_seed = 7;
};

/// Pilot tuning of the diagonal proposal scale: starts at 2.38/sqrt(2) times
/// the Laplace posterior sd at the theta1 posterior mean and rescales until
/// the acceptance rate of a 2000-step run lies in [0.2, 0.4].
struct PilotResult {
  std::array<double, 2> scales{};
  double acceptance = 0.0;
  int rounds = 0;
};
PilotResult tune_cut_proposal(const CutModelData& data, std::uint64_t seed);

/// For fixed theta1, unbiased estimates of (lambda_d)_{d in countries} under
/// pi(theta2 | Y2, theta1). Chains start from N(mode, scale^2) around the
/// Newton mode for this theta1; the Newton iterations are the setup cost.
ConditionalSubroutine cut_lambda_subroutine(const CutModelData& data, const CutModelOptions& opts,
                                            const std::array<double, 2>& scales,
                                            std::span<const double> theta1);

/// U = E_{theta1}[ max_d E_{theta2 | theta1}[lambda_d] ] as a nested problem:
/// theta1 from the product Beta(1 + Z_i, 1 + N_i - Z_i) posterior, inner JOA
/// over a coupled random-walk MH chain for theta2.
NestedSpec cut_model_target(const CutModelData& data, const CutModelOptions& opts = {});

}  // namespace umlmc
