// umlmc: command-line driver for the unbiased multilevel estimators.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <CLI11.hpp>
#include <array>
#include <charconv>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "umlmc/cut_model.hpp"
#include "umlmc/errors.hpp"
#include "umlmc/harness.hpp"
#include "umlmc/ising.hpp"
#include "umlmc/models.hpp"
#include "umlmc/report_io.hpp"

namespace {

using namespace umlmc;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

struct CommonFlags {
  double p = 0.7;
  std::optional<double> gamma;
  std::optional<double> delta;
  int max_level = 40;
  std::uint64_t reps = 1000;
  unsigned threads = default_thread_count();
  std::uint64_t seed = RngStream::kDefaultSeed;
  std::string out;
  std::string format = "both";

  MlmcConfig mlmc() const {
    MlmcConfig cfg;
    cfg.p = p;
    cfg.delta = delta;
    cfg.max_level = max_level;
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_delta = true) {
  cmd->add_option("--p", f.p, "geometric level parameter, 1/2 < p < 1")->capture_default_str();
  cmd->add_option("--gamma", f.gamma, "assumed decay exponent; warns when p exceeds its bound");
  if (with_delta) cmd->add_option("--delta", f.delta, "enable the delta-transformation with this radius");
  cmd->add_option("--max-level", f.max_level, "largest admissible level N")->capture_default_str();
  cmd->add_option("--reps", f.reps, "number of replications")->capture_default_str();
  cmd->add_option("--threads", f.threads, "worker threads (default: UMLMC_THREADS or all cores)");
  cmd->add_option("--seed", f.seed, "master seed")->capture_default_str();
  cmd->add_option("--out", f.out, "write <out>.json and/or <out>.csv");
  cmd->add_option("--format", f.format, "json, csv or both")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
}

void add_joa(CLI::App* cmd, JoaSettings& joa) {
  cmd->add_option("--joa-k", joa.k, "burn-in index k")->capture_default_str();
  cmd->add_option("--joa-m", joa.m, "averaging index m >= k")->capture_default_str();
  cmd->add_option("--max-steps", joa.max_steps, "meeting-time cap per coupled chain")->capture_default_str();
}

void print_report(const AggregateReport& r) {
  std::printf("%s: %llu replications (%llu ok, %llu errors)\n", r.label.c_str(),
              static_cast<unsigned long long>(r.n_replications), static_cast<unsigned long long>(r.n_ok),
              static_cast<unsigned long long>(r.n_errors));
  for (const auto& [reason, count] : r.error_reasons) {
    std::printf("  error %s: %llu\n", reason.c_str(), static_cast<unsigned long long>(count));
  }
  std::printf("  mean %.10g  se %.4g  95%% CI [%.10g, %.10g]\n", r.mean, r.std_error, r.ci_low, r.ci_high);
  std::printf("  mean cost %.6g coupled steps, work-normalized variance %.6g\n", r.mean_cost,
              r.work_normalized_variance);
  if (r.truth) {
    std::printf("  truth %.10g  relative error %.4g  relative rmse %.4g\n", *r.truth, *r.relative_error,
                *r.relative_rmse);
  }
  if (r.meeting_time) {
    std::printf("  meeting time mean %.4g median %llu max %llu\n", r.meeting_time->mean,
                static_cast<unsigned long long>(r.meeting_time->median),
                static_cast<unsigned long long>(r.meeting_time->max));
  }
  for (const auto& w : r.warnings) std::fprintf(stderr, "%s\n", w.c_str());
}

void emit(const AggregateReport& report, const CommonFlags& f) {
  print_report(report);
  if (!f.out.empty()) {
    write_outputs(f.out, parse_report_format(f.format), report_to_json(report), report_to_csv(report));
  }
}

AggregateReport run_target(const Target& target, const CommonFlags& f) {
  const MlmcConfig cfg = f.mlmc();
  for (const auto& w : cfg.validate(f.gamma)) std::fprintf(stderr, "warning: %s\n", w.c_str());
  RunOptions opts;
  opts.replications = f.reps;
  opts.threads = f.threads;
  opts.seed = f.seed;
  opts.truth = target.truth;
  opts.label = target.name;
  return run_replications(mlmc_job(target, cfg), opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unbiased multilevel Monte Carlo estimators of g(E_pi[f]) built on coupled Markov chains"};
  app.require_subcommand(1);

  CommonFlags beta_flags;
  BetaOptions beta_opts;
  auto* beta = app.add_subcommand("run-beta", "prod_i 1/E[X_i], X_i ~ Beta(i, 1); truth K + 1");
  beta->add_option("--K", beta_opts.K, "number of Beta coordinates")->capture_default_str();
  beta->add_option("--step-size", beta_opts.step_size, "random-walk proposal sd")->capture_default_str();
  add_joa(beta, beta_opts.joa);
  add_common(beta, beta_flags);

  CommonFlags ising_flags;
  IsingRatioOptions ising_opts;
  auto* ising = app.add_subcommand("run-ising", "Z(theta1) / Z(theta2) on the periodic n x n Ising lattice");
  ising->add_option("--lattice-n", ising_opts.n, "lattice side n")->capture_default_str();
  ising->add_option("--theta1", ising_opts.theta1)->capture_default_str();
  ising->add_option("--theta2", ising_opts.theta2)->capture_default_str();
  add_joa(ising, ising_opts.joa);
  add_common(ising, ising_flags);

  CommonFlags natstat_flags;
  IsingNaturalStatOptions natstat_opts;
  auto* natstat = app.add_subcommand("run-ising-natstat", "1 / E_theta[-H] with the delta-transformation");
  natstat->add_option("--lattice-n", natstat_opts.n, "lattice side n")->capture_default_str();
  natstat->add_option("--theta", natstat_opts.theta)->capture_default_str();
  natstat->add_option("--delta", natstat_opts.delta, "delta-transformation radius")->capture_default_str();
  add_joa(natstat, natstat_opts.joa);
  add_common(natstat, natstat_flags, false);

  CommonFlags nested_flags;
  CutModelOptions cut_opts;
  std::string data_path;
  std::vector<double> step_scales;
  auto* nested = app.add_subcommand("run-nested", "E[max_d E[lambda_d | theta1]] under the cut model");
  nested->add_option("--data", data_path, "13-line \"Z N X1 X2\" file (default: bundled synthetic data)");
  nested->add_option("--countries", cut_opts.countries, "0-based countries entering the max (default: all)")
      ->delimiter(',');
  nested->add_option("--step-scales", step_scales, "two random-walk scales for theta2 (default: pilot-tuned)")
      ->expected(2);
  nested->add_option("--pilot-seed", cut_opts.pilot_seed)->capture_default_str();
  add_joa(nested, cut_opts.joa);
  add_common(nested, nested_flags, false);

  CommonFlags cmp_flags;
  cmp_flags.reps = 10000;
  std::string cmp_target = "beta";
  std::vector<std::uint64_t> processors = {1, 10, 100, 1000};
  double budget_scale = 1.0;
  BetaOptions cmp_beta;
  IsingRatioOptions cmp_ising;
  auto* compare = app.add_subcommand("compare", "equal-compute comparison against the plug-in estimator");
  compare->add_option("--target", cmp_target, "beta or ising")
      ->check(CLI::IsMember({"beta", "ising"}))
      ->capture_default_str();
  compare->add_option("--processors", processors, "strictly increasing processor counts")
      ->delimiter(',')
      ->capture_default_str();
  compare->add_option("--budget-scale", budget_scale, "plug-in budget as a multiple of the unbiased cost")
      ->capture_default_str();
  compare->add_option("--K", cmp_beta.K)->capture_default_str();
  compare->add_option("--lattice-n", cmp_ising.n)->capture_default_str();
  compare->add_option("--theta1", cmp_ising.theta1)->capture_default_str();
  compare->add_option("--theta2", cmp_ising.theta2)->capture_default_str();
  add_common(compare, cmp_flags);

  int oracle_n = 2;
  double oracle_t1 = 0.1, oracle_t2 = 0.0;
  std::optional<double> oracle_theta;
  auto* oracle = app.add_subcommand("oracle", "exact ground truths by enumeration (n <= 4)");
  oracle->add_option("--lattice-n", oracle_n)->capture_default_str();
  oracle->add_option("--theta1", oracle_t1)->capture_default_str();
  oracle->add_option("--theta2", oracle_t2)->capture_default_str();
  oracle->add_option("--theta", oracle_theta, "also print E_theta[-H] and its inverse");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*beta) {
      emit(run_target(beta_product_target(beta_opts), beta_flags), beta_flags);
    } else if (*ising) {
      emit(run_target(ising_ratio_target(ising_opts), ising_flags), ising_flags);
    } else if (*natstat) {
      emit(run_target(ising_natural_stat_target(natstat_opts), natstat_flags), natstat_flags);
    } else if (*nested) {
      const CutModelData data = data_path.empty() ? synthetic_cut_model_data() : load_cut_model_data(data_path);
      if (!step_scales.empty()) cut_opts.step_scales = std::array<double, 2>{step_scales[0], step_scales[1]};
      cut_opts.inner = nested_flags.mlmc();
      for (const auto& w : cut_opts.inner.validate(nested_flags.gamma)) {
        std::fprintf(stderr, "warning: %s\n", w.c_str());
      }
      RunOptions opts;
      opts.replications = nested_flags.reps;
      opts.threads = nested_flags.threads;
      opts.seed = nested_flags.seed;
      opts.label = "cut_model_nested";
      emit(run_replications(nested_job(cut_model_target(data, cut_opts)), opts), nested_flags);
    } else if (*compare) {
      const Target target = cmp_target == "beta" ? beta_product_target(cmp_beta) : ising_ratio_target(cmp_ising);
      if (!target.truth) throw ConfigError("compare needs a target with a known truth (lattice n <= 4)");
      CompareOptions opts;
      opts.processor_counts = processors;
      opts.replications = cmp_flags.reps;
      opts.threads = cmp_flags.threads;
      opts.seed = cmp_flags.seed;
      opts.budget_scale = budget_scale;
      opts.truth = *target.truth;
      const MlmcConfig cfg = cmp_flags.mlmc();
      const CompareResult res = compare_equal_compute(mlmc_job(target, cfg), target.plugin, opts);
      std::printf("%s: pool %llu (%llu errors), truth %.10g\n", target.name.c_str(),
                  static_cast<unsigned long long>(res.n_ok), static_cast<unsigned long long>(res.n_errors),
                  opts.truth);
      std::printf("%12s %16s %16s\n", "processors", "unbiased", "plugin");
      for (std::size_t i = 0; i < res.unbiased.points.size(); ++i) {
        std::printf("%12llu %16.6g %16.6g\n", static_cast<unsigned long long>(res.unbiased.points[i].processors),
                    res.unbiased.points[i].relative_error, res.plugin.points[i].relative_error);
      }
      std::printf("log-log slope: unbiased %.4f, plugin %.4f\n", res.unbiased_slope, res.plugin_slope);
      if (!cmp_flags.out.empty()) {
        write_outputs(cmp_flags.out, parse_report_format(cmp_flags.format),
                      compare_to_json(res, opts.truth, budget_scale), compare_to_csv(res));
      }
    } else if (*oracle) {
      std::printf("z_theta1 %s\n", shortest(ising_partition_function(oracle_n, oracle_t1)).c_str());
      std::printf("z_theta2 %s\n", shortest(ising_partition_function(oracle_n, oracle_t2)).c_str());
      std::printf("ratio %s\n", shortest(ising_z_ratio_oracle(oracle_n, oracle_t1, oracle_t2)).c_str());
      if (oracle_theta) {
        const double mean_h = ising_expectation_oracle(
            oracle_n, *oracle_theta, [](const IsingState& s) { return -static_cast<double>(ising_hamiltonian(s)); });
        std::printf("natural_stat_mean %s\n", shortest(mean_h).c_str());
        std::printf("inverse_natural_stat %s\n", shortest(1.0 / mean_h).c_str());
      }
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
