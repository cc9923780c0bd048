#include "umlmc/report_io.hpp"

#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>

#include "umlmc/errors.hpp"

namespace umlmc {
namespace {

using nlohmann::ordered_json;

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

const char* kReportCsvHeader =
    "label,n_replications,n_ok,n_errors,mean,variance,std_error,ci_low,ci_high,total_cost,"
    "mean_cost,work_normalized_variance,truth,relative_error,relative_rmse\n";

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "both") return ReportFormat::kBoth;
  throw ConfigError("unknown format '" + name + "' (expected json, csv or both)");
}

std::string report_to_json(const AggregateReport& r) {
  ordered_json j;
  j["label"] = r.label;
  j["n_replications"] = r.n_replications;
  j["n_ok"] = r.n_ok;
  j["n_errors"] = r.n_errors;
  j["error_reasons"] = ordered_json::object();
  for (const auto& [reason, count] : r.error_reasons) j["error_reasons"][reason] = count;
  j["mean"] = r.mean;
  j["variance"] = r.variance;
  j["std_error"] = r.std_error;
  j["ci95"] = {r.ci_low, r.ci_high};
  j["total_cost"] = r.total_cost;
  j["mean_cost"] = r.mean_cost;
  j["cost_unit"] = "coupled_steps";
  j["work_normalized_variance"] = r.work_normalized_variance;
  j["truth"] = optional_json(r.truth);
  j["relative_error"] = optional_json(r.relative_error);
  j["relative_rmse"] = optional_json(r.relative_rmse);
  if (r.meeting_time) {
    ordered_json mt;
    mt["mean"] = r.meeting_time->mean;
    mt["median"] = r.meeting_time->median;
    mt["max"] = r.meeting_time->max;
    ordered_json hist = ordered_json::array();
    for (const auto& [bin, count] : r.meeting_time->log2_histogram) {
      hist.push_back({{"from", std::uint64_t{1} << bin}, {"count", count}});
    }
    mt["log2_histogram"] = hist;
    j["meeting_time"] = mt;
  } else {
    j["meeting_time"] = nullptr;
  }
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const AggregateReport& r) {
  std::string out = kReportCsvHeader;
  out += r.label + "," + std::to_string(r.n_replications) + "," + std::to_string(r.n_ok) + "," +
         std::to_string(r.n_errors) + "," + number(r.mean) + "," + number(r.variance) + "," +
         number(r.std_error) + "," + number(r.ci_low) + "," + number(r.ci_high) + "," +
         std::to_string(r.total_cost) + "," + number(r.mean_cost) + "," +
         number(r.work_normalized_variance) + "," + optional_number(r.truth) + "," +
         optional_number(r.relative_error) + "," + optional_number(r.relative_rmse) + "\n";
  return out;
}

std::string compare_to_json(const CompareResult& c, double truth, double budget_scale) {
  ordered_json j;
  j["truth"] = truth;
  j["budget_scale"] = budget_scale;
  j["n_ok"] = c.n_ok;
  j["n_errors"] = c.n_errors;
  j["unbiased_mean"] = c.unbiased_mean;
  j["plugin_mean"] = c.plugin_mean;
  j["unbiased_loglog_slope"] = c.unbiased_slope;
  j["plugin_loglog_slope"] = c.plugin_slope;
  ordered_json curves = ordered_json::array();
  for (const auto* curve : {&c.unbiased, &c.plugin}) {
    ordered_json pts = ordered_json::array();
    for (const auto& p : curve->points) {
      pts.push_back({{"processors", p.processors}, {"relative_error", p.relative_error}, {"groups", p.groups}});
    }
    curves.push_back({{"estimator", curve->estimator}, {"points", pts}});
  }
  j["curves"] = curves;
  return j.dump(2) + "\n";
}

std::string compare_to_csv(const CompareResult& c) {
  std::string out = "estimator,processors,relative_error,groups\n";
  for (const auto* curve : {&c.unbiased, &c.plugin}) {
    for (const auto& p : curve->points) {
      out += curve->estimator + "," + std::to_string(p.processors) + "," + number(p.relative_error) + "," +
             std::to_string(p.groups) + "\n";
    }
  }
  return out;
}

void write_outputs(const std::filesystem::path& base, ReportFormat format, const std::string& json,
                   const std::string& csv) {
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
  };
  if (format != ReportFormat::kCsv) write(std::filesystem::path(base.string() + ".json"), json);
  if (format != ReportFormat::kJson) write(std::filesystem::path(base.string() + ".csv"), csv);
}

}  // namespace umlmc
