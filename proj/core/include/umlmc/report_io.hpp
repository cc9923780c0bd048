#pragma once

#include <filesystem>
#include <string>

#include "umlmc/harness.hpp"

namespace umlmc {

enum class ReportFormat { kJson, kCsv, kBoth };

/// Parses "json", "csv" or "both"; ConfigError otherwise.
ReportFormat parse_report_format(const std::string& name);

/// Serialisations are pure functions of the report; doubles are written in
/// shortest round-trip form, so equal reports give byte-identical files.
std::string report_to_json(const AggregateReport& report);
/// Header row plus one row per report.
std::string report_to_csv(const AggregateReport& report);

std::string compare_to_json(const CompareResult& result, double truth, double budget_scale);
/// One row per (estimator, processor_count).
std::string compare_to_csv(const CompareResult& result);

/// Writes <base>.json and/or <base>.csv.
void write_outputs(const std::filesystem::path& base, ReportFormat format, const std::string& json,
                   const std::string& csv);

}  // namespace umlmc
