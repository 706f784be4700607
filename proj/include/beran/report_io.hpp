#pragma once

#include "beran/bandwidth.hpp"
#include "beran/benchmark.hpp"
#include "beran/regions.hpp"
#include "beran/sample.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>

namespace beran {

using Json = nlohmann::ordered_json;

Json to_json(const Bandwidths& bw);
Json to_json(const ResampleDiagnostics& d);
Json to_json(const BandwidthSelection& sel, bool with_trace = true);
/// Sidecar of a region CSV: method, level, calibration constant, bandwidths, seed.
Json region_sidecar(const ConfidenceRegion& region);
Json to_json(const RelativeMetrics& m);
Json to_json(const RegionMetrics& m);
Json to_json(const BenchReport& report);

std::string curve_csv(const SurvivalCurve& curve);
/// Columns t, lower, estimate, upper.
std::string region_csv(const ConfidenceRegion& region);
/// One row per report with the columns of the bandwidth tables (h, g, RMISE,
/// bootstrap means and sds, H, R).
std::string selection_table_csv(std::span<const BenchReport> reports);
/// One row per report and method: width, coverage, pointwise coverage, IWS.
std::string region_table_csv(std::span<const BenchReport> reports);

/// Shortest text that reads back to the same double.
std::string format_number(double v);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

} // namespace beran
