#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "leoaoi/engine.hpp"

namespace leoaoi {

/// One CSV/JSON record; a run contributes one row per class.
struct ResultRow {
    std::string experiment;
    std::uint64_t seed = 0;
    std::string axis;        // "none" outside sweeps
    std::string axis_value;  // empty outside sweeps
    int cls = 1;
    double mean_aoi_ticks = 0.0;
    double violation_rate = 0.0;
    double epsilon = 0.0;
    bool compliant = false;
    double mean_power_w = 0.0;
    int forced_ho = 0;
    int disc_ho = 0;
    int pingpong_events = 0;
};

enum class ExportFormat { csv, json };

inline constexpr const char* kCsvHeader =
    "experiment,seed,axis,axis_value,class,mean_aoi_ticks,violation_rate,epsilon,compliant,"
    "mean_power_w,forced_ho,disc_ho,pingpong_events";

/// %.6g, the precision used for every exported float.
std::string format_number(double x);

std::vector<ResultRow> rows_for(const RunResult& r, const std::string& experiment,
                                const std::string& axis = "none", const std::string& axis_value = "");

std::string to_csv(const std::vector<ResultRow>& rows);
std::string to_json(const std::vector<ResultRow>& rows);

/// Writes the rows; an empty set is a contract violation and writes nothing.
/// I/O failures raise std::runtime_error naming the path.
void export_results(const std::vector<ResultRow>& rows, ExportFormat format,
                    const std::filesystem::path& path);

std::vector<ResultRow> read_csv(const std::filesystem::path& path);

/// Mean and 95% Student-t half width.
struct MeanCI {
    double mean = 0.0;
    double half_width = 0.0;
    int n = 0;
};
MeanCI mean_ci95(const std::vector<double>& xs);

/// Violation rates per configuration (rows) and class (columns), mean ± 95% CI
/// across seeds, followed by the budget line.
std::string format_compliance_table(const std::vector<ResultRow>& rows);

}  // namespace leoaoi
