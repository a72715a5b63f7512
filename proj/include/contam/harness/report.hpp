#pragma once

#include "contam/harness/experiment.hpp"
#include "contam/harness/misreg_experiment.hpp"

#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace contam::harness {

enum class ReportFormat { csv, svg, json };

/// One line of report.csv.
struct ReportRow {
    std::string kind;
    double epsilon = 0;
    double mean_loss = 0;
    double stderr_loss = 0;
    double bound_2class = 0;
    std::optional<double> bound_multiclass;
    std::size_t n_instances = 0;
};

/// Writes report.csv / report.svg / report.json into out_dir and returns their paths.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report, const std::set<ReportFormat>& formats,
                                               const std::filesystem::path& out_dir);

std::string report_csv(const ExperimentReport& report);
std::string report_svg(const ExperimentReport& report);
std::vector<ReportRow> read_report_csv(const std::filesystem::path& path);
std::vector<ReportRow> parse_report_csv(const std::string& text);

/// bounds.csv with one row per ε and the JSON dump; returns their paths.
std::vector<std::filesystem::path> emit_bound_comparison(const std::vector<BoundComparisonRow>& rows,
                                                         const std::filesystem::path& out_dir);

/// misreg.json plus a per-fold CSV; returns their paths.
std::vector<std::filesystem::path> emit_misreg_report(const MisregReport& report, const std::filesystem::path& out_dir);

/// %.17g, the shortest form that round-trips every double.
std::string format_double(double v);

/// Writes text to path, raising IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace contam::harness
