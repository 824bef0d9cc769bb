#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace bcp {

/// One process parameter as given on the command line: a number, or an
/// expression in t for time-dependent coefficients.
struct RunParam {
    std::string name;
    std::variant<double, std::string> value;

    bool operator==(const RunParam&) const = default;
};

/// Everything needed to recompute a run.
struct RunRequest {
    std::string process;  ///< bm, ou, ou-td, growth, gbm
    std::vector<RunParam> params;
    std::string lower_boundary = "-inf";
    std::string upper_boundary;
    double horizon = 1.0;
    std::size_t n = 128;
    std::size_t paths = 1'000'000;
    std::uint64_t seed = 0;
    std::size_t series_terms = 6;
    double series_tolerance = 1e-12;
    std::size_t envelope_samples = 50;
    std::size_t chunk_size = 4096;
    bool antithetic = false;

    bool operator==(const RunRequest&) const = default;
};

struct RunResults {
    double mean = 0.0;
    double std_error = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double bracket_width = 0.0;

    bool operator==(const RunResults&) const = default;
};

/// Sampled boundary for plotting: (time, value) pairs.
struct BoundaryCurve {
    std::string label;      ///< e.g. "original upper b(t)"
    std::string time_name;  ///< "t" or "s"
    std::vector<std::pair<double, double>> points;

    bool operator==(const BoundaryCurve&) const = default;
};

struct RunReport {
    RunRequest request;
    RunResults results;
    double timing_ms = 0.0;
    std::string version;
    /// Only emitted in the plot-data format.
    std::vector<BoundaryCurve> curves;
};

enum class ReportFormat { Json, Csv, PlotData };

ReportFormat parse_report_format(std::string_view name);

std::string emit(const RunReport& report, ReportFormat format);

/// Fixed CSV column order.
const std::vector<std::string>& csv_columns();
std::string csv_row(const RunReport& report);

std::string to_json_string(const RunReport& report);
/// Inverse of the JSON emitter; curves are not part of the JSON form.
RunReport report_from_json(std::string_view text);

}  // namespace bcp
