#include "bcp/report.hpp"

#include "bcp/error.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace bcp {

namespace {

using Json = nlohmann::ordered_json;

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), r.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string params_string(const std::vector<RunParam>& params) {
    std::string out;
    for (const auto& p : params) {
        if (!out.empty()) out += ';';
        out += p.name + '=';
        if (const auto* d = std::get_if<double>(&p.value)) out += number(*d);
        else out += std::get<std::string>(p.value);
    }
    return out;
}

Json request_json(const RunRequest& r) {
    Json params = Json::object();
    for (const auto& p : r.params) {
        if (const auto* d = std::get_if<double>(&p.value)) params[p.name] = *d;
        else params[p.name] = std::get<std::string>(p.value);
    }
    return Json{{"process", r.process},
                {"params", params},
                {"lower_boundary", r.lower_boundary},
                {"upper_boundary", r.upper_boundary},
                {"T", r.horizon},
                {"n", r.n},
                {"paths", r.paths},
                {"seed", r.seed},
                {"series_terms", r.series_terms},
                {"series_tolerance", r.series_tolerance},
                {"envelope_samples", r.envelope_samples},
                {"chunk_size", r.chunk_size},
                {"antithetic", r.antithetic}};
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "plot-data") return ReportFormat::PlotData;
    fail(ErrorKind::InvalidArgument, "unknown output format '" + std::string(name) + "'");
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols{
        "process",   "params",           "lower_boundary", "upper_boundary",
        "T",         "n",                "paths",          "seed",
        "series_terms", "series_tolerance", "envelope_samples", "chunk_size",
        "antithetic", "mean",            "std_error",      "lower",
        "upper",     "bracket_width",    "timing_ms",      "version"};
    return cols;
}

std::string csv_row(const RunReport& rep) {
    const auto& q = rep.request;
    const auto& r = rep.results;
    const std::vector<std::string> fields{
        csv_field(q.process),
        csv_field(params_string(q.params)),
        csv_field(q.lower_boundary),
        csv_field(q.upper_boundary),
        number(q.horizon),
        std::to_string(q.n),
        std::to_string(q.paths),
        std::to_string(q.seed),
        std::to_string(q.series_terms),
        number(q.series_tolerance),
        std::to_string(q.envelope_samples),
        std::to_string(q.chunk_size),
        q.antithetic ? "true" : "false",
        number(r.mean),
        number(r.std_error),
        number(r.lower),
        number(r.upper),
        number(r.bracket_width),
        number(rep.timing_ms),
        csv_field(rep.version)};
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += fields[i];
    }
    return line;
}

std::string to_json_string(const RunReport& rep) {
    const Json j{{"request", request_json(rep.request)},
                 {"results",
                  {{"mean", rep.results.mean},
                   {"std_error", rep.results.std_error},
                   {"lower", rep.results.lower},
                   {"upper", rep.results.upper},
                   {"bracket_width", rep.results.bracket_width}}},
                 {"timing_ms", rep.timing_ms},
                 {"version", rep.version}};
    return j.dump(2);
}

RunReport report_from_json(std::string_view text) {
    try {
        const Json j = Json::parse(text);
        RunReport rep;
        const Json& q = j.at("request");
        rep.request.process = q.at("process").get<std::string>();
        for (const auto& [name, value] : q.at("params").items()) {
            if (value.is_number()) rep.request.params.push_back({name, value.get<double>()});
            else rep.request.params.push_back({name, value.get<std::string>()});
        }
        rep.request.lower_boundary = q.at("lower_boundary").get<std::string>();
        rep.request.upper_boundary = q.at("upper_boundary").get<std::string>();
        rep.request.horizon = q.at("T").get<double>();
        rep.request.n = q.at("n").get<std::size_t>();
        rep.request.paths = q.at("paths").get<std::size_t>();
        rep.request.seed = q.at("seed").get<std::uint64_t>();
        rep.request.series_terms = q.at("series_terms").get<std::size_t>();
        rep.request.series_tolerance = q.at("series_tolerance").get<double>();
        rep.request.envelope_samples = q.at("envelope_samples").get<std::size_t>();
        rep.request.chunk_size = q.at("chunk_size").get<std::size_t>();
        rep.request.antithetic = q.at("antithetic").get<bool>();
        const Json& r = j.at("results");
        rep.results = {r.at("mean").get<double>(), r.at("std_error").get<double>(),
                       r.at("lower").get<double>(), r.at("upper").get<double>(),
                       r.at("bracket_width").get<double>()};
        rep.timing_ms = j.at("timing_ms").get<double>();
        rep.version = j.at("version").get<std::string>();
        return rep;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("malformed report JSON: ") + e.what());
    }
}

std::string emit(const RunReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: return to_json_string(report) + "\n";
        case ReportFormat::Csv: {
            std::string out;
            const auto& cols = csv_columns();
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (i) out += ',';
                out += cols[i];
            }
            return out + "\n" + csv_row(report) + "\n";
        }
        case ReportFormat::PlotData: {
            std::ostringstream os;
            for (std::size_t k = 0; k < report.curves.size(); ++k) {
                const auto& c = report.curves[k];
                if (k) os << "\n";
                os << "# " << c.label << "\n" << c.time_name << ",boundary\n";
                for (const auto& [t, v] : c.points) os << number(t) << "," << number(v) << "\n";
            }
            return os.str();
        }
    }
    return {};
}

}  // namespace bcp
