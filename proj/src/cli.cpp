#include "bcp/cli.hpp"

#include "bcp/expr.hpp"
#include "bcp/mc_engine.hpp"
#include "bcp/transforms.hpp"
#include "bcp/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace bcp::cli {

namespace {

const RunParam* find_param(const RunRequest& r, std::string_view name) {
    for (const auto& p : r.params) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

double number_param(const RunRequest& r, std::string_view name) {
    const RunParam* p = find_param(r, name);
    require(p != nullptr, ErrorKind::InvalidArgument,
            r.process + ": missing parameter '" + std::string(name) + "'");
    if (const auto* d = std::get_if<double>(&p->value)) return *d;
    const auto e = parse_boundary(std::get<std::string>(p->value));
    require(e.constant_value().has_value(), ErrorKind::InvalidArgument,
            r.process + ": parameter '" + std::string(name) + "' must be a constant");
    return *e.constant_value();
}

TimeFunction time_param(const RunRequest& r, std::string_view name) {
    const RunParam* p = find_param(r, name);
    require(p != nullptr, ErrorKind::InvalidArgument,
            r.process + ": missing parameter '" + std::string(name) + "'");
    if (const auto* d = std::get_if<double>(&p->value)) return TimeFunction::of_constant(*d);
    return to_time_function(parse_boundary(std::get<std::string>(p->value)));
}

double ou_sigma(const RunRequest& r) {
    if (find_param(r, "sigma2")) {
        const double s2 = number_param(r, "sigma2");
        require(s2 > 0.0, ErrorKind::InvalidArgument, "ou: sigma2 must be positive");
        return std::sqrt(s2);
    }
    return number_param(r, "sigma");
}

std::optional<DiffusionSpec> spec_from(const RunRequest& r) {
    if (r.process == "bm") return std::nullopt;
    if (r.process == "ou") {
        return OuSpec{number_param(r, "kappa"), number_param(r, "alpha"), ou_sigma(r),
                      number_param(r, "x0")};
    }
    if (r.process == "ou-td") {
        return OuTimeVaryingSpec{time_param(r, "kappa"), time_param(r, "alpha"),
                                 time_param(r, "sigma"), number_param(r, "x0")};
    }
    if (r.process == "growth") {
        return GrowthSpec{number_param(r, "alpha"), number_param(r, "beta"),
                          number_param(r, "sigma"), number_param(r, "x0")};
    }
    if (r.process == "gbm") {
        return GbmSpec{number_param(r, "sigma"), time_param(r, "rate"), number_param(r, "x0")};
    }
    fail(ErrorKind::InvalidArgument, "unknown process '" + r.process + "'");
}

BoundaryCurve sample_curve(const GeneralBoundary& g, const Partition& p, const RealFunction& map,
                           std::string label, std::string time_name) {
    BoundaryCurve c{std::move(label), std::move(time_name), {}};
    for (double s : p.nodes()) {
        const double t = map ? map(s) : s;
        c.points.emplace_back(t, g(t));
    }
    return c;
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::ParseError:
        case ErrorKind::InvalidDomain: return kArgumentError;
        case ErrorKind::EvaluationError:
        case ErrorKind::NumericFailure: return kNumericFailure;
        case ErrorKind::StartOutsideBand:
        case ErrorKind::InvalidBoundaries: return kInvalidBoundary;
    }
    return kNumericFailure;
}

RunReport execute(const RunRequest& req, unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    require(std::isfinite(req.horizon) && req.horizon > 0.0, ErrorKind::InvalidArgument,
            "T must be positive and finite");
    require(req.n >= 1, ErrorKind::InvalidArgument, "n must be at least 1");
    require(req.envelope_samples >= 2, ErrorKind::InvalidArgument,
            "envelope samples must be at least 2");

    const auto lower = to_boundary(parse_boundary(req.lower_boundary), BoundarySide::Lower,
                                   req.horizon);
    const auto upper = to_boundary(parse_boundary(req.upper_boundary), BoundarySide::Upper,
                                   req.horizon);
    require(lower.is_finite() || upper.is_finite(), ErrorKind::InvalidBoundaries,
            "upper boundary must be finite (both boundaries infinite: probability is trivially 1)");

    McConfig cfg;
    cfg.paths = req.paths;
    cfg.seed = req.seed;
    cfg.chunk_size = req.chunk_size;
    cfg.series.max_terms = req.series_terms;
    cfg.series.tail_tolerance = req.series_tolerance;
    cfg.antithetic = req.antithetic;
    cfg.threads = threads;
    cfg.validate();

    RunReport rep;
    rep.request = req;
    rep.version = kVersion;

    BcpEstimate est;
    const auto spec = spec_from(req);
    if (!spec) {
        const Partition p = uniform_partition(req.horizon, req.n);
        est = estimate_bcp_bracketed(lower, upper, p, req.envelope_samples, cfg);
        if (lower.is_finite()) rep.curves.push_back(sample_curve(lower, p, {}, "lower a(t)", "t"));
        if (upper.is_finite()) rep.curves.push_back(sample_curve(upper, p, {}, "upper b(t)", "t"));
    } else {
        const ReducedProblem red = reduce(*spec, lower, upper, req.horizon);
        const Partition p = uniform_partition(red.horizon, req.n);
        est = estimate_bcp_bracketed(red.lower, red.upper, p, req.envelope_samples, cfg);
        if (lower.is_finite()) {
            rep.curves.push_back(sample_curve(lower, p, red.time_map, "original lower a(t)", "t"));
        }
        if (upper.is_finite()) {
            rep.curves.push_back(sample_curve(upper, p, red.time_map, "original upper b(t)", "t"));
        }
        if (red.lower.is_finite()) {
            rep.curves.push_back(sample_curve(red.lower, p, {}, "transformed lower c(s)", "s"));
        }
        if (red.upper.is_finite()) {
            rep.curves.push_back(sample_curve(red.upper, p, {}, "transformed upper d(s)", "s"));
        }
    }

    rep.results.mean = est.mean;
    rep.results.std_error = est.std_error;
    if (est.bracket) {
        rep.results.lower = est.bracket->lower;
        rep.results.upper = est.bracket->upper;
        rep.results.bracket_width = est.bracket->width();
    } else {
        rep.results.lower = rep.results.upper = est.mean;
    }
    rep.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return rep;
}

std::vector<RunRequest> reference_requests(std::uint64_t seed) {
    auto base = [seed](std::string process, std::vector<RunParam> params, std::string lower,
                       std::string upper) {
        RunRequest r;
        r.process = std::move(process);
        r.params = std::move(params);
        r.lower_boundary = std::move(lower);
        r.upper_boundary = std::move(upper);
        r.horizon = 1.0;
        r.n = 128;
        r.paths = 1'000'000;
        r.seed = seed;
        r.series_terms = 6;
        r.envelope_samples = 50;
        return r;
    };
    return {
        base("ou", {{"kappa", 0.5}, {"alpha", 0.0}, {"sigma2", 1.0}, {"x0", 0.0}}, "-inf", "1"),
        base("growth", {{"alpha", 0.5}, {"beta", 0.5}, {"sigma", 1.0}, {"x0", 1.0}}, "0",
             "exp(1)"),
        base("gbm", {{"sigma", 0.1}, {"rate", std::string("0.1+0.05*exp(-t)")}, {"x0", 10.0}},
             "0", "12"),
        base("bm", {}, "-inf", "0.5 - t*log(0.25+0.25*sqrt(1+8*exp(-1/t)))"),
    };
}

unsigned threads_from_environment() {
    const char* v = std::getenv("BCP_THREADS");
    if (v == nullptr || *v == '\0') return 0;
    unsigned n = 0;
    const std::string_view s(v);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), n);
    require(r.ec == std::errc() && r.ptr == s.data() + s.size(), ErrorKind::InvalidArgument,
            "BCP_THREADS must be a non-negative integer");
    return n;
}

namespace {

struct Options {
    std::optional<std::string> lower;
    std::string upper;
    double horizon = 1.0;
    std::size_t n = 128;
    std::size_t paths = 1'000'000;
    std::uint64_t seed = 0;
    std::size_t series_terms = 6;
    double series_tolerance = 1e-12;
    std::size_t envelope_samples = kDefaultEnvelopeSamples;
    std::size_t chunk_size = 4096;
    bool antithetic = false;
    std::string format = "json";
    std::string output;
};

void add_common(CLI::App* sub, Options& o, bool needs_upper_default) {
    sub->add_option("--lower", o.lower, "lower boundary expression in t");
    auto* up = sub->add_option("--upper", o.upper, "upper boundary expression in t");
    if (needs_upper_default) up->default_str("inf");
    sub->add_option("--T", o.horizon, "time horizon")->capture_default_str();
    sub->add_option("--n", o.n, "partition intervals")->capture_default_str();
    sub->add_option("--paths", o.paths, "Monte Carlo paths")->capture_default_str();
    sub->add_option("--seed", o.seed, "random seed")->required();
    sub->add_option("--series-terms", o.series_terms, "series terms J")->capture_default_str();
    sub->add_option("--series-tolerance", o.series_tolerance,
                    "tail tolerance; 0 sums exactly J terms")
        ->capture_default_str();
    sub->add_option("--envelope-samples", o.envelope_samples, "samples per interval")
        ->capture_default_str();
    sub->add_option("--chunk-size", o.chunk_size, "paths per RNG chunk")->capture_default_str();
    sub->add_flag("--antithetic", o.antithetic, "average each sample with its reflection");
    sub->add_option("--format", o.format, "json, csv or plot-data")->capture_default_str();
    sub->add_option("--output", o.output, "write to file instead of stdout");
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorKind::InvalidArgument, "cannot open output file " + path);
    f << text;
    require(static_cast<bool>(f), ErrorKind::InvalidArgument, "cannot write output file " + path);
}

std::string reference_table(const std::vector<RunReport>& reports) {
    static constexpr const char* kReference[] = {"[0.721463, 0.721464]", "[0.721463, 0.721464]",
                                                 "[0.603728, 0.603729]", "0.520251"};
    std::ostringstream os;
    os << std::left << std::setw(8) << "case" << std::right << std::setw(11) << "mean"
       << std::setw(11) << "std_error" << std::setw(11) << "lower" << std::setw(11) << "upper"
       << "  reference\n";
    os << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i].results;
        os << std::left << std::setw(8) << reports[i].request.process << std::right
           << std::setw(11) << r.mean << std::setw(11) << r.std_error << std::setw(11) << r.lower
           << std::setw(11) << r.upper << "  " << kReference[i] << "\n";
    }
    return os.str();
}

int run_parsed(CLI::App& app, const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        if (e.get_exit_code() == 0) {
            out << sub->help();
            return kSuccess;
        }
        err << "bcp: " << e.what() << "\n";
        return kArgumentError;
    }
    return -1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Boundary crossing probabilities for Brownian motion and reducible diffusions",
                 "bcp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Options o;
    double kappa = 0, alpha = 0, sigma = 0, sigma2 = 0, beta = 0, x0 = 0;
    std::string kappa_text, alpha_text, sigma_text, rate_text;

    auto* bm = app.add_subcommand("bm", "standard Brownian motion from 0");
    add_common(bm, o, true);

    auto* ou = app.add_subcommand("ou", "Ornstein-Uhlenbeck process");
    ou->add_option("--kappa", kappa, "mean reversion rate")->required();
    ou->add_option("--alpha", alpha, "long-run mean")->required();
    auto* ou_s = ou->add_option("--sigma", sigma, "volatility");
    auto* ou_s2 = ou->add_option("--sigma2", sigma2, "variance rate sigma^2");
    ou_s->excludes(ou_s2);
    ou->add_option("--x0", x0, "initial value")->required();
    add_common(ou, o, true);

    auto* ou_td = app.add_subcommand("ou-td", "OU process with time-dependent coefficients");
    ou_td->add_option("--kappa", kappa_text, "kappa(t) expression")->required();
    ou_td->add_option("--alpha", alpha_text, "alpha(t) expression")->required();
    ou_td->add_option("--sigma", sigma_text, "sigma(t) expression")->required();
    ou_td->add_option("--x0", x0, "initial value")->required();
    add_common(ou_td, o, true);

    auto* growth = app.add_subcommand("growth", "growth process on the positive reals");
    growth->add_option("--alpha", alpha, "alpha")->required();
    growth->add_option("--beta", beta, "beta")->required();
    growth->add_option("--sigma", sigma, "volatility")->required();
    growth->add_option("--x0", x0, "initial value")->required();
    add_common(growth, o, true);

    auto* gbm = app.add_subcommand("gbm", "geometric Brownian motion with rate r(t)");
    gbm->add_option("--sigma", sigma, "volatility")->required();
    gbm->add_option("--rate", rate_text, "r(t) expression")->required();
    gbm->add_option("--x0", x0, "initial value")->required();
    add_common(gbm, o, true);

    std::string which;
    std::uint64_t reproduce_seed = kReferenceSeed;
    std::string reproduce_format = "table";
    std::string reproduce_output;
    auto* rep = app.add_subcommand("reproduce", "rerun the four reference examples");
    rep->add_option("set", which, "example set (paper7)")->required()->check(
        CLI::IsMember({"paper7"}));
    rep->add_option("--seed", reproduce_seed, "random seed")->capture_default_str();
    rep->add_option("--format", reproduce_format, "table, json or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"table", "json", "csv"}));
    rep->add_option("--output", reproduce_output, "write to file instead of stdout");

    if (const int code = run_parsed(app, args, out, err); code >= 0) return code;

    try {
        const unsigned threads = threads_from_environment();

        if (rep->parsed()) {
            std::vector<RunReport> reports;
            for (const auto& req : reference_requests(reproduce_seed)) {
                reports.push_back(execute(req, threads));
            }
            std::string text;
            if (reproduce_format == "table") {
                text = reference_table(reports);
            } else if (reproduce_format == "json") {
                text = "[\n";
                for (std::size_t i = 0; i < reports.size(); ++i) {
                    text += to_json_string(reports[i]) + (i + 1 < reports.size() ? ",\n" : "\n");
                }
                text += "]\n";
            } else {
                text = emit(reports.front(), ReportFormat::Csv);
                for (std::size_t i = 1; i < reports.size(); ++i) text += csv_row(reports[i]) + "\n";
            }
            write_output(reproduce_output, text, out);
            return kSuccess;
        }

        RunRequest req;
        CLI::App* sub = app.get_subcommands().front();
        req.process = sub->get_name();
        if (sub == ou) {
            req.params = {{"kappa", kappa}, {"alpha", alpha}};
            if (ou_s2->count()) req.params.push_back({"sigma2", sigma2});
            else if (ou_s->count()) req.params.push_back({"sigma", sigma});
            else fail(ErrorKind::InvalidArgument, "ou: one of --sigma or --sigma2 is required");
            req.params.push_back({"x0", x0});
        } else if (sub == ou_td) {
            req.params = {{"kappa", kappa_text}, {"alpha", alpha_text}, {"sigma", sigma_text},
                          {"x0", x0}};
        } else if (sub == growth) {
            req.params = {{"alpha", alpha}, {"beta", beta}, {"sigma", sigma}, {"x0", x0}};
        } else if (sub == gbm) {
            req.params = {{"sigma", sigma}, {"rate", rate_text}, {"x0", x0}};
        }
        const bool positive_process = sub == growth || sub == gbm;
        req.lower_boundary = o.lower.value_or(positive_process ? "0" : "-inf");
        req.upper_boundary = o.upper.empty() ? "inf" : o.upper;
        req.horizon = o.horizon;
        req.n = o.n;
        req.paths = o.paths;
        req.seed = o.seed;
        req.series_terms = o.series_terms;
        req.series_tolerance = o.series_tolerance;
        req.envelope_samples = o.envelope_samples;
        req.chunk_size = o.chunk_size;
        req.antithetic = o.antithetic;

        const ReportFormat format = parse_report_format(o.format);
        const RunReport report = execute(req, threads);
        write_output(o.output, emit(report, format), out);
        return kSuccess;
    } catch (const Error& e) {
        err << "bcp: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "bcp: numeric failure: " << e.what() << "\n";
        return kNumericFailure;
    }
}

}  // namespace bcp::cli
