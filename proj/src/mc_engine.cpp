#include "bcp/mc_engine.hpp"

#include "bcp/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace bcp {

namespace {

// Welford accumulator with Chan's pairwise merge.
struct Moments {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v) noexcept {
        ++count;
        const double d = v - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (v - mean);
    }

    static Moments merge(const Moments& a, const Moments& b) noexcept {
        if (a.count == 0) return b;
        if (b.count == 0) return a;
        Moments r;
        r.count = a.count + b.count;
        const double na = static_cast<double>(a.count);
        const double nb = static_cast<double>(b.count);
        const double n = static_cast<double>(r.count);
        const double d = b.mean - a.mean;
        r.mean = a.mean + d * nb / n;
        r.m2 = a.m2 + b.m2 + d * d * na * nb / n;
        return r;
    }

    double std_error() const noexcept {
        if (count < 2) return 0.0;
        const double n = static_cast<double>(count);
        return std::sqrt(m2 / (n - 1.0)) / std::sqrt(n);
    }
};

struct ChunkResult {
    Moments first;
    Moments second;
    bool cap_hit = false;
};

// Merge chunk results in a fixed binary tree so the outcome is independent of
// the worker count.
ChunkResult reduce(std::span<const ChunkResult> parts) {
    if (parts.size() == 1) return parts[0];
    const std::size_t half = parts.size() / 2;
    const ChunkResult a = reduce(parts.first(half));
    const ChunkResult b = reduce(parts.subspan(half));
    return {Moments::merge(a.first, b.first), Moments::merge(a.second, b.second),
            a.cap_hit || b.cap_hit};
}

unsigned worker_count(unsigned requested, std::size_t chunks) {
    unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, chunks));
}

template <typename ChunkFn>
std::vector<ChunkResult> run_chunks(const McConfig& cfg, ChunkFn&& fn) {
    const std::size_t chunks = (cfg.paths + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<ChunkResult> results(chunks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        try {
            for (std::size_t k = next++; k < chunks; k = next++) {
                const std::size_t begin = k * cfg.chunk_size;
                const std::size_t end = std::min(cfg.paths, begin + cfg.chunk_size);
                results[k] = fn(k, end - begin);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };

    const unsigned lanes = worker_count(cfg.threads, chunks);
    if (lanes <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(lanes);
        for (unsigned i = 0; i < lanes; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return results;
}

std::vector<double> root_gaps(const Partition& p) {
    std::vector<double> r(p.intervals());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::sqrt(p.gap(i + 1));
    return r;
}

void fill_path(std::span<const double> root_dt, PhiloxStream& stream, std::span<double> out) {
    double w = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        w += stream.next_normal() * root_dt[i];
        out[i] = w;
    }
}

// Runs one or two compiled bands over shared samples.
ChunkResult simulate_chunk(const Partition& p, const CompiledBand& first,
                           const CompiledBand* second, const McConfig& cfg, std::size_t chunk,
                           std::size_t count) {
    PhiloxStream stream(cfg.seed, chunk);
    const std::size_t n = p.intervals();
    const auto root_dt = root_gaps(p);
    std::vector<double> x(n);
    std::vector<double> mirrored(cfg.antithetic ? n : 0);
    SeriesDiagnostics diag;
    ChunkResult out;
    for (std::size_t path = 0; path < count; ++path) {
        fill_path(root_dt, stream, x);
        double g1 = first(x, &diag);
        double g2 = second ? (*second)(x, &diag) : 0.0;
        if (cfg.antithetic) {
            std::transform(x.begin(), x.end(), mirrored.begin(), [](double v) { return -v; });
            g1 = 0.5 * (g1 + first(mirrored, &diag));
            if (second) g2 = 0.5 * (g2 + (*second)(mirrored, &diag));
        }
        out.first.add(g1);
        if (second) out.second.add(g2);
    }
    out.cap_hit = diag.cap_hit;
    return out;
}

}  // namespace

void McConfig::validate() const {
    require(paths >= 1, ErrorKind::InvalidArgument, "path count must be at least 1");
    require(chunk_size >= 1, ErrorKind::InvalidArgument, "chunk size must be at least 1");
    series.validate();
}

void sample_nodes(const Partition& p, PhiloxStream& stream, std::span<double> out) {
    const std::size_t n = p.intervals();
    require(out.size() == n, ErrorKind::InvalidArgument, "sample buffer size mismatch");
    fill_path(root_gaps(p), stream, out);
}

std::vector<double> sample_nodes(const Partition& p, PhiloxStream& stream) {
    std::vector<double> x(p.intervals());
    sample_nodes(p, stream, x);
    return x;
}

BcpEstimate estimate_bcp(const PiecewiseLinearBand& band, const McConfig& cfg) {
    cfg.validate();
    const CompiledBand compiled(band, cfg.series);
    const auto& p = band.partition();
    const auto parts = run_chunks(cfg, [&](std::size_t k, std::size_t count) {
        return simulate_chunk(p, compiled, nullptr, cfg, k, count);
    });
    const ChunkResult total = reduce(parts);
    BcpEstimate est;
    est.mean = total.first.mean;
    est.std_error = total.first.std_error();
    est.paths = total.first.count;
    est.series_cap_hit = total.cap_hit;
    return est;
}

BcpEstimate estimate_bracket(const PiecewiseLinearBand& inner, const PiecewiseLinearBand& outer,
                             const McConfig& cfg) {
    cfg.validate();
    require(inner.partition() == outer.partition(), ErrorKind::InvalidBoundaries,
            "inner and outer bands must share one partition");
    const CompiledBand ci(inner, cfg.series);
    const CompiledBand co(outer, cfg.series);
    const auto& p = inner.partition();
    const auto parts = run_chunks(cfg, [&](std::size_t k, std::size_t count) {
        return simulate_chunk(p, ci, &co, cfg, k, count);
    });
    const ChunkResult total = reduce(parts);
    Bracket br{total.first.mean, total.second.mean, total.first.std_error(),
               total.second.std_error()};
    BcpEstimate est;
    est.mean = 0.5 * (br.lower + br.upper);
    est.std_error = br.upper_std_error;
    est.paths = total.first.count;
    est.bracket = br;
    est.series_cap_hit = total.cap_hit;
    return est;
}

BracketBands bracket_bands(const GeneralBoundary& lower, const GeneralBoundary& upper,
                           const Partition& p, std::size_t samples_per_interval) {
    require(lower.side() == BoundarySide::Lower && upper.side() == BoundarySide::Upper,
            ErrorKind::InvalidBoundaries, "expected a lower and an upper boundary");
    require(lower.is_finite() || upper.is_finite(), ErrorKind::InvalidBoundaries,
            "both boundaries are infinite; the crossing probability is trivially 1");
    auto lo = envelopes(lower, p, samples_per_interval);
    auto up = envelopes(upper, p, samples_per_interval);
    try {
        return {PiecewiseLinearBand(std::move(lo.inner), std::move(up.inner)),
                PiecewiseLinearBand(std::move(lo.outer), std::move(up.outer))};
    } catch (const Error& e) {
        fail(ErrorKind::InvalidBoundaries,
             std::string("envelope band is invalid (refine the partition?): ") + e.what());
    }
}

BcpEstimate estimate_bcp_bracketed(const GeneralBoundary& lower, const GeneralBoundary& upper,
                                   const Partition& p, std::size_t samples_per_interval,
                                   const McConfig& cfg) {
    const auto bands = bracket_bands(lower, upper, p, samples_per_interval);
    return estimate_bracket(bands.inner, bands.outer, cfg);
}

}  // namespace bcp
