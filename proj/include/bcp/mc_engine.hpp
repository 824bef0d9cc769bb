#pragma once

#include "bcp/boundary.hpp"
#include "bcp/kernel.hpp"
#include "bcp/philox.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bcp {

struct McConfig {
    std::size_t paths = 1'000'000;
    std::uint64_t seed = 0;
    /// Paths per chunk; chunk k draws from the stream keyed by (seed, k).
    std::size_t chunk_size = 4096;
    SeriesConfig series{};
    /// Each sample averages the kernel over x and -x.
    bool antithetic = false;
    /// Worker lanes, 0 = hardware concurrency. Results do not depend on it.
    unsigned threads = 0;

    void validate() const;
};

struct Bracket {
    double lower = 0.0;
    double upper = 0.0;
    double lower_std_error = 0.0;
    double upper_std_error = 0.0;

    double width() const noexcept { return upper - lower; }
};

struct BcpEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t paths = 0;
    std::optional<Bracket> bracket;
    bool series_cap_hit = false;
};

/// Brownian motion at the partition nodes: x_i = sum_{k<=i} z_k sqrt(dt_k).
void sample_nodes(const Partition& p, PhiloxStream& stream, std::span<double> out);
std::vector<double> sample_nodes(const Partition& p, PhiloxStream& stream);

/// Plain Monte Carlo average of the crossing kernel over `paths` samples.
BcpEstimate estimate_bcp(const PiecewiseLinearBand& band, const McConfig& cfg);

/// Both bands evaluated on the same node samples. `mean` is the midpoint and
/// `std_error` the outer band's standard error.
BcpEstimate estimate_bracket(const PiecewiseLinearBand& inner, const PiecewiseLinearBand& outer,
                             const McConfig& cfg);

struct BracketBands {
    PiecewiseLinearBand inner;
    PiecewiseLinearBand outer;
};

/// Inner (narrowed) and outer (widened) bands from the boundary envelopes.
BracketBands bracket_bands(const GeneralBoundary& lower, const GeneralBoundary& upper,
                           const Partition& p, std::size_t samples_per_interval);

/// Envelope both boundaries and estimate the bracket with common random numbers.
BcpEstimate estimate_bcp_bracketed(const GeneralBoundary& lower, const GeneralBoundary& upper,
                                   const Partition& p, std::size_t samples_per_interval,
                                   const McConfig& cfg);

}  // namespace bcp
