#pragma once

#include "subml/channel.hpp"
#include "subml/constellation.hpp"
#include "subml/error.hpp"
#include "subml/rng.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace subml {

struct SearchOutcome {
    std::size_t decided_index = 0;
    std::size_t cf_evals = 0;
    bool hit = false; // accepted through the threshold rather than by full argmin
    double decided_distance = 0.0;
};

// d_i = |y - s_i| in constellation order.
std::vector<double> distances(cplx y, const Constellation& c);
// d_i = ||y - H x_i|| in candidate order. Throws DimensionMismatch.
std::vector<double> distances(std::span<const cplx> y, const VectorConstellation& v,
                              const ChannelRealization& h);

/// Lazily evaluated cost function ||y - H x_i|| over a vector constellation.
/// For the identity channel H x_i is the candidate itself.
class CandidateMetric {
public:
    CandidateMetric(const VectorConstellation& v, const ChannelRealization& h,
                    std::span<const cplx> y);

    std::size_t size() const noexcept { return v_.cardinality(); }
    double operator()(std::size_t i) const;

private:
    const VectorConstellation& v_;
    const ChannelRealization& h_;
    std::span<const cplx> y_;
};

// Full search: first index attaining the minimum, cf_evals = n, hit = false.
template <class DistanceFn>
SearchOutcome ml_exhaustive(std::size_t n, DistanceFn&& dist) {
    if (n == 0) throw EmptyInput("ml_exhaustive on an empty search space");
    SearchOutcome out;
    out.decided_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = dist(i);
        if (d < out.decided_distance) {
            out.decided_distance = d;
            out.decided_index = i;
        }
    }
    out.cf_evals = n;
    return out;
}

SearchOutcome ml_exhaustive(std::span<const double> dists);

/// Linear scan that accepts the first candidate with d_i <= beta.
///
/// Distances past the accepted one are never evaluated. If no candidate
/// qualifies the scan has seen every distance and returns the argmin with
/// cf_evals = n and hit = false.
template <class DistanceFn>
SearchOutcome early_exit(std::size_t n, DistanceFn&& dist, double beta) {
    if (n == 0) throw EmptyInput("early_exit on an empty search space");
    if (!(beta >= 0.0)) throw InvalidArgument("beta must be non-negative");
    SearchOutcome best;
    best.decided_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = dist(i);
        if (d <= beta) return {i, i + 1, true, d};
        if (d < best.decided_distance) {
            best.decided_distance = d;
            best.decided_index = i;
        }
    }
    best.cf_evals = n;
    return best;
}

SearchOutcome early_exit(std::span<const double> dists, double beta);

/// Randomized shifted-boundary detector on one real axis.
///
/// Each level owns the points within beta of it on the side facing each
/// neighbour; between two adjacent levels, a received value claimed by
/// exactly one of them goes to that level and a value claimed by both or by
/// neither is decided by a fair coin. Values outside the outermost levels go
/// to the nearest outer level. Returns the level index.
std::size_t null_region_1d(double y, std::span<const double> levels, double beta,
                           RandomStream& rng);

// null_region_1d applied independently to the I and Q axes (real axis only
// for BPSK/PAM). Returns the constellation point index.
std::size_t null_region_detect(cplx y, const Constellation& c, double beta, RandomStream& rng);

} // namespace subml
