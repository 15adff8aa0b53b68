#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace subml {

using cplx = std::complex<double>;

enum class Scheme { BPSK, PAM, QAM };

std::string to_string(Scheme scheme);

/// Unit-average-energy signal constellation with Gray bit labels.
///
/// Point order is fixed: PAM/BPSK levels ascend, QAM points are row-major over
/// the (I, Q) level indices, i.e. index = i_level * sqrt(M) + q_level. This
/// order is also the scan order of the early-exit search.
class Constellation {
public:
    Scheme scheme() const noexcept { return scheme_; }
    unsigned order() const noexcept { return order_; }
    unsigned bits_per_symbol() const noexcept { return bits_; }
    double d_min() const noexcept { return d_min_; }

    std::span<const cplx> points() const noexcept { return points_; }
    std::span<const std::uint32_t> labels() const noexcept { return labels_; }
    const cplx& point(std::size_t i) const { return points_.at(i); }
    std::uint32_t label(std::size_t i) const { return labels_.at(i); }

    // Real-axis levels (for QAM, the per-axis levels shared by I and Q).
    std::span<const double> axis_levels() const noexcept { return axis_levels_; }

    // Copy with every point multiplied by c > 0. Labels are kept; d_min is
    // rescanned.
    Constellation scaled(double c) const;

    friend Constellation build_constellation(Scheme scheme, unsigned order);

private:
    Constellation() = default;
    void finish();

    Scheme scheme_ = Scheme::BPSK;
    unsigned order_ = 0;
    unsigned bits_ = 0;
    double d_min_ = 0.0;
    std::vector<cplx> points_;
    std::vector<std::uint32_t> labels_;
    std::vector<double> axis_levels_;
};

// BPSK needs order 2; PAM {2,4,8,16}; QAM {4,16,64,256}. Throws UnsupportedOrder.
Constellation build_constellation(Scheme scheme, unsigned order);

// Number of points at distance d_min (within tol) of each point.
std::vector<unsigned> nearest_neighbor_counts(const Constellation& c, double tol = 1e-9);

/// Cartesian product of per-antenna constellations.
///
/// Candidate k decomposes lexicographically into antenna symbol indices with
/// antenna 0 most significant. Candidate points are precomputed.
class VectorConstellation {
public:
    static constexpr std::size_t kMaxCardinality = std::size_t{1} << 20;

    explicit VectorConstellation(std::vector<Constellation> per_antenna);
    static VectorConstellation uniform(const Constellation& c, std::size_t num_antennas);

    std::size_t num_antennas() const noexcept { return antennas_.size(); }
    std::size_t cardinality() const noexcept { return cardinality_; }
    const Constellation& antenna(std::size_t i) const { return antennas_.at(i); }
    std::vector<unsigned> orders() const;
    unsigned bits_per_vector() const noexcept { return bits_; }

    // Minimum distance of the product lattice: the smallest per-antenna d_min.
    double d_min() const noexcept { return d_min_; }

    std::span<const cplx> point(std::size_t k) const;
    std::vector<std::size_t> symbol_indices(std::size_t k) const;
    std::uint64_t label(std::size_t k) const;

private:
    std::vector<Constellation> antennas_;
    std::size_t cardinality_ = 0;
    unsigned bits_ = 0;
    double d_min_ = 0.0;
    std::vector<cplx> points_;           // cardinality x num_antennas, row-major
    std::vector<std::uint64_t> labels_;
};

struct PairDistance {
    std::size_t i;
    std::size_t j;
    double distance;
};

inline constexpr std::size_t kDefaultPairCap = 4096;

// All ordered pairs (i, j), i != j, with |x_i - x_j|. Row-major over i then j.
// Throws CapExceeded when cardinality > cap.
std::vector<PairDistance> pairwise_distances(const VectorConstellation& v,
                                             std::size_t cap = kDefaultPairCap);

// Distinct ordered-pair distances with multiplicities, ascending.
struct DistanceCount {
    double distance;
    std::uint64_t count;
};

std::vector<DistanceCount> distance_spectrum(const VectorConstellation& v,
                                             std::size_t cap = kDefaultPairCap);

} // namespace subml
