#include "subml/constellation.hpp"

#include "subml/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace subml {

namespace {

std::uint32_t gray(std::uint32_t i) { return i ^ (i >> 1); }

unsigned log2_exact(unsigned m) {
    unsigned k = 0;
    while ((1u << k) < m) ++k;
    return k;
}

// Equally spaced levels -(L-1), ..., +(L-1) before normalization.
std::vector<double> raw_levels(unsigned count) {
    std::vector<double> lv(count);
    for (unsigned i = 0; i < count; ++i)
        lv[i] = 2.0 * i - (count - 1.0);
    return lv;
}

} // namespace

std::string to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::BPSK: return "bpsk";
    case Scheme::PAM: return "pam";
    case Scheme::QAM: return "qam";
    }
    return "?";
}

Constellation build_constellation(Scheme scheme, unsigned order) {
    Constellation c;
    c.scheme_ = scheme;
    c.order_ = order;

    switch (scheme) {
    case Scheme::BPSK:
        if (order != 2)
            throw UnsupportedOrder("BPSK requires M = 2, got " + std::to_string(order));
        c.axis_levels_ = {-1.0, 1.0};
        c.points_ = {cplx(-1.0, 0.0), cplx(1.0, 0.0)};
        c.labels_ = {0u, 1u};
        break;
    case Scheme::PAM: {
        if (order != 2 && order != 4 && order != 8 && order != 16)
            throw UnsupportedOrder("PAM order must be one of 2, 4, 8, 16, got " +
                                   std::to_string(order));
        auto lv = raw_levels(order);
        const double scale = std::sqrt((order * double(order) - 1.0) / 3.0);
        for (auto& l : lv) l /= scale;
        c.axis_levels_ = lv;
        for (unsigned i = 0; i < order; ++i) {
            c.points_.emplace_back(lv[i], 0.0);
            c.labels_.push_back(gray(i));
        }
        break;
    }
    case Scheme::QAM: {
        if (order != 4 && order != 16 && order != 64 && order != 256)
            throw UnsupportedOrder("QAM order must be one of 4, 16, 64, 256, got " +
                                   std::to_string(order));
        const auto side = static_cast<unsigned>(std::lround(std::sqrt(double(order))));
        const unsigned half_bits = log2_exact(side);
        auto lv = raw_levels(side);
        const double scale = std::sqrt(2.0 * (order - 1.0) / 3.0);
        for (auto& l : lv) l /= scale;
        c.axis_levels_ = lv;
        for (unsigned i = 0; i < side; ++i) {
            for (unsigned q = 0; q < side; ++q) {
                c.points_.emplace_back(lv[i], lv[q]);
                c.labels_.push_back((gray(i) << half_bits) | gray(q));
            }
        }
        break;
    }
    }
    c.bits_ = log2_exact(order);
    c.finish();
    return c;
}

void Constellation::finish() {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = i + 1; j < points_.size(); ++j)
            best = std::min(best, std::abs(points_[i] - points_[j]));
    d_min_ = best;
}

Constellation Constellation::scaled(double c) const {
    if (!(c > 0.0))
        throw InvalidArgument("scale factor must be positive");
    Constellation out = *this;
    for (auto& p : out.points_) p *= c;
    for (auto& l : out.axis_levels_) l *= c;
    out.finish();
    return out;
}

std::vector<unsigned> nearest_neighbor_counts(const Constellation& c, double tol) {
    const auto pts = c.points();
    std::vector<unsigned> counts(pts.size(), 0);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j && std::abs(std::abs(pts[i] - pts[j]) - c.d_min()) <= tol)
                ++counts[i];
    return counts;
}

VectorConstellation::VectorConstellation(std::vector<Constellation> per_antenna)
    : antennas_(std::move(per_antenna)) {
    if (antennas_.empty())
        throw InvalidArgument("vector constellation needs at least one antenna");

    cardinality_ = 1;
    d_min_ = std::numeric_limits<double>::infinity();
    for (const auto& a : antennas_) {
        if (cardinality_ > kMaxCardinality / a.order())
            throw CapExceeded("vector constellation cardinality exceeds " +
                              std::to_string(kMaxCardinality));
        cardinality_ *= a.order();
        bits_ += a.bits_per_symbol();
        d_min_ = std::min(d_min_, a.d_min());
    }
    if (bits_ > 64)
        throw CapExceeded("vector labels wider than 64 bits");

    const std::size_t nt = antennas_.size();
    points_.resize(cardinality_ * nt);
    labels_.resize(cardinality_);
    for (std::size_t k = 0; k < cardinality_; ++k) {
        std::size_t rem = k;
        std::uint64_t lab = 0;
        unsigned shift = 0;
        // Least significant antenna last.
        for (std::size_t a = nt; a-- > 0;) {
            const auto m = antennas_[a].order();
            const std::size_t idx = rem % m;
            rem /= m;
            points_[k * nt + a] = antennas_[a].point(idx);
            lab |= std::uint64_t{antennas_[a].label(idx)} << shift;
            shift += antennas_[a].bits_per_symbol();
        }
        labels_[k] = lab;
    }
}

VectorConstellation VectorConstellation::uniform(const Constellation& c, std::size_t num_antennas) {
    return VectorConstellation(std::vector<Constellation>(num_antennas, c));
}

std::vector<unsigned> VectorConstellation::orders() const {
    std::vector<unsigned> out;
    for (const auto& a : antennas_) out.push_back(a.order());
    return out;
}

std::span<const cplx> VectorConstellation::point(std::size_t k) const {
    if (k >= cardinality_)
        throw InvalidArgument("candidate index out of range");
    const std::size_t nt = antennas_.size();
    return std::span<const cplx>(points_).subspan(k * nt, nt);
}

std::vector<std::size_t> VectorConstellation::symbol_indices(std::size_t k) const {
    if (k >= cardinality_)
        throw InvalidArgument("candidate index out of range");
    std::vector<std::size_t> out(antennas_.size());
    for (std::size_t a = antennas_.size(); a-- > 0;) {
        out[a] = k % antennas_[a].order();
        k /= antennas_[a].order();
    }
    return out;
}

std::uint64_t VectorConstellation::label(std::size_t k) const { return labels_.at(k); }

namespace {

double squared_distance(std::span<const cplx> a, std::span<const cplx> b) {
    double s = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) s += std::norm(a[n] - b[n]);
    return s;
}

void check_cap(const VectorConstellation& v, std::size_t cap) {
    if (v.cardinality() > cap)
        throw CapExceeded("pair scan over " + std::to_string(v.cardinality()) +
                          " candidates exceeds cap " + std::to_string(cap));
}

} // namespace

std::vector<PairDistance> pairwise_distances(const VectorConstellation& v, std::size_t cap) {
    check_cap(v, cap);
    const std::size_t k = v.cardinality();
    std::vector<PairDistance> out;
    out.reserve(k * (k - 1));
    for (std::size_t i = 0; i < k; ++i) {
        const auto xi = v.point(i);
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            out.push_back({i, j, std::sqrt(squared_distance(xi, v.point(j)))});
        }
    }
    return out;
}

std::vector<DistanceCount> distance_spectrum(const VectorConstellation& v, std::size_t cap) {
    check_cap(v, cap);
    // Keyed by squared distance; neighbouring keys within a relative 1e-9 are
    // the same lattice distance up to rounding.
    std::map<double, std::uint64_t> bins;
    const std::size_t k = v.cardinality();
    for (std::size_t i = 0; i < k; ++i) {
        const auto xi = v.point(i);
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            const double d2 = squared_distance(xi, v.point(j));
            const double tol = 1e-9 * d2;
            auto it = bins.lower_bound(d2 - tol);
            if (it != bins.end() && it->first <= d2 + tol)
                ++it->second;
            else
                bins.emplace(d2, 1);
        }
    }
    std::vector<DistanceCount> out;
    out.reserve(bins.size());
    for (const auto& [d2, n] : bins) out.push_back({std::sqrt(d2), n});
    return out;
}

} // namespace subml
