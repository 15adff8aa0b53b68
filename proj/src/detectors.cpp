#include "subml/detectors.hpp"

#include <algorithm>
#include <cmath>

namespace subml {

std::vector<double> distances(cplx y, const Constellation& c) {
    std::vector<double> out;
    out.reserve(c.order());
    for (const auto& s : c.points()) out.push_back(std::abs(y - s));
    return out;
}

std::vector<double> distances(std::span<const cplx> y, const VectorConstellation& v,
                              const ChannelRealization& h) {
    CandidateMetric metric(v, h, y);
    std::vector<double> out(metric.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = metric(i);
    return out;
}

CandidateMetric::CandidateMetric(const VectorConstellation& v, const ChannelRealization& h,
                                 std::span<const cplx> y)
    : v_(v), h_(h), y_(y) {
    if (h.nt() != v.num_antennas() || h.nr() != y.size())
        throw DimensionMismatch("received vector, channel and constellation dimensions disagree");
}

double CandidateMetric::operator()(std::size_t i) const {
    const auto x = v_.point(i);
    double s = 0.0;
    if (h_.mode() == ChannelMode::Identity) {
        for (std::size_t r = 0; r < y_.size(); ++r) s += std::norm(y_[r] - x[r]);
        return std::sqrt(s);
    }
    for (std::size_t r = 0; r < y_.size(); ++r) {
        cplx hx(0.0, 0.0);
        for (std::size_t t = 0; t < x.size(); ++t) hx += h_.at(r, t) * x[t];
        s += std::norm(y_[r] - hx);
    }
    return std::sqrt(s);
}

SearchOutcome ml_exhaustive(std::span<const double> dists) {
    return ml_exhaustive(dists.size(), [&](std::size_t i) { return dists[i]; });
}

SearchOutcome early_exit(std::span<const double> dists, double beta) {
    return early_exit(dists.size(), [&](std::size_t i) { return dists[i]; }, beta);
}

std::size_t null_region_1d(double y, std::span<const double> levels, double beta,
                           RandomStream& rng) {
    if (levels.empty()) throw EmptyInput("null_region_1d needs at least one level");
    if (!(beta >= 0.0)) throw InvalidArgument("beta must be non-negative");
    if (levels.size() == 1 || y <= levels.front()) return 0;
    if (y >= levels.back()) return levels.size() - 1;

    const auto upper = std::upper_bound(levels.begin(), levels.end(), y);
    const std::size_t k = static_cast<std::size_t>(upper - levels.begin()) - 1;
    const bool low = y <= levels[k] + beta;
    const bool high = y >= levels[k + 1] - beta;
    if (low != high) return low ? k : k + 1;
    return rng.uniform() < 0.5 ? k : k + 1;
}

std::size_t null_region_detect(cplx y, const Constellation& c, double beta, RandomStream& rng) {
    const auto levels = c.axis_levels();
    const std::size_t i = null_region_1d(y.real(), levels, beta, rng);
    if (c.scheme() != Scheme::QAM) return i;
    const std::size_t q = null_region_1d(y.imag(), levels, beta, rng);
    return i * levels.size() + q;
}

} // namespace subml
