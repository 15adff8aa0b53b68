#include "subml/channel.hpp"

#include "subml/error.hpp"

#include <cmath>
#include <numbers>

namespace subml {

std::string to_string(ChannelMode m) { return m == ChannelMode::Identity ? "identity" : "rayleigh"; }

ChannelRealization ChannelRealization::identity(std::size_t n) {
    if (n == 0) throw InvalidArgument("channel needs at least one antenna");
    ChannelRealization h;
    h.mode_ = ChannelMode::Identity;
    h.nr_ = h.nt_ = n;
    h.h_.assign(n * n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) h.h_[i * n + i] = 1.0;
    return h;
}

ChannelRealization ChannelRealization::rayleigh(std::size_t nr, std::size_t nt, RandomStream& rng) {
    if (nr == 0 || nt == 0) throw InvalidArgument("channel needs at least one antenna");
    ChannelRealization h;
    h.mode_ = ChannelMode::Rayleigh;
    h.nr_ = nr;
    h.nt_ = nt;
    h.h_.resize(nr * nt);
    const double s = std::numbers::sqrt2 / 2.0;
    for (auto& e : h.h_) {
        const double re = rng.normal();
        const double im = rng.normal();
        e = cplx(s * re, s * im);
    }
    return h;
}

void ChannelRealization::apply(std::span<const cplx> x, std::span<cplx> out) const {
    if (x.size() != nt_ || out.size() != nr_)
        throw DimensionMismatch("channel is " + std::to_string(nr_) + "x" + std::to_string(nt_) +
                                ", got x of length " + std::to_string(x.size()) +
                                " and y of length " + std::to_string(out.size()));
    if (mode_ == ChannelMode::Identity) {
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }
    for (std::size_t r = 0; r < nr_; ++r) {
        cplx acc(0.0, 0.0);
        for (std::size_t t = 0; t < nt_; ++t) acc += h_[r * nt_ + t] * x[t];
        out[r] = acc;
    }
}

std::vector<cplx> ChannelRealization::apply(std::span<const cplx> x) const {
    std::vector<cplx> out(nr_);
    apply(x, out);
    return out;
}

std::size_t draw_symbol(const VectorConstellation& v, const SeedPolicy& seed, std::uint64_t trial) {
    auto rng = seed.stream(trial, StreamRole::Symbols);
    return static_cast<std::size_t>(rng.uniform_index(v.cardinality()));
}

std::vector<std::size_t> draw_symbols(const VectorConstellation& v, std::size_t n,
                                      const SeedPolicy& seed) {
    if (n == 0) throw InvalidArgument("draw_symbols needs n >= 1");
    std::vector<std::size_t> out(n);
    for (std::size_t t = 0; t < n; ++t) out[t] = draw_symbol(v, seed, t);
    return out;
}

ChannelRealization draw_channel(ChannelMode mode, std::size_t nr, std::size_t nt,
                                const SeedPolicy& seed, std::uint64_t trial) {
    if (mode == ChannelMode::Identity) {
        if (nr != nt) throw DimensionMismatch("identity channel requires Nr == Nt");
        return ChannelRealization::identity(nr);
    }
    auto rng = seed.stream(trial, StreamRole::Channel);
    return ChannelRealization::rayleigh(nr, nt, rng);
}

void transmit(std::span<const cplx> x, const ChannelRealization& h, double n0,
              const SeedPolicy& seed, std::uint64_t trial, std::span<cplx> y) {
    if (!(n0 >= 0.0)) throw InvalidArgument("N0 must be non-negative");
    h.apply(x, y);
    auto rng = seed.stream(trial, StreamRole::Noise);
    const double s = std::sqrt(n0 / 2.0);
    for (auto& v : y) {
        const double re = rng.normal();
        const double im = rng.normal();
        v += cplx(s * re, s * im);
    }
}

std::vector<cplx> transmit(std::span<const cplx> x, const ChannelRealization& h, double n0,
                           const SeedPolicy& seed, std::uint64_t trial) {
    std::vector<cplx> y(h.nr());
    transmit(x, h, n0, seed, trial, y);
    return y;
}

} // namespace subml
