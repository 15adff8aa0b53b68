#pragma once

#include "subml/constellation.hpp"
#include "subml/rng.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace subml {

enum class ChannelMode { Identity, Rayleigh };

std::string to_string(ChannelMode m);

// Noise convention recorded in every output header.
inline constexpr const char* kNoiseConvention =
    "y=Hx+w; w circular complex Gaussian, E|w_r|^2=N0 per receive antenna (N0/2 per real axis); "
    "Es=1; N0=10^(-snr_db/10)";

/// Flat MIMO channel matrix, Nr x Nt, row-major.
class ChannelRealization {
public:
    // H = I (perfect equalization); square by construction.
    static ChannelRealization identity(std::size_t n);
    // i.i.d. CN(0, 1) entries drawn from the given stream.
    static ChannelRealization rayleigh(std::size_t nr, std::size_t nt, RandomStream& rng);

    ChannelMode mode() const noexcept { return mode_; }
    std::size_t nr() const noexcept { return nr_; }
    std::size_t nt() const noexcept { return nt_; }
    const cplx& at(std::size_t r, std::size_t t) const { return h_[r * nt_ + t]; }

    // out = H x; throws DimensionMismatch.
    void apply(std::span<const cplx> x, std::span<cplx> out) const;
    std::vector<cplx> apply(std::span<const cplx> x) const;

private:
    ChannelMode mode_ = ChannelMode::Identity;
    std::size_t nr_ = 0;
    std::size_t nt_ = 0;
    std::vector<cplx> h_;
};

inline double n0_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

// n i.i.d. uniform candidate indices; draw t comes from the Symbols substream
// of trial t. Throws InvalidArgument for n == 0.
std::vector<std::size_t> draw_symbols(const VectorConstellation& v, std::size_t n,
                                      const SeedPolicy& seed);

// Candidate index for one trial.
std::size_t draw_symbol(const VectorConstellation& v, const SeedPolicy& seed, std::uint64_t trial);

// Channel for one trial: identity, or Rayleigh from the Channel substream.
ChannelRealization draw_channel(ChannelMode mode, std::size_t nr, std::size_t nt,
                                const SeedPolicy& seed, std::uint64_t trial);

// y = H x + w with w from the Noise substream of `trial`. The standard
// normals do not depend on N0, so the same trial at different SNRs sees the
// same noise shape scaled by sqrt(N0/2). N0 = 0 gives y = H x.
void transmit(std::span<const cplx> x, const ChannelRealization& h, double n0,
              const SeedPolicy& seed, std::uint64_t trial, std::span<cplx> y);
std::vector<cplx> transmit(std::span<const cplx> x, const ChannelRealization& h, double n0,
                           const SeedPolicy& seed, std::uint64_t trial);

} // namespace subml
