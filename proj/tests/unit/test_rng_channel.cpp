#include "subml/channel.hpp"
#include "subml/error.hpp"
#include "subml/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace subml;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
          Philox4x32Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                        {0xffffffff, 0xffffffff}) ==
          Philox4x32Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                        {0xa4093822, 0x299f31d0}) ==
          Philox4x32Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and separated by trial and role") {
    RandomStream a(42, 7, StreamRole::Noise), b(42, 7, StreamRole::Noise);
    RandomStream c(42, 8, StreamRole::Noise), d(42, 7, StreamRole::Symbols);
    RandomStream e(43, 7, StreamRole::Noise);
    bool differs_c = false, differs_d = false, differs_e = false;
    for (int i = 0; i < 64; ++i) {
        const auto x = a.next_u32();
        CHECK(x == b.next_u32());
        differs_c |= x != c.next_u32();
        differs_d |= x != d.next_u32();
        differs_e |= x != e.next_u32();
    }
    CHECK(differs_c);
    CHECK(differs_d);
    CHECK(differs_e);
}

TEST_CASE("uniform draws stay inside (0, 1)") {
    RandomStream s(1, 0, StreamRole::Detector);
    double sum = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
}

TEST_CASE("uniform_index is bounded") {
    RandomStream s(3, 0, StreamRole::Symbols);
    for (std::uint64_t n : {1ull, 2ull, 3ull, 7ull, 256ull, 1000003ull})
        for (int i = 0; i < 1000; ++i) CHECK(s.uniform_index(n) < n);
    CHECK_THROWS_AS(s.uniform_index(0), InvalidArgument);
}

TEST_CASE("standard normals have unit variance") {
    RandomStream s(5, 0, StreamRole::Noise);
    const int n = 1000000;
    double m = 0, v = 0;
    for (int i = 0; i < n; ++i) {
        const double x = s.normal();
        m += x;
        v += x * x;
    }
    m /= n;
    v = v / n - m * m;
    CHECK(std::abs(m) < 4 / std::sqrt(double(n)));
    CHECK(std::abs(v - 1) < 4 * std::sqrt(2.0 / n));
}

TEST_CASE("draw_symbols is uniform over 256 candidates (chi-square, alpha = 0.001)") {
    const auto v = VectorConstellation::uniform(build_constellation(Scheme::QAM, 16), 2);
    const std::size_t n = 1000000;
    const auto idx = draw_symbols(v, n, SeedPolicy{2024});
    std::vector<double> counts(256, 0.0);
    for (auto i : idx) counts.at(i) += 1;
    const double expect = double(n) / 256;
    double chi2 = 0;
    for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
    // Upper 0.001 quantile of chi-square with 255 degrees of freedom.
    CHECK(chi2 < 330.51974363400586);
}

TEST_CASE("draw_symbols is reproducible and rejects n = 0") {
    const auto v = VectorConstellation::uniform(build_constellation(Scheme::QAM, 4), 1);
    CHECK(draw_symbols(v, 100, SeedPolicy{9}) == draw_symbols(v, 100, SeedPolicy{9}));
    CHECK(draw_symbols(v, 100, SeedPolicy{9}) != draw_symbols(v, 100, SeedPolicy{10}));
    CHECK_THROWS_AS(draw_symbols(v, 0, SeedPolicy{9}), InvalidArgument);
    const auto all = draw_symbols(v, 50, SeedPolicy{9});
    for (std::size_t t = 0; t < all.size(); ++t) CHECK(draw_symbol(v, SeedPolicy{9}, t) == all[t]);
}

TEST_CASE("noiseless transmit returns Hx") {
    const std::vector<cplx> x = {{0.3, -0.1}, {-0.2, 0.4}};
    const auto id = ChannelRealization::identity(2);
    CHECK(transmit(x, id, 0.0, SeedPolicy{1}, 0) == x);
    RandomStream rs(1, 0, StreamRole::Channel);
    const auto h = ChannelRealization::rayleigh(3, 2, rs);
    const auto hx = h.apply(x);
    const auto y = transmit(x, h, 0.0, SeedPolicy{1}, 0);
    REQUIRE(y.size() == 3);
    for (std::size_t r = 0; r < 3; ++r) CHECK(std::abs(y[r] - hx[r]) == 0.0);
}

TEST_CASE("noise has total variance N0 split evenly between the axes") {
    const double n0 = 0.37;
    const std::vector<cplx> x = {{0.5, 0.5}};
    const auto h = ChannelRealization::identity(1);
    const int n = 1000000;
    double sr = 0, si = 0, srr = 0, sii = 0, sri = 0;
    for (int t = 0; t < n; ++t) {
        const auto y = transmit(x, h, n0, SeedPolicy{77}, t);
        const cplx w = y[0] - x[0];
        sr += w.real();
        si += w.imag();
        srr += w.real() * w.real();
        sii += w.imag() * w.imag();
        sri += w.real() * w.imag();
    }
    const double vr = srr / n, vi = sii / n;
    CHECK(std::abs((vr + vi) / n0 - 1.0) < 0.01);
    // Per-axis variance N0/2 and zero correlation within 4 sigma.
    const double sd_var = (n0 / 2) * std::sqrt(2.0 / n);
    CHECK(std::abs(vr - n0 / 2) < 4 * sd_var);
    CHECK(std::abs(vi - n0 / 2) < 4 * sd_var);
    CHECK(std::abs(sri / n) < 4 * (n0 / 2) / std::sqrt(double(n)));
    // Mean of y is the sent point.
    CHECK(std::abs(sr / n) < 4 * std::sqrt(n0 / 2 / n));
    CHECK(std::abs(si / n) < 4 * std::sqrt(n0 / 2 / n));
}

TEST_CASE("noise shape is shared across SNRs for the same trial") {
    const std::vector<cplx> x = {{0.0, 0.0}};
    const auto h = ChannelRealization::identity(1);
    const auto y1 = transmit(x, h, 0.1, SeedPolicy{5}, 11);
    const auto y2 = transmit(x, h, 0.4, SeedPolicy{5}, 11);
    CHECK(y2[0].real() == doctest::Approx(2 * y1[0].real()));
    CHECK(y2[0].imag() == doctest::Approx(2 * y1[0].imag()));
}

TEST_CASE("Rayleigh entries have unit mean power") {
    double s = 0;
    const int n = 250000;
    for (int t = 0; t < n; ++t) {
        const auto h = draw_channel(ChannelMode::Rayleigh, 2, 2, SeedPolicy{3}, t);
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c) s += std::norm(h.at(r, c));
    }
    CHECK(std::abs(s / (4.0 * n) - 1.0) < 0.01);
}

TEST_CASE("channel shapes") {
    const auto id = ChannelRealization::identity(3);
    CHECK(id.mode() == ChannelMode::Identity);
    CHECK(id.at(1, 1) == cplx(1, 0));
    CHECK(id.at(0, 2) == cplx(0, 0));
    CHECK_THROWS_AS(draw_channel(ChannelMode::Identity, 2, 3, SeedPolicy{1}, 0), DimensionMismatch);
    const std::vector<cplx> x(2);
    std::vector<cplx> y(2);
    CHECK_THROWS_AS(transmit(x, id, 0.1, SeedPolicy{1}, 0, y), DimensionMismatch);
    CHECK_THROWS_AS(id.apply(x), DimensionMismatch);
    CHECK_THROWS_AS(ChannelRealization::identity(0), InvalidArgument);
    CHECK(n0_from_snr_db(10.0) == doctest::Approx(0.1));
    CHECK(n0_from_snr_db(0.0) == 1.0);
}
