#include "subml/analytics.hpp"
#include "subml/harness.hpp"
#include "subml/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>

using namespace subml;

namespace {

LinkConfig qam16_2x2(std::uint64_t trials) {
    LinkConfig cfg;
    cfg.nt = cfg.nr = 2;
    cfg.trials = trials;
    cfg.snr_db = {0, 2, 4, 6, 8, 10, 12, 14};
    return cfg;
}

bool same(const ProportionEstimate& a, const ProportionEstimate& b) {
    return a.events == b.events && a.trials == b.trials && a.rate == b.rate &&
           a.ci_lo == b.ci_lo && a.ci_hi == b.ci_hi;
}

} // namespace

TEST_CASE("target rules") {
    CHECK(TargetRule::parse("pmin-factor:2.0").kind == TargetRule::Kind::FactorOfPmin);
    CHECK(TargetRule::parse("pmin-factor:2.0").value == 2.0);
    CHECK(TargetRule::parse("abs:1e-3").kind == TargetRule::Kind::Absolute);
    CHECK(TargetRule::parse("abs:1e-3").value == 1e-3);
    CHECK(TargetRule::parse("pmin-factor:2.0").str() == "pmin-factor:2");
    CHECK(TargetRule::parse("abs:0.001").str() == "abs:0.001");
    CHECK_THROWS_AS(TargetRule::parse("pmin-factor:0.5"), ConfigError);
    CHECK_THROWS_AS(TargetRule::parse("abs:0"), ConfigError);
    CHECK_THROWS_AS(TargetRule::parse("abs:1.5"), ConfigError);
    CHECK_THROWS_AS(TargetRule::parse("factor:2"), ConfigError);
    CHECK_THROWS_AS(TargetRule::parse("pmin-factor:x"), ConfigError);
    CHECK_THROWS_AS(TargetRule::parse("2.0"), ConfigError);
}

TEST_CASE("LinkConfig validation") {
    LinkConfig cfg;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument); // empty SNR grid
    cfg.snr_db = {10};
    CHECK_NOTHROW(cfg.validate());
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.trials = 10;
    cfg.nt = 2;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument); // identity needs Nt == Nr
    cfg.channel = ChannelMode::Rayleigh;
    CHECK_NOTHROW(cfg.validate());
    cfg.target = TargetRule::factor_of_pmin(0.9);
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("hit probabilities") {
    CHECK(hit_probability_closed_form(0.1, 0.0) == doctest::Approx(0.5));
    CHECK(hit_probability_closed_form(0.1, 0.3) > hit_probability_closed_form(0.1, 0.2));
    CHECK(hit_probability_closed_form(2.0, 0.5) ==
          doctest::Approx(1.0 - oracle::qfunc_quadrature(1.0)).epsilon(1e-12));
    CHECK(ml_hit_probability(16, 2) == 1.0 / 256);
    CHECK(ml_hit_probability(2, 1) == 0.5);
    CHECK(ml_hit_probability(64, 0) == 1.0);
}

TEST_CASE("Wilson interval") {
    CHECK(binomial_ci(0, 100).first == 0.0);
    CHECK(binomial_ci(100, 100).second == 1.0);
    CHECK(normal_quantile_two_sided(0.95) == doctest::Approx(1.959963984540054).epsilon(1e-12));

    const auto [lo, hi] = binomial_ci(50, 1000);
    // Direct formula.
    const double z = 1.959963984540054, n = 1000, p = 0.05;
    const double c = (p + z * z / (2 * n)) / (1 + z * z / n);
    const double h = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
    CHECK(lo == doctest::Approx(c - h).epsilon(1e-12));
    CHECK(hi == doctest::Approx(c + h).epsilon(1e-12));
    // Close to the exact interval, and containing the estimate.
    const auto cp = oracle::clopper_pearson(50, 1000);
    CHECK(std::abs(lo - cp.lo) < 3e-3);
    CHECK(std::abs(hi - cp.hi) < 3e-3);
    CHECK(lo < 0.05);
    CHECK(hi > 0.05);
    CHECK_THROWS_AS(binomial_ci(5, 4), InvalidArgument);
    CHECK_THROWS_AS(binomial_ci(0, 0), InvalidArgument);
}

TEST_CASE("thread resolution") {
    CHECK(resolve_threads(3) == 3);
    setenv("SUBML_THREADS", "2", 1);
    CHECK(resolve_threads(0) == 2);
    CHECK(resolve_threads(5) == 5);
    setenv("SUBML_THREADS", "zero", 1);
    CHECK(resolve_threads(0) >= 1);
    unsetenv("SUBML_THREADS");
    CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("factor 1 gives beta = d_min/2 and ML decisions") {
    auto cfg = qam16_2x2(20000);
    cfg.target = TargetRule::factor_of_pmin(1.0);
    for (const auto& p : run_ber_sweep(cfg)) {
        CHECK(p.beta == doctest::Approx(p.d_min / 2).epsilon(1e-15));
        REQUIRE(p.has_ml);
        CHECK(same(p.ser, p.ml_ser));
        CHECK(same(p.ber, p.ml_ber));
    }
    LinkConfig siso;
    siso.snr_db = {6, 10, 14};
    siso.trials = 20000;
    siso.target = TargetRule::factor_of_pmin(1.0);
    for (const auto& p : run_ber_sweep(siso)) {
        CHECK(p.beta == p.d_min / 2);
        CHECK(same(p.ser, p.ml_ser));
    }
}

TEST_CASE("16-QAM 2x2 complexity falls with SNR") {
    auto cfg = qam16_2x2(100000);
    cfg.target = TargetRule::factor_of_pmin(2.0);
    const auto pts = run_complexity_sweep(cfg);
    REQUIRE(pts.size() == 8);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        CHECK(p.cardinality == 256);
        CHECK(p.norm_complexity > 0.0);
        CHECK(p.norm_complexity < 1.0);
        CHECK(p.norm_complexity == doctest::Approx(p.mean_cf_evals / 256));
        // Misses cost the full 256 evaluations.
        CHECK(p.norm_complexity >= 1.0 - p.hit_rate);
        CHECK_FALSE(p.has_ml);
        if (i) CHECK(p.norm_complexity <= pts[i - 1].norm_complexity);
    }
}

TEST_CASE("sweeps do not depend on the worker count") {
    auto cfg = qam16_2x2(5000);
    cfg.snr_db = {8, 12};
    cfg.seed = 99;
    cfg.threads = 1;
    const auto a = run_ber_sweep(cfg);
    for (unsigned t : {2u, 3u, 8u}) {
        cfg.threads = t;
        const auto b = run_ber_sweep(cfg);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(same(a[i].ser, b[i].ser));
            CHECK(same(a[i].ber, b[i].ber));
            CHECK(same(a[i].ml_ser, b[i].ml_ser));
            CHECK(a[i].mean_cf_evals == b[i].mean_cf_evals);
            CHECK(a[i].hit_rate == b[i].hit_rate);
        }
    }
}

TEST_CASE("early exit is never better than ML on paired trials") {
    for (Branch br : {Branch::Lower, Branch::Upper}) {
        auto cfg = qam16_2x2(20000);
        cfg.branch = br;
        cfg.snr_db = {10, 14};
        for (const auto& p : run_ber_sweep(cfg)) CHECK(p.ser.events >= p.ml_ser.events);
    }
}

TEST_CASE("ML error rate at high SNR matches the closed form") {
    LinkConfig cfg;
    cfg.snr_db = {12, 14};
    cfg.trials = 200000;
    cfg.target = TargetRule::factor_of_pmin(1.0);
    for (const auto& p : run_ber_sweep(cfg)) {
        const double ser = ser_qam16({p.d_min, p.n0, p.d_min / 2});
        const double sd = std::sqrt(ser * (1 - ser) / double(p.trials));
        CHECK(std::abs(p.ml_ber.rate - ser_to_ber(ser, 16)) <= 3 * sd / 4 + 1e-12);
        CHECK(std::abs(p.ml_ser.rate - ser_qam16_exact({p.d_min, p.n0, p.d_min / 2})) <= 3 * sd);
    }
}

TEST_CASE("randomized detector realizes twice the minimum") {
    // The early-exit search on the lower branch decides like ML; the
    // randomized null-region detector is the one whose error rate follows
    // the shifted-boundary curve.
    const auto c = build_constellation(Scheme::QAM, 16);
    LinkConfig cfg;
    cfg.target = TargetRule::factor_of_pmin(2.0);
    for (double snr : {10.0, 12.0, 14.0}) {
        const auto th = resolve_threshold(cfg, snr);
        const auto est =
            simulate_null_region(c, n0_from_snr_db(snr), th.beta, 200000, 17);
        REQUIRE(est.events >= 100);
        const double target_ser = th.target_p * 4;
        CHECK(est.rate / target_ser >= 0.8);
        CHECK(est.rate / target_ser <= 1.3);
    }
}

TEST_CASE("paired comparison helper") {
    auto cfg = qam16_2x2(20000);
    const double d = build_constellation(Scheme::QAM, 16).d_min();
    const auto r = compare_with_ml(cfg, 10.0, d / 2);
    CHECK(r.trials == 20000);
    CHECK(r.mismatches == 0);
    CHECK(r.pd_errors == r.ml_errors);
    const auto u = compare_with_ml(cfg, 10.0, 0.9 * d);
    CHECK(u.mismatches > 0);
    CHECK(u.pd_errors >= u.ml_errors);
}

TEST_CASE("infeasible SNR aborts the sweep and names it") {
    LinkConfig cfg;
    cfg.snr_db = {14, 4};
    cfg.trials = 100;
    try {
        (void)run_complexity_sweep(cfg);
        FAIL("expected SweepAborted");
    } catch (const SweepAborted& e) {
        CHECK(e.snr_db() == 4.0);
        CHECK(e.infeasible());
        CHECK(std::string(e.what()).find("SNR 4 dB") != std::string::npos);
    }
}

TEST_CASE("Rayleigh links run through the MIMO bound") {
    LinkConfig cfg;
    cfg.nt = 2;
    cfg.nr = 2;
    cfg.channel = ChannelMode::Rayleigh;
    cfg.scheme = Scheme::QAM;
    cfg.order = 4;
    cfg.snr_db = {10, 20};
    cfg.trials = 5000;
    const auto pts = run_ber_sweep(cfg);
    REQUIRE(pts.size() == 2);
    CHECK(std::isnan(pts[0].model_ser));
    CHECK(pts[1].ml_ser.rate < pts[0].ml_ser.rate);
    CHECK(pts[0].ser.events >= pts[0].ml_ser.events);
}
