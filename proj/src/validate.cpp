#include "subml/validate.hpp"

#include "subml/analytics.hpp"
#include "subml/config.hpp"
#include "subml/detectors.hpp"
#include "subml/harness.hpp"
#include "subml/oracles.hpp"
#include "subml/report.hpp"
#include "subml/rng.hpp"
#include "subml/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace subml {

namespace {

struct Ref {
    double x;
    double value;
};

// erfc to 20 digits from an arbitrary-precision evaluation.
constexpr Ref kErfcTable[] = {
    {0.1, 0.8875370839817151016},     {0.5, 0.47950012218695346232},
    {1.0, 0.15729920705028513066},    {1.5, 0.033894853524689272933},
    {2.0, 0.0046777349810472658379},  {2.5, 0.00040695201744495893956},
    {3.0, 0.000022090496998585441373}, {4.0, 1.5417257900280018852e-8},
    {5.0, 1.5374597944280348502e-12}, {6.0, 2.1519736712498913117e-17},
    {8.0, 1.122429717298292708e-29},  {10.0, 2.088487583762544757e-45},
    {-0.5, 1.5204998778130465377},    {-2.0, 1.9953222650189527342},
    {-5.0, 1.9999999999984625402},
};

std::string sci(double v) {
    std::ostringstream s;
    s << std::setprecision(3) << std::scientific << v;
    return s.str();
}

double rel_err(double got, double want) {
    return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

CheckResult check_erfc_reference(const std::function<double(double)>& f) {
    double worst = 0.0;
    for (const auto& r : kErfcTable) worst = std::max(worst, rel_err(f(r.x), r.value));
    return {"erfc reference values", worst <= 1e-12, false, "max rel err " + sci(worst)};
}

CheckResult check_erfc_quadrature(const std::function<double(double)>& f) {
    double worst = 0.0;
    for (double x = -3.0; x <= 10.0 + 1e-12; x += 0.25)
        worst = std::max(worst, rel_err(f(x), oracle::erfc_quadrature(x)));
    return {"erfc vs quadrature", worst <= 1e-12, false, "max rel err " + sci(worst)};
}

CheckResult check_qfunc() {
    double worst = 0.0;
    for (double x = -4.0; x <= 8.0 + 1e-12; x += 0.5)
        worst = std::max(worst, rel_err(qfunc(x), oracle::qfunc_quadrature(x)));
    return {"Q function vs quadrature", worst <= 1e-12, false, "max rel err " + sci(worst)};
}

CheckResult check_pam4_forms(const std::function<double(double)>& f) {
    // Level-by-level form: outer levels fail on one side, inner on both.
    const double d = build_constellation(Scheme::PAM, 4).d_min();
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double beta = d * (0.05 + 0.045 * i);
            const double n0 = std::pow(10.0, -(0.0 + 1.6 * j) / 10.0);
            const double s = std::sqrt(n0);
            const double a = 0.5 * f((d - beta) / s);
            const double b = 0.5 * f(beta / s);
            const double levels = 0.25 * (b + (a + b) + (a + b) + a);
            worst = std::max(worst, std::abs(ser_pam4({d, n0, beta}) - levels));
        }
    }
    return {"4-PAM level-average form", worst <= 1e-14, false, "max abs diff " + sci(worst)};
}

CheckResult check_qam16_remainder() {
    const double d = build_constellation(Scheme::QAM, 16).d_min();
    double worst = 0.0; // excess over the remainder; must stay <= 0
    for (int i = 0; i <= 7; ++i) {
        const double beta = d * (0.10 + 0.05 * i);
        for (int snr = 6; snr <= 16; ++snr) {
            const double n0 = n0_from_snr_db(snr);
            const SisoErrorParams p{d, n0, beta};
            const auto ex = oracle::qam16_expansion(d, n0, beta);
            const double gap = std::abs(ser_qam16_exact(p) - ser_qam16(p));
            worst = std::max(worst, gap - ex.second_order * (1.0 + 1e-9) - 1e-16);
        }
    }
    return {"16-QAM second-order remainder", worst <= 0.0, false,
            "max excess " + sci(std::max(worst, 0.0))};
}

CheckResult check_solver() {
    const double d = build_constellation(Scheme::QAM, 16).d_min();
    double worst_g = 0.0, worst_sym = 0.0, worst_dg = 0.0;
    bool inside = true;
    for (double snr : {10.0, 12.0, 14.0}) {
        const double n0 = n0_from_snr_db(snr);
        const SisoErrorCurve curve(Scheme::QAM, 16, d, n0);
        const double target = 2.0 * curve.ber_min();
        SolverConfig lo_cfg, hi_cfg;
        hi_cfg.branch = Branch::Upper;
        const auto lo = solve_beta_siso(curve, target, lo_cfg);
        const auto hi = solve_beta_siso(curve, target, hi_cfg);
        worst_g = std::max({worst_g, std::abs(curve.ber(lo.beta) - target),
                            std::abs(curve.ber(hi.beta) - target)});
        worst_sym = std::max(worst_sym, std::abs(hi.beta - (d - lo.beta)));
        inside = inside && lo.beta > 0.0 && lo.beta < 0.5 * d;
        for (double frac : {0.1, 0.25, 0.4}) {
            const double b = frac * d;
            const double fd = oracle::central_difference([&](double x) { return curve.ber(x); }, b,
                                                         1e-6 * d);
            worst_dg = std::max(worst_dg, rel_err(curve.ber_prime(b), fd));
        }
    }
    const bool ok = worst_g <= 1e-12 && worst_sym <= 1e-10 && worst_dg <= 1e-6 && inside;
    return {"beta solver (16-QAM, 10-14 dB)", ok, false,
            "|g| " + sci(worst_g) + ", branch gap " + sci(worst_sym) + ", g' rel " +
                sci(worst_dg)};
}

CheckResult check_solver_infeasible() {
    const double d = build_constellation(Scheme::QAM, 16).d_min();
    const SisoErrorCurve curve(Scheme::QAM, 16, d, n0_from_snr_db(10.0));
    try {
        (void)solve_beta_siso(curve, 1e-99);
    } catch (const Infeasible&) {
        return {"solver rejects unreachable target", true, false, "Infeasible raised"};
    }
    return {"solver rejects unreachable target", false, false, "no error raised"};
}

CheckResult check_pep_asymptote() {
    double worst = 0.0;
    for (unsigned nr : {1u, 2u, 4u}) {
        const double g = 1e4;
        const double scaled = pairwise_error_prob(g, nr) * std::pow(4.0 * g, double(nr));
        worst = std::max(worst, rel_err(scaled, binomial(2 * nr - 1, nr)));
    }
    return {"pairwise error asymptote", worst <= 0.01, false, "max rel err " + sci(worst)};
}

CheckResult check_neighbors() {
    std::ostringstream detail;
    bool ok = true;
    for (unsigned m : {4u, 16u, 64u}) {
        const auto counts = nearest_neighbor_counts(build_constellation(Scheme::QAM, m));
        double sum = 0.0;
        for (unsigned c : counts) sum += c;
        const double avg = sum / counts.size();
        ok = ok && std::abs(avg - avg_nearest_neighbors(m)) <= 1e-12;
        detail << (m == 4 ? "" : ", ") << "M=" << m << ": " << avg;
    }
    return {"nearest-neighbour averages", ok, false, detail.str()};
}

CheckResult check_philox() {
    const Philox4x32Counter want0{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8};
    const Philox4x32Counter want1{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd};
    const Philox4x32Counter want2{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1};
    const bool ok =
        philox4x32_10({0, 0, 0, 0}, {0, 0}) == want0 &&
        philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                      {0xffffffff, 0xffffffff}) == want1 &&
        philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                      {0xa4093822, 0x299f31d0}) == want2;
    return {"Philox4x32-10 known answers", ok, false, ok ? "3/3 vectors" : "mismatch"};
}

CheckResult check_wilson() {
    const auto [lo, hi] = binomial_ci(50, 1000);
    const auto cp = oracle::clopper_pearson(50, 1000);
    const bool ok = lo < 0.05 && hi > 0.05 && std::abs(lo - cp.lo) < 3e-3 &&
                    std::abs(hi - cp.hi) < 3e-3;
    return {"Wilson interval (50/1000)", ok, false,
            "[" + sci(lo) + ", " + sci(hi) + "] vs exact [" + sci(cp.lo) + ", " + sci(cp.hi) + "]"};
}

CheckResult check_determinism(unsigned threads) {
    LinkConfig cfg;
    cfg.nt = cfg.nr = 2;
    cfg.snr_db = {12.0, 14.0};
    cfg.trials = 3000;
    cfg.seed = 7;
    std::string first;
    bool ok = true;
    for (unsigned t : {1u, 2u, std::max(3u, resolve_threads(threads))}) {
        cfg.threads = t;
        std::ostringstream csv;
        write_sweep_csv(csv, {"ber-sweep", cfg, std::nullopt}, run_ber_sweep(cfg));
        if (first.empty())
            first = csv.str();
        else
            ok = ok && csv.str() == first;
    }
    return {"thread-count determinism", ok, false, ok ? "identical CSV" : "CSV differs"};
}

CheckResult check_bpsk_monte_carlo(unsigned threads) {
    const auto c = build_constellation(Scheme::BPSK, 2);
    const double n0 = n0_from_snr_db(6.0);
    const double beta = 0.3 * c.d_min();
    const double p = ser_bpsk({c.d_min(), n0, beta});
    const std::uint64_t n = 1000000;
    const auto est = simulate_null_region(c, n0, beta, n, 1, threads);
    const double se = std::sqrt(p * (1.0 - p) / double(n));
    const double z = (est.rate - p) / se;
    return {"BPSK null region, 10^6 trials", std::abs(z) <= 3.0, false,
            "ser " + sci(est.rate) + " vs " + sci(p) + " (z " + sci(z) + ")"};
}

CheckResult check_ml_equivalence(unsigned threads) {
    LinkConfig cfg;
    cfg.nt = cfg.nr = 2;
    cfg.trials = 100000;
    cfg.threads = threads;
    const double d = build_constellation(Scheme::QAM, 16).d_min();
    const auto r = compare_with_ml(cfg, 10.0, 0.5 * d);
    return {"early exit = ML at d_min/2, 10^5 trials", r.mismatches == 0, false,
            std::to_string(r.mismatches) + " mismatches"};
}

CheckResult skipped(const std::string& name) { return {name, true, true, "skipped (--quick)"}; }

} // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& opts) {
    const std::function<double(double)> f =
        opts.erfc ? opts.erfc : std::function<double(double)>([](double x) { return erfc(x); });
    std::vector<CheckResult> out;
    out.push_back(check_erfc_reference(f));
    out.push_back(check_erfc_quadrature(f));
    out.push_back(check_qfunc());
    out.push_back(check_pam4_forms(f));
    out.push_back(check_qam16_remainder());
    out.push_back(check_solver());
    out.push_back(check_solver_infeasible());
    out.push_back(check_pep_asymptote());
    out.push_back(check_neighbors());
    out.push_back(check_philox());
    out.push_back(check_wilson());
    out.push_back(check_determinism(opts.threads));
    if (opts.quick) {
        out.push_back(skipped("BPSK null region, 10^6 trials"));
        out.push_back(skipped("early exit = ML at d_min/2, 10^5 trials"));
    } else {
        out.push_back(check_bpsk_monte_carlo(opts.threads));
        out.push_back(check_ml_equivalence(opts.threads));
    }
    return out;
}

bool print_validation(std::ostream& out, const std::vector<CheckResult>& results) {
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    bool ok = true;
    for (const auto& r : results) {
        const char* tag = r.skipped ? "SKIP" : (r.passed ? "PASS" : "FAIL");
        ok = ok && r.passed;
        out << tag << "  " << std::left << std::setw(static_cast<int>(width)) << r.name << "  "
            << r.detail << '\n';
    }
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    out << (ok ? "all checks passed" : std::to_string(failed) + " check(s) failed") << '\n';
    return ok;
}

} // namespace subml
