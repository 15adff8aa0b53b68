// Acceptance checks, one per criterion. Prints a PASS/FAIL line for each and
// exits non-zero if any selected criterion fails.
//
//   subml_acceptance            run all
//   subml_acceptance --only 6   run one

#include "subml/analytics.hpp"
#include "subml/cli.hpp"
#include "subml/constellation.hpp"
#include "subml/detectors.hpp"
#include "subml/harness.hpp"
#include "subml/oracles.hpp"
#include "subml/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace subml;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string sci(double v, int prec = 3) {
    std::ostringstream s;
    s << std::setprecision(prec) << std::scientific << v;
    return s.str();
}

std::string fix(double v, int prec = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << v;
    return s.str();
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

LinkConfig qam16_2x2() {
    LinkConfig cfg;
    cfg.scheme = Scheme::QAM;
    cfg.order = 16;
    cfg.nt = cfg.nr = 2;
    cfg.channel = ChannelMode::Identity;
    cfg.target = TargetRule::factor_of_pmin(2.0);
    return cfg;
}

std::vector<double> grid_0_14() { return {0, 2, 4, 6, 8, 10, 12, 14}; }

Verdict c1_bpsk_null_region() {
    const auto c = build_constellation(Scheme::BPSK, 2);
    const double n0 = n0_from_snr_db(6.0);
    const double beta = 0.3 * c.d_min();
    const std::uint64_t n = 1000000;
    const auto t0 = std::chrono::steady_clock::now();
    const auto est = simulate_null_region(c, n0, beta, n, 2024);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double model = ser_bpsk({c.d_min(), n0, beta});
    // Standard error implied by the 95% Wilson interval.
    const double se = (est.ci_hi - est.ci_lo) / (2.0 * normal_quantile_two_sided(0.95));
    const double z = (est.rate - model) / se;
    return {std::abs(z) <= 3.0 && secs <= 10.0,
            "ser " + sci(est.rate, 5) + " vs " + sci(model, 5) + ", " + fix(z, 2) + " SE, " +
                fix(secs, 2) + " s"};
}

Verdict c2_pam4_forms() {
    // Single-boundary form: every level errs past each of its inner
    // boundaries, outer levels have one, inner levels two.
    const double d = build_constellation(Scheme::PAM, 4).d_min();
    double worst = 0.0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double beta = d * (0.02 + 0.96 * i / 9.0);
            const double n0 = std::pow(10.0, -(-2.0 + 2.0 * j) / 10.0);
            const double s = std::sqrt(n0);
            const double far = 0.5 * std::erfc((d - beta) / s);
            const double near = 0.5 * std::erfc(beta / s);
            const double form = (near + (far + near) + (far + near) + far) / 4.0;
            worst = std::max(worst, std::abs(ser_pam4({d, n0, beta}) - form));
        }
    return {worst <= 1e-14, "max |diff| " + sci(worst) + " over 100 points"};
}

Verdict c3_qam16_remainder() {
    const double d = build_constellation(Scheme::QAM, 16).d_min();
    double worst_ratio = 0.0;
    bool ok = true;
    for (int i = 0; i <= 7; ++i) {
        const double beta = d * (0.10 + 0.05 * i);
        for (int snr = 6; snr <= 16; ++snr) {
            const double n0 = n0_from_snr_db(snr);
            const SisoErrorParams p{d, n0, beta};
            const double gap = std::abs(ser_qam16_exact(p) - ser_qam16(p));
            const double rem = oracle::qam16_expansion(d, n0, beta).second_order;
            // The gap is a difference of two SER-sized numbers, so it carries
            // rounding of a few ulps of the SER itself.
            ok = ok && gap <= rem + 8.0 * std::numeric_limits<double>::epsilon() * ser_qam16(p);
            if (rem > 0) worst_ratio = std::max(worst_ratio, gap / rem);
        }
    }
    return {ok, "max |exact - simplified| / remainder = " + fix(worst_ratio, 6)};
}

Verdict c4_ml_equivalence() {
    auto cfg = qam16_2x2();
    cfg.trials = 100000;
    cfg.seed = 11;
    const double d = build_constellation(Scheme::QAM, 16).d_min();
    std::uint64_t mism = 0, trials = 0;
    for (double snr : {0.0, 6.0, 10.0, 14.0}) {
        const auto r = compare_with_ml(cfg, snr, 0.5 * d);
        mism += r.mismatches;
        trials += r.trials;
    }
    return {mism == 0, std::to_string(mism) + " mismatches in " + std::to_string(trials) +
                           " paired trials (0, 6, 10, 14 dB)"};
}

Verdict c5_solver() {
    const double d = build_constellation(Scheme::QAM, 16).d_min();
    std::ostringstream detail;
    bool ok = true;
    double worst_g = 0, worst_sym = 0, worst_dg = 0;
    std::vector<double> infeasible;
    for (double snr : grid_0_14()) {
        const double n0 = n0_from_snr_db(snr);
        const SisoErrorCurve curve(Scheme::QAM, 16, d, n0);
        const double target = 2.0 * curve.ber_min();

        // Derivatives are checked at every SNR whether or not a root exists.
        for (double frac : {0.05, 0.2, 0.35, 0.45, 0.6, 0.8}) {
            const double b = frac * d;
            const double fd = oracle::central_difference(
                [&](double x) { return g_siso(x, target, 16, d, n0); }, b, 1e-5 * d);
            worst_dg = std::max(worst_dg, rel_err(g_siso_prime(b, 16, d, n0), fd));
        }

        SolverConfig up;
        up.branch = Branch::Upper;
        try {
            const auto lo = solve_beta_siso(curve, target);
            const auto hi = solve_beta_siso(curve, target, up);
            worst_g = std::max({worst_g, std::abs(g_siso(lo.beta, target, 16, d, n0)),
                                std::abs(g_siso(hi.beta, target, 16, d, n0))});
            worst_sym = std::max(worst_sym, std::abs(hi.beta - (d - lo.beta)));
            ok = ok && lo.beta > 0.0 && lo.beta < 0.5 * d;
        } catch (const Infeasible&) {
            infeasible.push_back(snr);
            ok = false;
        }
    }
    ok = ok && worst_g <= 1e-12 && worst_sym <= 1e-10 && worst_dg <= 1e-6;
    detail << "|g| " << sci(worst_g) << ", branch gap " << sci(worst_sym) << ", g' rel "
           << sci(worst_dg);
    if (!infeasible.empty()) {
        detail << "; 2*P_min unreachable (no root on either branch) at";
        for (double s : infeasible) detail << ' ' << s;
        detail << " dB";
    }
    return {ok, detail.str()};
}

Verdict c6_complexity() {
    auto cfg = qam16_2x2();
    cfg.snr_db = grid_0_14();
    cfg.trials = 100000;
    cfg.seed = 1;
    const auto pts = run_complexity_sweep(cfg);
    bool ok = true;
    std::ostringstream detail;
    double prev = 1.0;
    for (const auto& p : pts) {
        ok = ok && p.norm_complexity < 1.0 && p.norm_complexity <= prev;
        prev = p.norm_complexity;
        detail << fix(p.norm_complexity, 4) << ' ';
    }
    // The baseline evaluates every candidate on every realization.
    const VectorConstellation v =
        VectorConstellation::uniform(build_constellation(Scheme::QAM, 16), 2);
    const ChannelRealization h = draw_channel(ChannelMode::Identity, 2, 2, SeedPolicy{5}, 0);
    double ml = 0.0;
    for (std::size_t k = 0; k < v.cardinality(); k += 17) {
        const CandidateMetric metric(v, h, v.point(k));
        ml = std::max(ml, double(ml_exhaustive(metric.size(), metric).cf_evals) /
                              double(v.cardinality()));
    }
    ok = ok && ml == 1.0;
    detail << "| ML " << ml;
    return {ok, detail.str()};
}

Verdict c7_ber_tracking() {
    auto cfg = qam16_2x2();
    cfg.snr_db = grid_0_14();
    cfg.trials = 100000;
    cfg.seed = 1;
    const auto pts = run_ber_sweep(cfg);
    bool ok = true;
    int used = 0;
    std::ostringstream detail;
    for (const auto& p : pts) {
        if (p.ser.events < 100) continue;
        ++used;
        const bool lower = p.ser.rate >= p.ml_ser.rate;
        const bool upper = p.ser.rate <= 2.5 * p.model_ser;
        ok = ok && lower && upper;
        detail << p.snr_db << "dB " << fix(p.ser.rate / p.model_ser, 3)
               << (lower && upper ? " " : "! ");
    }
    ok = ok && used > 0;
    return {ok, std::to_string(used) + " points, ser/model: " + detail.str()};
}

Verdict c8_union_bound() {
    const auto c = build_constellation(Scheme::QAM, 16);
    const auto v = VectorConstellation::uniform(c, 2);
    auto cfg = qam16_2x2();
    cfg.trials = 100000;
    cfg.seed = 3;
    bool ok = true;
    int used = 0;
    std::ostringstream detail;
    for (double snr = 0; snr <= 30; snr += 2) {
        const double n0 = n0_from_snr_db(snr);
        const double bound = union_bound_mimo(MimoBoundParams::from_constellation(v, 2, n0));
        if (!(bound < 1.0)) continue;
        ++used;
        const auto r = compare_with_ml(cfg, snr, 0.5 * c.d_min());
        const double p = double(r.ml_errors) / double(r.trials);
        const double se = std::sqrt(std::max(p * (1 - p), 1.0 / double(r.trials)) / r.trials);
        const bool pass = bound >= p - 3.0 * se;
        ok = ok && pass;
        detail << snr << "dB " << sci(bound, 2) << ">=" << sci(p, 2) << (pass ? " " : "! ");
    }
    ok = ok && used > 0;
    return {ok, std::to_string(used) + " points: " + detail.str()};
}

Verdict c9_pep() {
    double worst = 0.0;
    for (unsigned nr : {1u, 2u, 4u}) {
        const double g = 1e4;
        const double scaled = pairwise_error_prob(g, nr) * std::pow(4.0 * g, double(nr));
        worst = std::max(worst, rel_err(scaled, binomial(2 * nr - 1, nr)));
    }
    return {worst <= 0.01, "max rel err " + sci(worst)};
}

Verdict c10_neighbors() {
    bool ok = true;
    std::ostringstream detail;
    for (unsigned m : {4u, 16u, 64u}) {
        const auto counts = nearest_neighbor_counts(build_constellation(Scheme::QAM, m));
        double sum = 0;
        for (unsigned k : counts) sum += k;
        const double avg = sum / double(counts.size());
        ok = ok && avg == 4.0 * (1.0 - 1.0 / std::sqrt(double(m)));
        detail << "M=" << m << " avg " << avg << "  ";
    }
    return {ok, detail.str()};
}

std::string run_tool(std::vector<std::string> args, int& code) {
    args.insert(args.begin(), "subml");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    code = run_cli(int(argv.size()), argv.data(), out, err);
    return out.str();
}

Verdict c11_determinism() {
    const unsigned max_threads = std::max(3u, resolve_threads(0));
    bool ok = true;
    std::ostringstream detail;
    for (const std::string cmd : {"complexity-sweep", "ber-sweep"}) {
        std::string first;
        for (unsigned t : {1u, 2u, max_threads}) {
            int code = 0;
            const auto csv =
                run_tool({cmd, "--mod", "qam16", "--mimo", "2x2", "--snr-db-range", "10:14:2",
                          "--trials", "20000", "--seed", "99", "--threads", std::to_string(t)},
                         code);
            ok = ok && code == 0;
            if (first.empty()) first = csv;
            ok = ok && csv == first;
        }
        detail << cmd << " ";
    }
    detail << "identical under 1, 2, " << max_threads << " threads";
    return {ok, ok ? detail.str() : "CSV differs between thread counts"};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    int only = 0;
    app.add_option("--only", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    const std::map<int, std::pair<std::string, std::function<Verdict()>>> criteria = {
        {1, {"BPSK null region vs analytic SER", c1_bpsk_null_region}},
        {2, {"4-PAM closed form vs level average", c2_pam4_forms}},
        {3, {"16-QAM exact vs simplified within remainder", c3_qam16_remainder}},
        {4, {"early exit at d_min/2 equals ML", c4_ml_equivalence}},
        {5, {"solver on 16-QAM SISO, 0:2:14 dB, 2 P_min", c5_solver}},
        {6, {"normalized complexity shape", c6_complexity}},
        {7, {"BER tracking against ML and model", c7_ber_tracking}},
        {8, {"MIMO union bound dominates ML SER", c8_union_bound}},
        {9, {"pairwise error asymptote", c9_pep}},
        {10, {"nearest-neighbour averages", c10_neighbors}},
        {11, {"thread-count determinism", c11_determinism}},
    };

    bool all = true;
    for (const auto& [id, entry] : criteria) {
        if (only != 0 && id != only) continue;
        Verdict v{false, ""};
        try {
            v = entry.second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        all = all && v.pass;
        std::cout << "criterion " << std::setw(2) << id << ": " << (v.pass ? "PASS" : "FAIL")
                  << "  " << entry.first << " | " << v.detail << '\n';
    }
    return all ? 0 : 1;
}
