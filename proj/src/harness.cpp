#include "subml/harness.hpp"

#include "subml/analytics.hpp"
#include "subml/detectors.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

namespace subml {

namespace {

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return v;
}

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

TargetRule TargetRule::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ConfigError("target", "expected pmin-factor:<c> or abs:<p>, got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    const auto value = parse_double(std::string_view(text).substr(colon + 1));
    if (!value) throw ConfigError("target", "bad number in '" + text + "'");
    if (kind == "pmin-factor") {
        if (!(*value >= 1.0)) throw ConfigError("target", "pmin factor must be >= 1");
        return factor_of_pmin(*value);
    }
    if (kind == "abs") {
        if (!(*value > 0.0 && *value < 1.0))
            throw ConfigError("target", "absolute target must lie in (0, 1)");
        return absolute(*value);
    }
    throw ConfigError("target", "unknown target kind '" + kind + "'");
}

std::string TargetRule::str() const {
    return (kind == Kind::FactorOfPmin ? "pmin-factor:" : "abs:") + shortest(value);
}

void LinkConfig::validate() const {
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    if (snr_db.empty()) throw InvalidArgument("SNR grid is empty");
    if (nt < 1 || nr < 1) throw InvalidArgument("antenna counts must be >= 1");
    if (channel == ChannelMode::Identity && nt != nr)
        throw InvalidArgument("identity channel requires Nt == Nr");
    if (target.kind == TargetRule::Kind::FactorOfPmin && !(target.value >= 1.0))
        throw InvalidArgument("pmin factor must be >= 1");
    if (target.kind == TargetRule::Kind::Absolute && !(target.value > 0.0))
        throw InvalidArgument("absolute target must be positive");
    for (double s : snr_db)
        if (!std::isfinite(s)) throw InvalidArgument("SNR values must be finite");
}

SweepAborted::SweepAborted(double snr_db, bool infeasible, const std::string& cause)
    : Error("sweep aborted at SNR " + shortest(snr_db) + " dB: " + cause), snr_db_(snr_db),
      infeasible_(infeasible) {}

double hit_probability_closed_form(double n0, double beta) { return 1.0 - qfunc(n0 * beta); }

double ml_hit_probability(unsigned order, unsigned nt) {
    return std::pow(double(order), -double(nt));
}

double normal_quantile_two_sided(double level) {
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("confidence level must lie in (0, 1)");
    const double tail = 0.5 * (1.0 - level);
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (qfunc(mid) > tail ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> binomial_ci(std::uint64_t errors, std::uint64_t trials, double level) {
    if (trials == 0) throw InvalidArgument("binomial_ci needs trials >= 1");
    if (errors > trials) throw InvalidArgument("errors exceed trials");
    const double z = normal_quantile_two_sided(level);
    const double n = double(trials);
    const double p = double(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    double lo = std::max(0.0, center - half);
    double hi = std::min(1.0, center + half);
    if (errors == 0) lo = 0.0;
    if (errors == trials) hi = 1.0;
    return {lo, hi};
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SUBML_THREADS")) {
        unsigned v = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

VectorConstellation make_vector(const LinkConfig& cfg) {
    return VectorConstellation::uniform(build_constellation(cfg.scheme, cfg.order), cfg.nt);
}

double target_for(const TargetRule& rule, double p_min) {
    return rule.kind == TargetRule::Kind::FactorOfPmin ? rule.value * p_min : rule.value;
}

// Everything about a link that does not depend on SNR.
struct LinkContext {
    explicit LinkContext(const LinkConfig& c) : cfg(c), v(make_vector(c)) {
        if (!cfg.uses_siso_objective()) spectrum = distance_spectrum(v);
    }

    Threshold threshold(double snr_db) const {
        const double n0 = n0_from_snr_db(snr_db);
        Threshold th;
        th.d_min = v.d_min();
        SolverConfig scfg;
        scfg.branch = cfg.branch;
        if (cfg.uses_siso_objective()) {
            const SisoErrorCurve curve(cfg.scheme, cfg.order, th.d_min, n0);
            th.p_min = curve.ber_min();
            th.target_p = target_for(cfg.target, th.p_min);
            th.solution = solve_beta_siso(curve, th.target_p, scfg);
        } else {
            MimoBoundParams b;
            b.nr = cfg.nr;
            b.n0 = n0;
            b.pairs = spectrum;
            b.orders = v.orders();
            th.p_min = union_bound_mimo_shifted(b, 0.5 * th.d_min);
            th.target_p = target_for(cfg.target, th.p_min);
            th.solution = solve_beta_mimo(b, th.d_min, th.target_p, scfg);
        }
        th.beta = th.solution.beta;
        return th;
    }

    double model_ser(double n0) const {
        if (cfg.channel != ChannelMode::Identity) return std::numeric_limits<double>::quiet_NaN();
        double ok = 1.0;
        for (std::size_t a = 0; a < v.num_antennas(); ++a) {
            const auto& c = v.antenna(a);
            const double p = ser_analytic(c.scheme(), c.order(), {c.d_min(), n0, 0.5 * c.d_min()});
            ok *= 1.0 - std::clamp(p, 0.0, 1.0);
        }
        return 1.0 - ok;
    }

    const LinkConfig& cfg;
    VectorConstellation v;
    std::vector<DistanceCount> spectrum;
};

struct Counters {
    std::uint64_t sym_err = 0;
    std::uint64_t bit_err = 0;
    std::uint64_t cf_evals = 0;
    std::uint64_t hits = 0;
    std::uint64_t ml_sym_err = 0;
    std::uint64_t ml_bit_err = 0;

    Counters& operator+=(const Counters& o) {
        sym_err += o.sym_err;
        bit_err += o.bit_err;
        cf_evals += o.cf_evals;
        hits += o.hits;
        ml_sym_err += o.ml_sym_err;
        ml_bit_err += o.ml_bit_err;
        return *this;
    }
};

Counters simulate_range(const LinkContext& ctx, double n0, double beta, bool with_ml,
                        std::uint64_t first, std::uint64_t last) {
    const auto& cfg = ctx.cfg;
    const auto& v = ctx.v;
    const SeedPolicy seed{cfg.seed};
    const std::size_t k = v.cardinality();
    std::vector<cplx> y(cfg.nr);
    Counters c;
    for (std::uint64_t t = first; t < last; ++t) {
        const std::size_t sent = draw_symbol(v, seed, t);
        const auto h = draw_channel(cfg.channel, cfg.nr, cfg.nt, seed, t);
        transmit(v.point(sent), h, n0, seed, t, y);
        const CandidateMetric metric(v, h, y);

        const auto pd = early_exit(k, metric, beta);
        c.cf_evals += pd.cf_evals;
        c.hits += pd.hit ? 1 : 0;
        if (pd.decided_index != sent) {
            ++c.sym_err;
            c.bit_err += std::popcount(v.label(pd.decided_index) ^ v.label(sent));
        }
        if (with_ml) {
            const auto ml = pd.hit ? ml_exhaustive(k, metric) : pd;
            if (ml.decided_index != sent) {
                ++c.ml_sym_err;
                c.ml_bit_err += std::popcount(v.label(ml.decided_index) ^ v.label(sent));
            }
        }
    }
    return c;
}

// Splits [0, n) into contiguous blocks, one per worker, and sums
// fn(first, last) over them. Every trial draws from its own substreams and
// the results are integer counts, so the totals do not depend on the worker
// count.
template <class Result, class Fn>
Result parallel_blocks(std::uint64_t n, unsigned requested, Fn&& fn) {
    const auto cap = std::min<std::uint64_t>(resolve_threads(requested), n);
    const auto workers = static_cast<unsigned>(std::max<std::uint64_t>(1, cap));
    std::vector<Result> partial(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t first = n * w / workers;
        const std::uint64_t last = n * (w + 1) / workers;
        if (workers == 1) {
            partial[w] = fn(first, last);
        } else {
            pool.emplace_back([&, w, first, last] { partial[w] = fn(first, last); });
        }
    }
    for (auto& th : pool) th.join();
    Result total{};
    for (const auto& p : partial) total += p;
    return total;
}

struct PairedCounts {
    PairedComparison c;
    PairedCounts& operator+=(const PairedCounts& o) {
        c.trials += o.c.trials;
        c.mismatches += o.c.mismatches;
        c.pd_errors += o.c.pd_errors;
        c.ml_errors += o.c.ml_errors;
        return *this;
    }
};

Counters simulate(const LinkContext& ctx, double n0, double beta, bool with_ml) {
    return parallel_blocks<Counters>(ctx.cfg.trials, ctx.cfg.threads,
                                     [&](std::uint64_t first, std::uint64_t last) {
                                         return simulate_range(ctx, n0, beta, with_ml, first, last);
                                     });
}

ProportionEstimate estimate(std::uint64_t events, std::uint64_t trials) {
    ProportionEstimate e;
    e.events = events;
    e.trials = trials;
    e.rate = double(events) / double(trials);
    std::tie(e.ci_lo, e.ci_hi) = binomial_ci(events, trials);
    return e;
}

std::vector<SweepPoint> run_sweep(const LinkConfig& cfg, bool with_ml) {
    cfg.validate();
    const LinkContext ctx(cfg);
    std::vector<SweepPoint> out;
    out.reserve(cfg.snr_db.size());
    for (double snr : cfg.snr_db) {
        Threshold th;
        try {
            th = ctx.threshold(snr);
        } catch (const Infeasible& e) {
            throw SweepAborted(snr, true, e.what());
        } catch (const NoConvergence& e) {
            throw SweepAborted(snr, false, e.what());
        }

        const double n0 = n0_from_snr_db(snr);
        const auto c = simulate(ctx, n0, th.beta, with_ml);
        const std::uint64_t bits = cfg.trials * ctx.v.bits_per_vector();

        SweepPoint p;
        p.snr_db = snr;
        p.n0 = n0;
        p.d_min = th.d_min;
        p.beta = th.beta;
        p.target_p = th.target_p;
        p.p_min = th.p_min;
        p.solver_iterations = th.solution.iterations;
        p.ser = estimate(c.sym_err, cfg.trials);
        p.ber = estimate(c.bit_err, bits);
        p.trials = cfg.trials;
        p.cardinality = ctx.v.cardinality();
        p.mean_cf_evals = double(c.cf_evals) / double(cfg.trials);
        p.norm_complexity = p.mean_cf_evals / double(p.cardinality);
        p.hit_rate = double(c.hits) / double(cfg.trials);
        p.paper_hit_prob = hit_probability_closed_form(n0, th.beta);
        p.model_ser = ctx.model_ser(n0);
        if (with_ml) {
            p.has_ml = true;
            p.ml_ser = estimate(c.ml_sym_err, cfg.trials);
            p.ml_ber = estimate(c.ml_bit_err, bits);
        }
        out.push_back(p);
    }
    return out;
}

} // namespace

Threshold resolve_threshold(const LinkConfig& cfg, double snr_db) {
    LinkConfig one = cfg;
    one.snr_db = {snr_db};
    one.validate();
    return LinkContext(one).threshold(snr_db);
}

ProportionEstimate simulate_null_region(const Constellation& c, double n0, double beta,
                                        std::uint64_t trials, std::uint64_t seed,
                                        unsigned threads) {
    if (trials == 0) throw InvalidArgument("trials must be >= 1");
    if (!(n0 >= 0.0)) throw InvalidArgument("N0 must be non-negative");
    const auto v = VectorConstellation::uniform(c, 1);
    const SeedPolicy policy{seed};
    const auto errors = parallel_blocks<std::uint64_t>(
        trials, threads, [&](std::uint64_t first, std::uint64_t last) {
            const auto h = ChannelRealization::identity(1);
            std::vector<cplx> y(1);
            std::uint64_t e = 0;
            for (std::uint64_t t = first; t < last; ++t) {
                const std::size_t sent = draw_symbol(v, policy, t);
                transmit(v.point(sent), h, n0, policy, t, y);
                auto coin = policy.stream(t, StreamRole::Detector);
                if (null_region_detect(y[0], c, beta, coin) != sent) ++e;
            }
            return e;
        });
    return estimate(errors, trials);
}

PairedComparison compare_with_ml(const LinkConfig& cfg, double snr_db, double beta) {
    LinkConfig one = cfg;
    one.snr_db = {snr_db};
    one.validate();
    const auto v = make_vector(one);
    const double n0 = n0_from_snr_db(snr_db);
    const SeedPolicy seed{one.seed};
    const std::size_t k = v.cardinality();
    const auto total = parallel_blocks<PairedCounts>(
        one.trials, one.threads, [&](std::uint64_t first, std::uint64_t last) {
            PairedCounts pc;
            std::vector<cplx> y(one.nr);
            for (std::uint64_t t = first; t < last; ++t) {
                const std::size_t sent = draw_symbol(v, seed, t);
                const auto h = draw_channel(one.channel, one.nr, one.nt, seed, t);
                transmit(v.point(sent), h, n0, seed, t, y);
                const CandidateMetric metric(v, h, y);
                const auto pd = early_exit(k, metric, beta);
                const auto ml = ml_exhaustive(k, metric);
                ++pc.c.trials;
                pc.c.mismatches += pd.decided_index != ml.decided_index;
                pc.c.pd_errors += pd.decided_index != sent;
                pc.c.ml_errors += ml.decided_index != sent;
            }
            return pc;
        });
    return total.c;
}

std::vector<SweepPoint> run_complexity_sweep(const LinkConfig& cfg) { return run_sweep(cfg, false); }

std::vector<SweepPoint> run_ber_sweep(const LinkConfig& cfg) { return run_sweep(cfg, true); }

} // namespace subml
