#pragma once

// Monte Carlo sweeps over SNR for the early-exit detector.

#include "subml/channel.hpp"
#include "subml/constellation.hpp"
#include "subml/error.hpp"
#include "subml/solver.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace subml {

struct TargetRule {
    enum class Kind { FactorOfPmin, Absolute };

    Kind kind = Kind::FactorOfPmin;
    double value = 2.0;

    static TargetRule factor_of_pmin(double c) { return {Kind::FactorOfPmin, c}; }
    static TargetRule absolute(double p) { return {Kind::Absolute, p}; }

    // "pmin-factor:<c>" or "abs:<p>"; throws ConfigError.
    static TargetRule parse(const std::string& text);
    std::string str() const;
};

struct LinkConfig {
    Scheme scheme = Scheme::QAM;
    unsigned order = 16;
    unsigned nt = 1;
    unsigned nr = 1;
    ChannelMode channel = ChannelMode::Identity;
    std::vector<double> snr_db;
    TargetRule target;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    Branch branch = Branch::Lower;
    // Worker cap; 0 means SUBML_THREADS or the machine's parallelism.
    unsigned threads = 0;

    // Throws InvalidArgument.
    void validate() const;

    // Single-antenna identity links use the closed-form SISO curve; every
    // other link inverts the shifted MIMO union bound.
    bool uses_siso_objective() const {
        return nt == 1 && nr == 1 && channel == ChannelMode::Identity;
    }
};

struct ProportionEstimate {
    std::uint64_t events = 0;
    std::uint64_t trials = 0;
    double rate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

struct SweepPoint {
    double snr_db = 0.0;
    double n0 = 0.0;
    double d_min = 0.0;
    double beta = 0.0;
    double target_p = 0.0;
    double p_min = 0.0; // objective at beta = d_min/2
    int solver_iterations = 0;

    ProportionEstimate ser;
    ProportionEstimate ber;
    double mean_cf_evals = 0.0;
    double norm_complexity = 0.0; // mean cf_evals / cardinality
    double hit_rate = 0.0;
    double paper_hit_prob = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t cardinality = 0;

    // Exhaustive ML on the same realizations; only filled by run_ber_sweep.
    bool has_ml = false;
    ProportionEstimate ml_ser;
    ProportionEstimate ml_ber;

    // Analytic vector SER of exhaustive ML for identity channels,
    // 1 - prod_i (1 - P_i(d_min/2)); NaN for Rayleigh links.
    double model_ser = 0.0;
};

// Raised when a sweep cannot solve for beta at one SNR. `cause` is the
// Infeasible / NoConvergence message.
class SweepAborted : public Error {
public:
    SweepAborted(double snr_db, bool infeasible, const std::string& cause);

    double snr_db() const noexcept { return snr_db_; }
    bool infeasible() const noexcept { return infeasible_; }

private:
    double snr_db_;
    bool infeasible_;
};

struct Threshold {
    double beta = 0.0;
    double target_p = 0.0;
    double p_min = 0.0;
    double d_min = 0.0;
    BetaSolution solution;
};

// Solves beta for one SNR of the configured link. Propagates Infeasible and
// NoConvergence unchanged.
Threshold resolve_threshold(const LinkConfig& cfg, double snr_db);

std::vector<SweepPoint> run_complexity_sweep(const LinkConfig& cfg);
std::vector<SweepPoint> run_ber_sweep(const LinkConfig& cfg);

// Symbol error rate of null_region_detect on a single-antenna AWGN link.
// Trial t draws its symbol, noise and coin flips from substreams of t.
ProportionEstimate simulate_null_region(const Constellation& c, double n0, double beta,
                                        std::uint64_t trials, std::uint64_t seed,
                                        unsigned threads = 0);

struct PairedComparison {
    std::uint64_t trials = 0;
    std::uint64_t mismatches = 0; // early-exit decision != ML decision
    std::uint64_t pd_errors = 0;
    std::uint64_t ml_errors = 0;
};

// Runs early_exit(beta) and ml_exhaustive on the same realizations of the
// configured link at one SNR (cfg.snr_db is ignored).
PairedComparison compare_with_ml(const LinkConfig& cfg, double snr_db, double beta);

// Closed-form hit probability of the early-exit detector, 1 - Q(N0 * beta).
// Reported beside the measured hit rate; the two need not agree.
double hit_probability_closed_form(double n0, double beta);
// Hit probability of a full search, M^-Nt.
double ml_hit_probability(unsigned order, unsigned nt);

// Wilson score interval for a binomial proportion.
std::pair<double, double> binomial_ci(std::uint64_t errors, std::uint64_t trials,
                                      double level = 0.95);

// Two-sided normal quantile for a confidence level, e.g. 1.959964 for 0.95.
double normal_quantile_two_sided(double level);

// requested > 0 wins, then SUBML_THREADS, then hardware concurrency; always >= 1.
unsigned resolve_threads(unsigned requested);

} // namespace subml
