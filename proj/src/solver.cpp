#include "subml/solver.hpp"

#include "subml/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace subml {

std::string to_string(Branch b) { return b == Branch::Lower ? "lower" : "upper"; }

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
    if (max_iter < 1) throw InvalidArgument("solver needs max_iter >= 1");
    if (!(start_fraction >= 0.0 && start_fraction <= 0.5))
        throw InvalidArgument("start_fraction must lie in [0, 0.5]");
    if (!(bracket_eps > 0.0 && bracket_eps < 0.5))
        throw InvalidArgument("bracket_eps must lie in (0, 0.5)");
}

SisoErrorCurve::SisoErrorCurve(Scheme scheme, unsigned order, double d_min, double n0)
    : coef_(ser_coefficient(scheme, order)), bits_(std::log2(double(order))), d_min_(d_min),
      n0_(n0) {
    if (!(d_min > 0.0)) throw InvalidArgument("d_min must be positive");
    if (!(n0 > 0.0)) throw InvalidArgument("N0 must be positive");
}

double SisoErrorCurve::ber(double beta) const {
    const double s = std::sqrt(n0_);
    return coef_ / bits_ * (erfc((d_min_ - beta) / s) + erfc(beta / s));
}

double SisoErrorCurve::ber_prime(double beta) const {
    const double s = std::sqrt(n0_);
    const double r = d_min_ - beta;
    return coef_ / bits_ * 2.0 * std::numbers::inv_sqrtpi / s *
           (std::exp(-r * r / n0_) - std::exp(-beta * beta / n0_));
}

double g_siso(double beta, double target_p, unsigned order, double d_min, double n0) {
    return SisoErrorCurve(Scheme::QAM, order, d_min, n0).ber(beta) - target_p;
}

double g_siso_prime(double beta, unsigned order, double d_min, double n0) {
    return SisoErrorCurve(Scheme::QAM, order, d_min, n0).ber_prime(beta);
}

double g_mimo(double beta, double target_p, const MimoBoundParams& b) {
    return union_bound_mimo_shifted(b, beta) - target_p;
}

double g_mimo_prime(double beta, const MimoBoundParams& b) {
    return union_bound_mimo_shifted_prime(b, beta);
}

BetaSolution solve_beta(const ScalarFn& g, const ScalarFn& gprime, double d_min, double target_p,
                        const SolverConfig& cfg) {
    cfg.validate();
    if (!(d_min > 0.0)) throw InvalidArgument("d_min must be positive");

    BetaSolution sol;
    sol.target_p = target_p;
    sol.branch = cfg.branch;

    // Targets above 1 only arise from the MIMO bound at low SNR; there the
    // tolerance scales with the target so it stays above the rounding floor.
    const double tol = cfg.tol * std::max(1.0, std::abs(target_p));
    const double mid = 0.5 * d_min;
    const double g_mid = g(mid);
    if (std::abs(g_mid) <= tol) {
        sol.beta = mid;
        sol.residual = std::abs(g_mid);
        sol.converged = true;
        sol.trace.push_back(mid);
        return sol;
    }
    if (g_mid > 0.0) {
        std::ostringstream msg;
        msg << "target " << target_p << " is below the minimum error probability "
            << (g_mid + target_p) << " reached at beta = d_min/2";
        throw Infeasible(msg.str());
    }

    const bool lower = cfg.branch == Branch::Lower;
    const double outer = lower ? cfg.bracket_eps * d_min : d_min * (1.0 - cfg.bracket_eps);
    const double g_outer = g(outer);
    if (!(g_outer > 0.0)) {
        std::ostringstream msg;
        msg << "target " << target_p << " exceeds the largest error probability "
            << (g_outer + target_p) << " on the " << to_string(cfg.branch) << " branch";
        throw Infeasible(msg.str());
    }

    // g > 0 at x_pos and g < 0 at x_neg; the root lies strictly between them.
    double x_pos = outer;
    double x_neg = mid;
    const double start = lower ? cfg.start_fraction * d_min : d_min * (1.0 - cfg.start_fraction);
    double x = std::clamp(start, std::min(outer, mid), std::max(outer, mid));
    sol.trace.push_back(x);

    for (int it = 1; it <= cfg.max_iter; ++it) {
        const double gx = (x == outer) ? g_outer : g(x);
        sol.iterations = it;
        sol.beta = x;
        sol.residual = std::abs(gx);
        if (sol.residual <= tol) {
            sol.converged = true;
            return sol;
        }
        if (gx > 0.0)
            x_pos = x;
        else
            x_neg = x;

        const double lo = std::min(x_pos, x_neg);
        const double hi = std::max(x_pos, x_neg);
        double next = x - gx / gprime(x);
        if (!std::isfinite(next) || next <= lo || next >= hi)
            next = 0.5 * (lo + hi);
        x = next;
        sol.trace.push_back(x);
    }

    std::ostringstream msg;
    msg << "Newton/bisection did not reach |g| <= " << tol << " in " << cfg.max_iter
        << " iterations (last beta " << sol.beta << ", |g| " << sol.residual << ")";
    throw NoConvergence(msg.str());
}

BetaSolution solve_beta_siso(const SisoErrorCurve& curve, double target_p,
                             const SolverConfig& cfg) {
    return solve_beta([&](double b) { return curve.ber(b) - target_p; },
                      [&](double b) { return curve.ber_prime(b); }, curve.d_min(), target_p, cfg);
}

BetaSolution solve_beta_mimo(const MimoBoundParams& b, double d_min, double target_p,
                             SolverConfig cfg) {
    b.validate();
    if (d_min > b.min_distance() * (1.0 + 1e-12))
        throw InvalidArgument("d_min exceeds the smallest pair distance");
    // The shifted bound diverges at beta = 0, so the Newton start moves inside.
    if (cfg.start_fraction == 0.0) cfg.start_fraction = 0.01;
    // Keep the upper bracket end clear of the singular point at d_min.
    cfg.bracket_eps = std::max(cfg.bracket_eps, 1e-6);
    return solve_beta([&](double x) { return g_mimo(x, target_p, b); },
                      [&](double x) { return g_mimo_prime(x, b); }, d_min, target_p, cfg);
}

} // namespace subml
