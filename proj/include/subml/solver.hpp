#pragma once

// Inversion of a target error probability into the boundary shift beta.

#include "subml/analytics.hpp"

#include <functional>
#include <string>
#include <vector>

namespace subml {

enum class Branch { Lower, Upper };

std::string to_string(Branch b);

enum class NewtonFallback { Bisection };

struct SolverConfig {
    double tol = 1e-12;  // on |g(beta)|, scaled by max(1, target)
    int max_iter = 100;
    Branch branch = Branch::Lower;
    NewtonFallback newton_fallback = NewtonFallback::Bisection;
    // Newton start as a fraction of d_min on the lower branch; the upper
    // branch mirrors it to d_min * (1 - start_fraction). Clamped into the
    // bracket.
    double start_fraction = 0.0;
    // Bracket excludes [0, eps * d_min) and (d_min * (1 - eps), d_min].
    double bracket_eps = 1e-9;

    void validate() const;
};

struct BetaSolution {
    double beta = 0.0;
    double target_p = 0.0;
    double residual = 0.0; // |g(beta)| at exit
    int iterations = 0;
    Branch branch = Branch::Lower;
    bool converged = false;
    std::vector<double> trace; // iterates, starting point first
};

/// SISO bit-error curve of the shifted-boundary detector:
///   BER(beta) = c/k [erfc((d - beta)/sqrt(N0)) + erfc(beta/sqrt(N0))],
/// with c from ser_coefficient() and k = log2(M).
class SisoErrorCurve {
public:
    SisoErrorCurve(Scheme scheme, unsigned order, double d_min, double n0);

    double ber(double beta) const;
    double ber_prime(double beta) const;
    // Minimum of the curve, reached at beta = d_min / 2.
    double ber_min() const { return ber(0.5 * d_min_); }

    double d_min() const { return d_min_; }
    double n0() const { return n0_; }
    double coefficient() const { return coef_; }
    double bits() const { return bits_; }

private:
    double coef_;
    double bits_;
    double d_min_;
    double n0_;
};

// g(beta) = BER(beta) - P for square M-QAM (order M), and its derivative.
double g_siso(double beta, double target_p, unsigned order, double d_min, double n0);
double g_siso_prime(double beta, unsigned order, double d_min, double n0);

// g(beta) = shifted MIMO union bound - P, and its derivative. Both throw
// SingularPoint at beta <= 0 or beta on a pair distance.
double g_mimo(double beta, double target_p, const MimoBoundParams& b);
double g_mimo_prime(double beta, const MimoBoundParams& b);

using ScalarFn = std::function<double(double)>;

/// Safeguarded Newton-Raphson for g(beta) = 0 on one side of d_min/2.
///
/// The lower branch searches (eps*d_min, d_min/2] where g decreases, the
/// upper branch [d_min/2, d_min*(1-eps)) where g increases. A Newton step that
/// leaves the current bracket is replaced by a bisection step.
///
/// Throws Infeasible when g(d_min/2) > 0 (target below the minimum) or when g
/// keeps its sign over the whole bracket (target above the largest error the
/// branch can produce), NoConvergence when max_iter runs out.
BetaSolution solve_beta(const ScalarFn& g, const ScalarFn& gprime, double d_min, double target_p,
                        const SolverConfig& cfg = {});

// Convenience wrappers binding the objectives above. The MIMO wrapper starts
// at 0.01 d_min unless cfg.start_fraction is set to something else.
BetaSolution solve_beta_siso(const SisoErrorCurve& curve, double target_p,
                             const SolverConfig& cfg = {});
BetaSolution solve_beta_mimo(const MimoBoundParams& b, double d_min, double target_p,
                             SolverConfig cfg = {});

} // namespace subml
