#include "subml/analytics.hpp"

#include "subml/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace subml {

namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (1*3*...*(2n+1)).
// Every term is positive, so there is no cancellation for moderate x.
double erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return 2.0 * kInvSqrtPi * std::exp(-x2) * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// evaluated with the modified Lentz method. Used for x >= 2.
double erfc_continued_fraction(double x) {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int n = 1; n < 5000; ++n) {
        const double a = 0.5 * n;
        d = x + a * d;
        if (std::abs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x * x) * kInvSqrtPi / f;
}

void require_square_qam(unsigned order) {
    const auto side = static_cast<unsigned>(std::lround(std::sqrt(double(order))));
    if (order < 4 || side * side != order)
        throw UnsupportedOrder("square M-QAM with M >= 4 required, got " + std::to_string(order));
}

// The two shifted-boundary erfc terms shared by every SISO expression.
struct ErfcPair {
    double far;  // erfc((d - beta)/sqrt(N0))
    double near; // erfc(beta/sqrt(N0))
};

ErfcPair erfc_pair(const SisoErrorParams& p) {
    p.validate();
    const double s = std::sqrt(p.n0);
    return {erfc((p.d_min - p.beta) / s), erfc(p.beta / s)};
}

} // namespace

double erfc(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) return 2.0 - erfc(-x);
    if (x < 2.0) return 1.0 - erf_series(x);
    if (x > 27.3) return 0.0;
    return erfc_continued_fraction(x);
}

double qfunc(double x) { return 0.5 * erfc(x / std::numbers::sqrt2); }

double likelihood(cplx y, cplx s, double sigma) {
    if (!(sigma > 0.0))
        throw InvalidArgument("likelihood needs sigma > 0");
    const double r2 = std::norm(y - s) / (sigma * sigma);
    return std::exp(-0.5 * r2) / std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
}

void SisoErrorParams::validate() const {
    if (!(d_min > 0.0)) throw InvalidArgument("d_min must be positive");
    if (!(n0 > 0.0)) throw InvalidArgument("N0 must be positive");
    if (!(beta >= 0.0 && beta <= d_min))
        throw InvalidArgument("beta must lie in [0, d_min]");
}

double ser_coefficient(Scheme scheme, unsigned order) {
    switch (scheme) {
    case Scheme::BPSK:
        if (order != 2) throw UnsupportedOrder("BPSK requires M = 2");
        return 0.25;
    case Scheme::PAM:
        if (order != 4)
            throw UnsupportedOrder("closed-form PAM error only available for M = 4, got " +
                                   std::to_string(order));
        return 0.375;
    case Scheme::QAM:
        require_square_qam(order);
        return 1.0 - 1.0 / std::sqrt(double(order));
    }
    throw UnsupportedOrder("unknown scheme");
}

double ser_bpsk(const SisoErrorParams& p) {
    const auto e = erfc_pair(p);
    return 0.25 * e.far + 0.25 * e.near;
}

double ser_pam4(const SisoErrorParams& p) {
    const auto e = erfc_pair(p);
    return 0.375 * e.far + 0.375 * e.near;
}

double ser_qam16(const SisoErrorParams& p) {
    const auto e = erfc_pair(p);
    return 0.75 * e.far + 0.75 * e.near;
}

double ser_mqam(unsigned order, const SisoErrorParams& p) {
    require_square_qam(order);
    const auto e = erfc_pair(p);
    return (1.0 - 1.0 / std::sqrt(double(order))) * (e.far + e.near);
}

double ser_analytic(Scheme scheme, unsigned order, const SisoErrorParams& p) {
    const double c = ser_coefficient(scheme, order);
    const auto e = erfc_pair(p);
    return c * (e.far + e.near);
}

double ser_qam16_exact(const SisoErrorParams& p) {
    const auto e = erfc_pair(p);
    const double a = 0.5 * e.far;
    const double b = 0.5 * e.near;
    // Per-axis error probabilities of the four levels. A point is missed
    // unless both axes are right: 1 - (1 - x)(1 - y) = x + y - x y, written
    // out so that small error rates keep their relative accuracy.
    const double axis[4] = {b, a + b, a + b, a};
    double err = 0.0;
    for (double x : axis)
        for (double y : axis)
            err += x + y - x * y;
    return err / 16.0;
}

double ser_to_ber(double ser, unsigned order) {
    if (order < 2) throw InvalidArgument("order must be >= 2");
    return ser / std::log2(double(order));
}

double avg_nearest_neighbors(unsigned order) {
    require_square_qam(order);
    return 4.0 * (1.0 - 1.0 / std::sqrt(double(order)));
}

SisoUnionBound union_bound_mqam_siso(unsigned order, const SisoErrorParams& p) {
    require_square_qam(order);
    p.validate();
    const double nn = avg_nearest_neighbors(order);
    const double sigma = std::sqrt(p.n0 / 2.0);
    const double dm = p.d_min - p.beta;
    SisoUnionBound out{};
    out.q_form = nn * (0.5 * qfunc(p.beta / sigma) + 0.5 * qfunc(dm / sigma));
    out.exp_form = nn * (0.5 * std::exp(-p.beta * p.beta / (4.0 * p.n0)) +
                         0.5 * std::exp(-dm * dm / (4.0 * p.n0)));
    return out;
}

double binomial(unsigned n, unsigned k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (unsigned i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return std::round(r);
}

double pairwise_error_prob(double gamma_c, unsigned nr) {
    if (!(gamma_c >= 0.0)) throw InvalidArgument("gamma_c must be non-negative");
    if (nr < 1) throw InvalidArgument("Nr must be >= 1");
    const double mu = std::sqrt(gamma_c / (1.0 + gamma_c));
    // 1 - mu without cancellation at large gamma.
    const double one_minus_mu = (1.0 / (1.0 + gamma_c)) / (1.0 + mu);
    const double lo = 0.5 * one_minus_mu;
    const double hi = 0.5 * (1.0 + mu);
    double sum = 0.0;
    double hi_pow = 1.0;
    for (unsigned k = 0; k < nr; ++k) {
        sum += binomial(nr - 1 + k, k) * hi_pow;
        hi_pow *= hi;
    }
    return std::pow(lo, nr) * sum;
}

MimoBoundParams MimoBoundParams::from_constellation(const VectorConstellation& v, unsigned nr,
                                                    double n0, std::size_t cap) {
    MimoBoundParams b;
    b.nr = nr;
    b.n0 = n0;
    b.pairs = distance_spectrum(v, cap);
    b.orders = v.orders();
    b.validate();
    return b;
}

MimoBoundParams MimoBoundParams::from_distances(std::span<const double> distances, unsigned nr,
                                                double n0, std::vector<unsigned> orders) {
    MimoBoundParams b;
    b.nr = nr;
    b.n0 = n0;
    b.orders = std::move(orders);
    for (double d : distances) b.pairs.push_back({d, 1});
    b.validate();
    return b;
}

void MimoBoundParams::validate() const {
    if (pairs.empty()) throw EmptyPairs("union bound needs at least one pair distance");
    if (nr < 1) throw InvalidArgument("Nr must be >= 1");
    if (!(n0 > 0.0)) throw InvalidArgument("N0 must be positive");
    if (orders.empty()) throw InvalidArgument("per-antenna orders missing");
    for (const auto& p : pairs)
        if (!(p.distance > 0.0)) throw InvalidArgument("pair distances must be positive");
}

double MimoBoundParams::prefactor() const {
    double prod = 1.0;
    for (unsigned m : orders) prod *= m;
    return std::pow(2.0 * n0, nr) * binomial(2 * nr - 1, nr) / prod;
}

double MimoBoundParams::min_distance() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : pairs) m = std::min(m, p.distance);
    return m;
}

double union_bound_mimo(const MimoBoundParams& b) {
    b.validate();
    double sum = 0.0;
    for (const auto& p : b.pairs)
        sum += double(p.count) * std::pow(1.0 / (4.0 * p.distance * p.distance), b.nr);
    return b.prefactor() * sum;
}

namespace {

void check_regular(const MimoBoundParams& b, double beta) {
    if (!(beta > 0.0))
        throw SingularPoint("shifted union bound is singular at beta <= 0");
    for (const auto& p : b.pairs)
        if (std::abs(p.distance - beta) <= 1e-9)
            throw SingularPoint("beta coincides with a pair distance " + std::to_string(p.distance));
}

} // namespace

double union_bound_mimo_shifted(const MimoBoundParams& b, double beta) {
    b.validate();
    check_regular(b, beta);
    const double near = std::pow(1.0 / (4.0 * beta * beta), b.nr);
    double sum = 0.0;
    for (const auto& p : b.pairs) {
        const double r = p.distance - beta;
        sum += double(p.count) * (std::pow(1.0 / (4.0 * r * r), b.nr) + near);
    }
    return b.prefactor() * sum;
}

double union_bound_mimo_shifted_prime(const MimoBoundParams& b, double beta) {
    b.validate();
    check_regular(b, beta);
    // d/dbeta (1/(4 r^2))^Nr = 2 Nr (1/(4 r^2))^Nr / r with r = d - beta, and
    // d/dbeta (1/(4 beta^2))^Nr = -2 Nr (1/(4 beta^2))^Nr / beta.
    const double n = b.nr;
    const double near = -2.0 * n * std::pow(1.0 / (4.0 * beta * beta), b.nr) / beta;
    double sum = 0.0;
    for (const auto& p : b.pairs) {
        const double r = p.distance - beta;
        sum += double(p.count) * (2.0 * n * std::pow(1.0 / (4.0 * r * r), b.nr) / r + near);
    }
    return b.prefactor() * sum;
}

} // namespace subml
