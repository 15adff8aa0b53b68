#include "subml/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace subml::oracle {

namespace {

// 10-point Gauss-Legendre rule on [-1, 1]; nodes symmetric about 0.
constexpr double kNodes[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                              0.8650633666889845, 0.9739065285171717};
constexpr double kWeights[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                0.1494513491505806, 0.0666713443086881};

double gauss10(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 5; ++i)
        sum += kWeights[i] * (f(c - h * kNodes[i]) + f(c + h * kNodes[i]));
    return h * sum;
}

double refine(const std::function<double(double)>& f, double a, double b, double whole,
              double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = gauss10(f, a, m);
    const double right = gauss10(f, m, b);
    const double both = left + right;
    const double delta = std::abs(both - whole);
    if (depth <= 0 || delta <= tol || delta <= 1e-15 * std::abs(both)) return both;
    return refine(f, a, m, left, 0.5 * tol, depth - 1) +
           refine(f, m, b, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth) {
    return refine(f, a, b, gauss10(f, a, b), tol, max_depth);
}

double erfc_quadrature(double x) {
    if (x < 0.0) return 2.0 - erfc_quadrature(-x);
    // erfc(x) = 2/sqrt(pi) exp(-x^2) int_0^inf exp(-2xu - u^2) du. The
    // integrand is below exp(-144) past u = 12. Split so that the scale of
    // the decay (1/x for large x) is resolved near u = 0.
    const auto g = [x](double u) { return std::exp(-2.0 * x * u - u * u); };
    const double knee = std::min(12.0, 40.0 / std::max(1.0, 2.0 * x));
    double integral = 0.0;
    const int pieces = 16;
    for (int i = 0; i < pieces; ++i) {
        const double a = knee * i / pieces;
        const double b = knee * (i + 1) / pieces;
        integral += integrate(g, a, b, 1e-18);
    }
    if (knee < 12.0) integral += integrate(g, knee, 12.0, 1e-18);
    return 2.0 * std::numbers::inv_sqrtpi * std::exp(-x * x) * integral;
}

double qfunc_quadrature(double x) {
    // Q(x) = 1/sqrt(2 pi) int_x^inf exp(-t^2/2) dt; for x >= 0 integrate the
    // shifted tail directly, otherwise reflect.
    if (x < 0.0) return 1.0 - qfunc_quadrature(-x);
    const auto g = [x](double u) { return std::exp(-x * u - 0.5 * u * u); };
    double integral = 0.0;
    const int pieces = 32;
    for (int i = 0; i < pieces; ++i)
        integral += integrate(g, 16.0 * i / pieces, 16.0 * (i + 1) / pieces, 1e-18);
    return std::exp(-0.5 * x * x) * integral / std::sqrt(2.0 * std::numbers::pi);
}

double erfc_asymptotic(double x, int terms) {
    double sum = 1.0;
    double term = 1.0;
    for (int n = 1; n < terms; ++n) {
        term *= -(2.0 * n - 1.0) / (2.0 * x * x);
        sum += term;
    }
    return std::exp(-x * x) / (x * std::sqrt(std::numbers::pi)) * sum;
}

double bisect(const std::function<double(double)>& f, double a, double b, double xtol,
              int max_iter) {
    double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw std::invalid_argument("bisect: no sign change");
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

Qam16Expansion qam16_expansion(double d_min, double n0, double beta) {
    const double s = std::sqrt(n0);
    const double a = 0.5 * std::erfc((d_min - beta) / s);
    const double b = 0.5 * std::erfc(beta / s);
    // Error probability of each of the four levels on one axis.
    const double e[4] = {b, a + b, a + b, a};
    Qam16Expansion out{0.0, 0.0};
    for (double x : e) {
        for (double y : e) {
            out.first_order += x + y;
            out.second_order += x * y;
        }
    }
    out.first_order /= 16.0;
    out.second_order /= 16.0;
    return out;
}

namespace {

double log_binom_pmf(std::uint64_t k, std::uint64_t n, double p) {
    const double lc = std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
                      std::lgamma(double(n - k) + 1.0);
    const double lp = k == 0 ? 0.0 : double(k) * std::log(p);
    const double lq = k == n ? 0.0 : double(n - k) * std::log1p(-p);
    return lc + lp + lq;
}

} // namespace

double binomial_upper_tail(std::uint64_t k, std::uint64_t n, double p) {
    if (k == 0) return 1.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double s = 0.0;
    for (std::uint64_t i = k; i <= n; ++i) s += std::exp(log_binom_pmf(i, n, p));
    return std::min(1.0, s);
}

double binomial_lower_tail(std::uint64_t k, std::uint64_t n, double p) {
    if (k >= n) return 1.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    double s = 0.0;
    for (std::uint64_t i = 0; i <= k; ++i) s += std::exp(log_binom_pmf(i, n, p));
    return std::min(1.0, s);
}

Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double level) {
    const double alpha = 1.0 - level;
    Interval iv{0.0, 1.0};
    if (k > 0)
        iv.lo = bisect([&](double p) { return binomial_upper_tail(k, n, p) - alpha / 2; }, 0.0,
                       1.0, 1e-14);
    if (k < n)
        iv.hi = bisect([&](double p) { return binomial_lower_tail(k, n, p) - alpha / 2; }, 0.0,
                       1.0, 1e-14);
    return iv;
}

} // namespace subml::oracle
