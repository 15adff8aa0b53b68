#pragma once

// Reference computations used to check the library from the outside. Nothing
// here calls into the analytics/solver code paths it is meant to verify.

#include <cstdint>
#include <functional>

namespace subml::oracle {

// Adaptive Gauss-Legendre quadrature of f over [a, b]. Stops once halving a
// panel changes it by less than tol or by less than 1e-15 relative.
double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth = 30);

// erfc by quadrature of 2/sqrt(pi) exp(-t^2) with the exp(-x^2) factor pulled
// out, so the relative accuracy holds far into the tail.
double erfc_quadrature(double x);
double qfunc_quadrature(double x);

// Asymptotic expansion erfc(x) ~ exp(-x^2)/(x sqrt(pi)) sum (-1)^n (2n-1)!!/(2x^2)^n,
// truncated at `terms`. Only meaningful for large x.
double erfc_asymptotic(double x, int terms = 8);

// Plain bisection on [a, b] with f(a), f(b) of opposite sign.
double bisect(const std::function<double(double)>& f, double a, double b, double xtol = 1e-15,
              int max_iter = 400);

double central_difference(const std::function<double(double)>& f, double x, double h);

// Expands the per-point 16-QAM detection products 1 - (1-x)(1-y) into the
// first-order part x + y and the second-order part x y, averaged over the 16
// points. Axis error probabilities come from plain std::erfc.
struct Qam16Expansion {
    double first_order;
    double second_order;
};
Qam16Expansion qam16_expansion(double d_min, double n0, double beta);

// Upper tail P[X >= k] and lower tail P[X <= k] of Binomial(n, p), summed in
// log space.
double binomial_upper_tail(std::uint64_t k, std::uint64_t n, double p);
double binomial_lower_tail(std::uint64_t k, std::uint64_t n, double p);

// Exact (Clopper-Pearson) interval by bisection on the tails.
struct Interval {
    double lo;
    double hi;
};
Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double level = 0.95);

} // namespace subml::oracle
