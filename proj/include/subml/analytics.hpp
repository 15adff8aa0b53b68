#pragma once

// Closed-form error probabilities for the shifted-boundary detector.
//
// Conventions: constellations have unit average energy, the channel gain is
// dropped, and N0 is the total complex noise variance per receive dimension
// (N0/2 per real axis). With these conventions the per-axis error terms are
// 0.5 * erfc(distance / sqrt(N0)).

#include "subml/constellation.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace subml {

// Complementary error function, relative error below 1e-12 for |x| <= 10.
double erfc(double x);

// Gaussian tail probability, 0.5 * erfc(x / sqrt(2)).
double qfunc(double x);

// Gaussian likelihood of observing y when s was sent; sigma is the standard
// deviation of the noise along |y - s|.
double likelihood(cplx y, cplx s, double sigma);

struct SisoErrorParams {
    double d_min = 0.0;
    double n0 = 0.0;
    double beta = 0.0;

    // Throws InvalidArgument unless d_min > 0, N0 > 0 and 0 <= beta <= d_min.
    void validate() const;
};

// Per-constellation coefficient c in
//   P(e) = c * [erfc((d_min - beta)/sqrt(N0)) + erfc(beta/sqrt(N0))].
// BPSK: 1/4, 4-PAM: 3/8, square M-QAM: 1 - 1/sqrt(M). Other PAM orders throw
// UnsupportedOrder.
double ser_coefficient(Scheme scheme, unsigned order);

double ser_bpsk(const SisoErrorParams& p);
double ser_pam4(const SisoErrorParams& p);
double ser_qam16(const SisoErrorParams& p);
double ser_mqam(unsigned order, const SisoErrorParams& p);

// Dispatch on scheme using ser_coefficient.
double ser_analytic(Scheme scheme, unsigned order, const SisoErrorParams& p);

/// 16-QAM symbol error probability without dropping second-order terms.
///
/// Each axis is a 4-level single-boundary detector whose outer levels fail
/// with probability b = erfc(beta/sqrt(N0))/2 and a = erfc((d-beta)/sqrt(N0))/2
/// respectively and whose inner levels fail with a + b; a point is detected
/// when both of its axes are.
double ser_qam16_exact(const SisoErrorParams& p);

double ser_to_ber(double ser, unsigned order);

// Mean number of nearest neighbours of square M-QAM, 4 (1 - 1/sqrt(M)).
double avg_nearest_neighbors(unsigned order);

// Nearest-neighbour union bound for square M-QAM.
//   q_form   = 4(1 - 1/sqrt M) * [Q(beta/s)/2 + Q((d - beta)/s)/2],  s = sqrt(N0/2)
//   exp_form = 4(1 - 1/sqrt M) * [exp(-beta^2/4N0)/2 + exp(-(d - beta)^2/4N0)/2]
// s is the per-axis noise deviation, so q_form coincides with ser_mqam.
struct SisoUnionBound {
    double q_form;
    double exp_form;
};

SisoUnionBound union_bound_mqam_siso(unsigned order, const SisoErrorParams& p);

double binomial(unsigned n, unsigned k);

// Rayleigh-averaged pairwise error probability with Nr-fold diversity, for
// mean pair SNR gamma_c.
double pairwise_error_prob(double gamma_c, unsigned nr);

struct MimoBoundParams {
    unsigned nr = 1;
    double n0 = 1.0;
    std::vector<DistanceCount> pairs; // ordered-pair distances with multiplicity
    std::vector<unsigned> orders;     // per transmit antenna

    static MimoBoundParams from_constellation(const VectorConstellation& v, unsigned nr, double n0,
                                              std::size_t cap = kDefaultPairCap);
    static MimoBoundParams from_distances(std::span<const double> distances, unsigned nr,
                                          double n0, std::vector<unsigned> orders);

    // Throws EmptyPairs / InvalidArgument.
    void validate() const;

    // (2 N0)^Nr C(2Nr-1, Nr) / prod(M_i)
    double prefactor() const;
    double min_distance() const;
};

// High-SNR union bound on the vector error probability:
//   prefactor * sum_x sum_{x' != x} (1 / (4 |x - x'|^2))^Nr.
double union_bound_mimo(const MimoBoundParams& b);

// The same bound with every pair split into the shifted terms
//   (1 / (4 (d_ij - beta)^2))^Nr + (1 / (4 beta^2))^Nr.
// Throws SingularPoint when beta <= 0 or beta is within 1e-9 of a pair distance.
double union_bound_mimo_shifted(const MimoBoundParams& b, double beta);
double union_bound_mimo_shifted_prime(const MimoBoundParams& b, double beta);

} // namespace subml
