#ifndef EXRENEW_RENEWAL_HPP
#define EXRENEW_RENEWAL_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "exrenew/model.hpp"

namespace exrenew {

struct RenewalCurve {
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> stderrs; // empty unless Monte Carlo
};

// Grid must be strictly increasing and nonnegative.
void validate_grid(const std::vector<double>& grid);

// Number of renewals by time t: largest n with T_1 + ... + T_n <= t.
long count_events(const std::vector<double>& inter_arrivals, double t);

// Renewal function of the Erlang(m, lambda) renewal process, the
// roots-of-unity closed form
//   U(t|lambda) = lambda t/m + (1/m) sum_{k=1}^{m-1} z^k/(1-z^k) (1 - e^{-lambda t (1-z^k)}),
// z = e^{2 pi i / m}, evaluated with conjugate-pair folding so the result is
// real by construction.
double erlang_conditional_renewal(double t, int m, double lambda);

// Naive complex-sum evaluation of the same formula; reference path used by
// tests to bound the imaginary residue.
std::complex<double> erlang_conditional_renewal_complex(double t, int m, double lambda);

// Mixed renewal function for ErlangGamma(m, alpha): the Gamma(alpha,1)
// mixture integrates each exponential in closed form,
//   U(t) = alpha t/m + (1/m) sum_{k=1}^{m-1} z^k/(1-z^k) (1 - (1 + t(1-z^k))^{-alpha}).
double erlang_gamma_mixed_renewal(double t, int m, double alpha);
std::complex<double> erlang_gamma_mixed_renewal_complex(double t, int m, double alpha);

struct SeriesResult {
    double value;
    double tail_estimate; // geometric-ratio bound on the truncated tail
    int terms;
};

// Series form U(t) = sum_{n>=1} P(S_n <= t) for ErlangGamma(m, alpha), with
// P(S_n <= t) = I_{t/(1+t)}(n m, alpha) (regularized incomplete beta).
// Truncates at the first term < tol whose ratio to its predecessor is < 0.9;
// signals NumericalError if max_terms is hit first.
SeriesResult series_mixed_renewal(double t, int m, double alpha, double tol, int max_terms = 100000);

// Lower bound U(t) >= t * E[1/E[T|latent]] - 1:
//   ErlangGamma: t alpha/m - 1;  ExpUniform: lambda t - 1.
// Other variants are rejected.
double renewal_lower_bound(double t, const ModelSpec& model);

// Plain Laplace transform of the mixed renewal function,
//   L_U(s) = (1/s) * integral L_F(s)/(1 - L_F(s)) d mu(F),
// by Gauss-Legendre quadrature over the latent parameter (lambda = u/(1-u)
// map for the Gamma mixing).  ErlangGamma and ExpUniform only.
double mixed_renewal_laplace(double s, const ModelSpec& model, int quad_nodes = 64);

// Counting-process covariance for conditionally Poisson models (ErlangGamma
// with m = 1, ExpUniform), where N(t) | theta ~ Poisson(theta t):
//   Cov(N(t), N(t+s)) = t phi + t (t+s) sigma^2,
// phi/sigma^2 the mixing mean/variance.  Other variants are rejected.
double mixed_covariance(double t, double s, const ModelSpec& model);
double mixed_correlation(double t, double s, const ModelSpec& model);

// Mixing mean phi and variance sigma^2 of the conditional rate, for the
// conditionally Poisson variants above.
void conditional_poisson_mixing(const ModelSpec& model, double& phi, double& sigma2);

struct NhppEquivalent {
    double cumulative; // Lambda(t) = t / (phi + t sigma^2)
    double rate;       // lambda(t) = phi / (sigma^2 t + phi)^2
};

// The inhomogeneous-Poisson process whose counting correlation
// sqrt(Lambda(t)/Lambda(t+s)) reproduces the mixed model's correlation.
NhppEquivalent nhpp_equivalent(double t, double phi, double sigma2);
double nhpp_correlation(double t, double s, double phi, double sigma2);

// Pointwise mean of count_events across the sequences of a data set.
RenewalCurve empirical_renewal_curve(const std::vector<std::vector<double>>& sequences,
                                     const std::vector<double>& grid);

} // namespace exrenew

#endif
