#ifndef EXRENEW_VOLTERRA_HPP
#define EXRENEW_VOLTERRA_HPP

#include <functional>
#include <variant>
#include <vector>

#include "exrenew/model.hpp"
#include "exrenew/renewal.hpp"

namespace exrenew {

// Renewal-type equation A(t) = a(t) + E[ (F * A(.|F))(t) ] for exchangeable
// arrivals, whose solution is A(t) = a(t) + E[ (a * U(.|F))(t) ].  With
// conditionally exponential inter-arrivals U(t|theta) = theta t, the inner
// Stieltjes convolution collapses to theta * integral_0^t a(x) dx.

struct ExpSaturatingDrift {
    double beta; // a(t) = 1 - e^{-beta t}
};

struct TabulatedDrift {
    std::vector<double> grid;   // strictly increasing, starting at 0
    std::vector<double> values; // nonnegative, linearly interpolated
};

using DriftFunction = std::variant<ExpSaturatingDrift, TabulatedDrift>;

void validate(const DriftFunction& a);
double drift_value(const DriftFunction& a, double t);

// Mixing law of the conditional exponential rate.
struct DiscreteExpMixture {
    std::vector<double> weights; // nonnegative, sum to 1 within 1e-12
    std::vector<double> rates;   // positive
};

struct GammaExpMixture {
    double alpha; // shape
    double lambda; // rate
};

using MixtureOfExponentialsModel = std::variant<DiscreteExpMixture, GammaExpMixture>;

void validate(const MixtureOfExponentialsModel& mix);

// Closed-form solutions for the exponentially saturating drift.
// Discrete mixture of exponential rates:
//   A(t) = 1 - e^{-beta t} + (t + (e^{-beta t}-1)/beta) * sum_i p_i alpha_i.
double solve_closed_discrete(double t, double beta, const DiscreteExpMixture& mix);
// Gamma(alpha, rate lambda) mixing:
//   A(t) = 1 - e^{-beta t} + (alpha/lambda) (t + (e^{-beta t}-1)/beta).
double solve_closed_continuous(double t, double alpha, double beta, double lambda);

// Numeric solution on a uniform grid: trapezoidal cumulative integral of the
// drift, latent rate integrated by exact weights (discrete) or
// Gauss-Legendre on the u/(1-u) map (Gamma).  O(h^2) accurate.
RenewalCurve solve_numeric(const DriftFunction& a, const MixtureOfExponentialsModel& mix,
                           const std::vector<double>& grid, int quad_nodes = 64);

// Conditional solution A(t | theta) = a(t) + theta * integral_0^t a (the
// single-atom special case of the set-indexed solution).
RenewalCurve solve_conditional(const DriftFunction& a, double theta,
                               const std::vector<double>& grid);

// Classical i.i.d. Volterra equation A = a + F * A with inter-arrival
// density f, solved by forward substitution on a uniform grid (trapezoid).
RenewalCurve solve_iid_comparator(const DriftFunction& a,
                                  const std::function<double(double)>& marginal_pdf,
                                  const std::vector<double>& grid);

// Marginal inter-arrival density/CDF induced by the mixture (exponential
// mixture for discrete weights, Lomax for Gamma mixing).
double mixture_marginal_pdf(const MixtureOfExponentialsModel& mix, double t);
double mixture_marginal_cdf(const MixtureOfExponentialsModel& mix, double t);

// Mean conditional rate E[theta], via the same quadrature the solver uses.
double mixture_mean_rate(const MixtureOfExponentialsModel& mix, int quad_nodes = 64);

// Adapter from the exchangeable model catalogue; only conditionally
// exponential variants have a renewal evaluator here (ErlangGamma with m=1).
MixtureOfExponentialsModel to_exp_mixture(const ModelSpec& model);

// Trapezoidal Stieltjes convolution (g * dH)(t) on a shared uniform grid:
// values[i] ~ integral_0^{t_i} g(t_i - x) dH(x).  Used by the solver tests
// to validate the fixed-point property.
std::vector<double> stieltjes_convolve(const std::vector<double>& g,
                                       const std::vector<double>& H,
                                       const std::vector<double>& grid);

} // namespace exrenew

#endif
