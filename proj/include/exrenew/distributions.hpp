#ifndef EXRENEW_DISTRIBUTIONS_HPP
#define EXRENEW_DISTRIBUTIONS_HPP

#include <vector>

#include "exrenew/rng.hpp"

namespace exrenew {

// Erlang(shape, rate): gamma with integer shape.
struct ErlangParams {
    int shape;
    double rate;
};

struct GammaParams {
    double shape;
    double rate;
};

// Lomax (Pareto type II): density shape*scale^shape / (t+scale)^(shape+1) on t >= 0.
struct LomaxParams {
    double scale;
    double shape;
};

void validate(const ErlangParams& p);
void validate(const GammaParams& p);
void validate(const LomaxParams& p);

double erlang_pdf(double t, const ErlangParams& p);
double erlang_cdf(double t, const ErlangParams& p);
// Laplace transform of the Erlang density: (rate/(rate+s))^shape, s >= 0.
double erlang_laplace(double s, const ErlangParams& p);

double gamma_pdf(double t, const GammaParams& p);
double gamma_cdf(double t, const GammaParams& p);

double lomax_pdf(double t, const LomaxParams& p);
double lomax_cdf(double t, const LomaxParams& p);

// Marginal density of one inter-arrival when T | lambda ~ Erlang(m, lambda)
// and lambda ~ Gamma(alpha, 1):
//   f(t) = Gamma(alpha+m) t^(m-1) / (Gamma(alpha) Gamma(m) (1+t)^(m+alpha)),
// evaluated through log-gamma so alpha up to ~1e4 is safe.
double erlang_gamma_marginal_pdf(double t, int m, double alpha);

// Marginal density when T | theta ~ Exp(theta) and theta ~ Uniform(0, 2*lambda):
//   f(t) = (1/(2 lambda)) t^-2 [1 - e^(-2 lambda t) (1 + 2 lambda t)],
// with the removable singularity at 0 filled by the limit f(0+) = lambda.
// A series branch keeps small t accurate (the bracket cancels to O(t^2)).
double exp_uniform_marginal_pdf(double t, double lambda);

// Signed mixture of Erlang CDFs: sum_i coeff_i * ErlangCDF(t; shape_i, rate_i).
// Coefficients may be negative and large; cdf() returns the raw signed sum
// (internal series must never clamp), cdf_clamped() clips to [0,1] for
// reporting only.
struct SignedErlangMixture {
    struct Component {
        double coeff;
        int shape;
        double rate;
    };
    std::vector<Component> components;

    double cdf(double t) const;
    double cdf_clamped(double t) const;
};

double draw(const ErlangParams& p, RngStream& rng);
double draw(const GammaParams& p, RngStream& rng);
double draw(const LomaxParams& p, RngStream& rng);

} // namespace exrenew

#endif
