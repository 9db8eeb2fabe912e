#include "exrenew/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include "exrenew/special.hpp"

namespace exrenew {

void validate(const ErlangParams& p) {
    if (p.shape < 1) throw std::invalid_argument("Erlang: shape must be a positive integer");
    if (!(p.rate > 0.0)) throw std::invalid_argument("Erlang: rate must be positive");
}

void validate(const GammaParams& p) {
    if (!(p.shape > 0.0) || !(p.rate > 0.0))
        throw std::invalid_argument("Gamma: shape and rate must be positive");
}

void validate(const LomaxParams& p) {
    if (!(p.scale > 0.0) || !(p.shape > 0.0))
        throw std::invalid_argument("Lomax: scale and shape must be positive");
}

double erlang_pdf(double t, const ErlangParams& p) {
    validate(p);
    if (t < 0.0) return 0.0;
    if (t == 0.0) return p.shape == 1 ? p.rate : 0.0;
    // exp through logs: rate^m t^(m-1) e^{-rate t} / (m-1)!
    const double lp = p.shape * std::log(p.rate) + (p.shape - 1) * std::log(t) - p.rate * t -
                      std::lgamma(static_cast<double>(p.shape));
    return std::exp(lp);
}

double erlang_cdf(double t, const ErlangParams& p) {
    validate(p);
    if (t < 0.0) throw std::invalid_argument("erlang_cdf: t must be nonnegative");
    if (t == 0.0) return 0.0;
    // Regularized lower incomplete gamma; the series/continued-fraction
    // split keeps large rate*t stable where the finite Poisson sum is not.
    return regularized_gamma_p(static_cast<double>(p.shape), p.rate * t);
}

double erlang_laplace(double s, const ErlangParams& p) {
    validate(p);
    if (s < 0.0) throw std::invalid_argument("erlang_laplace: s must be nonnegative");
    return std::pow(p.rate / (p.rate + s), static_cast<double>(p.shape));
}

double gamma_pdf(double t, const GammaParams& p) {
    validate(p);
    if (t < 0.0) return 0.0;
    if (t == 0.0) {
        if (p.shape < 1.0) return INFINITY;
        return p.shape == 1.0 ? p.rate : 0.0;
    }
    return std::exp(p.shape * std::log(p.rate) + (p.shape - 1.0) * std::log(t) - p.rate * t -
                    std::lgamma(p.shape));
}

double gamma_cdf(double t, const GammaParams& p) {
    validate(p);
    if (t <= 0.0) return 0.0;
    return regularized_gamma_p(p.shape, p.rate * t);
}

double lomax_pdf(double t, const LomaxParams& p) {
    validate(p);
    if (t < 0.0) return 0.0;
    return p.shape / p.scale * std::pow(p.scale / (p.scale + t), p.shape + 1.0);
}

double lomax_cdf(double t, const LomaxParams& p) {
    validate(p);
    if (t <= 0.0) return 0.0;
    return -std::expm1(p.shape * std::log(p.scale / (p.scale + t)));
}

double erlang_gamma_marginal_pdf(double t, int m, double alpha) {
    if (m < 1) throw std::invalid_argument("erlang_gamma_marginal_pdf: m must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("erlang_gamma_marginal_pdf: alpha must be positive");
    if (t < 0.0) return 0.0;
    if (t == 0.0) return m == 1 ? alpha : 0.0;
    const double lp = std::lgamma(alpha + m) - std::lgamma(alpha) - std::lgamma(static_cast<double>(m)) +
                      (m - 1) * std::log(t) - (m + alpha) * std::log1p(t);
    return std::exp(lp);
}

double exp_uniform_marginal_pdf(double t, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("exp_uniform_marginal_pdf: lambda must be positive");
    if (t < 0.0) return 0.0;
    const double x = 2.0 * lambda * t;
    if (x < 1e-4) {
        // 1 - e^{-x}(1+x) = x^2/2 - x^3/3 + x^4/8 - ...; dividing by
        // t^2 = x^2/(4 lambda^2) gives f = 2 lambda (1 - 2x/3 + x^2/4 - ...).
        return 2.0 * lambda * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0);
    }
    const double bracket = 1.0 - std::exp(-x) * (1.0 + x);
    return bracket / (2.0 * lambda * t * t);
}

double SignedErlangMixture::cdf(double t) const {
    double sum = 0.0;
    for (const Component& c : components)
        sum += c.coeff * erlang_cdf(t, ErlangParams{c.shape, c.rate});
    return sum;
}

double SignedErlangMixture::cdf_clamped(double t) const {
    const double raw = cdf(t);
    if (raw < 0.0) return 0.0;
    if (raw > 1.0) return 1.0;
    return raw;
}

double draw(const ErlangParams& p, RngStream& rng) {
    validate(p);
    return rng.erlang(p.shape, p.rate);
}

double draw(const GammaParams& p, RngStream& rng) {
    validate(p);
    return rng.gamma(p.shape, p.rate);
}

double draw(const LomaxParams& p, RngStream& rng) {
    validate(p);
    return rng.lomax(p.scale, p.shape);
}

} // namespace exrenew
