#include "exrenew/renewal.hpp"

#include <cmath>
#include <stdexcept>

#include "exrenew/errors.hpp"
#include "exrenew/quadrature.hpp"
#include "exrenew/special.hpp"

namespace exrenew {

void validate_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("grid must be nonempty");
    if (grid.front() < 0.0) throw std::invalid_argument("grid must be nonnegative");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
}

long count_events(const std::vector<double>& inter_arrivals, double t) {
    if (t < 0.0) throw std::invalid_argument("count_events: t must be nonnegative");
    double s = 0.0;
    long n = 0;
    for (double x : inter_arrivals) {
        if (!(x > 0.0)) throw std::invalid_argument("count_events: inter-arrivals must be positive");
        s += x;
        if (s > t) break;
        ++n;
    }
    return n;
}

namespace {

void check_erlang_args(int m, double scale_like) {
    if (m < 1) throw std::invalid_argument("renewal closed form: m must be >= 1");
    if (!(scale_like > 0.0)) throw std::invalid_argument("renewal closed form: parameter must be positive");
}

// Terms of the roots-of-unity sums for k = 1..m-1.  The conditional version
// uses 1 - exp(-lambda t (1-z^k)); the Gamma(alpha,1)-mixed version replaces
// the exponential by its mixture integral (1 + t(1-z^k))^{-alpha}.
std::complex<double> unity_term_conditional(double t, int m, double lambda, int k) {
    const double ang = 2.0 * M_PI * k / m;
    const std::complex<double> z(std::cos(ang), std::sin(ang));
    const std::complex<double> om = 1.0 - z;
    return z / om * (1.0 - std::exp(-lambda * t * om));
}

std::complex<double> unity_term_mixed(double t, int m, double alpha, int k) {
    const double ang = 2.0 * M_PI * k / m;
    const std::complex<double> z(std::cos(ang), std::sin(ang));
    const std::complex<double> om = 1.0 - z;
    // Re(1 + t(1-z)) >= 1 > 0, so the principal power is the right branch.
    return z / om * (1.0 - std::pow(1.0 + t * om, -alpha));
}

} // namespace

double erlang_conditional_renewal(double t, int m, double lambda) {
    check_erlang_args(m, lambda);
    if (t < 0.0) throw std::invalid_argument("erlang_conditional_renewal: t must be nonnegative");
    double sum = lambda * t / m;
    // Conjugate pairs k and m-k contribute 2 Re(term); even m has the real
    // middle term z = -1.
    for (int k = 1; 2 * k < m; ++k)
        sum += 2.0 * unity_term_conditional(t, m, lambda, k).real() / m;
    if (m % 2 == 0) sum += -0.5 * (1.0 - std::exp(-2.0 * lambda * t)) / m;
    return sum;
}

std::complex<double> erlang_conditional_renewal_complex(double t, int m, double lambda) {
    check_erlang_args(m, lambda);
    std::complex<double> sum(lambda * t / m, 0.0);
    for (int k = 1; k < m; ++k) sum += unity_term_conditional(t, m, lambda, k) / static_cast<double>(m);
    return sum;
}

double erlang_gamma_mixed_renewal(double t, int m, double alpha) {
    check_erlang_args(m, alpha);
    if (t < 0.0) throw std::invalid_argument("erlang_gamma_mixed_renewal: t must be nonnegative");
    double sum = alpha * t / m;
    for (int k = 1; 2 * k < m; ++k)
        sum += 2.0 * unity_term_mixed(t, m, alpha, k).real() / m;
    if (m % 2 == 0) sum += -0.5 * (1.0 - std::pow(1.0 + 2.0 * t, -alpha)) / m;
    return sum;
}

std::complex<double> erlang_gamma_mixed_renewal_complex(double t, int m, double alpha) {
    check_erlang_args(m, alpha);
    std::complex<double> sum(alpha * t / m, 0.0);
    for (int k = 1; k < m; ++k) sum += unity_term_mixed(t, m, alpha, k) / static_cast<double>(m);
    return sum;
}

SeriesResult series_mixed_renewal(double t, int m, double alpha, double tol, int max_terms) {
    check_erlang_args(m, alpha);
    if (t < 0.0) throw std::invalid_argument("series_mixed_renewal: t must be nonnegative");
    if (!(tol > 0.0)) throw std::invalid_argument("series_mixed_renewal: tol must be positive");
    if (t == 0.0) return {0.0, 0.0, 0};
    // P(S_n <= t): S_n | lambda ~ Gamma(nm, lambda) and lambda ~ Gamma(alpha, 1)
    // makes S_n a beta-prime variable, P(S_n <= t) = I_{t/(1+t)}(n m, alpha).
    const double x = t / (1.0 + t);
    double sum = 0.0;
    double prev = 0.0;
    for (int n = 1; n <= max_terms; ++n) {
        const double term = regularized_beta(static_cast<double>(n) * m, alpha, x);
        sum += term;
        const double ratio = n > 1 && prev > 0.0 ? term / prev : 1.0;
        if (n > 1 && term < tol && ratio < 0.9) {
            const double tail = term * ratio / (1.0 - ratio);
            return {sum, tail, n};
        }
        prev = term;
    }
    throw NumericalError("series_mixed_renewal: series not converged within max_terms");
}

double renewal_lower_bound(double t, const ModelSpec& model) {
    validate(model);
    if (t < 0.0) throw std::invalid_argument("renewal_lower_bound: t must be nonnegative");
    // U(t) >= t E[1/E[T|latent]] - 1; the conditional means are m/lambda and
    // 1/theta, so the bound needs only the mixing mean of the reciprocal.
    if (const auto* eg = std::get_if<ErlangGammaModel>(&model)) return t * eg->alpha / eg->m - 1.0;
    if (const auto* eu = std::get_if<ExpUniformModel>(&model)) return eu->lambda * t - 1.0;
    throw std::domain_error("renewal_lower_bound: no closed form for this variant");
}

double mixed_renewal_laplace(double s, const ModelSpec& model, int quad_nodes) {
    validate(model);
    if (!(s > 0.0)) throw std::invalid_argument("mixed_renewal_laplace: s must be positive");
    double integral;
    if (const auto* eg = std::get_if<ErlangGammaModel>(&model)) {
        const int m = eg->m;
        const double alpha = eg->alpha;
        const double lognorm = std::lgamma(alpha);
        integral = integrate_halfline(
            [&](double lam) {
                // L/(1-L) for L = (lam/(lam+s))^m, against the Gamma(alpha,1)
                // density; 1-L via expm1 stays accurate for lam >> s.
                const double logL = m * std::log1p(-s / (lam + s));
                const double one_minus = -std::expm1(logL);
                if (!(one_minus > 0.0))
                    throw NumericalError("mixed_renewal_laplace: divergent integrand (L_F -> 1)");
                const double ratio = std::exp(logL) / one_minus;
                const double dens = std::exp((alpha - 1.0) * std::log(lam) - lam - lognorm);
                return ratio * dens;
            },
            quad_nodes);
    } else if (const auto* eu = std::get_if<ExpUniformModel>(&model)) {
        // L/(1-L) = theta/s for Exp(theta); uniform mixing integrates exactly
        // but goes through the same quadrature for uniformity of treatment.
        integral = integrate_finite([&](double th) { return th / s / (2.0 * eu->lambda); }, 0.0,
                                    2.0 * eu->lambda, quad_nodes);
    } else {
        throw std::domain_error("mixed_renewal_laplace: unsupported variant");
    }
    if (!std::isfinite(integral))
        throw NumericalError("mixed_renewal_laplace: integral not finite");
    // Plain transform of U: integral e^{-st} U(t) dt = (1/s) integral L/(1-L) d mu,
    // since U(0) = 0 ties the Stieltjes and plain transforms by a factor s.
    return integral / s;
}

void conditional_poisson_mixing(const ModelSpec& model, double& phi, double& sigma2) {
    validate(model);
    if (const auto* eg = std::get_if<ErlangGammaModel>(&model)) {
        if (eg->m != 1)
            throw std::domain_error("counting covariance: conditionally Poisson form needs m = 1");
        phi = eg->alpha;
        sigma2 = eg->alpha;
        return;
    }
    if (const auto* eu = std::get_if<ExpUniformModel>(&model)) {
        phi = eu->lambda;
        sigma2 = eu->lambda * eu->lambda / 3.0; // Var Uniform(0, 2 lambda)
        return;
    }
    throw std::domain_error("counting covariance: unsupported variant");
}

double mixed_covariance(double t, double s, const ModelSpec& model) {
    if (!(t > 0.0) || s < 0.0)
        throw std::invalid_argument("mixed_covariance: need t > 0 and s >= 0");
    double phi, sigma2;
    conditional_poisson_mixing(model, phi, sigma2);
    // N(.)|theta Poisson: Cov = E[theta] t + Var(theta) t (t+s).
    return t * phi + t * (t + s) * sigma2;
}

double mixed_correlation(double t, double s, const ModelSpec& model) {
    if (!(t > 0.0) || s < 0.0)
        throw std::invalid_argument("mixed_correlation: need t > 0 and s >= 0");
    double phi, sigma2;
    conditional_poisson_mixing(model, phi, sigma2);
    const double num = t * (phi + (t + s) * sigma2);
    const double den = std::sqrt(t * (t + s)) *
                       std::sqrt((phi + t * sigma2) * (phi + (t + s) * sigma2));
    return num / den;
}

NhppEquivalent nhpp_equivalent(double t, double phi, double sigma2) {
    if (!(t >= 0.0)) throw std::invalid_argument("nhpp_equivalent: t must be nonnegative");
    if (!(phi > 0.0) || !(sigma2 >= 0.0))
        throw std::invalid_argument("nhpp_equivalent: need phi > 0, sigma2 >= 0");
    const double denom = phi + t * sigma2;
    return {t / denom, phi / (denom * denom)};
}

double nhpp_correlation(double t, double s, double phi, double sigma2) {
    if (!(t > 0.0) || s < 0.0)
        throw std::invalid_argument("nhpp_correlation: need t > 0 and s >= 0");
    const double lt = nhpp_equivalent(t, phi, sigma2).cumulative;
    const double lts = nhpp_equivalent(t + s, phi, sigma2).cumulative;
    return std::sqrt(lt / lts);
}

RenewalCurve empirical_renewal_curve(const std::vector<std::vector<double>>& sequences,
                                     const std::vector<double>& grid) {
    validate_grid(grid);
    if (sequences.empty()) throw std::invalid_argument("empirical_renewal_curve: no sequences");
    RenewalCurve curve;
    curve.grid = grid;
    curve.values.assign(grid.size(), 0.0);
    for (const auto& seq : sequences)
        for (std::size_t g = 0; g < grid.size(); ++g)
            curve.values[g] += static_cast<double>(count_events(seq, grid[g]));
    for (double& v : curve.values) v /= static_cast<double>(sequences.size());
    return curve;
}

} // namespace exrenew
