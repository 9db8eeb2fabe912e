#include "exrenew/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "exrenew/quadrature.hpp"

namespace exrenew {

namespace {

// The numeric solver assumes a uniform grid; trapezoid error control and the
// i.i.d. forward substitution both rely on a constant step.
double uniform_step(const std::vector<double>& grid) {
    validate_grid(grid);
    if (grid.size() < 2) throw std::invalid_argument("solver grid needs at least 2 points");
    if (grid.front() != 0.0) throw std::invalid_argument("solver grid must start at 0");
    const double h = grid[1] - grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double step = grid[i] - grid[i - 1];
        if (std::fabs(step - h) > 1e-9 * h)
            throw std::invalid_argument("solver grid must be uniform");
    }
    return h;
}

// Latent-rate quadrature: weights w_j and nodes theta_j with
// sum_j w_j g(theta_j) ~ E[g(theta)].
void mixing_rule(const MixtureOfExponentialsModel& mix, int quad_nodes,
                 std::vector<double>& nodes, std::vector<double>& weights) {
    if (const auto* d = std::get_if<DiscreteExpMixture>(&mix)) {
        nodes = d->rates;
        weights = d->weights;
        return;
    }
    const auto& g = std::get<GammaExpMixture>(mix);
    const QuadratureRule& rule = gauss_legendre(quad_nodes);
    const double lognorm = g.alpha * std::log(g.lambda) - std::lgamma(g.alpha);
    nodes.clear();
    weights.clear();
    nodes.reserve(rule.nodes.size());
    weights.reserve(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        // theta = u/(1-u) maps the unit interval onto the positive axis.
        const double u = 0.5 * (rule.nodes[i] + 1.0);
        const double om = 1.0 - u;
        const double theta = u / om;
        if (theta <= 0.0) continue;
        const double dens = std::exp(lognorm + (g.alpha - 1.0) * std::log(theta) - g.lambda * theta);
        weights.push_back(0.5 * rule.weights[i] * dens / (om * om));
        nodes.push_back(theta);
    }
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& values, double h) {
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t i = 1; i < values.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
    return out;
}

} // namespace

void validate(const DriftFunction& a) {
    if (const auto* e = std::get_if<ExpSaturatingDrift>(&a)) {
        if (!(e->beta > 0.0)) throw std::invalid_argument("drift: beta must be positive");
        return;
    }
    const auto& t = std::get<TabulatedDrift>(a);
    validate_grid(t.grid);
    if (t.grid.size() != t.values.size() || t.grid.size() < 2)
        throw std::invalid_argument("tabulated drift: grid/value size mismatch");
    if (t.grid.front() != 0.0) throw std::invalid_argument("tabulated drift: grid must start at 0");
    for (double v : t.values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("tabulated drift: values must be finite and nonnegative");
}

double drift_value(const DriftFunction& a, double t) {
    if (t < 0.0) throw std::invalid_argument("drift_value: t must be nonnegative");
    if (const auto* e = std::get_if<ExpSaturatingDrift>(&a)) return -std::expm1(-e->beta * t);
    const auto& tab = std::get<TabulatedDrift>(a);
    if (t > tab.grid.back()) throw std::invalid_argument("drift_value: t beyond tabulated range");
    auto it = std::lower_bound(tab.grid.begin(), tab.grid.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - tab.grid.begin());
    if (hi == 0) return tab.values.front();
    if (tab.grid[hi] == t) return tab.values[hi];
    const double w = (t - tab.grid[hi - 1]) / (tab.grid[hi] - tab.grid[hi - 1]);
    return (1.0 - w) * tab.values[hi - 1] + w * tab.values[hi];
}

void validate(const MixtureOfExponentialsModel& mix) {
    if (const auto* d = std::get_if<DiscreteExpMixture>(&mix)) {
        if (d->weights.empty() || d->weights.size() != d->rates.size())
            throw std::invalid_argument("discrete mixture: weights/rates size mismatch");
        double sum = 0.0;
        for (double w : d->weights) {
            if (!(w >= 0.0)) throw std::invalid_argument("discrete mixture: weights must be nonnegative");
            sum += w;
        }
        if (std::fabs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("discrete mixture: weights must sum to 1");
        for (double r : d->rates)
            if (!(r > 0.0)) throw std::invalid_argument("discrete mixture: rates must be positive");
        return;
    }
    const auto& g = std::get<GammaExpMixture>(mix);
    if (!(g.alpha > 0.0) || !(g.lambda > 0.0))
        throw std::invalid_argument("gamma mixture: alpha and lambda must be positive");
}

double solve_closed_discrete(double t, double beta, const DiscreteExpMixture& mix) {
    validate(MixtureOfExponentialsModel{mix});
    if (!(beta > 0.0)) throw std::invalid_argument("solve_closed_discrete: beta must be positive");
    if (t < 0.0) throw std::invalid_argument("solve_closed_discrete: t must be nonnegative");
    double mean_rate = 0.0;
    for (std::size_t i = 0; i < mix.weights.size(); ++i) mean_rate += mix.weights[i] * mix.rates[i];
    const double a = -std::expm1(-beta * t);
    return a + (t + std::expm1(-beta * t) / beta) * mean_rate;
}

double solve_closed_continuous(double t, double alpha, double beta, double lambda) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("solve_closed_continuous: parameters must be positive");
    if (t < 0.0) throw std::invalid_argument("solve_closed_continuous: t must be nonnegative");
    // A = a + E[theta] integral_0^t a, E[theta] = alpha/lambda for
    // Gamma(alpha, rate lambda) mixing of exponential conditionals.
    const double a = -std::expm1(-beta * t);
    return a + (alpha / lambda) * (t + std::expm1(-beta * t) / beta);
}

RenewalCurve solve_conditional(const DriftFunction& a, double theta,
                               const std::vector<double>& grid) {
    validate(a);
    if (!(theta > 0.0)) throw std::invalid_argument("solve_conditional: theta must be positive");
    const double h = uniform_step(grid);
    std::vector<double> av(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) av[i] = drift_value(a, grid[i]);
    const std::vector<double> ia = cumulative_trapezoid(av, h);
    RenewalCurve out;
    out.grid = grid;
    out.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = av[i] + theta * ia[i];
    return out;
}

RenewalCurve solve_numeric(const DriftFunction& a, const MixtureOfExponentialsModel& mix,
                           const std::vector<double>& grid, int quad_nodes) {
    validate(a);
    validate(mix);
    if (quad_nodes < 1) throw std::invalid_argument("solve_numeric: quad_nodes must be >= 1");
    const double h = uniform_step(grid);

    std::vector<double> av(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) av[i] = drift_value(a, grid[i]);
    const std::vector<double> ia = cumulative_trapezoid(av, h);

    // Conditionally exponential: U(t|theta) = theta t, so the conditional
    // Stieltjes convolution (a * U(.|theta))(t) is exactly theta * integral a.
    std::vector<double> nodes, weights;
    mixing_rule(mix, quad_nodes, nodes, weights);

    RenewalCurve out;
    out.grid = grid;
    out.values.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double mixed = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) mixed += weights[j] * nodes[j] * ia[i];
        out.values[i] = av[i] + mixed;
    }
    return out;
}

double mixture_mean_rate(const MixtureOfExponentialsModel& mix, int quad_nodes) {
    validate(mix);
    std::vector<double> nodes, weights;
    mixing_rule(mix, quad_nodes, nodes, weights);
    double m = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) m += weights[j] * nodes[j];
    return m;
}

RenewalCurve solve_iid_comparator(const DriftFunction& a,
                                  const std::function<double(double)>& marginal_pdf,
                                  const std::vector<double>& grid) {
    validate(a);
    const double h = uniform_step(grid);
    const std::size_t n = grid.size();
    std::vector<double> av(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
        av[i] = drift_value(a, grid[i]);
        f[i] = marginal_pdf(grid[i]);
        if (!std::isfinite(f[i]) || f[i] < 0.0)
            throw std::invalid_argument("solve_iid_comparator: density must be finite and nonnegative");
    }
    // Trapezoidal forward substitution for A = a + f * A:
    //   A_i (1 - h f_0 / 2) = a_i + h/2 A_0 f_i + h sum_{k=1..i-1} A_{i-k} f_k.
    RenewalCurve out;
    out.grid = grid;
    out.values.assign(n, 0.0);
    out.values[0] = av[0];
    const double diag = 1.0 - 0.5 * h * f[0];
    if (!(diag > 0.0))
        throw std::invalid_argument("solve_iid_comparator: step too large for the density at 0");
    for (std::size_t i = 1; i < n; ++i) {
        double conv = 0.5 * out.values[0] * f[i];
        for (std::size_t k = 1; k < i; ++k) conv += out.values[i - k] * f[k];
        out.values[i] = (av[i] + h * conv) / diag;
    }
    return out;
}

double mixture_marginal_pdf(const MixtureOfExponentialsModel& mix, double t) {
    validate(mix);
    if (t < 0.0) return 0.0;
    if (const auto* d = std::get_if<DiscreteExpMixture>(&mix)) {
        double f = 0.0;
        for (std::size_t i = 0; i < d->weights.size(); ++i)
            f += d->weights[i] * d->rates[i] * std::exp(-d->rates[i] * t);
        return f;
    }
    const auto& g = std::get<GammaExpMixture>(mix);
    // Exponential conditionals under Gamma(alpha, lambda) mixing marginalize
    // to Lomax(scale lambda, shape alpha).
    return lomax_pdf(t, LomaxParams{g.lambda, g.alpha});
}

double mixture_marginal_cdf(const MixtureOfExponentialsModel& mix, double t) {
    validate(mix);
    if (t <= 0.0) return 0.0;
    if (const auto* d = std::get_if<DiscreteExpMixture>(&mix)) {
        double F = 0.0;
        for (std::size_t i = 0; i < d->weights.size(); ++i)
            F += d->weights[i] * -std::expm1(-d->rates[i] * t);
        return F;
    }
    const auto& g = std::get<GammaExpMixture>(mix);
    return lomax_cdf(t, LomaxParams{g.lambda, g.alpha});
}

MixtureOfExponentialsModel to_exp_mixture(const ModelSpec& model) {
    validate(model);
    if (const auto* eg = std::get_if<ErlangGammaModel>(&model)) {
        if (eg->m == 1) return GammaExpMixture{eg->alpha, 1.0};
        throw std::domain_error("to_exp_mixture: Erlang conditionals with m > 1 are not exponential");
    }
    throw std::domain_error("to_exp_mixture: model lacks a conditionally exponential form");
}

std::vector<double> stieltjes_convolve(const std::vector<double>& g, const std::vector<double>& H,
                                       const std::vector<double>& grid) {
    uniform_step(grid);
    if (g.size() != grid.size() || H.size() != grid.size())
        throw std::invalid_argument("stieltjes_convolve: size mismatch");
    const std::size_t n = grid.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k + 1 <= i; ++k) {
            // integral g(t_i - x) dH(x) over [x_k, x_{k+1}], trapezoid in g.
            const double dH = H[k + 1] - H[k];
            s += 0.5 * (g[i - k] + g[i - k - 1]) * dH;
        }
        out[i] = s;
    }
    return out;
}

} // namespace exrenew
