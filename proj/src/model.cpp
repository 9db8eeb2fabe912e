#include "exrenew/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace exrenew {

namespace {

struct ValidateVisitor {
    void operator()(const ErlangGammaModel& m) const {
        if (m.m < 1) throw std::invalid_argument("ErlangGamma: m must be a positive integer");
        if (!(m.alpha > 0.0)) throw std::invalid_argument("ErlangGamma: alpha must be positive");
    }
    void operator()(const ExpUniformModel& m) const {
        if (!(m.lambda > 0.0)) throw std::invalid_argument("ExpUniform: lambda must be positive");
    }
    void operator()(const Gamma2ParetoModel& m) const {
        if (!(m.k > 0.0)) throw std::invalid_argument("Gamma2Pareto: k must be positive");
        if (!(m.alpha > 0.0)) throw std::invalid_argument("Gamma2Pareto: alpha must be positive");
    }
    void operator()(const DirichletProcessModel& m) const {
        if (!(m.alpha > 0.0)) throw std::invalid_argument("DirichletProcess: alpha must be positive");
        std::visit([](const auto& base) { validate(base); }, m.base);
    }
};

} // namespace

void validate(const ModelSpec& model) { std::visit(ValidateVisitor{}, model); }

double base_mean(const BaseDistribution& base) {
    if (const auto* e = std::get_if<ErlangParams>(&base)) {
        validate(*e);
        return e->shape / e->rate;
    }
    const auto& l = std::get<LomaxParams>(base);
    validate(l);
    if (!(l.shape > 1.0)) throw std::domain_error("Lomax base: mean undefined for shape <= 1");
    return l.scale / (l.shape - 1.0);
}

double base_variance(const BaseDistribution& base) {
    if (const auto* e = std::get_if<ErlangParams>(&base)) {
        validate(*e);
        return e->shape / (e->rate * e->rate);
    }
    const auto& l = std::get<LomaxParams>(base);
    validate(l);
    if (!(l.shape > 2.0)) throw std::domain_error("Lomax base: variance undefined for shape <= 2");
    return l.scale * l.scale * l.shape / ((l.shape - 1.0) * (l.shape - 1.0) * (l.shape - 2.0));
}

double draw_base(const BaseDistribution& base, RngStream& rng) {
    return std::visit([&rng](const auto& p) { return draw(p, rng); }, base);
}

PolyaUrn::PolyaUrn(DirichletProcessModel model, RngStream& rng)
    : model_(std::move(model)), rng_(rng) {}

double PolyaUrn::next() {
    const double denom = model_.alpha + static_cast<double>(total_);
    if (total_ == 0 || rng_.uniform01() * denom < model_.alpha) {
        const double value = draw_base(model_.base, rng_);
        values_.push_back(value);
        counts_.push_back(1);
        ++total_;
        return value;
    }
    // Pick one of the total_ previous draws uniformly: walk the multiplicity
    // table (distinct values stay few, O(alpha log n) of them).
    long pick = static_cast<long>(rng_.uniform01() * static_cast<double>(total_));
    if (pick >= total_) pick = total_ - 1;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        pick -= counts_[i];
        if (pick < 0) {
            ++counts_[i];
            ++total_;
            return values_[i];
        }
    }
    // Unreachable if counts_ sums to total_.
    throw std::logic_error("PolyaUrn: multiplicity walk out of range");
}

SampledSequence sample_sequence(const ModelSpec& model, int n, RngStream& rng) {
    validate(model);
    if (n < 1) throw std::invalid_argument("sample_sequence: n must be >= 1");
    SampledSequence out;
    out.times.reserve(static_cast<std::size_t>(n));
    if (const auto* eg = std::get_if<ErlangGammaModel>(&model)) {
        const double lambda = rng.gamma(eg->alpha, 1.0);
        out.latent = lambda;
        for (int i = 0; i < n; ++i) out.times.push_back(rng.erlang(eg->m, lambda));
    } else if (const auto* eu = std::get_if<ExpUniformModel>(&model)) {
        double theta;
        do { theta = rng.uniform(0.0, 2.0 * eu->lambda); } while (theta <= 0.0);
        out.latent = theta;
        for (int i = 0; i < n; ++i) out.times.push_back(rng.exponential(theta));
    } else if (const auto* gp = std::get_if<Gamma2ParetoModel>(&model)) {
        const double delta = rng.pareto(gp->k, gp->alpha);
        out.latent = delta;
        for (int i = 0; i < n; ++i) out.times.push_back(rng.gamma(2.0, delta));
    } else {
        const auto& dp = std::get<DirichletProcessModel>(model);
        out.latent = std::numeric_limits<double>::quiet_NaN();
        PolyaUrn urn(dp, rng);
        for (int i = 0; i < n; ++i) out.times.push_back(urn.next());
    }
    return out;
}

double erlang_gamma_correlation(int m, double alpha) {
    return static_cast<double>(m) / (alpha + m - 1.0);
}

double theoretical_correlation(const ModelSpec& model) {
    validate(model);
    if (const auto* eg = std::get_if<ErlangGammaModel>(&model)) {
        if (!(eg->alpha > 2.0))
            throw std::domain_error("theoretical_correlation: moment undefined (needs alpha > 2)");
        return erlang_gamma_correlation(eg->m, eg->alpha);
    }
    if (const auto* dp = std::get_if<DirichletProcessModel>(&model)) {
        base_variance(dp->base); // throws if the base has no finite variance
        return 1.0 / (dp->alpha + 1.0);
    }
    throw std::domain_error("theoretical_correlation: no closed form for this variant");
}

Moments marginal_moments(const ModelSpec& model) {
    validate(model);
    if (const auto* eg = std::get_if<ErlangGammaModel>(&model)) {
        const double a = eg->alpha;
        const double m = eg->m;
        if (!(a > 1.0)) throw std::domain_error("marginal_moments: mean undefined (needs alpha > 1)");
        if (!(a > 2.0)) throw std::domain_error("marginal_moments: variance undefined (needs alpha > 2)");
        return {m / (a - 1.0), m * (a + m - 1.0) / ((a - 2.0) * (a - 1.0) * (a - 1.0))};
    }
    if (std::holds_alternative<ExpUniformModel>(model)) {
        // E[T] = E[1/theta] diverges for theta ~ Uniform(0, 2 lambda).
        throw std::domain_error("marginal_moments: moment undefined (ExpUniform has infinite mean)");
    }
    if (const auto* gp = std::get_if<Gamma2ParetoModel>(&model)) {
        // delta ~ Pareto(k, alpha) on [k, inf): E[delta^-1] = alpha/(k(alpha+1)),
        // E[delta^-2] = alpha/(k^2(alpha+2)); T | delta ~ Gamma(2, delta).
        const double a = gp->alpha;
        const double k = gp->k;
        const double inv1 = a / (k * (a + 1.0));
        const double inv2 = a / (k * k * (a + 2.0));
        const double mean = 2.0 * inv1;
        const double second = 6.0 * inv2;
        return {mean, second - mean * mean};
    }
    const auto& dp = std::get<DirichletProcessModel>(model);
    return {base_mean(dp.base), base_variance(dp.base)};
}

bool renewal_finiteness(const ModelSpec& model) {
    validate(model);
    if (const auto* gp = std::get_if<Gamma2ParetoModel>(&model)) {
        // U(t) = E[delta] t/2 + bounded; the Pareto mean is finite iff alpha > 1.
        return gp->alpha > 1.0;
    }
    return true;
}

double dp_expected_distinct(double alpha, int n) {
    if (!(alpha > 0.0)) throw std::invalid_argument("dp_expected_distinct: alpha must be positive");
    if (n < 0) throw std::invalid_argument("dp_expected_distinct: n must be nonnegative");
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) sum += alpha / (alpha + i - 1.0);
    return sum;
}

} // namespace exrenew
