#include "exrenew/mc.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "exrenew/errors.hpp"

namespace exrenew {

namespace {

// Accumulators hold integer-valued long doubles: counts are integers, so the
// partial sums are exact regardless of associativity and the parallel kernel
// reproduces the serial reference bit for bit.
struct Accumulator {
    std::vector<long double> sum, sumsq;
    explicit Accumulator(std::size_t g) : sum(g, 0.0L), sumsq(g, 0.0L) {}
    void add(const std::vector<long>& counts) {
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const long double c = static_cast<long double>(counts[i]);
            sum[i] += c;
            sumsq[i] += c * c;
        }
    }
    void merge(const Accumulator& other) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += other.sum[i];
            sumsq[i] += other.sumsq[i];
        }
    }
};

RenewalCurve finalize(const std::vector<double>& grid, const Accumulator& acc, long R) {
    RenewalCurve curve;
    curve.grid = grid;
    curve.values.resize(grid.size());
    curve.stderrs.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const long double mean = acc.sum[i] / R;
        curve.values[i] = static_cast<double>(mean);
        if (R > 1) {
            long double var = (acc.sumsq[i] - mean * mean * R) / (R - 1);
            if (var < 0.0L) var = 0.0L;
            curve.stderrs[i] = static_cast<double>(std::sqrt(static_cast<double>(var / R)));
        } else {
            curve.stderrs[i] = 0.0;
        }
    }
    return curve;
}

void check_mc_args(const ModelSpec& model, const std::vector<double>& grid, const McOptions& opts) {
    validate(model);
    validate_grid(grid);
    if (opts.replicates < 1) throw std::invalid_argument("Monte Carlo: replicates must be >= 1");
    if (opts.max_events < 1) throw std::invalid_argument("Monte Carlo: max_events must be >= 1");
    if (!renewal_finiteness(model))
        throw std::domain_error("Monte Carlo: model has an infinite renewal function");
}

} // namespace

std::vector<long> simulate_counts(const ModelSpec& model, const std::vector<double>& grid,
                                  RngStream& rng, long max_events) {
    const double horizon = grid.back();
    std::vector<long> counts(grid.size(), 0);

    // One inter-arrival sampler per latent draw; the latent is drawn here so
    // each replicate gets its own.
    double latent = 0.0;
    int kind;
    int erlang_m = 0;
    std::optional<PolyaUrn> urn;
    if (const auto* eg = std::get_if<ErlangGammaModel>(&model)) {
        kind = 0;
        latent = rng.gamma(eg->alpha, 1.0);
        erlang_m = eg->m;
    } else if (const auto* eu = std::get_if<ExpUniformModel>(&model)) {
        kind = 1;
        do { latent = rng.uniform(0.0, 2.0 * eu->lambda); } while (latent <= 0.0);
    } else if (const auto* gp = std::get_if<Gamma2ParetoModel>(&model)) {
        kind = 2;
        latent = rng.pareto(gp->k, gp->alpha);
    } else {
        kind = 3;
        urn.emplace(std::get<DirichletProcessModel>(model), rng);
    }

    double s = 0.0;
    long n = 0;
    std::size_t g = 0;
    for (;;) {
        double x;
        switch (kind) {
            case 0: x = rng.erlang(erlang_m, latent); break;
            case 1: x = rng.exponential(latent); break;
            case 2: x = rng.gamma(2.0, latent); break;
            default: x = urn->next(); break;
        }
        s += x;
        if (s > horizon) break;
        while (g < counts.size() && grid[g] < s) counts[g++] = n;
        ++n;
        if (n >= max_events)
            throw NumericalError("Monte Carlo: replicate exceeded max_events before the horizon");
    }
    while (g < counts.size()) counts[g++] = n;
    return counts;
}

RenewalCurve mc_renewal_function(const ModelSpec& model, const std::vector<double>& grid,
                                 const McOptions& opts) {
    check_mc_args(model, grid, opts);
    Accumulator total(grid.size());
    bool failed = false;
    std::string error_message;
#pragma omp parallel
    {
        Accumulator local(grid.size());
#pragma omp for schedule(static) nowait
        for (long r = 0; r < opts.replicates; ++r) {
            try {
                RngStream rng = RngStream::from(opts.seed, static_cast<std::uint64_t>(r));
                local.add(simulate_counts(model, grid, rng, opts.max_events));
            } catch (const std::exception& e) {
#pragma omp critical(exrenew_mc_error)
                {
                    failed = true;
                    error_message = e.what();
                }
            }
        }
#pragma omp critical(exrenew_mc_merge)
        total.merge(local);
    }
    if (failed) throw NumericalError("mc_renewal_function: " + error_message);
    return finalize(grid, total, opts.replicates);
}

RenewalCurve mc_renewal_function_serial(const ModelSpec& model, const std::vector<double>& grid,
                                        const McOptions& opts) {
    check_mc_args(model, grid, opts);
    Accumulator total(grid.size());
    for (long r = 0; r < opts.replicates; ++r) {
        RngStream rng = RngStream::from(opts.seed, static_cast<std::uint64_t>(r));
        total.add(simulate_counts(model, grid, rng, opts.max_events));
    }
    return finalize(grid, total, opts.replicates);
}

CovarianceEstimate mc_counting_covariance(const ModelSpec& model, double t, double s,
                                          const McOptions& opts) {
    if (!(t > 0.0) || s < 0.0)
        throw std::invalid_argument("mc_counting_covariance: need t > 0 and s >= 0");
    if (opts.replicates < 200)
        throw std::invalid_argument("mc_counting_covariance: needs at least 200 replicates");
    const std::vector<double> grid = s > 0.0 ? std::vector<double>{t, t + s}
                                             : std::vector<double>{t};
    check_mc_args(model, grid, opts);

    const long R = opts.replicates;
    const int B = 100; // batch-means standard error
    std::vector<long double> b1(B, 0.0L), b2(B, 0.0L), b12(B, 0.0L);
    std::vector<long> bn(B, 0);
#pragma omp parallel
    {
        std::vector<long double> l1(B, 0.0L), l2(B, 0.0L), l12(B, 0.0L);
        std::vector<long> ln(B, 0);
#pragma omp for schedule(static) nowait
        for (long r = 0; r < R; ++r) {
            RngStream rng = RngStream::from(opts.seed, static_cast<std::uint64_t>(r));
            const std::vector<long> counts = simulate_counts(model, grid, rng, opts.max_events);
            const long n1 = counts.front();
            const long n2 = counts.back();
            const int b = static_cast<int>((r * static_cast<long>(B)) / R);
            l1[b] += n1;
            l2[b] += n2;
            l12[b] += static_cast<long double>(n1) * n2;
            ln[b] += 1;
        }
#pragma omp critical(exrenew_cov_merge)
        for (int b = 0; b < B; ++b) {
            b1[b] += l1[b];
            b2[b] += l2[b];
            b12[b] += l12[b];
            bn[b] += ln[b];
        }
    }

    long double s1 = 0.0L, s2 = 0.0L, s12 = 0.0L;
    for (int b = 0; b < B; ++b) {
        s1 += b1[b];
        s2 += b2[b];
        s12 += b12[b];
    }
    const long double cov = (s12 - s1 * s2 / R) / (R - 1);

    // Spread of per-batch covariances around their mean.
    double mean_b = 0.0;
    std::vector<double> cov_b(B);
    for (int b = 0; b < B; ++b) {
        const long double nb = static_cast<long double>(bn[b]);
        cov_b[b] = static_cast<double>(b12[b] / nb - (b1[b] / nb) * (b2[b] / nb));
        mean_b += cov_b[b];
    }
    mean_b /= B;
    double var_b = 0.0;
    for (int b = 0; b < B; ++b) var_b += (cov_b[b] - mean_b) * (cov_b[b] - mean_b);
    var_b /= (B - 1);
    return {static_cast<double>(cov), std::sqrt(var_b / B)};
}

} // namespace exrenew
