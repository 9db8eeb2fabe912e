#include "exrenew/inference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "exrenew/errors.hpp"
#include "exrenew/renewal.hpp"

namespace exrenew {

namespace {

// Per-sequence sufficient statistics: the joint density depends on the data
// only through n_i, log(1 + sum_j t_ij), and the total sum of log t.
struct SuffStats {
    std::vector<long> n;
    std::vector<double> log1p_sum;
    double sum_log_t = 0.0;
    double sum_t = 0.0;
    long n_total = 0;
};

SuffStats build_stats(const SequenceSet& data) {
    SuffStats s;
    s.n.reserve(data.sequences.size());
    s.log1p_sum.reserve(data.sequences.size());
    for (const auto& seq : data.sequences) {
        double sum = 0.0;
        for (double t : seq) {
            sum += t;
            s.sum_log_t += std::log(t);
        }
        s.n.push_back(static_cast<long>(seq.size()));
        s.log1p_sum.push_back(std::log1p(sum));
        s.sum_t += sum;
        s.n_total += static_cast<long>(seq.size());
    }
    return s;
}

double log_density(const SuffStats& s, int m, double alpha) {
    const std::size_t k = s.n.size();
    double ll = -static_cast<double>(k) * std::lgamma(alpha) -
                static_cast<double>(s.n_total) * std::lgamma(static_cast<double>(m)) +
                (m - 1.0) * s.sum_log_t;
    for (std::size_t i = 0; i < k; ++i) {
        const double a_post = alpha + static_cast<double>(s.n[i]) * m;
        ll += std::lgamma(a_post) - a_post * s.log1p_sum[i];
    }
    return ll;
}

// Brent maximization of f over [a, c] with interior starting point b,
// f(b) >= max(f(a), f(c)); absolute tolerance on x.
double brent_max(const std::function<double(double)>& f, double a, double b, double c,
                 double tol, double* fbest) {
    constexpr double kGold = 0.3819660112501051;
    double x = b, w = b, v = b;
    double fx = f(x), fw = fx, fv = fx;
    double lo = std::min(a, c), hi = std::max(a, c);
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double xm = 0.5 * (lo + hi);
        const double tol1 = tol;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - xm) <= tol2 - 0.5 * (hi - lo)) break;
        bool golden = true;
        if (std::fabs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double e_old = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * e_old) && p > q * (lo - x) && p < q * (hi - x)) {
                d = p / q;
                const double u = x + d;
                if (u - lo < tol2 || hi - u < tol2) d = (xm > x) ? tol1 : -tol1;
                golden = false;
            }
        }
        if (golden) {
            e = (x >= xm) ? lo - x : hi - x;
            d = kGold * e;
        }
        const double u = (std::fabs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
        const double fu = f(u);
        if (fu >= fx) {
            if (u >= x) lo = x; else hi = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) lo = u; else hi = u;
            if (fu >= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu >= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    if (fbest) *fbest = fx;
    return x;
}

double max_alpha_impl(const SuffStats& stats, int m, double tol, double* loglik_out) {
    const auto g = [&stats, m](double log_alpha) { return log_density(stats, m, std::exp(log_alpha)); };
    // The profile in log(alpha) rises from the left (d/d.alpha -> +inf at 0)
    // and falls at the right (-> -sum log(1+S_i)), so an interior maximum
    // exists; locate a coarse bracket by scanning, then polish with Brent.
    double lo = -30.0, hi = 30.0;
    const double step = 1.0;
    for (int widen = 0; widen < 8; ++widen) {
        double best_x = lo, best_g = -std::numeric_limits<double>::infinity();
        for (double x = lo; x <= hi + 1e-12; x += step) {
            const double gx = g(x);
            if (gx > best_g) {
                best_g = gx;
                best_x = x;
            }
        }
        if (best_x > lo + 0.5 * step && best_x < hi - 0.5 * step) {
            double fbest = 0.0;
            const double xhat = brent_max(g, best_x - step, best_x, best_x + step, tol, &fbest);
            if (loglik_out) *loglik_out = fbest;
            return std::exp(xhat);
        }
        lo -= 30.0;
        hi += 30.0;
    }
    throw NumericalError("max_alpha_given_m: no interior maximum in log(alpha) within [-270, 270]");
}

} // namespace

void validate(const SequenceSet& data) {
    if (data.sequences.empty()) throw std::invalid_argument("sequence set: no sequences");
    if (data.ids.size() != data.sequences.size())
        throw std::invalid_argument("sequence set: ids and sequences differ in length");
    for (std::size_t i = 0; i < data.sequences.size(); ++i) {
        if (data.sequences[i].empty())
            throw std::invalid_argument("sequence set: sequence '" + data.ids[i] + "' is empty");
        for (double t : data.sequences[i])
            if (!(t > 0.0) || !std::isfinite(t))
                throw std::invalid_argument("sequence set: sequence '" + data.ids[i] +
                                            "' has a nonpositive or nonfinite time");
    }
}

double joint_log_density(const SequenceSet& data, int m, double alpha) {
    validate(data);
    if (m < 1) throw std::invalid_argument("joint_log_density: m must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("joint_log_density: alpha must be positive");
    return log_density(build_stats(data), m, alpha);
}

double max_alpha_given_m(const SequenceSet& data, int m, double tol, double* loglik_out) {
    validate(data);
    if (m < 1) throw std::invalid_argument("max_alpha_given_m: m must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("max_alpha_given_m: tol must be positive");
    return max_alpha_impl(build_stats(data), m, tol, loglik_out);
}

FitResult fit_mle(const SequenceSet& data, const FitOptions& opts) {
    validate(data);
    if (opts.m_min < 1 || opts.m_max < opts.m_min)
        throw std::invalid_argument("fit_mle: need 1 <= m_min <= m_max");
    const SuffStats stats = build_stats(data);
    FitResult fit;
    fit.loglik = -std::numeric_limits<double>::infinity();
    fit.m_hat = 0;
    fit.profile.reserve(static_cast<std::size_t>(opts.m_max - opts.m_min + 1));
    for (int m = opts.m_min; m <= opts.m_max; ++m) {
        double ll = 0.0;
        const double alpha = max_alpha_impl(stats, m, opts.log_alpha_tol, &ll);
        fit.profile.push_back({m, alpha, ll});
        if (ll > fit.loglik) { // ties keep the smaller m
            fit.loglik = ll;
            fit.m_hat = m;
            fit.alpha_hat = alpha;
        }
    }
    fit.corr_hat = erlang_gamma_correlation(fit.m_hat, fit.alpha_hat);
    return fit;
}

double fitted_renewal_exchangeable(double t, const FitResult& fit) {
    return erlang_gamma_mixed_renewal(t, fit.m_hat, fit.alpha_hat);
}

double fitted_renewal_iid(double t, const SequenceSet& data, int m) {
    validate(data);
    if (m < 1) throw std::invalid_argument("fitted_renewal_iid: m must be >= 1");
    const SuffStats stats = build_stats(data);
    const double lambda_hat = static_cast<double>(m) * static_cast<double>(stats.n_total) / stats.sum_t;
    return erlang_conditional_renewal(t, m, lambda_hat);
}

int pooled_iid_profile_m(const SequenceSet& data, int m_min, int m_max) {
    validate(data);
    if (m_min < 1 || m_max < m_min)
        throw std::invalid_argument("pooled_iid_profile_m: need 1 <= m_min <= m_max");
    const SuffStats stats = build_stats(data);
    const double N = static_cast<double>(stats.n_total);
    int best_m = m_min;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (int m = m_min; m <= m_max; ++m) {
        // Erlang(m, lambda) pooled log likelihood with the plug-in MLE
        // lambda_hat = m N / sum(t); the -lambda_hat * sum(t) term is -m N.
        const double lambda_hat = static_cast<double>(m) * N / stats.sum_t;
        const double ll = N * (m * std::log(lambda_hat) - std::lgamma(static_cast<double>(m))) +
                          (m - 1.0) * stats.sum_log_t - static_cast<double>(m) * N;
        if (ll > best_ll) {
            best_ll = ll;
            best_m = m;
        }
    }
    return best_m;
}

SequenceSet simulate_sequence_set(const ModelSpec& model, const std::vector<int>& lengths,
                                  std::uint64_t seed, std::uint64_t replicate) {
    validate(model);
    if (lengths.empty()) throw std::invalid_argument("simulate_sequence_set: no sequence lengths");
    SequenceSet out;
    out.ids.reserve(lengths.size());
    out.sequences.reserve(lengths.size());
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] < 1)
            throw std::invalid_argument("simulate_sequence_set: lengths must be >= 1");
        RngStream rng = RngStream::from(seed, replicate, static_cast<std::uint64_t>(i) + 1);
        out.ids.push_back("seq_" + std::to_string(i + 1));
        out.sequences.push_back(sample_sequence(model, lengths[i], rng).times);
    }
    return out;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("percentile: empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("percentile: p must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

StudyBands monte_carlo_study(const ErlangGammaModel& truth, const std::vector<int>& lengths,
                             const std::vector<double>& grid, const StudyOptions& opts) {
    validate(ModelSpec{truth});
    validate_grid(grid);
    if (opts.replicates < 1) throw std::invalid_argument("monte_carlo_study: replicates must be >= 1");
    for (int n : lengths)
        if (n < 1) throw std::invalid_argument("monte_carlo_study: lengths must be >= 1");

    const long R = opts.replicates;
    const std::size_t G = grid.size();
    StudyBands bands;
    bands.grid = grid;
    bands.true_values.resize(G);
    for (std::size_t g = 0; g < G; ++g)
        bands.true_values[g] = erlang_gamma_mixed_renewal(grid[g], truth.m, truth.alpha);

    // Per-replicate results land in indexed slots; every reduction below is
    // a serial pass, so thread count never changes the output.
    std::vector<double> exch(static_cast<std::size_t>(R) * G, 0.0);
    std::vector<double> iid(static_cast<std::size_t>(R) * G, 0.0);
    std::vector<unsigned char> ok(static_cast<std::size_t>(R), 0);

    const ModelSpec spec{truth};
#pragma omp parallel for schedule(dynamic)
    for (long r = 0; r < R; ++r) {
        try {
            const SequenceSet data =
                simulate_sequence_set(spec, lengths, opts.seed, static_cast<std::uint64_t>(r));
            const FitResult fit = fit_mle(data, opts.fit);
            const int m_iid = opts.iid_profile_m ? pooled_iid_profile_m(data, opts.fit.m_min, opts.fit.m_max)
                                                 : fit.m_hat;
            const SuffStats stats = build_stats(data);
            const double lambda_hat =
                static_cast<double>(m_iid) * static_cast<double>(stats.n_total) / stats.sum_t;
            for (std::size_t g = 0; g < G; ++g) {
                exch[static_cast<std::size_t>(r) * G + g] =
                    erlang_gamma_mixed_renewal(grid[g], fit.m_hat, fit.alpha_hat);
                iid[static_cast<std::size_t>(r) * G + g] =
                    erlang_conditional_renewal(grid[g], m_iid, lambda_hat);
            }
            ok[static_cast<std::size_t>(r)] = 1;
        } catch (const std::exception&) {
            ok[static_cast<std::size_t>(r)] = 0;
        }
    }

    long n_ok = 0;
    for (long r = 0; r < R; ++r)
        if (ok[static_cast<std::size_t>(r)]) ++n_ok;
    bands.n_failed = R - n_ok;
    bands.replicates = n_ok;
    if (static_cast<double>(bands.n_failed) > opts.max_fail_fraction * static_cast<double>(R))
        throw NumericalError("monte_carlo_study: " + std::to_string(bands.n_failed) + " of " +
                             std::to_string(R) + " fits failed");

    bands.exch_median.resize(G);
    bands.exch_lo.resize(G);
    bands.exch_hi.resize(G);
    bands.iid_median.resize(G);
    bands.iid_lo.resize(G);
    bands.iid_hi.resize(G);
    std::vector<double> column;
    column.reserve(static_cast<std::size_t>(n_ok));
    for (std::size_t g = 0; g < G; ++g) {
        column.clear();
        for (long r = 0; r < R; ++r)
            if (ok[static_cast<std::size_t>(r)]) column.push_back(exch[static_cast<std::size_t>(r) * G + g]);
        bands.exch_median[g] = percentile(column, 0.5);
        bands.exch_lo[g] = percentile(column, 0.025);
        bands.exch_hi[g] = percentile(column, 0.975);
        column.clear();
        for (long r = 0; r < R; ++r)
            if (ok[static_cast<std::size_t>(r)]) column.push_back(iid[static_cast<std::size_t>(r) * G + g]);
        bands.iid_median[g] = percentile(column, 0.5);
        bands.iid_lo[g] = percentile(column, 0.025);
        bands.iid_hi[g] = percentile(column, 0.975);
    }
    for (long r = 0; r < R; ++r)
        if (ok[static_cast<std::size_t>(r)] &&
            iid[static_cast<std::size_t>(r) * G + (G - 1)] < exch[static_cast<std::size_t>(r) * G + (G - 1)])
            ++bands.iid_below_exch_at_end;
    return bands;
}

} // namespace exrenew
