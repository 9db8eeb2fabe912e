#include "exrenew/dirichlet.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "exrenew/errors.hpp"
#include "exrenew/special.hpp"

namespace exrenew {

namespace {

constexpr int kRationalLimit = 20;   // exact mpq residues up to here, long double beyond
constexpr double kCoeffGuard = 1e12; // expansion considered ill-conditioned past this

using SparsePartition = std::vector<std::pair<int, int>>; // (part size, multiplicity), ascending

SparsePartition to_sparse(const PartitionVector& part) {
    SparsePartition out;
    for (std::size_t j = 0; j < part.v.size(); ++j)
        if (part.v[j] > 0) out.emplace_back(static_cast<int>(j + 1), part.v[j]);
    return out;
}

// The weighted sum in sn_cdf tolerates individually large coefficients as
// long as the accumulated round-off (Ewens weight x coefficient magnitude x
// double epsilon) stays far below the probability scale.
constexpr double kWeightedCancelGuard = 1e-8;

// Scalar abstraction so the residue recursion runs both in exact rationals
// and in long double.
template <class S>
S make_ratio(long num, long den);

template <>
mpq_class make_ratio<mpq_class>(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

template <>
long double make_ratio<long double>(long num, long den) {
    return static_cast<long double>(num) / static_cast<long double>(den);
}

double to_double(const mpq_class& x) { return x.get_d(); }
double to_double(long double x) { return static_cast<double>(x); }

template <class S>
S pow_int(S base, int e) {
    S out = make_ratio<S>(1, 1);
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

// Partial fractions of prod_i (1/i - w)^{-v_i}: for the pole at w = 1/i of
// order v_i, Taylor-expand the remaining factor g(w) there via its
// log-derivative coefficients c_q = sum_{l != i} v_l (1/l - 1/i)^{-q}
// (g_r = (1/r) sum_{q<=r} c_q g_{r-q}), giving residues
// K_{i,j} = (-1)^{v_i - j} g_{v_i - j}.
template <class S>
std::vector<SignedErlangMixture::Component> expand_partial_fractions(const SparsePartition& parts,
                                                                     double lambda) {
    S prodm = make_ratio<S>(1, 1);
    for (const auto& [m, vm] : parts) prodm /= pow_int(make_ratio<S>(m, 1), vm);

    std::vector<SignedErlangMixture::Component> components;
    for (const auto& [i, vi] : parts) {
        S g0 = make_ratio<S>(1, 1);
        std::vector<S> c(static_cast<std::size_t>(vi), make_ratio<S>(0, 1)); // c[q-1] = c_q
        for (const auto& [l, vl] : parts) {
            if (l == i) continue;
            const S gap = make_ratio<S>(i - l, static_cast<long>(l) * i); // 1/l - 1/i
            g0 /= pow_int(gap, vl);
            S inv_pow = make_ratio<S>(1, 1);
            for (int q = 1; q < vi; ++q) {
                inv_pow /= gap;
                c[static_cast<std::size_t>(q - 1)] += make_ratio<S>(vl, 1) * inv_pow;
            }
        }
        std::vector<S> g(static_cast<std::size_t>(vi), make_ratio<S>(0, 1));
        g[0] = g0;
        for (int r = 1; r < vi; ++r) {
            S acc = make_ratio<S>(0, 1);
            for (int q = 1; q <= r; ++q) acc += c[static_cast<std::size_t>(q - 1)] * g[static_cast<std::size_t>(r - q)];
            g[static_cast<std::size_t>(r)] = acc / make_ratio<S>(r, 1);
        }
        for (int j = 1; j <= vi; ++j) {
            S coeff = prodm * g[static_cast<std::size_t>(vi - j)] * pow_int(make_ratio<S>(i, 1), j);
            if ((vi - j) % 2 != 0) coeff = -coeff;
            const double cd = to_double(coeff);
            if (!std::isfinite(cd))
                throw NumericalError("partial_fraction_mixture: expansion overflowed");
            components.push_back({cd, j, lambda / i});
        }
    }
    return components;
}

double max_abs_coeff(const std::vector<SignedErlangMixture::Component>& comps) {
    double out = 0.0;
    for (const auto& c : comps) out = std::max(out, std::fabs(c.coeff));
    return out;
}

void partition_rec(int remaining, int maxpart, PartitionVector& part,
                   const std::function<void(const PartitionVector&)>& fn) {
    if (remaining == 0) {
        fn(part);
        return;
    }
    for (int p = std::min(remaining, maxpart); p >= 1; --p) {
        ++part.v[static_cast<std::size_t>(p - 1)];
        partition_rec(remaining - p, p, part, fn);
        --part.v[static_cast<std::size_t>(p - 1)];
    }
}

} // namespace

int PartitionVector::n() const {
    long total = 0;
    for (std::size_t j = 0; j < v.size(); ++j) total += static_cast<long>(j + 1) * v[j];
    return static_cast<int>(total);
}

void validate(const PartitionVector& part) {
    if (part.v.empty()) throw std::invalid_argument("partition: empty occupancy vector");
    for (int c : part.v)
        if (c < 0) throw std::invalid_argument("partition: negative multiplicity");
    if (part.n() != static_cast<int>(part.v.size()))
        throw std::invalid_argument("partition: occupancy must satisfy sum j*v_j = n = len(v)");
}

void for_each_partition(int n, const std::function<void(const PartitionVector&)>& fn) {
    if (n < 1) throw std::invalid_argument("for_each_partition: n must be >= 1");
    PartitionVector part;
    part.v.assign(static_cast<std::size_t>(n), 0);
    partition_rec(n, n, part, fn);
}

std::vector<PartitionVector> enumerate_partitions(int n, int cap) {
    if (n < 1) throw std::invalid_argument("enumerate_partitions: n must be >= 1");
    if (n > cap)
        throw std::invalid_argument("enumerate_partitions: n exceeds the partition cap");
    std::vector<PartitionVector> out;
    for_each_partition(n, [&out](const PartitionVector& p) { out.push_back(p); });
    std::sort(out.begin(), out.end(),
              [](const PartitionVector& a, const PartitionVector& b) { return a.v < b.v; });
    return out;
}

long partition_count(int n) {
    if (n < 0) throw std::invalid_argument("partition_count: n must be nonnegative");
    if (n > 120) throw std::invalid_argument("partition_count: exact table limited to n <= 120");
    std::vector<long> ways(static_cast<std::size_t>(n) + 1, 0);
    ways[0] = 1;
    for (int part = 1; part <= n; ++part)
        for (int s = part; s <= n; ++s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - part)];
    return ways[static_cast<std::size_t>(n)];
}

double pochhammer(double alpha, long n) { return std::exp(log_pochhammer(alpha, n)); }

double ewens_log_probability(const PartitionVector& part, double alpha) {
    validate(part);
    if (!(alpha > 0.0)) throw std::invalid_argument("ewens: alpha must be positive");
    const int n = static_cast<int>(part.v.size());
    double lp = std::lgamma(static_cast<double>(n) + 1.0) - log_pochhammer(alpha, n);
    const double la = std::log(alpha);
    for (std::size_t j = 0; j < part.v.size(); ++j) {
        const int vj = part.v[j];
        if (vj == 0) continue;
        lp += vj * (la - std::log(static_cast<double>(j + 1))) - std::lgamma(static_cast<double>(vj) + 1.0);
    }
    return lp;
}

double ewens_probability(const PartitionVector& part, double alpha) {
    return std::exp(ewens_log_probability(part, alpha));
}

SignedErlangMixture partial_fraction_mixture(const PartitionVector& part, double lambda) {
    validate(part);
    if (!(lambda > 0.0)) throw std::invalid_argument("partial_fraction_mixture: lambda must be positive");
    const SparsePartition sparse = to_sparse(part);
    SignedErlangMixture mix;
    if (static_cast<int>(part.v.size()) <= kRationalLimit)
        mix.components = expand_partial_fractions<mpq_class>(sparse, lambda);
    else
        mix.components = expand_partial_fractions<long double>(sparse, lambda);
    if (max_abs_coeff(mix.components) > kCoeffGuard)
        throw NumericalError("partial_fraction_mixture: ill-conditioned expansion "
                             "(coefficient beyond 1e12)");
    return mix;
}

namespace {

double sn_cdf_impl(double t, int n, double alpha, double lambda, int cap, bool parallel) {
    if (!(alpha > 0.0)) throw std::invalid_argument("sn_cdf: alpha must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("sn_cdf: lambda must be positive");
    if (n < 1) throw std::invalid_argument("sn_cdf: n must be >= 1");
    if (n > cap) throw std::invalid_argument("sn_cdf: n exceeds the partition cap");
    if (t < 0.0) throw std::invalid_argument("sn_cdf: t must be nonnegative");
    if (t == 0.0) return 0.0;

    // Materialize sparse partitions so the term loop can be indexed; terms
    // land in a fixed-order buffer and are reduced serially, so the result
    // is identical for any thread count (and for the serial reference).
    std::vector<SparsePartition> partitions;
    for_each_partition(n, [&partitions](const PartitionVector& p) {
        partitions.push_back(to_sparse(p));
    });
    const long P = static_cast<long>(partitions.size());
    std::vector<double> terms(static_cast<std::size_t>(P), 0.0);
    std::vector<double> cancel(static_cast<std::size_t>(P), 0.0);

    const double lgn = std::lgamma(static_cast<double>(n) + 1.0) - log_pochhammer(alpha, n);
    const double la = std::log(alpha);
    bool failed = false;
    std::string message;

#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (long idx = 0; idx < P; ++idx) {
        try {
            const SparsePartition& sp = partitions[static_cast<std::size_t>(idx)];
            double lp = lgn;
            for (const auto& [j, vj] : sp)
                lp += vj * (la - std::log(static_cast<double>(j))) - std::lgamma(static_cast<double>(vj) + 1.0);
            const double weight = std::exp(lp);
            // A partition's term is at most its Ewens weight, so below 1e-30
            // it cannot move a probability-scale sum; skip before expanding.
            if (weight < 1e-30) continue;
            // Deep repeated-part partitions expand with huge cancelling
            // coefficients.  What limits the accuracy of the weighted sum is
            // weight * max|coeff| * eps per term, not |coeff| alone -- the
            // blow-up shapes carry factorially small Ewens weights, so the
            // weighted round-off stays negligible; track it and fail only if
            // it could actually distort the result.
            std::vector<SignedErlangMixture::Component> comps =
                n <= kRationalLimit ? expand_partial_fractions<mpq_class>(sp, lambda)
                                    : expand_partial_fractions<long double>(sp, lambda);
            double cdf = 0.0;
            for (const auto& cpt : comps)
                cdf += cpt.coeff * erlang_cdf(t, ErlangParams{cpt.shape, cpt.rate});
            terms[static_cast<std::size_t>(idx)] = weight * cdf;
            cancel[static_cast<std::size_t>(idx)] = weight * max_abs_coeff(comps) *
                                                    static_cast<double>(comps.size()) *
                                                    std::numeric_limits<double>::epsilon();
        } catch (const std::exception& e) {
#pragma omp critical(exrenew_sn_error)
            {
                failed = true;
                message = e.what();
            }
        }
    }
    if (failed) throw NumericalError("sn_cdf: " + message);
    double sum = 0.0;
    double cancel_total = 0.0;
    for (long idx = 0; idx < P; ++idx) {
        sum += terms[static_cast<std::size_t>(idx)];
        cancel_total += cancel[static_cast<std::size_t>(idx)];
    }
    if (cancel_total > kWeightedCancelGuard)
        throw NumericalError("sn_cdf: ill-conditioned partial-fraction sum "
                             "(weighted cancellation beyond 1e-8)");
    return sum;
}

} // namespace

double sn_cdf(double t, int n, double alpha, double lambda, int cap) {
    return sn_cdf_impl(t, n, alpha, lambda, cap, true);
}

double sn_cdf_serial(double t, int n, double alpha, double lambda, int cap) {
    return sn_cdf_impl(t, n, alpha, lambda, cap, false);
}

McCdfEstimate sn_cdf_mc(double t, int n, double alpha, const BaseDistribution& base,
                        long replicates, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sn_cdf_mc: n must be >= 1");
    if (replicates < 2) throw std::invalid_argument("sn_cdf_mc: replicates must be >= 2");
    const DirichletProcessModel model{alpha, base};
    validate(ModelSpec{model});
    long hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (long r = 0; r < replicates; ++r) {
        RngStream rng = RngStream::from(seed, static_cast<std::uint64_t>(r));
        PolyaUrn urn(model, rng);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += urn.next();
        if (s <= t) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(replicates);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(replicates))};
}

DpSeriesResult dp_renewal_function(double t, double alpha, double lambda, double tol, int cap) {
    if (!(tol > 0.0)) throw std::invalid_argument("dp_renewal_function: tol must be positive");
    if (t < 0.0) throw std::invalid_argument("dp_renewal_function: t must be nonnegative");
    if (t == 0.0) return {0.0, 0.0, 0};
    double sum = 0.0;
    double prev = 0.0;
    for (int n = 1; n <= cap; ++n) {
        const double term = sn_cdf(t, n, alpha, lambda, cap);
        sum += term;
        if (n > 1 && term < tol && term < prev) {
            const double ratio = term / prev;
            return {sum, term * ratio / (1.0 - ratio), n};
        }
        prev = term;
    }
    throw NumericalError("dp_renewal_function: series not below tol within the partition cap");
}

} // namespace exrenew
