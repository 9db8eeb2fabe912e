// Independent numerical oracles for the test suite.  Everything here is
// deliberately built on different machinery than the library under test:
// adaptive Simpson instead of Gauss-Legendre, uniformization instead of
// partial fractions, Poisson tail sums instead of the roots-of-unity closed
// form, and explicit urn-path enumeration instead of the Ewens formula.

#ifndef EXRENEW_TESTS_ORACLES_HPP
#define EXRENEW_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace oracles {

// ---------------------------------------------------------------- Simpson --
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0) return left + right;
    if (std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Half line via x = u/(1-u); integrand must decay at infinity.
inline double integrate_halfline(const std::function<double(double)>& f, double tol = 1e-11) {
    return integrate(
        [&f](double u) {
            if (u >= 1.0) return 0.0;
            const double x = u / (1.0 - u);
            const double jac = 1.0 / ((1.0 - u) * (1.0 - u));
            const double v = f(x) * jac;
            return std::isfinite(v) ? v : 0.0;
        },
        0.0, 1.0, tol);
}

// ---------------------------------------------------------- phase type -----
// CDF of a hypoexponential sum X_1 + ... + X_K, X_i ~ Exp(rates[i])
// independent, by uniformization of the bidiagonal generator.  Handles
// repeated rates, unlike the distinct-rate closed form.
inline double phase_type_cdf(const std::vector<double>& rates, double t) {
    if (t <= 0.0) return 0.0;
    const std::size_t K = rates.size();
    if (K == 0) return 1.0;
    double q = 0.0;
    for (double r : rates) {
        if (!(r > 0.0)) throw std::invalid_argument("phase_type_cdf: rates must be positive");
        q = std::max(q, r);
    }
    q *= 1.000000001; // keep self-loop probabilities strictly positive
    // w = distribution across transient states after k uniformized jumps.
    std::vector<double> w(K, 0.0);
    w[0] = 1.0;
    const double qt = q * t;
    double log_pois = -qt; // log P(Pois(qt) = 0)
    double survival = 0.0;
    double tail = 1.0; // 1 - sum of Poisson weights so far
    const long kmax = static_cast<long>(qt + 12.0 * std::sqrt(qt + 1.0) + 60.0);
    for (long k = 0; k <= kmax; ++k) {
        if (k > 0) log_pois += std::log(qt) - std::log(static_cast<double>(k));
        const double pois = std::exp(log_pois);
        double mass = 0.0;
        for (double x : w) mass += x;
        survival += pois * mass;
        tail -= pois;
        if (tail < 1e-16 || mass < 1e-300) break;
        // advance one uniformized jump: state i stays with 1 - r_i/q, moves
        // to i+1 with r_i/q (off the end = absorption).
        for (std::size_t i = K; i-- > 0;) {
            const double move = rates[i] / q;
            const double stay = 1.0 - move;
            const double flux = w[i] * move;
            w[i] *= stay;
            if (i + 1 < K) w[i + 1] += flux;
        }
    }
    return 1.0 - survival;
}

// ------------------------------------------------------- Poisson tails -----
// Erlang(m, lambda) renewal function as sum_{n>=1} P(Pois(lambda t) >= n m),
// summing the Poisson pmf directly.
inline double erlang_renewal(double t, int m, double lambda) {
    if (t <= 0.0) return 0.0;
    const double mu = lambda * t;
    const long K = static_cast<long>(mu + 12.0 * std::sqrt(mu + 1.0) + 80.0);
    std::vector<double> pmf(static_cast<std::size_t>(K) + 1, 0.0);
    double lp = -mu;
    pmf[0] = std::exp(lp);
    for (long k = 1; k <= K; ++k) {
        lp += std::log(mu) - std::log(static_cast<double>(k));
        pmf[static_cast<std::size_t>(k)] = std::exp(lp);
    }
    // suffix[k] = P(Pois >= k)
    std::vector<double> suffix(static_cast<std::size_t>(K) + 2, 0.0);
    for (long k = K; k >= 0; --k)
        suffix[static_cast<std::size_t>(k)] =
            suffix[static_cast<std::size_t>(k) + 1] + pmf[static_cast<std::size_t>(k)];
    double u = 0.0;
    for (long n = 1; n * static_cast<long>(m) <= K; ++n)
        u += suffix[static_cast<std::size_t>(n * static_cast<long>(m))];
    return u;
}

// ------------------------------------------------------ urn enumeration ----
// Exact distribution of the tie-pattern occupancy vector after n draws of a
// Polya urn with concentration alpha, by enumerating every draw path with
// its probability.  Result keys are occupancy vectors v (v[j-1] blocks of
// size j, length n).  Exponential in n; fine for n <= 8.
inline void urn_paths_rec(int n, double alpha, std::vector<int>& blocks, double prob,
                          std::map<std::vector<int>, double>& out) {
    const int drawn = [&blocks] {
        int s = 0;
        for (int b : blocks) s += b;
        return s;
    }();
    if (drawn == n) {
        std::vector<int> v(static_cast<std::size_t>(n), 0);
        for (int b : blocks) ++v[static_cast<std::size_t>(b - 1)];
        out[v] += prob;
        return;
    }
    const double denom = alpha + drawn;
    blocks.push_back(1);
    urn_paths_rec(n, alpha, blocks, prob * alpha / denom, out);
    blocks.pop_back();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const double p = blocks[i] / denom;
        ++blocks[i];
        urn_paths_rec(n, alpha, blocks, prob * p, out);
        --blocks[i];
    }
}

inline std::map<std::vector<int>, double> ewens_by_enumeration(int n, double alpha) {
    std::map<std::vector<int>, double> out;
    std::vector<int> blocks;
    urn_paths_rec(n, alpha, blocks, 1.0, out);
    return out;
}

} // namespace oracles

#endif
