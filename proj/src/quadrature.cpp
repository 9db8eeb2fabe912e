#include "exrenew/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace exrenew {

namespace {

QuadratureRule build_gauss_legendre(int order) {
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int mid = (order + 1) / 2;
    for (int i = 0; i < mid; ++i) {
        // Chebyshev-based initial guess, then Newton on the recurrence.
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

} // namespace

const QuadratureRule& gauss_legendre(int order) {
    if (order < 1 || order > 512)
        throw std::invalid_argument("gauss_legendre: order must be in [1, 512]");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_gauss_legendre(order)).first;
    return it->second;
}

double integrate_finite(const std::function<double(double)>& f, double a, double b, int order) {
    const QuadratureRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

double integrate_halfline(const std::function<double(double)>& f, int order) {
    // x = u/(1-u), dx = du/(1-u)^2 maps (0,1) onto (0,inf).
    return integrate_finite(
        [&f](double u) {
            const double om = 1.0 - u;
            const double x = u / om;
            return f(x) / (om * om);
        },
        0.0, 1.0, order);
}

} // namespace exrenew
