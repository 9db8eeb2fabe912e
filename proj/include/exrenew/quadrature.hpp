#ifndef EXRENEW_QUADRATURE_HPP
#define EXRENEW_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace exrenew {

struct QuadratureRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on the Legendre
// recurrence.  Rules are cached per order.
const QuadratureRule& gauss_legendre(int order);

// Integral of f over the finite interval (a, b).
double integrate_finite(const std::function<double(double)>& f, double a, double b, int order);

// Integral of f over (0, inf) via the map x = u/(1-u); suitable for
// integrands with (sub)exponential decay, e.g. anything carrying a gamma
// density.
double integrate_halfline(const std::function<double(double)>& f, int order);

} // namespace exrenew

#endif
