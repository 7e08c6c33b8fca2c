#pragma once

#include <array>
#include <vector>

namespace ddbrink {

/// Rule on the reference triangle in barycentric coordinates. Weights sum to
/// the reference area 1/2, so integrating over a physical triangle K uses
/// 2|K| * sum(w_q f(x_q)).
struct QuadratureRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    int strength = 0;

    std::size_t size() const { return weights.size(); }
};

/// Smallest available rule that integrates all polynomials of total degree
/// <= strength exactly.
const QuadratureRule& triangle_quadrature(int strength);

/// Gauss-Legendre rule with n points on [0,1].
struct LineRule {
    std::vector<double> points;
    std::vector<double> weights;
};
LineRule gauss_legendre(int n);

}  // namespace ddbrink
