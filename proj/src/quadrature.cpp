#include "ddbrink/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace ddbrink {

LineRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
    LineRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n starting from the Chebyshev-like guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            double pn = (n == 1) ? x : p1;
            double pnm1 = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.points[i] = 0.5 * (1.0 - x);
        rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

namespace {

QuadratureRule centroid_rule() {
    return {{{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {0.5}, 1};
}

QuadratureRule three_point_rule() {
    const double a = 2.0 / 3, b = 1.0 / 6;
    return {{{a, b, b}, {b, a, b}, {b, b, a}}, {1.0 / 6, 1.0 / 6, 1.0 / 6}, 2};
}

// Radon's seven-point degree-5 rule in closed form.
QuadratureRule radon_rule() {
    const double s = std::sqrt(15.0);
    const double r1 = (6.0 - s) / 21.0;
    const double r2 = (6.0 + s) / 21.0;
    const double w1 = (155.0 - s) / 2400.0;
    const double w2 = (155.0 + s) / 2400.0;
    QuadratureRule rule;
    rule.strength = 5;
    rule.points.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
    rule.weights.push_back(9.0 / 80.0);
    for (auto [r, w] : {std::pair{r1, w1}, std::pair{r2, w2}}) {
        double c = 1.0 - 2.0 * r;
        rule.points.push_back({c, r, r});
        rule.points.push_back({r, c, r});
        rule.points.push_back({r, r, c});
        rule.weights.insert(rule.weights.end(), 3, w);
    }
    return rule;
}

// Collapsed tensor Gauss rule; the Duffy Jacobian (1-u) costs one degree in u.
QuadratureRule collapsed_rule(int strength) {
    int n = (strength + 3) / 2;
    LineRule g = gauss_legendre(n);
    QuadratureRule rule;
    rule.strength = strength;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double u = g.points[i], v = g.points[j];
            double xi = u, eta = (1.0 - u) * v;
            rule.points.push_back({1.0 - xi - eta, xi, eta});
            rule.weights.push_back(g.weights[i] * g.weights[j] * (1.0 - u));
        }
    }
    return rule;
}

}  // namespace

const QuadratureRule& triangle_quadrature(int strength) {
    static const QuadratureRule r1 = centroid_rule();
    static const QuadratureRule r2 = three_point_rule();
    static const QuadratureRule r5 = radon_rule();
    if (strength < 0) throw std::invalid_argument("quadrature strength must be nonnegative");
    if (strength <= 1) return r1;
    if (strength <= 2) return r2;
    if (strength <= 5) return r5;

    static std::mutex mutex;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(strength);
    if (it == cache.end()) it = cache.emplace(strength, collapsed_rule(strength)).first;
    return it->second;
}

}  // namespace ddbrink
