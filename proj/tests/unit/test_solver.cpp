#include <gtest/gtest.h>

#include <random>

#include "ddbrink/solver.hpp"
#include "ddbrink/timestep.hpp"

using namespace ddbrink;

namespace {

// Textbook Gaussian elimination with partial pivoting.
Vector gauss_solve(Eigen::MatrixXd a, Vector b) {
    const int n = static_cast<int>(a.rows());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        }
        a.row(k).swap(a.row(piv));
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a.row(i) -= f * a.row(k);
            b[i] -= f * b[k];
        }
    }
    Vector x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

SparseMatrix random_sparse(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Eigen::Triplet<double, int>> t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, 4.0 + u(rng));
        t.emplace_back(i, (i * 7 + 3) % n, u(rng));
        t.emplace_back((i * 5 + 1) % n, i, u(rng));
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

}  // namespace

TEST(SparseLU, MatchesGaussianEliminationOracle) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const SparseMatrix a = random_sparse(60, seed);
        const Vector b = Vector::LinSpaced(60, -1.0, 2.0);
        const Vector x = solve_sparse(a, b);
        const Vector ref = gauss_solve(Eigen::MatrixXd(a), b);
        EXPECT_LT((x - ref).lpNorm<Eigen::Infinity>(), 1e-12);
    }
}

TEST(SparseLU, ReusesPatternAcrossFactorizations) {
    SparseLUSolver lu;
    SparseMatrix a = random_sparse(40, 7);
    lu.factorize(a);
    const Vector b = Vector::Ones(40);
    const Vector x1 = lu.solve(b);
    a *= 2.0;
    lu.factorize(a);
    EXPECT_LT((lu.solve(b) - 0.5 * x1).lpNorm<Eigen::Infinity>(), 1e-13);
}

TEST(SparseLU, ZeroColumnReportsPivot) {
    std::vector<Eigen::Triplet<double, int>> t{{0, 0, 1.0}, {1, 1, 1.0}, {3, 3, 1.0}, {2, 2, 0.0}};
    SparseMatrix a(4, 4);
    a.setFromTriplets(t.begin(), t.end());
    SparseLUSolver lu;
    try {
        lu.factorize(a);
        FAIL() << "expected SingularMatrixError";
    } catch (const SingularMatrixError& e) {
        EXPECT_EQ(e.pivot(), 2);
    }
    EXPECT_THROW(lu.solve(Vector::Ones(4)), std::logic_error);
}

TEST(SparseLU, DimensionChecks) {
    EXPECT_THROW(solve_sparse(SparseMatrix(3, 2), Vector::Ones(3)), std::invalid_argument);
    EXPECT_THROW(solve_sparse(random_sparse(5, 1), Vector::Ones(4)), std::invalid_argument);
}

namespace {

struct Stokes {
    std::shared_ptr<const TriangleMesh> mesh = std::make_shared<const TriangleMesh>(build_structured_rect(4, 4, 1.0, 1.0));
    Discretization disc = make_discretization(mesh);

    SaddlePointSolution solve(double pinned_value) {
        // u = (y^2, x^2), p = x - y reproduced exactly by Taylor-Hood
        BlockSystem sys;
        sys.velocity_block = disc.stiffness_u;
        sys.divergence = disc.divergence;
        sys.rhs_velocity = assemble_load(disc.velocity, VectorField([](const Point&) { return Vec2{-1.0, -3.0}; }));
        sys.rhs_pressure = Vector::Zero(disc.pressure.dof_count());
        DirichletConstraints bc;
        for (int n : disc.velocity.boundary_nodes()) {
            const Point& x = disc.velocity.node_coordinate(n);
            bc.add(2 * n, x.y * x.y);
            bc.add(2 * n + 1, x.x * x.x);
        }
        PressureGauge g;
        g.weights = disc.pressure_weights;
        g.pinned_value = pinned_value;
        return solve_saddle_point(sys, bc, g);
    }
};

}  // namespace

TEST(SaddlePoint, TaylorHoodReproducesPolynomialStokes) {
    Stokes s;
    const SaddlePointSolution sol = s.solve(0.0);
    const Vector u = interpolate(s.disc.velocity, VectorField([](const Point& x) { return Vec2{x.y * x.y, x.x * x.x}; }));
    const Vector p = interpolate(s.disc.pressure, ScalarField([](const Point& x) { return x.x - x.y; }));
    EXPECT_LT((sol.velocity - u).lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_LT((sol.pressure - p).lpNorm<Eigen::Infinity>(), 1e-11);
    EXPECT_NEAR(s.disc.pressure_weights.dot(sol.pressure), 0.0, 1e-13);
}

TEST(SaddlePoint, GaugeValueDoesNotChangeVelocity) {
    Stokes s;
    const SaddlePointSolution a = s.solve(0.0);
    const SaddlePointSolution b = s.solve(37.5);
    EXPECT_LT((a.velocity - b.velocity).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_LT((a.pressure - b.pressure).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(SaddlePoint, MonolithicLayout) {
    Stokes s;
    const SparseMatrix m = assemble_monolithic(s.disc.stiffness_u, s.disc.divergence);
    const int nu = s.disc.velocity.dof_count(), np = s.disc.pressure.dof_count();
    EXPECT_EQ(m.rows(), nu + np);
    const Eigen::MatrixXd d(m);
    EXPECT_LT((d.block(0, nu, nu, np) + Eigen::MatrixXd(s.disc.divergence).transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(d.block(nu, nu, np, np).cwiseAbs().maxCoeff(), 0.0);
}
