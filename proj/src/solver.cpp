#include "ddbrink/solver.hpp"

#ifdef DDBRINK_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/SparseLU>
#endif

#include <cmath>
#include <string>

namespace ddbrink {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

double max_row_sum(const SparseMatrix& a) {
    double best = 0.0;
    for (int r = 0; r < a.outerSize(); ++r) {
        double s = 0.0;
        for (SparseMatrix::InnerIterator it(a, r); it; ++it) s += std::abs(it.value());
        best = std::max(best, s);
    }
    return best;
}

#ifndef DDBRINK_HAVE_UMFPACK
int parse_pivot(const std::string& message) {
    auto pos = message.find_last_not_of("0123456789");
    if (pos == std::string::npos || pos + 1 >= message.size()) return -1;
    return std::stoi(message.substr(pos + 1)) - 1;
}
#endif

// First column without a nonzero entry, or -1.
int empty_column(const ColMatrix& a) {
    for (int c = 0; c < a.outerSize(); ++c) {
        bool any = false;
        for (ColMatrix::InnerIterator it(a, c); it && !any; ++it) any = (it.value() != 0.0);
        if (!any) return c;
    }
    return -1;
}

}  // namespace

struct SparseLUSolver::Impl {
#ifdef DDBRINK_HAVE_UMFPACK
    Eigen::UmfPackLU<ColMatrix> lu;
#else
    Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
    ColMatrix factored;
    std::vector<int> outer;
    std::vector<int> inner;
    bool analyzed = false;
    SparseMatrix matrix;
};

SparseLUSolver::SparseLUSolver() : impl_(std::make_unique<Impl>()) {}
SparseLUSolver::~SparseLUSolver() = default;
SparseLUSolver::SparseLUSolver(SparseLUSolver&&) noexcept = default;
SparseLUSolver& SparseLUSolver::operator=(SparseLUSolver&&) noexcept = default;

void SparseLUSolver::factorize(const SparseMatrix& matrix) {
    if (matrix.rows() != matrix.cols()) throw std::invalid_argument("LU needs a square matrix");
    ColMatrix& a = impl_->factored;
    a = matrix;
    a.makeCompressed();
    const int n = static_cast<int>(a.cols());
    std::vector<int> outer(a.outerIndexPtr(), a.outerIndexPtr() + n + 1);
    std::vector<int> inner(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());
    if (!impl_->analyzed || outer != impl_->outer || inner != impl_->inner) {
        impl_->lu.analyzePattern(a);
        impl_->outer = std::move(outer);
        impl_->inner = std::move(inner);
        impl_->analyzed = true;
    }
    impl_->lu.factorize(a);
    if (impl_->lu.info() != Eigen::Success) {
#ifdef DDBRINK_HAVE_UMFPACK
        const int pivot = empty_column(a);
#else
        int pivot = parse_pivot(impl_->lu.lastErrorMessage());
        if (pivot < 0) pivot = empty_column(a);
#endif
        impl_->analyzed = false;
        throw SingularMatrixError("singular matrix: zero pivot at column " + std::to_string(pivot), pivot);
    }
    impl_->matrix = matrix;
}

Vector SparseLUSolver::solve(const Vector& rhs) const {
    if (!impl_->analyzed) throw std::logic_error("solve called before a successful factorize");
    if (rhs.size() != impl_->matrix.rows()) throw std::invalid_argument("right hand side has the wrong length");
    const SparseMatrix& a = impl_->matrix;
    Vector x = impl_->lu.solve(rhs);
    const double scale = max_row_sum(a);
    auto tolerance = [&](const Vector& sol) {
        return 1e-10 * (scale * sol.lpNorm<Eigen::Infinity>() + rhs.lpNorm<Eigen::Infinity>());
    };
    Vector residual = rhs - a * x;
    if (residual.lpNorm<Eigen::Infinity>() > tolerance(x)) {
        x += impl_->lu.solve(residual);
        residual = rhs - a * x;
    }
    if (!x.allFinite() || residual.lpNorm<Eigen::Infinity>() > 1e3 * tolerance(x)) {
        throw SingularMatrixError("numerically singular matrix: residual does not reduce", -1);
    }
    return x;
}

Vector solve_sparse(const SparseMatrix& matrix, const Vector& rhs) {
    if (matrix.rows() != rhs.size()) throw std::invalid_argument("dimension mismatch in solve_sparse");
    SparseLUSolver lu;
    lu.factorize(matrix);
    return lu.solve(rhs);
}

SparseMatrix assemble_monolithic(const SparseMatrix& k, const SparseMatrix& b) {
    if (k.rows() != k.cols() || b.cols() != k.cols()) throw std::invalid_argument("block dimensions do not match");
    const int nu = static_cast<int>(k.rows());
    const int np = static_cast<int>(b.rows());
    std::vector<Eigen::Triplet<double, int>> triplets;
    triplets.reserve(k.nonZeros() + 2 * b.nonZeros() + np);
    for (int r = 0; r < nu; ++r) {
        for (SparseMatrix::InnerIterator it(k, r); it; ++it) triplets.emplace_back(r, it.col(), it.value());
    }
    for (int r = 0; r < np; ++r) {
        for (SparseMatrix::InnerIterator it(b, r); it; ++it) {
            triplets.emplace_back(nu + r, it.col(), -it.value());
            triplets.emplace_back(it.col(), nu + r, -it.value());
        }
        triplets.emplace_back(nu + r, nu + r, 0.0);
    }
    SparseMatrix m(nu + np, nu + np);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

SaddlePointSolution SaddlePointSolver::solve(const BlockSystem& system, const DirichletConstraints& velocity_constraints,
                                             const PressureGauge& gauge) {
    const int nu = static_cast<int>(system.velocity_block.rows());
    const int np = static_cast<int>(system.divergence.rows());
    if (system.rhs_velocity.size() != nu || system.rhs_pressure.size() != np) {
        throw std::invalid_argument("saddle point right hand side has the wrong length");
    }
    SparseMatrix a = assemble_monolithic(system.velocity_block, system.divergence);
    Vector rhs(nu + np);
    rhs.head(nu) = system.rhs_velocity;
    rhs.tail(np) = -system.rhs_pressure;

    DirichletConstraints constraints = velocity_constraints;
    if (gauge.zero_mean) {
        if (gauge.pinned_dof < 0 || gauge.pinned_dof >= np) throw std::out_of_range("pinned pressure dof");
        constraints.add(nu + gauge.pinned_dof, gauge.pinned_value);
    }
    apply_dirichlet(a, rhs, constraints);
    lu_.factorize(a);
    Vector x = lu_.solve(rhs);

    SaddlePointSolution out{x.head(nu), x.tail(np)};
    if (gauge.zero_mean) {
        if (gauge.weights.size() != np) throw std::invalid_argument("pressure gauge weights have the wrong length");
        const double mean = gauge.weights.dot(out.pressure) / gauge.weights.sum();
        out.pressure.array() -= mean;
    }
    return out;
}

SaddlePointSolution solve_saddle_point(const BlockSystem& system, const DirichletConstraints& velocity_constraints,
                                       const PressureGauge& gauge) {
    SaddlePointSolver solver;
    return solver.solve(system, velocity_constraints, gauge);
}

}  // namespace ddbrink
