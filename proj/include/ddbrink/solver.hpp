#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddbrink/assembly.hpp"

namespace ddbrink {

class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, int pivot) : std::runtime_error(what), pivot_(pivot) {}
    /// Column where the factorization broke down, -1 if unknown.
    int pivot() const { return pivot_; }

private:
    int pivot_;
};

/// Sparse LU with partial pivoting (UMFPACK when available, Eigen SparseLU
/// otherwise). The symbolic analysis is reused while the sparsity pattern of
/// successive matrices stays the same.
class SparseLUSolver {
public:
    SparseLUSolver();
    ~SparseLUSolver();
    SparseLUSolver(SparseLUSolver&&) noexcept;
    SparseLUSolver& operator=(SparseLUSolver&&) noexcept;

    void factorize(const SparseMatrix& matrix);
    Vector solve(const Vector& rhs) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Solves A x = b; the residual satisfies
/// ||Ax - b|| <= 1e-10 (||A|| ||x|| + ||b||) or one refinement step is taken.
Vector solve_sparse(const SparseMatrix& matrix, const Vector& rhs);

/// [ K  -B^T ] [u]   [f]
/// [-B   0   ] [p] = [-g]
struct BlockSystem {
    SparseMatrix velocity_block;  // K
    SparseMatrix divergence;      // B, pressure x velocity
    Vector rhs_velocity;          // f
    Vector rhs_pressure;          // g, so that B u = g
};

/// Velocity pressure coupling matrix with explicit zero diagonal in the
/// pressure block.
SparseMatrix assemble_monolithic(const SparseMatrix& velocity_block, const SparseMatrix& divergence);

struct PressureGauge {
    /// Pin one pressure dof and shift to zero mean afterwards. Needed when
    /// the velocity is prescribed on the whole boundary.
    bool zero_mean = true;
    int pinned_dof = 0;
    double pinned_value = 0.0;
    /// Integrals of the pressure basis functions, used for the mean.
    Vector weights;
};

struct SaddlePointSolution {
    Vector velocity;
    Vector pressure;
};

/// Monolithic LU solve of the Stokes-type saddle point system.
class SaddlePointSolver {
public:
    SaddlePointSolution solve(const BlockSystem& system, const DirichletConstraints& velocity_constraints,
                              const PressureGauge& gauge);

private:
    SparseLUSolver lu_;
};

SaddlePointSolution solve_saddle_point(const BlockSystem& system, const DirichletConstraints& velocity_constraints,
                                       const PressureGauge& gauge);

}  // namespace ddbrink
