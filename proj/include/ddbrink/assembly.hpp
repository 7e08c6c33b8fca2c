#pragma once

#include <functional>
#include <map>

#include <Eigen/SparseCore>

#include "ddbrink/fespace.hpp"

namespace ddbrink {

/// Compressed row storage; column indices sorted and unique per row once
/// compressed.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

using TimeScalarField = std::function<double(const Point&, double)>;
using TimeVectorField = std::function<Vec2(const Point&, double)>;

/// M_ij = (phi_j, phi_i). Block diagonal for vector spaces.
SparseMatrix assemble_mass(const FiniteElementSpace& space);

/// A_ij = (grad phi_j, grad phi_i). Componentwise for vector spaces.
SparseMatrix assemble_stiffness(const FiniteElementSpace& space);

/// B_ij = (q_i, div phi_j); shape pressure dofs x velocity dofs.
SparseMatrix assemble_divergence(const FiniteElementSpace& velocity, const FiniteElementSpace& pressure);

/// Skew-symmetrized convection with a given wind:
///   N(w)_ij = 1/2 (w . grad phi_j, phi_i) - 1/2 (w . grad phi_i, phi_j).
/// `space` may be the vector velocity space (b*) or a scalar space (c*, d*).
SparseMatrix assemble_convection_skew(const FiniteElementSpace& space,
                                      const FiniteElementSpace& wind_space,
                                      const Vector& wind);

/// Kronecker product with the 2x2 identity in the interleaved vector layout.
SparseMatrix expand_to_vector(const SparseMatrix& scalar);

/// r_i = coefficient * (g . phi_i, field) for phi_i in the vector space.
Vector assemble_buoyancy(const FiniteElementSpace& velocity, const FiniteElementSpace& scalar,
                         const Vec2& g, double coefficient, const Vector& field);

/// Load vectors (f, phi_i) of analytic data.
Vector assemble_load(const FiniteElementSpace& space, const ScalarField& f, int strength = 6);
Vector assemble_load(const FiniteElementSpace& space, const VectorField& f, int strength = 6);

/// Row sums of the mass matrix, i.e. the integrals of the basis functions.
Vector basis_integrals(const FiniteElementSpace& space);

/// Dof -> prescribed value. Adding the same dof twice is allowed only with
/// the same value.
class DirichletConstraints {
public:
    void add(int dof, double value);
    bool contains(int dof) const { return values_.count(dof) != 0; }
    std::size_t size() const { return values_.size(); }
    const std::map<int, double>& values() const { return values_; }

private:
    std::map<int, double> values_;
};

/// Symmetric elimination: constrained rows become identity rows with the
/// prescribed value on the right, constrained columns are moved to the right
/// hand side. The sparsity pattern is kept (eliminated entries become
/// explicit zeros).
void apply_dirichlet(SparseMatrix& matrix, Vector& rhs, const DirichletConstraints& constraints);

}  // namespace ddbrink
