#include "ddbrink/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ddbrink {

namespace {

using Triplet = Eigen::Triplet<double, int>;
using LocalMatrix = std::array<std::array<double, 6>, 6>;

// Scatters a scalar local matrix, repeating it on each component of a vector space.
void scatter(const FiniteElementSpace& space, int t, const LocalMatrix& local,
             std::vector<Triplet>& triplets) {
    const auto nodes = space.element_nodes(t);
    const int n = space.nodes_per_element();
    const int nc = space.components();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int c = 0; c < nc; ++c) {
                triplets.emplace_back(nc * nodes[i] + c, nc * nodes[j] + c, local[i][j]);
            }
        }
    }
}

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
    SparseMatrix m(rows, cols);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

template <typename Kernel>
SparseMatrix assemble_scalar_form(const FiniteElementSpace& space, int strength, Kernel&& kernel) {
    const auto& quad = triangle_quadrature(strength);
    const int n = space.nodes_per_element();
    const int ntri = static_cast<int>(space.mesh().triangle_count());
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(ntri) * n * n * space.components());
    for (int t = 0; t < ntri; ++t) {
        const double jac = 2.0 * space.geometry(t).area;
        LocalMatrix local{};
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const ShapeValues sh = space.evaluate_basis(t, quad.points[q]);
            const double w = quad.weights[q] * jac;
            kernel(t, q, sh, w, local);
        }
        scatter(space, t, local, triplets);
    }
    return from_triplets(space.dof_count(), space.dof_count(), triplets);
}

}  // namespace

SparseMatrix assemble_mass(const FiniteElementSpace& space) {
    const int n = space.nodes_per_element();
    return assemble_scalar_form(space, 2 * space.degree(),
                                [n](int, std::size_t, const ShapeValues& sh, double w, LocalMatrix& local) {
                                    for (int i = 0; i < n; ++i) {
                                        for (int j = 0; j < n; ++j) local[i][j] += w * sh.value[i] * sh.value[j];
                                    }
                                });
}

SparseMatrix assemble_stiffness(const FiniteElementSpace& space) {
    const int n = space.nodes_per_element();
    return assemble_scalar_form(space, 2 * (space.degree() - 1),
                                [n](int, std::size_t, const ShapeValues& sh, double w, LocalMatrix& local) {
                                    for (int i = 0; i < n; ++i) {
                                        for (int j = 0; j < n; ++j) {
                                            local[i][j] += w * (sh.grad[i][0] * sh.grad[j][0] +
                                                                sh.grad[i][1] * sh.grad[j][1]);
                                        }
                                    }
                                });
}

SparseMatrix assemble_divergence(const FiniteElementSpace& velocity, const FiniteElementSpace& pressure) {
    if (velocity.mesh_ptr() != pressure.mesh_ptr()) throw std::invalid_argument("spaces live on different meshes");
    if (velocity.rank() != ValueRank::Vector2 || pressure.rank() != ValueRank::Scalar) {
        throw std::invalid_argument("divergence needs a vector velocity space and a scalar pressure space");
    }
    const auto& quad = triangle_quadrature(velocity.degree() + pressure.degree() - 1);
    const int nu = velocity.nodes_per_element();
    const int np = pressure.nodes_per_element();
    const int ntri = static_cast<int>(velocity.mesh().triangle_count());
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(ntri) * nu * np * 2);
    for (int t = 0; t < ntri; ++t) {
        const double jac = 2.0 * velocity.geometry(t).area;
        std::array<std::array<Vec2, 6>, 3> local{};
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const ShapeValues su = velocity.evaluate_basis(t, quad.points[q]);
            const ShapeValues sp = pressure.evaluate_basis(t, quad.points[q]);
            const double w = quad.weights[q] * jac;
            for (int i = 0; i < np; ++i) {
                for (int j = 0; j < nu; ++j) {
                    local[i][j][0] += w * sp.value[i] * su.grad[j][0];
                    local[i][j][1] += w * sp.value[i] * su.grad[j][1];
                }
            }
        }
        const auto pn = pressure.element_nodes(t);
        const auto un = velocity.element_nodes(t);
        for (int i = 0; i < np; ++i) {
            for (int j = 0; j < nu; ++j) {
                triplets.emplace_back(pn[i], 2 * un[j], local[i][j][0]);
                triplets.emplace_back(pn[i], 2 * un[j] + 1, local[i][j][1]);
            }
        }
    }
    return from_triplets(pressure.dof_count(), velocity.dof_count(), triplets);
}

SparseMatrix assemble_convection_skew(const FiniteElementSpace& space, const FiniteElementSpace& wind_space,
                                      const Vector& wind) {
    if (space.mesh_ptr() != wind_space.mesh_ptr()) throw std::invalid_argument("spaces live on different meshes");
    if (wind_space.rank() != ValueRank::Vector2) throw std::invalid_argument("wind must be a vector field");
    if (wind.size() != wind_space.dof_count()) throw std::invalid_argument("wind vector has the wrong length");
    const int n = space.nodes_per_element();
    const int strength = wind_space.degree() + 2 * space.degree() - 1;
    return assemble_scalar_form(
        space, strength,
        [&, n](int t, std::size_t q, const ShapeValues& sh, double w, LocalMatrix& local) {
            const auto& bary = triangle_quadrature(strength).points[q];
            const VectorSample ws = sample_vector(wind_space, wind, t, bary);
            std::array<double, 6> adv{};  // w . grad phi_j
            for (int j = 0; j < n; ++j) adv[j] = ws.value[0] * sh.grad[j][0] + ws.value[1] * sh.grad[j][1];
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    local[i][j] += w * 0.5 * (adv[j] * sh.value[i] - adv[i] * sh.value[j]);
                }
            }
        });
}

SparseMatrix expand_to_vector(const SparseMatrix& scalar) {
    std::vector<Triplet> triplets;
    triplets.reserve(2 * scalar.nonZeros());
    for (int r = 0; r < scalar.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(scalar, r); it; ++it) {
            triplets.emplace_back(2 * r, 2 * static_cast<int>(it.col()), it.value());
            triplets.emplace_back(2 * r + 1, 2 * static_cast<int>(it.col()) + 1, it.value());
        }
    }
    return from_triplets(2 * static_cast<int>(scalar.rows()), 2 * static_cast<int>(scalar.cols()), triplets);
}

Vector assemble_buoyancy(const FiniteElementSpace& velocity, const FiniteElementSpace& scalar, const Vec2& g,
                         double coefficient, const Vector& field) {
    if (velocity.mesh_ptr() != scalar.mesh_ptr()) throw std::invalid_argument("spaces live on different meshes");
    if (field.size() != scalar.dof_count()) throw std::invalid_argument("field vector has the wrong length");
    Vector r = Vector::Zero(velocity.dof_count());
    if (coefficient == 0.0) return r;
    const auto& quad = triangle_quadrature(velocity.degree() + scalar.degree());
    const int ntri = static_cast<int>(velocity.mesh().triangle_count());
    for (int t = 0; t < ntri; ++t) {
        const double jac = 2.0 * velocity.geometry(t).area;
        const auto un = velocity.element_nodes(t);
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const ShapeValues su = velocity.evaluate_basis(t, quad.points[q]);
            const double f = sample_scalar(scalar, field, t, quad.points[q]).value;
            const double w = quad.weights[q] * jac * coefficient * f;
            for (int i = 0; i < su.count; ++i) {
                r[2 * un[i]] += w * g[0] * su.value[i];
                r[2 * un[i] + 1] += w * g[1] * su.value[i];
            }
        }
    }
    return r;
}

Vector assemble_load(const FiniteElementSpace& space, const ScalarField& f, int strength) {
    if (space.rank() != ValueRank::Scalar) throw std::invalid_argument("scalar load on vector space");
    const auto& quad = triangle_quadrature(strength);
    Vector r = Vector::Zero(space.dof_count());
    const int ntri = static_cast<int>(space.mesh().triangle_count());
    for (int t = 0; t < ntri; ++t) {
        const double jac = 2.0 * space.geometry(t).area;
        const auto nodes = space.element_nodes(t);
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const ShapeValues sh = space.evaluate_basis(t, quad.points[q]);
            const double w = quad.weights[q] * jac * f(map_to_physical(space.mesh(), t, quad.points[q]));
            for (int i = 0; i < sh.count; ++i) r[nodes[i]] += w * sh.value[i];
        }
    }
    return r;
}

Vector assemble_load(const FiniteElementSpace& space, const VectorField& f, int strength) {
    if (space.rank() != ValueRank::Vector2) throw std::invalid_argument("vector load on scalar space");
    const auto& quad = triangle_quadrature(strength);
    Vector r = Vector::Zero(space.dof_count());
    const int ntri = static_cast<int>(space.mesh().triangle_count());
    for (int t = 0; t < ntri; ++t) {
        const double jac = 2.0 * space.geometry(t).area;
        const auto nodes = space.element_nodes(t);
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const ShapeValues sh = space.evaluate_basis(t, quad.points[q]);
            const Vec2 v = f(map_to_physical(space.mesh(), t, quad.points[q]));
            const double w = quad.weights[q] * jac;
            for (int i = 0; i < sh.count; ++i) {
                r[2 * nodes[i]] += w * v[0] * sh.value[i];
                r[2 * nodes[i] + 1] += w * v[1] * sh.value[i];
            }
        }
    }
    return r;
}

Vector basis_integrals(const FiniteElementSpace& space) {
    const SparseMatrix m = assemble_mass(space);
    return m * Vector::Ones(m.cols());
}

void DirichletConstraints::add(int dof, double value) {
    if (dof < 0) throw std::out_of_range("negative dof index");
    auto [it, inserted] = values_.emplace(dof, value);
    if (!inserted && it->second != value) {
        throw std::invalid_argument("conflicting Dirichlet values for dof " + std::to_string(dof));
    }
}

void apply_dirichlet(SparseMatrix& matrix, Vector& rhs, const DirichletConstraints& constraints) {
    if (matrix.rows() != matrix.cols() || rhs.size() != matrix.rows()) {
        throw std::invalid_argument("apply_dirichlet needs a square system");
    }
    if (constraints.size() == 0) return;
    const int n = static_cast<int>(matrix.rows());
    std::vector<char> fixed(n, 0);
    std::vector<double> value(n, 0.0);
    for (const auto& [dof, v] : constraints.values()) {
        if (dof >= n) throw std::out_of_range("constrained dof " + std::to_string(dof) + " out of range");
        fixed[dof] = 1;
        value[dof] = v;
    }
    matrix.makeCompressed();
    for (int r = 0; r < n; ++r) {
        bool has_diagonal = false;
        for (SparseMatrix::InnerIterator it(matrix, r); it; ++it) {
            const int c = static_cast<int>(it.col());
            if (fixed[r]) {
                if (c == r) {
                    it.valueRef() = 1.0;
                    has_diagonal = true;
                } else {
                    it.valueRef() = 0.0;
                }
            } else if (fixed[c]) {
                rhs[r] -= it.value() * value[c];
                it.valueRef() = 0.0;
            }
        }
        if (fixed[r]) {
            rhs[r] = value[r];
            if (!has_diagonal) matrix.coeffRef(r, r) = 1.0;
        }
    }
    matrix.makeCompressed();
}

}  // namespace ddbrink
