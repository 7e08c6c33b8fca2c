#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ddbrink/mesh.hpp"
#include "ddbrink/quadrature.hpp"

namespace ddbrink {

using Vector = Eigen::VectorXd;
using Vec2 = std::array<double, 2>;

enum class ValueRank { Scalar, Vector2 };

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Vec2(const Point&)>;

/// Affine map data of one triangle.
struct ElementGeometry {
    double area = 0.0;
    std::array<Vec2, 3> grad_lambda{};  // gradients of the barycentric coordinates
};

/// Throws std::domain_error for a degenerate (zero-area) triangle.
ElementGeometry element_geometry(const TriangleMesh& mesh, int t);

/// Scalar shape functions of one element at one point, in physical space.
/// Local ordering: vertices 0..2, then (P2) edge midpoints 01, 12, 20.
struct ShapeValues {
    int count = 0;
    std::array<double, 6> value{};
    std::array<Vec2, 6> grad{};
};

ShapeValues shape_functions(int degree, const std::array<double, 3>& bary, const ElementGeometry& geom);

/// Lagrange P1/P2 space, scalar or 2-vector valued. Nodes are the mesh
/// vertices followed (for P2) by one node per mesh edge. Vector dofs are
/// interleaved: node n carries dofs 2n (x) and 2n+1 (y).
class FiniteElementSpace {
public:
    FiniteElementSpace(std::shared_ptr<const TriangleMesh> mesh, int degree, ValueRank rank);

    const TriangleMesh& mesh() const { return *mesh_; }
    const std::shared_ptr<const TriangleMesh>& mesh_ptr() const { return mesh_; }
    int degree() const { return degree_; }
    ValueRank rank() const { return rank_; }
    int components() const { return rank_ == ValueRank::Scalar ? 1 : 2; }

    int node_count() const { return static_cast<int>(node_coords_.size()); }
    int dof_count() const { return node_count() * components(); }
    int nodes_per_element() const { return degree_ == 1 ? 3 : 6; }
    int dofs_per_element() const { return nodes_per_element() * components(); }

    const Point& node_coordinate(int node) const { return node_coords_[node]; }
    std::optional<BoundaryTag> node_tag(int node) const { return node_tags_[node]; }
    std::span<const int> element_nodes(int t) const;

    /// Dof coordinates (node coordinate of each dof).
    std::vector<Point> dof_coordinates() const;

    /// Nodes lying on a wall with the given tag, following the corner rule
    /// for vertices.
    std::vector<int> nodes_with_tag(BoundaryTag tag) const;
    std::vector<int> boundary_nodes() const;

    const ElementGeometry& geometry(int t) const { return geometry_[t]; }

    ShapeValues evaluate_basis(int t, const std::array<double, 3>& bary) const;

private:
    std::shared_ptr<const TriangleMesh> mesh_;
    int degree_;
    ValueRank rank_;
    std::vector<Point> node_coords_;
    std::vector<std::optional<BoundaryTag>> node_tags_;
    std::vector<int> element_nodes_;
    std::vector<ElementGeometry> geometry_;
};

FiniteElementSpace build_space(std::shared_ptr<const TriangleMesh> mesh, int degree, ValueRank rank);

Vector interpolate(const FiniteElementSpace& space, const ScalarField& f);
Vector interpolate(const FiniteElementSpace& space, const VectorField& f);

/// Value and gradient of a scalar finite element field at a point of triangle t.
struct ScalarSample {
    double value = 0.0;
    Vec2 grad{};
};
ScalarSample sample_scalar(const FiniteElementSpace& space, const Vector& coeffs, int t,
                           const std::array<double, 3>& bary);

/// Value and gradient (row c = component c) of a vector field.
struct VectorSample {
    Vec2 value{};
    std::array<Vec2, 2> grad{};
};
VectorSample sample_vector(const FiniteElementSpace& space, const Vector& coeffs, int t,
                           const std::array<double, 3>& bary);

Point map_to_physical(const TriangleMesh& mesh, int t, const std::array<double, 3>& bary);

}  // namespace ddbrink
