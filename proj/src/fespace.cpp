#include "ddbrink/fespace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddbrink {

ElementGeometry element_geometry(const TriangleMesh& mesh, int t) {
    const auto& tri = mesh.triangles()[t];
    const Point& a = mesh.vertices()[tri[0]];
    const Point& b = mesh.vertices()[tri[1]];
    const Point& c = mesh.vertices()[tri[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double scale = std::max({std::abs(b.x - a.x), std::abs(c.x - a.x), std::abs(b.y - a.y),
                                   std::abs(c.y - a.y)});
    if (!(std::abs(det) > 1e-14 * scale * scale)) {
        throw std::domain_error("degenerate triangle " + std::to_string(t));
    }
    ElementGeometry g;
    g.area = 0.5 * std::abs(det);
    // grad(lambda_i) = rot(opposite edge) / det
    g.grad_lambda[0] = {(b.y - c.y) / det, (c.x - b.x) / det};
    g.grad_lambda[1] = {(c.y - a.y) / det, (a.x - c.x) / det};
    g.grad_lambda[2] = {(a.y - b.y) / det, (b.x - a.x) / det};
    return g;
}

ShapeValues shape_functions(int degree, const std::array<double, 3>& l, const ElementGeometry& g) {
    ShapeValues s;
    const auto& dl = g.grad_lambda;
    if (degree == 1) {
        s.count = 3;
        for (int i = 0; i < 3; ++i) {
            s.value[i] = l[i];
            s.grad[i] = dl[i];
        }
        return s;
    }
    s.count = 6;
    for (int i = 0; i < 3; ++i) {
        s.value[i] = l[i] * (2.0 * l[i] - 1.0);
        const double f = 4.0 * l[i] - 1.0;
        s.grad[i] = {f * dl[i][0], f * dl[i][1]};
    }
    for (int k = 0; k < 3; ++k) {
        const int i = k, j = (k + 1) % 3;
        s.value[3 + k] = 4.0 * l[i] * l[j];
        s.grad[3 + k] = {4.0 * (l[i] * dl[j][0] + l[j] * dl[i][0]),
                         4.0 * (l[i] * dl[j][1] + l[j] * dl[i][1])};
    }
    return s;
}

FiniteElementSpace::FiniteElementSpace(std::shared_ptr<const TriangleMesh> mesh, int degree,
                                       ValueRank rank)
    : mesh_(std::move(mesh)), degree_(degree), rank_(rank) {
    if (!mesh_) throw std::invalid_argument("finite element space needs a mesh");
    if (degree_ != 1 && degree_ != 2) {
        throw std::invalid_argument("unsupported polynomial degree " + std::to_string(degree_));
    }
    const auto& m = *mesh_;
    const int nv = static_cast<int>(m.vertex_count());
    node_coords_ = m.vertices();
    for (int v = 0; v < nv; ++v) node_tags_.push_back(m.vertex_tag(v));
    if (degree_ == 2) {
        for (std::size_t e = 0; e < m.edge_count(); ++e) {
            const auto& ed = m.edges()[e];
            const Point& a = m.vertices()[ed[0]];
            const Point& b = m.vertices()[ed[1]];
            node_coords_.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
            node_tags_.push_back(m.edge_tag(static_cast<int>(e)));
        }
    }

    const int npe = nodes_per_element();
    element_nodes_.reserve(m.triangle_count() * npe);
    geometry_.reserve(m.triangle_count());
    for (int t = 0; t < static_cast<int>(m.triangle_count()); ++t) {
        const auto& tri = m.triangles()[t];
        element_nodes_.insert(element_nodes_.end(), tri.begin(), tri.end());
        if (degree_ == 2) {
            for (int k = 0; k < 3; ++k) element_nodes_.push_back(nv + m.triangle_edges(t)[k]);
        }
        geometry_.push_back(element_geometry(m, t));
    }
}

std::span<const int> FiniteElementSpace::element_nodes(int t) const {
    const int npe = nodes_per_element();
    return {element_nodes_.data() + static_cast<std::size_t>(t) * npe, static_cast<std::size_t>(npe)};
}

std::vector<Point> FiniteElementSpace::dof_coordinates() const {
    std::vector<Point> out;
    out.reserve(dof_count());
    for (const auto& p : node_coords_) {
        for (int c = 0; c < components(); ++c) out.push_back(p);
    }
    return out;
}

std::vector<int> FiniteElementSpace::nodes_with_tag(BoundaryTag tag) const {
    std::vector<int> out;
    for (int n = 0; n < node_count(); ++n) {
        if (node_tags_[n] == tag) out.push_back(n);
    }
    return out;
}

std::vector<int> FiniteElementSpace::boundary_nodes() const {
    std::vector<int> out;
    for (int n = 0; n < node_count(); ++n) {
        if (node_tags_[n]) out.push_back(n);
    }
    return out;
}

ShapeValues FiniteElementSpace::evaluate_basis(int t, const std::array<double, 3>& bary) const {
    if (t < 0 || t >= static_cast<int>(geometry_.size())) throw std::out_of_range("triangle index");
    return shape_functions(degree_, bary, geometry_[t]);
}

FiniteElementSpace build_space(std::shared_ptr<const TriangleMesh> mesh, int degree, ValueRank rank) {
    return FiniteElementSpace(std::move(mesh), degree, rank);
}

Vector interpolate(const FiniteElementSpace& space, const ScalarField& f) {
    if (space.rank() != ValueRank::Scalar) throw std::invalid_argument("scalar field on vector space");
    Vector out(space.dof_count());
    for (int n = 0; n < space.node_count(); ++n) out[n] = f(space.node_coordinate(n));
    return out;
}

Vector interpolate(const FiniteElementSpace& space, const VectorField& f) {
    if (space.rank() != ValueRank::Vector2) throw std::invalid_argument("vector field on scalar space");
    Vector out(space.dof_count());
    for (int n = 0; n < space.node_count(); ++n) {
        const Vec2 v = f(space.node_coordinate(n));
        out[2 * n] = v[0];
        out[2 * n + 1] = v[1];
    }
    return out;
}

ScalarSample sample_scalar(const FiniteElementSpace& space, const Vector& coeffs, int t,
                           const std::array<double, 3>& bary) {
    const ShapeValues sh = space.evaluate_basis(t, bary);
    const auto nodes = space.element_nodes(t);
    ScalarSample s;
    for (int k = 0; k < sh.count; ++k) {
        const double c = coeffs[nodes[k]];
        s.value += c * sh.value[k];
        s.grad[0] += c * sh.grad[k][0];
        s.grad[1] += c * sh.grad[k][1];
    }
    return s;
}

VectorSample sample_vector(const FiniteElementSpace& space, const Vector& coeffs, int t,
                           const std::array<double, 3>& bary) {
    const ShapeValues sh = space.evaluate_basis(t, bary);
    const auto nodes = space.element_nodes(t);
    VectorSample s;
    for (int k = 0; k < sh.count; ++k) {
        for (int c = 0; c < 2; ++c) {
            const double v = coeffs[2 * nodes[k] + c];
            s.value[c] += v * sh.value[k];
            s.grad[c][0] += v * sh.grad[k][0];
            s.grad[c][1] += v * sh.grad[k][1];
        }
    }
    return s;
}

Point map_to_physical(const TriangleMesh& mesh, int t, const std::array<double, 3>& bary) {
    const auto& tri = mesh.triangles()[t];
    Point p;
    for (int i = 0; i < 3; ++i) {
        p.x += bary[i] * mesh.vertices()[tri[i]].x;
        p.y += bary[i] * mesh.vertices()[tri[i]].y;
    }
    return p;
}

}  // namespace ddbrink
