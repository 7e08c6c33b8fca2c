#include "ddbrink/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ddbrink {

std::string to_string(BoundaryTag tag) {
    switch (tag) {
        case BoundaryTag::Left: return "left";
        case BoundaryTag::Right: return "right";
        case BoundaryTag::Bottom: return "bottom";
        case BoundaryTag::Top: return "top";
    }
    return "unknown";
}

namespace {

bool is_vertical(BoundaryTag tag) {
    return tag == BoundaryTag::Left || tag == BoundaryTag::Right;
}

}  // namespace

TriangleMesh::TriangleMesh(std::vector<Point> vertices,
                           std::vector<std::array<int, 3>> triangles,
                           std::vector<BoundaryEdge> boundary_edges,
                           double width,
                           double height)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)),
      width_(width),
      height_(height) {
    const int nv = static_cast<int>(vertices_.size());
    for (const auto& tri : triangles_) {
        for (int v : tri) {
            if (v < 0 || v >= nv) throw std::invalid_argument("triangle references unknown vertex");
        }
    }

    std::map<std::pair<int, int>, int> edge_index;
    triangle_edges_.resize(triangles_.size());
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            int a = triangles_[t][k];
            int b = triangles_[t][(k + 1) % 3];
            auto key = std::minmax(a, b);
            auto [it, inserted] = edge_index.try_emplace({key.first, key.second},
                                                         static_cast<int>(edges_.size()));
            if (inserted) edges_.push_back({key.first, key.second});
            triangle_edges_[t][k] = it->second;
        }
    }

    vertex_tags_.assign(vertices_.size(), std::nullopt);
    edge_tags_.assign(edges_.size(), std::nullopt);
    for (const auto& be : boundary_edges_) {
        auto key = std::minmax(be.vertices[0], be.vertices[1]);
        auto it = edge_index.find({key.first, key.second});
        if (it == edge_index.end()) throw std::invalid_argument("boundary edge is not a mesh edge");
        edge_tags_[it->second] = be.tag;
        for (int v : be.vertices) {
            auto& vt = vertex_tags_[v];
            if (!vt || (is_vertical(be.tag) && !is_vertical(*vt))) vt = be.tag;
        }
    }
}

double TriangleMesh::signed_area(int t) const {
    const auto& tri = triangles_[t];
    const Point& a = vertices_[tri[0]];
    const Point& b = vertices_[tri[1]];
    const Point& c = vertices_[tri[2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

TriangleMesh build_structured_rect(int nx, int ny, double width, double height) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("cell counts must be positive");
    if (!(width > 0.0) || !(height > 0.0)) throw std::invalid_argument("rectangle dimensions must be positive");

    std::vector<Point> vertices;
    vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            // Exact endpoints so boundary coordinates compare cleanly.
            double x = (i == nx) ? width : width * i / nx;
            double y = (j == ny) ? height : height * j / ny;
            vertices.push_back({x, y});
        }
    }
    auto id = [nx](int i, int j) { return j * (nx + 1) + i; };

    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(2 * static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
            triangles.push_back({v00, v10, v11});
            triangles.push_back({v00, v11, v01});
        }
    }

    std::vector<BoundaryEdge> boundary;
    boundary.reserve(2 * static_cast<std::size_t>(nx + ny));
    for (int i = 0; i < nx; ++i) {
        boundary.push_back({{id(i, 0), id(i + 1, 0)}, BoundaryTag::Bottom});
        boundary.push_back({{id(i + 1, ny), id(i, ny)}, BoundaryTag::Top});
    }
    for (int j = 0; j < ny; ++j) {
        boundary.push_back({{id(nx, j), id(nx, j + 1)}, BoundaryTag::Right});
        boundary.push_back({{id(0, j + 1), id(0, j)}, BoundaryTag::Left});
    }
    return TriangleMesh(std::move(vertices), std::move(triangles), std::move(boundary), width, height);
}

double mesh_size(const TriangleMesh& mesh) {
    if (mesh.triangle_count() == 0) throw std::invalid_argument("empty mesh");
    double h = 0.0;
    for (const auto& e : mesh.edges()) {
        const Point& a = mesh.vertices()[e[0]];
        const Point& b = mesh.vertices()[e[1]];
        h = std::max(h, std::hypot(b.x - a.x, b.y - a.y));
    }
    return h;
}

}  // namespace ddbrink
