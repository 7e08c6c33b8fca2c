#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ddbrink {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class BoundaryTag { Left, Right, Bottom, Top };

std::string to_string(BoundaryTag tag);

struct BoundaryEdge {
    std::array<int, 2> vertices;
    BoundaryTag tag;
};

/// Conforming triangulation of an axis-aligned rectangle [0,width]x[0,height].
///
/// Edges are enumerated once at construction so that quadratic spaces can
/// place one node per edge. Local edge k of a triangle joins local vertices
/// k and (k+1)%3.
class TriangleMesh {
public:
    TriangleMesh(std::vector<Point> vertices,
                 std::vector<std::array<int, 3>> triangles,
                 std::vector<BoundaryEdge> boundary_edges,
                 double width,
                 double height);

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }
    const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t triangle_count() const { return triangles_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    double width() const { return width_; }
    double height() const { return height_; }

    /// Tag of a boundary vertex; corners belong to the vertical walls.
    std::optional<BoundaryTag> vertex_tag(int v) const { return vertex_tags_[v]; }
    /// Tag of a boundary edge, empty for interior edges.
    std::optional<BoundaryTag> edge_tag(int e) const { return edge_tags_[e]; }

    double signed_area(int t) const;

private:
    std::vector<Point> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<BoundaryEdge> boundary_edges_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 3>> triangle_edges_;
    std::vector<std::optional<BoundaryTag>> vertex_tags_;
    std::vector<std::optional<BoundaryTag>> edge_tags_;
    double width_;
    double height_;
};

/// nx*ny cells, each split along its lower-left to upper-right diagonal.
TriangleMesh build_structured_rect(int nx, int ny, double width, double height);

/// Maximum edge length over all triangles.
double mesh_size(const TriangleMesh& mesh);

}  // namespace ddbrink
