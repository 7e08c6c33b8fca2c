#include <gtest/gtest.h>

#include <cmath>

#include "ddbrink/fespace.hpp"

using namespace ddbrink;

namespace {
std::shared_ptr<const TriangleMesh> rect(int nx, int ny, double w = 1.0, double h = 1.0) {
    return std::make_shared<const TriangleMesh>(build_structured_rect(nx, ny, w, h));
}
}  // namespace

TEST(FeSpace, CavityVelocityDofs) {
    const FiniteElementSpace v(rect(25, 40, 1.0, 2.0), 2, ValueRank::Vector2);
    EXPECT_EQ(v.dof_count(), 8262);
    const FiniteElementSpace p(rect(25, 40, 1.0, 2.0), 1, ValueRank::Scalar);
    EXPECT_EQ(p.dof_count(), 1066);
}

TEST(FeSpace, PartitionOfUnityAndGradientSum) {
    const FiniteElementSpace s(rect(2, 3), 2, ValueRank::Scalar);
    for (int t = 0; t < static_cast<int>(s.mesh().triangle_count()); ++t) {
        const ShapeValues sv = s.evaluate_basis(t, {0.2, 0.3, 0.5});
        double sum = 0.0, gx = 0.0, gy = 0.0;
        for (int k = 0; k < sv.count; ++k) {
            sum += sv.value[k];
            gx += sv.grad[k][0];
            gy += sv.grad[k][1];
        }
        EXPECT_NEAR(sum, 1.0, 1e-14);
        EXPECT_NEAR(gx, 0.0, 1e-12);
        EXPECT_NEAR(gy, 0.0, 1e-12);
    }
}

TEST(FeSpace, NodalBasis) {
    const FiniteElementSpace s(rect(1, 1), 2, ValueRank::Scalar);
    const auto nodes = s.element_nodes(0);
    const std::array<std::array<double, 3>, 6> bary{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {.5, .5, 0}, {0, .5, .5}, {.5, 0, .5}}};
    for (int i = 0; i < 6; ++i) {
        const ShapeValues sv = s.evaluate_basis(0, bary[i]);
        for (int j = 0; j < 6; ++j) EXPECT_NEAR(sv.value[j], i == j ? 1.0 : 0.0, 1e-14);
        const Point x = map_to_physical(s.mesh(), 0, bary[i]);
        EXPECT_NEAR(x.x, s.node_coordinate(nodes[i]).x, 1e-15);
        EXPECT_NEAR(x.y, s.node_coordinate(nodes[i]).y, 1e-15);
    }
}

TEST(FeSpace, QuadraticsInterpolatedExactly) {
    const FiniteElementSpace s(rect(3, 2, 1.0, 2.0), 2, ValueRank::Scalar);
    auto f = [](const Point& x) { return 1.0 + 2.0 * x.x - x.y + 3.0 * x.x * x.y - x.y * x.y; };
    const Vector c = interpolate(s, ScalarField(f));
    for (int t = 0; t < static_cast<int>(s.mesh().triangle_count()); ++t) {
        const std::array<double, 3> b{0.1, 0.6, 0.3};
        const Point x = map_to_physical(s.mesh(), t, b);
        const ScalarSample v = sample_scalar(s, c, t, b);
        EXPECT_NEAR(v.value, f(x), 1e-13);
        EXPECT_NEAR(v.grad[0], 2.0 + 3.0 * x.y, 1e-12);
        EXPECT_NEAR(v.grad[1], -1.0 + 3.0 * x.x - 2.0 * x.y, 1e-12);
    }
}

TEST(FeSpace, VectorInterleaving) {
    const FiniteElementSpace v(rect(2, 2), 2, ValueRank::Vector2);
    const Vector c = interpolate(v, VectorField([](const Point& x) { return Vec2{x.x, -2.0 * x.y}; }));
    for (int n = 0; n < v.node_count(); ++n) {
        EXPECT_DOUBLE_EQ(c[2 * n], v.node_coordinate(n).x);
        EXPECT_DOUBLE_EQ(c[2 * n + 1], -2.0 * v.node_coordinate(n).y);
    }
    const VectorSample s = sample_vector(v, c, 3, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    EXPECT_NEAR(s.grad[0][0], 1.0, 1e-13);
    EXPECT_NEAR(s.grad[1][1], -2.0, 1e-13);
    EXPECT_NEAR(s.grad[0][1], 0.0, 1e-13);
}

TEST(FeSpace, BoundaryNodeTags) {
    const FiniteElementSpace s(rect(4, 4), 2, ValueRank::Scalar);
    EXPECT_EQ(s.boundary_nodes().size(), 32u);
    // vertical walls own the corners: 9 nodes each, horizontal walls keep 7
    EXPECT_EQ(s.nodes_with_tag(BoundaryTag::Left).size(), 9u);
    EXPECT_EQ(s.nodes_with_tag(BoundaryTag::Right).size(), 9u);
    EXPECT_EQ(s.nodes_with_tag(BoundaryTag::Top).size(), 7u);
    for (int n : s.nodes_with_tag(BoundaryTag::Left)) EXPECT_EQ(s.node_coordinate(n).x, 0.0);
}

TEST(FeSpace, DegenerateTriangleRejected) {
    auto mesh = std::make_shared<const TriangleMesh>(
        std::vector<Point>{{0, 0}, {1, 0}, {2, 0}}, std::vector<std::array<int, 3>>{{0, 1, 2}},
        std::vector<BoundaryEdge>{}, 2.0, 1.0);
    EXPECT_THROW(FiniteElementSpace(mesh, 1, ValueRank::Scalar), std::domain_error);
}
