#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "ddbrink/norms.hpp"

using namespace ddbrink;

namespace {
struct Small {
    std::shared_ptr<const TriangleMesh> mesh = std::make_shared<const TriangleMesh>(build_structured_rect(3, 3, 1.0, 1.0));
    FiniteElementSpace space{mesh, 2, ValueRank::Scalar};
    SparseMatrix mass = assemble_mass(space);
};
}  // namespace

TEST(GNorm, Bdf2Blocks) {
    const GBlocks g = g_blocks({1.0, 0.0, 1.0});
    EXPECT_DOUBLE_EQ(g.g11, 1.25);
    EXPECT_DOUBLE_EQ(g.g12, -0.5);
    EXPECT_DOUBLE_EQ(g.g22, 0.25);
    EXPECT_DOUBLE_EQ(f_factor({1.0, 0.0, 1.0}), 1.0);
    EXPECT_DOUBLE_EQ(f_factor({0.5, 0.0, 1.0}), 0.0);
    EXPECT_DOUBLE_EQ(f_factor({1.0, 0.5, 1.0}), 3.0);
}

TEST(GNorm, TelescopingIdentity) {
    Small s;
    const int n = s.space.dof_count();
    for (double th : {0.5, 0.75, 1.0}) {
        for (double eps : {0.0, 0.4, 2.0}) {
            const Vector a = Vector::Random(n), b = Vector::Random(n), c = Vector::Random(n);
            const double res = check_gf_identity(a, b, c, 0.01, {th, eps, 2.0}, s.mass);
            EXPECT_LT(res, 1e-11 * (a.squaredNorm() + b.squaredNorm() + c.squaredNorm()) / 0.01);
        }
    }
}

TEST(GNorm, BoundsHold) {
    Small s;
    const int n = s.space.dof_count();
    for (double th : {0.5, 0.75, 1.0}) {
        for (double r : {0.0, 0.5, 1.0}) {
            const Vector a = Vector::Random(n), b = Vector::Random(n);
            const GNormBounds g = g_norm_bounds(a, b, s.mass, {th, r, 1.0});
            EXPECT_LE(g.lower, g.value + 1e-13);
            EXPECT_LE(g.value, g.upper + 1e-13);
            EXPECT_LE(g.upper, g.upper_split + 1e-13);
        }
    }
}

TEST(GNorm, TightSplitFailsForOppositeLevels) {
    Small s;
    const Vector a = Vector::Ones(s.space.dof_count());
    const GNormBounds g = g_norm_bounds(a, -a, s.mass, {1.0, 0.0, 1.0});
    EXPECT_NEAR(g.value, 2.5, 1e-12);
    EXPECT_NEAR(g.upper_split_tight, 1.75, 1e-12);
    EXPECT_GT(g.value, g.upper_split_tight);
    EXPECT_LE(g.value, g.upper_split);
}

TEST(GNorm, RandomizedVerification) {
    const IdentityReport r = verify_identities(10, 42);
    EXPECT_TRUE(r.identity_ok) << r.max_identity_residual;
    EXPECT_TRUE(r.bounds_ok) << r.max_upper_violation;
    EXPECT_TRUE(r.skew_ok) << r.max_skew_asymmetry;
    const IdentityReport again = verify_identities(10, 42);
    EXPECT_EQ(r.max_identity_residual, again.max_identity_residual);
}

TEST(Errors, ExactInterpolantHasNoError) {
    Small s;
    const auto f = [](const Point& x) { return x.x * x.y - 2.0 * x.y; };
    const Vector c = interpolate(s.space, ScalarField(f));
    const FieldError e =
        scalar_error(s.space, c, f, [](const Point& x) { return Vec2{x.y, x.x - 2.0}; });
    EXPECT_LT(e.h1, 1e-13);
}

TEST(Errors, ZeroFieldAgainstConstantAndLinear) {
    Small s;
    const Vector zero = Vector::Zero(s.space.dof_count());
    const FieldError e = scalar_error(
        s.space, zero, [](const Point& x) { return x.x; }, [](const Point&) { return Vec2{1.0, 0.0}; });
    EXPECT_NEAR(e.l2, std::sqrt(1.0 / 3.0), 1e-13);
    EXPECT_NEAR(e.h1_semi, 1.0, 1e-13);
    EXPECT_NEAR(e.h1, std::sqrt(4.0 / 3.0), 1e-13);

    const FiniteElementSpace v(s.mesh, 2, ValueRank::Vector2);
    const FieldError ev = vector_error(
        v, Vector::Zero(v.dof_count()), [](const Point&) { return Vec2{1.0, 2.0}; },
        [](const Point&) { return std::array<Vec2, 2>{}; });
    EXPECT_NEAR(ev.l2, std::sqrt(5.0), 1e-13);
}

TEST(Errors, DiscreteNorms) {
    const std::vector<double> e{1.0, 2.0};
    EXPECT_NEAR(discrete_norm(e, 0.5, 2.0), std::sqrt(2.5), 1e-15);
    EXPECT_DOUBLE_EQ(discrete_norm(e, 0.5, std::numeric_limits<double>::infinity()), 2.0);
    EXPECT_THROW(discrete_norm(std::vector<double>{}, 0.5, 2.0), std::invalid_argument);
}

TEST(Ledger, PoincareConstantOfSquare) {
    EXPECT_NEAR(rectangle_poincare_constant(1.0, 1.0), 1.0 / (std::numbers::pi * std::sqrt(2.0)), 1e-15);
}

TEST(Ledger, HomogeneousRunHasNoViolations) {
    auto mesh = std::make_shared<const TriangleMesh>(build_structured_rect(4, 8, 1.0, 2.0));
    const Discretization disc = make_discretization(mesh);
    for (double dt : {0.01, 1.0}) {
        SchemeParams p;
        p.dt = dt;
        p.eps = p.eps1 = p.eps2 = 1.0;
        p.beta_t = 50.0;
        p.beta_s = 40.0;
        BoundaryData bc;
        bc.velocity_nodes = disc.velocity.boundary_nodes();
        bc.temperature_nodes = disc.scalar.nodes_with_tag(BoundaryTag::Left);
        bc.concentration_nodes = bc.temperature_nodes;
        const auto bump = [](const Point& x) { return std::sin(std::numbers::pi * x.x) * x.y; };
        SimState s = initialize(disc, [](const Point&) { return Vec2{0.0, 0.0}; }, bump, bump);
        StabilityMonitor monitor(disc, p, rectangle_poincare_constant(1.0, 2.0));
        monitor.observe(s);
        TimeStepper stepper(disc, p, bc);
        for (int k = 0; k < 10; ++k) {
            s = stepper.advance(s);
            monitor.observe(s);
        }
        EXPECT_EQ(monitor.rows().size(), 10u);
        EXPECT_EQ(monitor.violations(), 0) << "dt " << dt;
        EXPECT_GT(monitor.rows().back().bound_u, 0.0);
    }
}

TEST(Ledger, CsvHeader) {
    std::ostringstream out;
    LedgerRow r;
    r.step = 3;
    r.violated = true;
    write_ledger_csv(out, {r});
    const std::string s = out.str();
    EXPECT_EQ(s.substr(0, s.find('\n')), "step,time,uu,TT,SS,curv_u,curv_T,curv_S,bound_u,bound_T,bound_S,violated");
    EXPECT_EQ(s.substr(s.find('\n') + 1, 2), "3,");
    EXPECT_EQ(s[s.size() - 2], '1');
}
