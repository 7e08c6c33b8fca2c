#include <gtest/gtest.h>

#include "bdf2le_oracle.hpp"
#include "ddbrink/timestep.hpp"

using namespace ddbrink;

TEST(Stencils, Bdf2AndCrankNicolsonLimits) {
    const TimeStencil d1 = d_coeffs(1.0);
    EXPECT_DOUBLE_EQ(d1.plus, 1.5);
    EXPECT_DOUBLE_EQ(d1.mid, -2.0);
    EXPECT_DOUBLE_EQ(d1.minus, 0.5);
    const TimeStencil dh = d_coeffs(0.5);
    EXPECT_DOUBLE_EQ(dh.plus, 1.0);
    EXPECT_DOUBLE_EQ(dh.mid, -1.0);
    EXPECT_DOUBLE_EQ(dh.minus, 0.0);

    const TimeStencil f1 = f_coeffs(1.0, 0.0, 2.0);
    EXPECT_DOUBLE_EQ(f1.plus, 1.0);
    EXPECT_DOUBLE_EQ(f1.mid, 0.0);
    EXPECT_DOUBLE_EQ(f1.minus, 0.0);
    const TimeStencil fh = f_coeffs(0.5, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(fh.plus, 0.5);
    EXPECT_DOUBLE_EQ(fh.mid, 0.5);

    const TimeStencil h1 = h_coeffs(1.0);
    EXPECT_DOUBLE_EQ(h1.mid, 2.0);
    EXPECT_DOUBLE_EQ(h1.minus, -1.0);
    const TimeStencil hh = h_coeffs(0.5);
    EXPECT_DOUBLE_EQ(hh.mid, 1.5);
    EXPECT_DOUBLE_EQ(hh.minus, -0.5);
}

TEST(Stencils, ConsistencyForAllParameters) {
    for (double th : {0.5, 0.6, 0.75, 1.0}) {
        for (double eps : {0.0, 0.3, 1.0}) {
            const TimeStencil d = d_coeffs(th), f = f_coeffs(th, eps, 0.7), h = h_coeffs(th);
            EXPECT_NEAR(d.plus + d.mid + d.minus, 0.0, 1e-15);
            EXPECT_NEAR(d.plus - d.minus, 1.0, 1e-15);  // exact for linear data
            EXPECT_NEAR(f.plus + f.mid + f.minus, 1.0, 1e-15);
            EXPECT_NEAR(h.mid + h.minus, 1.0, 1e-15);
            // f and h both evaluate at t_{n+theta} to first order
            EXPECT_NEAR(f.plus - f.minus, th, 1e-15);
            EXPECT_NEAR(-h.minus, th, 1e-15);
        }
    }
}

TEST(Stencils, ThetaOutsideParameterBox) {
    EXPECT_THROW(d_coeffs(0.25), std::invalid_argument);
    EXPECT_THROW(h_coeffs(1.5), std::invalid_argument);
    SchemeParams p;
    p.theta = 0.25;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.theta = 1.0;
    p.nu = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

namespace {
struct Box {
    std::shared_ptr<const TriangleMesh> mesh = std::make_shared<const TriangleMesh>(build_structured_rect(4, 4, 1.0, 1.0));
    Discretization disc = make_discretization(mesh);
    BoundaryData bc;
    Box() {
        bc.velocity_nodes = disc.velocity.boundary_nodes();
        bc.temperature_nodes = disc.scalar.nodes_with_tag(BoundaryTag::Left);
        for (int n : disc.scalar.nodes_with_tag(BoundaryTag::Right)) bc.temperature_nodes.push_back(n);
        bc.concentration_nodes = bc.temperature_nodes;
        bc.temperature = [](const Point& x, double) { return 1.0 - x.x; };
        bc.concentration = bc.temperature;
    }
};
}  // namespace

TEST(TimeStepper, ConductionStateIsSteady) {
    Box b;
    SchemeParams p;
    p.dt = 0.1;
    const auto lin = [](const Point& x) { return 1.0 - x.x; };
    SimState s = initialize(b.disc, [](const Point&) { return Vec2{0.0, 0.0}; }, lin, lin);
    const Vector t0 = s.temp_n;
    TimeStepper stepper(b.disc, p, b.bc);
    for (int k = 0; k < 5; ++k) s = stepper.advance(s);
    EXPECT_LT((s.temp_n - t0).lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_LT(s.u_n.lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_EQ(s.step, 5);
    EXPECT_NEAR(s.time, 0.5, 1e-15);
}

TEST(TimeStepper, MatchesIndependentBdf2Assembly) {
    const oracle::Comparison c = oracle::compare_with_library(4, 10);
    EXPECT_LT(c.worst(), 1e-12 * std::max(1.0, c.max_abs_value));
}

TEST(TimeStepper, WatchdogReportsStep) {
    Box b;
    SchemeParams p;
    p.dt = 0.1;
    p.beta_t = 1e3;
    const auto lin = [](const Point& x) { return 1.0 - x.x; };
    SimState s = initialize(b.disc, [](const Point&) { return Vec2{0.0, 0.0}; }, lin, lin);
    TimeStepper stepper(b.disc, p, b.bc);
    stepper.divergence_threshold = 1e-3;  // any motion counts
    try {
        stepper.advance(s);
        FAIL() << "expected DivergenceError";
    } catch (const DivergenceError& e) {
        EXPECT_EQ(e.step(), 1);
    }
}

TEST(TimeStepper, RunStepsAndObserverStop) {
    Box b;
    SchemeParams p;
    p.dt = 0.25;
    const auto zero = [](const Point&) { return 0.0; };
    SimState s = initialize(b.disc, [](const Point&) { return Vec2{0.0, 0.0}; }, zero, zero);
    TimeStepper stepper(b.disc, p, b.bc);
    RunResult r = run(stepper, s, 1.0);
    EXPECT_EQ(r.steps, 4);
    EXPECT_FALSE(r.stopped_early);
    r = run(stepper, s, 1.0, [](const SimState& st) { return st.step < 2; });
    EXPECT_EQ(r.steps, 2);
    EXPECT_TRUE(r.stopped_early);
}

TEST(TimeStepper, TwoLevelStartUsesBothTimes) {
    Box b;
    const SimState s = initialize_two_level(
        b.disc, [](const Point&, double t) { return Vec2{t, 0.0}; }, [](const Point&, double t) { return t; },
        [](const Point&, double t) { return 2.0 * t; }, 1.0, 0.25, [](const Point& x, double t) { return t * x.x; });
    EXPECT_DOUBLE_EQ(s.u_n[0], 1.0);
    EXPECT_DOUBLE_EQ(s.u_nm1[0], 0.75);
    EXPECT_DOUBLE_EQ(s.conc_nm1[3], 1.5);
    EXPECT_NEAR(b.disc.pressure_weights.dot(s.p_n), 0.0, 1e-14);
    EXPECT_DOUBLE_EQ(s.time, 1.0);
}
