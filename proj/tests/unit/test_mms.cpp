#include <gtest/gtest.h>

#include <sstream>

#include "ddbrink/mms.hpp"

using namespace ddbrink;

namespace {

constexpr double kH = 1e-4;

// Central differences of a scalar function of (x, y, t).
template <typename F>
double dx(F f, Point p, double t) {
    return (f({p.x + kH, p.y}, t) - f({p.x - kH, p.y}, t)) / (2 * kH);
}
template <typename F>
double dy(F f, Point p, double t) {
    return (f({p.x, p.y + kH}, t) - f({p.x, p.y - kH}, t)) / (2 * kH);
}
template <typename F>
double dt(F f, Point p, double t) {
    return (f(p, t + kH) - f(p, t - kH)) / (2 * kH);
}
template <typename F>
double lap(F f, Point p, double t) {
    const double h = 1e-3;
    return (f({p.x + h, p.y}, t) + f({p.x - h, p.y}, t) + f({p.x, p.y + h}, t) + f({p.x, p.y - h}, t) - 4 * f(p, t)) /
           (h * h);
}

}  // namespace

TEST(Mms, DerivativesAgreeWithFiniteDifferences) {
    const ManufacturedSolution ms = reference_solution();
    for (Point p : {Point{0.2, 0.7}, Point{0.9, 0.1}}) {
        for (double t : {0.0, 0.6}) {
            for (int c = 0; c < 2; ++c) {
                auto uc = [&](Point q, double s) { return ms.u(q, s)[c]; };
                EXPECT_NEAR(ms.grad_u(p, t)[c][0], dx(uc, p, t), 1e-7);
                EXPECT_NEAR(ms.grad_u(p, t)[c][1], dy(uc, p, t), 1e-7);
                EXPECT_NEAR(ms.lap_u(p, t)[c], lap(uc, p, t), 1e-5);
                EXPECT_NEAR(ms.u_t(p, t)[c], dt(uc, p, t), 1e-7);
            }
            EXPECT_NEAR(ms.grad_p(p, t)[0], dx(ms.p, p, t), 1e-7);
            EXPECT_NEAR(ms.grad_p(p, t)[1], dy(ms.p, p, t), 1e-7);
            for (const auto* s : {&ms.temp, &ms.conc}) {
                EXPECT_NEAR(s->grad(p, t)[0], dx(s->value, p, t), 1e-7);
                EXPECT_NEAR(s->grad(p, t)[1], dy(s->value, p, t), 1e-7);
                EXPECT_NEAR(s->lap(p, t), lap(s->value, p, t), 1e-5);
                EXPECT_NEAR(s->dt(p, t), dt(s->value, p, t), 1e-7);
            }
        }
    }
}

TEST(Mms, ForcingIsTheStrongResidual) {
    const ManufacturedSolution ms = reference_solution();
    SchemeParams prm;
    prm.nu = 0.7;
    prm.gamma = 1.3;
    prm.dc = 0.4;
    prm.da_inv = 2.0;
    prm.beta_t = 3.0;
    prm.beta_s = -1.5;
    prm.g = {0.2, 1.0};
    const Forcing f = forcing(ms, prm);
    const Point p{0.35, 0.8};
    const double t = 0.4;
    const Vec2 u = ms.u(p, t);
    for (int c = 0; c < 2; ++c) {
        auto uc = [&](Point q, double s) { return ms.u(q, s)[c]; };
        const double adv = u[0] * dx(uc, p, t) + u[1] * dy(uc, p, t);
        const double gp = c == 0 ? dx(ms.p, p, t) : dy(ms.p, p, t);
        const double r = dt(uc, p, t) - prm.nu * lap(uc, p, t) + adv + prm.da_inv * u[c] + gp -
                         (prm.beta_t * ms.temp.value(p, t) + prm.beta_s * ms.conc.value(p, t)) * prm.g[c];
        EXPECT_NEAR(f.f(p, t)[c], r, 1e-5);
    }
    auto transport = [&](const ManufacturedSolution::Scalar& s, double k) {
        return dt(s.value, p, t) - k * lap(s.value, p, t) + u[0] * dx(s.value, p, t) + u[1] * dy(s.value, p, t);
    };
    EXPECT_NEAR(f.phi(p, t), transport(ms.temp, prm.gamma), 1e-5);
    EXPECT_NEAR(f.psi(p, t), transport(ms.conc, prm.dc), 1e-5);
}

TEST(Mms, VelocityIsSolenoidal) {
    const ManufacturedSolution ms = reference_solution();
    const Mat2 g = ms.grad_u({0.3, 0.4}, 0.7);
    EXPECT_DOUBLE_EQ(g[0][0] + g[1][1], 0.0);
}

TEST(Rates, ComputeRate) {
    EXPECT_NEAR(compute_rate(4e-3, 1e-3, 2.0), 2.0, 1e-14);
    EXPECT_NEAR(compute_rate(1.0, 1.0 / 27.0, 3.0), 3.0, 1e-14);
    EXPECT_THROW(compute_rate(0.0, 1.0, 2.0), std::invalid_argument);
    EXPECT_THROW(compute_rate(1.0, 0.5, 1.0), std::invalid_argument);
}

TEST(Rates, CsvLayout) {
    RateTable t;
    t.rows.resize(2);
    t.rows[0].h_or_dt = 0.5;
    t.rows[1].h_or_dt = 0.25;
    t.rows[0].err_u_h1 = 4.0;
    t.rows[1].err_u_h1 = 1.0;
    fill_rates(t);
    EXPECT_FALSE(t.rows[0].rate_u.has_value());
    EXPECT_NEAR(*t.rows[1].rate_u, 2.0, 1e-14);
    EXPECT_FALSE(t.rows[1].rate_t.has_value());  // zero errors give no rate
    std::ostringstream out;
    write_rate_csv(out, t);
    std::istringstream in(out.str());
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header, "level,h_or_dt,err_u_h1,rate_u,err_T_h1,rate_T,err_S_h1,rate_S,err_u_l2,err_T_l2,err_S_l2");
    EXPECT_EQ(first.substr(0, 9), "0,0.5,4,,");
}

TEST(Mms, SmallSpatialSweepConvergesAtSecondOrder) {
    MmsOptions o;
    o.params.beta_t = o.params.beta_s = 1.0;
    o.t_end = 0.05;
    const RateTable t = spatial_sweep({4, 8}, 0.1 / 16, o);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_NEAR(*t.rows[1].rate_u, 2.0, 0.15);
    EXPECT_NEAR(*t.rows[1].rate_t, 2.0, 0.15);
    EXPECT_NEAR(*t.rows[1].rate_s, 2.0, 0.15);
    EXPECT_LE(t.rows[1].err_u_l2, t.rows[1].err_u_h1);
}

TEST(Mms, ThreadedSweepMatchesSerial) {
    MmsOptions o;
    o.params.beta_t = o.params.beta_s = 1.0;
    o.t_end = 0.02;
    const RateTable a = spatial_sweep({2, 4}, 0.01, o);
    o.jobs = 2;
    const RateTable b = spatial_sweep({2, 4}, 0.01, o);
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(a.rows[i].err_u_h1, b.rows[i].err_u_h1, 1e-14);
}
