#include "ddbrink/norms.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace ddbrink {

namespace {

double inner(const Vector& a, const Vector& b, const SparseMatrix& mass) { return a.dot(mass * b); }

double coupling(const GNormParams& p) {
    return (p.theta + 1.0) * (2.0 * p.theta - 1.0) / 4.0 + 0.5 * p.theta * p.eps / p.mu;
}

}  // namespace

GBlocks g_blocks(const GNormParams& p) {
    const double c = coupling(p);
    return {(2.0 * p.theta + 1.0) / 4.0 + c, -c, (1.0 - 2.0 * p.theta) / 4.0 + c};
}

double f_factor(const GNormParams& p) {
    return p.theta * (2.0 * p.theta - 1.0) + 4.0 * p.theta * p.theta * p.eps / p.mu;
}

double g_norm_sq(const Vector& a, const Vector& b, const SparseMatrix& mass, const GNormParams& p) {
    if (a.size() != b.size() || a.size() != mass.rows()) throw std::invalid_argument("g_norm_sq: length mismatch");
    const GBlocks g = g_blocks(p);
    return g.g11 * inner(a, a, mass) + 2.0 * g.g12 * inner(a, b, mass) + g.g22 * inner(b, b, mass);
}

double f_norm_sq(const Vector& w, const SparseMatrix& mass, const GNormParams& p) {
    return f_factor(p) * inner(w, w, mass);
}

double check_gf_identity(const Vector& w_np1, const Vector& w_n, const Vector& w_nm1, double dt,
                         const GNormParams& p, const SparseMatrix& mass) {
    const TimeStencil d = d_coeffs(p.theta);
    const TimeStencil f = f_coeffs(p.theta, p.eps, p.mu);
    const Vector dw = (d.plus * w_np1 + d.mid * w_n + d.minus * w_nm1) / dt;
    const Vector fw = f.plus * w_np1 + f.mid * w_n + f.minus * w_nm1;
    const double lhs = inner(dw, fw, mass);
    const Vector curvature = w_np1 - 2.0 * w_n + w_nm1;
    const double rhs = (g_norm_sq(w_np1, w_n, mass, p) - g_norm_sq(w_n, w_nm1, mass, p)) / dt +
                       f_norm_sq(curvature, mass, p) / (4.0 * dt);
    return std::abs(lhs - rhs);
}

GNormBounds g_norm_bounds(const Vector& a, const Vector& b, const SparseMatrix& mass, const GNormParams& p) {
    const double c = coupling(p);
    const double aa = inner(a, a, mass);
    const double bb = inner(b, b, mass);
    const Vector diff = a - b;
    const double dd = inner(diff, diff, mass);
    GNormBounds out;
    out.value = g_norm_sq(a, b, mass, p);
    out.lower = (2.0 * p.theta + 1.0) / 4.0 * aa - (2.0 * p.theta - 1.0) / 4.0 * bb;
    out.upper = (2.0 * p.theta + 1.0) / 4.0 * aa + c * dd;
    // |a-b|^2 <= 2|a|^2 + 2|b|^2
    out.upper_split = ((2.0 * p.theta + 1.0) / 4.0 + 2.0 * c) * aa + 2.0 * c * bb;
    out.upper_split_tight = ((2.0 * p.theta + 1.0) / 4.0 + c) * aa + c * bb;
    return out;
}

IdentityReport verify_identities(int draws, std::uint64_t seed) {
    if (draws < 1) throw std::invalid_argument("need at least one draw");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    IdentityReport report;
    report.draws = draws;

    auto mesh = std::make_shared<const TriangleMesh>(build_structured_rect(4, 4, 1.0, 1.0));
    const FiniteElementSpace space(mesh, 2, ValueRank::Scalar);
    const SparseMatrix mass = assemble_mass(space);
    auto random_vector = [&](int n) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v[i] = normal(rng);
        return v;
    };
    auto m_norm = [&](const Vector& v) { return std::sqrt(inner(v, v, mass)); };

    for (double theta : {0.5, 0.75, 1.0}) {
        for (double ratio : {0.0, 0.5, 1.0}) {
            for (int k = 0; k < draws; ++k) {
                const double mu = 0.5 + 1.5 * uniform(rng);
                const GNormParams p{theta, ratio * mu, mu};
                const double dt = std::pow(10.0, -3.0 * uniform(rng));
                const Vector a = random_vector(space.dof_count());
                const Vector b = random_vector(space.dof_count());
                const Vector c = random_vector(space.dof_count());
                const double na = m_norm(a), nb = m_norm(b), nc = m_norm(c);
                const double scale = (na + nb + nc) * (na + nb + nc) / dt;
                report.max_identity_residual =
                    std::max(report.max_identity_residual, check_gf_identity(a, b, c, dt, p, mass) / scale);

                const GNormBounds bounds = g_norm_bounds(a, b, mass, p);
                const double bscale = na * na + nb * nb;
                report.max_lower_violation =
                    std::max(report.max_lower_violation, (bounds.lower - bounds.value) / bscale);
                report.max_upper_violation =
                    std::max({report.max_upper_violation, (bounds.value - bounds.upper) / bscale,
                              (bounds.upper - bounds.upper_split) / bscale});
                if (bounds.value - bounds.upper_split_tight > 1e-12 * bscale) ++report.tight_split_violations;
            }
        }
    }
    report.identity_ok = report.max_identity_residual <= 1e-11;
    report.bounds_ok = report.max_lower_violation <= 1e-12 && report.max_upper_violation <= 1e-12;

    for (auto [nx, ny, h] : {std::tuple{4, 4, 1.0}, std::tuple{8, 8, 1.0}, std::tuple{16, 32, 2.0}}) {
        auto m = std::make_shared<const TriangleMesh>(build_structured_rect(nx, ny, 1.0, h));
        const FiniteElementSpace vel(m, 2, ValueRank::Vector2);
        const FiniteElementSpace sca(m, 2, ValueRank::Scalar);
        for (int k = 0; k < 3; ++k) {
            const Vector w = random_vector(vel.dof_count());
            const double wn = std::max(1.0, w.lpNorm<Eigen::Infinity>());
            for (const FiniteElementSpace* s : {&vel, &sca}) {
                const SparseMatrix n = assemble_convection_skew(*s, vel, w);
                const SparseMatrix sym = n + SparseMatrix(n.transpose());
                double asym = 0.0;
                for (int r = 0; r < sym.outerSize(); ++r) {
                    for (SparseMatrix::InnerIterator it(sym, r); it; ++it) asym = std::max(asym, std::abs(it.value()));
                }
                report.max_skew_asymmetry = std::max(report.max_skew_asymmetry, asym);
                const Vector v = random_vector(s->dof_count());
                report.max_skew_energy =
                    std::max(report.max_skew_energy, std::abs(v.dot(n * v)) / (v.squaredNorm() * wn));
            }
        }
    }
    report.skew_ok = report.max_skew_asymmetry <= 1e-13 && report.max_skew_energy <= 1e-12;
    return report;
}

FieldError scalar_error(const FiniteElementSpace& space, const Vector& coeffs, const ScalarField& exact,
                        const std::function<Vec2(const Point&)>& exact_grad, int strength) {
    const auto& quad = triangle_quadrature(strength);
    double l2 = 0.0, semi = 0.0;
    for (int t = 0; t < static_cast<int>(space.mesh().triangle_count()); ++t) {
        const double jac = 2.0 * space.geometry(t).area;
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const Point x = map_to_physical(space.mesh(), t, quad.points[q]);
            const ScalarSample s = sample_scalar(space, coeffs, t, quad.points[q]);
            const double e = s.value - exact(x);
            const Vec2 ge = exact_grad(x);
            const double ex = s.grad[0] - ge[0], ey = s.grad[1] - ge[1];
            l2 += quad.weights[q] * jac * e * e;
            semi += quad.weights[q] * jac * (ex * ex + ey * ey);
        }
    }
    return {std::sqrt(l2), std::sqrt(semi), std::sqrt(l2 + semi)};
}

FieldError vector_error(const FiniteElementSpace& space, const Vector& coeffs, const VectorField& exact,
                        const std::function<std::array<Vec2, 2>(const Point&)>& exact_grad, int strength) {
    const auto& quad = triangle_quadrature(strength);
    double l2 = 0.0, semi = 0.0;
    for (int t = 0; t < static_cast<int>(space.mesh().triangle_count()); ++t) {
        const double jac = 2.0 * space.geometry(t).area;
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const Point x = map_to_physical(space.mesh(), t, quad.points[q]);
            const VectorSample s = sample_vector(space, coeffs, t, quad.points[q]);
            const Vec2 u = exact(x);
            const auto gu = exact_grad(x);
            for (int c = 0; c < 2; ++c) {
                const double e = s.value[c] - u[c];
                const double ex = s.grad[c][0] - gu[c][0], ey = s.grad[c][1] - gu[c][1];
                l2 += quad.weights[q] * jac * e * e;
                semi += quad.weights[q] * jac * (ex * ex + ey * ey);
            }
        }
    }
    return {std::sqrt(l2), std::sqrt(semi), std::sqrt(l2 + semi)};
}

double discrete_norm(std::span<const double> step_norms, double dt, double m) {
    if (step_norms.empty()) throw std::invalid_argument("discrete_norm of an empty trajectory");
    if (std::isinf(m)) {
        double best = 0.0;
        for (double v : step_norms) best = std::max(best, std::abs(v));
        return best;
    }
    if (!(m >= 1.0)) throw std::invalid_argument("discrete_norm exponent must be >= 1");
    double sum = 0.0;
    for (double v : step_norms) sum += std::pow(std::abs(v), m);
    return std::pow(dt * sum, 1.0 / m);
}

double rectangle_poincare_constant(double width, double height) {
    return 1.0 / (std::numbers::pi * std::sqrt(1.0 / (width * width) + 1.0 / (height * height)));
}

StabilityMonitor::StabilityMonitor(const Discretization& disc, const SchemeParams& params, double poincare_constant)
    : disc_(disc), params_(params) {
    const double beta = std::max(std::abs(params.beta_t), std::abs(params.beta_s));
    const double gmag = std::hypot(params.g[0], params.g[1]);
    c_ = 2.0 * std::pow(beta * gmag * poincare_constant, 2);
}

void StabilityMonitor::observe(const SimState& state) {
    const auto& p = params_;
    const double th = p.theta;
    const double dt = p.dt;
    Levels cur{state.u_n, state.temp_n, state.conc_n};
    const int level = levels_seen_++;
    if (level == 0) {
        level0_ = cur;
        window_ = {cur};
        return;
    }
    if (level == 1) level1_ = cur;
    window_.push_back(cur);
    if (window_.size() > 3) window_.erase(window_.begin());

    const GNormParams gu{th, p.eps, p.nu};
    const GNormParams gt{th, p.eps1, p.gamma};
    const GNormParams gs{th, p.eps2, p.dc};

    if (window_.size() == 3) {
        // Term n = level-1 of the sums over n = 1..N-1.
        const Levels& a = window_[2];
        const Levels& b = window_[1];
        const Levels& c = window_[0];
        curv_u_ += f_norm_sq(a.u - 2.0 * b.u + c.u, disc_.mass_u, gu);
        curv_t_ += f_norm_sq(a.t - 2.0 * b.t + c.t, disc_.mass_s, gt);
        curv_s_ += f_norm_sq(a.s - 2.0 * b.s + c.s, disc_.mass_s, gs);
        const TimeStencil fu = f_coeffs(th, p.eps, p.nu);
        const TimeStencil ft = f_coeffs(th, p.eps1, p.gamma);
        const TimeStencil fs = f_coeffs(th, p.eps2, p.dc);
        const Vector u_f = fu.plus * a.u + fu.mid * b.u + fu.minus * c.u;
        const Vector t_f = ft.plus * a.t + ft.mid * b.t + ft.minus * c.t;
        const Vector s_f = fs.plus * a.s + fs.mid * b.s + fs.minus * c.s;
        diss_u_ += 2.0 * dt * p.nu / (2.0 * th + 1.0) * u_f.dot(disc_.stiffness_u * u_f) +
                   4.0 * dt * p.da_inv / (2.0 * th + 1.0) * u_f.dot(disc_.mass_u * u_f);
        diss_t_ += 4.0 * dt * p.gamma / (2.0 * th + 1.0) * t_f.dot(disc_.stiffness_s * t_f);
        diss_s_ += 4.0 * dt * p.dc / (2.0 * th + 1.0) * s_f.dot(disc_.stiffness_s * s_f);
    }

    const long n_level = level;
    const double r = (2.0 * th - 1.0) / (2.0 * th + 1.0);
    const double rn = std::pow(r, static_cast<double>(n_level));
    const double g_t = g_norm_sq(level1_.t, level0_.t, disc_.mass_s, gt);
    const double g_s = g_norm_sq(level1_.s, level0_.s, disc_.mass_s, gs);
    const double g_u = g_norm_sq(level1_.u, level0_.u, disc_.mass_u, gu);
    auto sq = [](const Vector& v, const SparseMatrix& m) { return v.dot(m * v); };

    LedgerRow row;
    row.step = state.step;
    row.time = state.time;
    row.uu = sq(cur.u, disc_.mass_u);
    row.tt = sq(cur.t, disc_.mass_s);
    row.ss = sq(cur.s, disc_.mass_s);
    row.curv_u = curv_u_;
    row.curv_t = curv_t_;
    row.curv_s = curv_s_;
    row.diss_u = diss_u_;
    row.diss_t = diss_t_;
    row.diss_s = diss_s_;
    row.lhs_u = row.uu + curv_u_ / (2.0 * th + 1.0) + diss_u_;
    row.lhs_t = row.tt + curv_t_ / (2.0 * th + 1.0) + diss_t_;
    row.lhs_s = row.ss + curv_s_ / (2.0 * th + 1.0) + diss_s_;
    row.bound_t = rn * sq(level0_.t, disc_.mass_s) + 4.0 * n_level / (2.0 * th + 1.0) * g_t;
    row.bound_s = rn * sq(level0_.s, disc_.mass_s) + 4.0 * n_level / (2.0 * th + 1.0) * g_s;
    const double cdt = c_ * dt;
    row.bound_u = cdt * (2.0 * th + 1.0) / p.nu * (1.0 - rn) *
                      (sq(level1_.t, disc_.mass_s) + sq(level0_.t, disc_.mass_s) + sq(level1_.s, disc_.mass_s) +
                       sq(level0_.s, disc_.mass_s)) +
                  cdt / (2.0 * th + 1.0) * (g_t + g_s) + 4.0 * n_level / (2.0 * th + 1.0) * g_u +
                  rn * sq(level0_.u, disc_.mass_u);
    auto exceeds = [](double lhs, double bound) {
        return lhs > bound + 1e-10 * std::max(std::abs(bound), std::abs(lhs)) + 1e-14;
    };
    row.violated = exceeds(row.lhs_u, row.bound_u) || exceeds(row.lhs_t, row.bound_t) ||
                   exceeds(row.lhs_s, row.bound_s);
    rows_.push_back(row);
}

long StabilityMonitor::violations() const {
    long n = 0;
    for (const auto& r : rows_) n += r.violated ? 1 : 0;
    return n;
}

void write_ledger_csv(std::ostream& out, const std::vector<LedgerRow>& rows) {
    out << "step,time,uu,TT,SS,curv_u,curv_T,curv_S,bound_u,bound_T,bound_S,violated\n";
    out.precision(17);
    for (const auto& r : rows) {
        out << r.step << ',' << r.time << ',' << r.uu << ',' << r.tt << ',' << r.ss << ',' << r.curv_u << ','
            << r.curv_t << ',' << r.curv_s << ',' << r.bound_u << ',' << r.bound_t << ',' << r.bound_s << ','
            << (r.violated ? 1 : 0) << '\n';
    }
}

}  // namespace ddbrink
