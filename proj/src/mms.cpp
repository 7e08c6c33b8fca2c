#include "ddbrink/mms.hpp"

#include <cmath>
#include <future>
#include <ostream>
#include <stdexcept>

namespace ddbrink {

ManufacturedSolution reference_solution() {
    ManufacturedSolution ms;
    ms.u = [](const Point& x, double t) { return Vec2{std::cos(x.y) * std::exp(t), std::sin(x.x) * std::exp(t)}; };
    ms.grad_u = [](const Point& x, double t) {
        const double e = std::exp(t);
        return Mat2{Vec2{0.0, -std::sin(x.y) * e}, Vec2{std::cos(x.x) * e, 0.0}};
    };
    ms.lap_u = [](const Point& x, double t) { return Vec2{-std::cos(x.y) * std::exp(t), -std::sin(x.x) * std::exp(t)}; };
    ms.u_t = ms.u;
    ms.p = [](const Point& x, double t) { return (x.x - x.y) * (1.0 + t); };
    ms.grad_p = [](const Point&, double t) { return Vec2{1.0 + t, -(1.0 + t)}; };

    ms.temp.value = [](const Point& x, double t) { return std::sin(x.x + x.y) * std::exp(1.0 - t); };
    ms.temp.grad = [](const Point& x, double t) {
        const double g = std::cos(x.x + x.y) * std::exp(1.0 - t);
        return Vec2{g, g};
    };
    ms.temp.lap = [](const Point& x, double t) { return -2.0 * std::sin(x.x + x.y) * std::exp(1.0 - t); };
    ms.temp.dt = [](const Point& x, double t) { return -std::sin(x.x + x.y) * std::exp(1.0 - t); };

    ms.conc.value = [](const Point& x, double t) { return std::cos(x.x + x.y) * std::exp(1.0 - t); };
    ms.conc.grad = [](const Point& x, double t) {
        const double g = -std::sin(x.x + x.y) * std::exp(1.0 - t);
        return Vec2{g, g};
    };
    ms.conc.lap = [](const Point& x, double t) { return -2.0 * std::cos(x.x + x.y) * std::exp(1.0 - t); };
    ms.conc.dt = [](const Point& x, double t) { return -std::cos(x.x + x.y) * std::exp(1.0 - t); };
    return ms;
}

Forcing forcing(const ManufacturedSolution& ms, const SchemeParams& p) {
    Forcing out;
    out.f = [ms, p](const Point& x, double t) {
        const Vec2 u = ms.u(x, t);
        const Mat2 gu = ms.grad_u(x, t);
        const Vec2 lap = ms.lap_u(x, t);
        const Vec2 ut = ms.u_t(x, t);
        const Vec2 gp = ms.grad_p(x, t);
        const double buoy = p.beta_t * ms.temp.value(x, t) + p.beta_s * ms.conc.value(x, t);
        Vec2 f{};
        for (int c = 0; c < 2; ++c) {
            const double adv = u[0] * gu[c][0] + u[1] * gu[c][1];
            f[c] = ut[c] - p.nu * lap[c] + adv + p.da_inv * u[c] + gp[c] - buoy * p.g[c];
        }
        return f;
    };
    auto transport = [ms](const ManufacturedSolution::Scalar& s, double diffusivity) {
        return [ms, s, diffusivity](const Point& x, double t) {
            const Vec2 u = ms.u(x, t);
            const Vec2 g = s.grad(x, t);
            return s.dt(x, t) - diffusivity * s.lap(x, t) + u[0] * g[0] + u[1] * g[1];
        };
    };
    out.phi = transport(ms.temp, p.gamma);
    out.psi = transport(ms.conc, p.dc);
    return out;
}

double compute_rate(double e_coarse, double e_fine, double ratio) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0)) throw std::invalid_argument("rates need positive errors");
    if (!(ratio > 1.0)) throw std::invalid_argument("refinement ratio must exceed 1");
    return std::log(e_coarse / e_fine) / std::log(ratio);
}

void fill_rates(RateTable& table) {
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const RateRow& a = table.rows[i - 1];
        RateRow& b = table.rows[i];
        const double ratio = a.h_or_dt / b.h_or_dt;
        auto rate = [ratio](double ec, double ef) -> std::optional<double> {
            if (!(ec > 0.0) || !(ef > 0.0) || !(ratio > 1.0)) return std::nullopt;
            return compute_rate(ec, ef, ratio);
        };
        b.rate_u = rate(a.err_u_h1, b.err_u_h1);
        b.rate_t = rate(a.err_t_h1, b.err_t_h1);
        b.rate_s = rate(a.err_s_h1, b.err_s_h1);
    }
}

void write_rate_csv(std::ostream& out, const RateTable& table) {
    out << "level,h_or_dt,err_u_h1,rate_u,err_T_h1,rate_T,err_S_h1,rate_S,err_u_l2,err_T_l2,err_S_l2\n";
    out.precision(10);
    auto opt = [&out](const std::optional<double>& v) {
        if (v) out << *v;
    };
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const RateRow& r = table.rows[i];
        out << i << ',' << r.h_or_dt << ',' << r.err_u_h1 << ',';
        opt(r.rate_u);
        out << ',' << r.err_t_h1 << ',';
        opt(r.rate_t);
        out << ',' << r.err_s_h1 << ',';
        opt(r.rate_s);
        out << ',' << r.err_u_l2 << ',' << r.err_t_l2 << ',' << r.err_s_l2 << '\n';
    }
}

RateRow mms_run(int n, double dt, const MmsOptions& options, const ManufacturedSolution& ms) {
    auto mesh = std::make_shared<const TriangleMesh>(build_structured_rect(n, n, 1.0, 1.0));
    const Discretization disc = make_discretization(mesh);
    SchemeParams params = options.params;
    params.dt = dt;

    BoundaryData bc;
    for (int node : disc.velocity.boundary_nodes()) bc.velocity_nodes.push_back(node);
    bc.temperature_nodes = disc.scalar.boundary_nodes();
    bc.concentration_nodes = bc.temperature_nodes;
    bc.velocity = ms.u;
    bc.temperature = ms.temp.value;
    bc.concentration = ms.conc.value;
    bc.pressure_zero_mean = true;

    SimState state;
    if (options.exact_start) {
        state = initialize_two_level(disc, ms.u, ms.temp.value, ms.conc.value, 0.0, dt, ms.p);
    } else {
        auto at0 = [](const auto& f) { return [f](const Point& x) { return f(x, 0.0); }; };
        state = initialize(disc, at0(ms.u), at0(ms.temp.value), at0(ms.conc.value), at0(ms.p));
    }

    TimeStepper stepper(disc, params, bc, forcing(ms, params));
    std::vector<double> eu_h1, et_h1, es_h1, eu_l2, et_l2, es_l2;
    auto observe = [&](const SimState& s) {
        const double t = s.time;
        const FieldError eu = vector_error(
            disc.velocity, s.u_n, [&](const Point& x) { return ms.u(x, t); },
            [&](const Point& x) { return ms.grad_u(x, t); });
        const FieldError et = scalar_error(
            disc.scalar, s.temp_n, [&](const Point& x) { return ms.temp.value(x, t); },
            [&](const Point& x) { return ms.temp.grad(x, t); });
        const FieldError es = scalar_error(
            disc.scalar, s.conc_n, [&](const Point& x) { return ms.conc.value(x, t); },
            [&](const Point& x) { return ms.conc.grad(x, t); });
        eu_h1.push_back(eu.h1);
        et_h1.push_back(et.h1);
        es_h1.push_back(es.h1);
        eu_l2.push_back(eu.l2);
        et_l2.push_back(et.l2);
        es_l2.push_back(es.l2);
        return true;
    };
    run(stepper, state, options.t_end, observe);
    if (eu_h1.empty()) throw std::invalid_argument("t_end shorter than one time step");

    RateRow row;
    const double inf = std::numeric_limits<double>::infinity();
    row.err_u_h1 = discrete_norm(eu_h1, dt, 2.0);
    row.err_t_h1 = discrete_norm(et_h1, dt, 2.0);
    row.err_s_h1 = discrete_norm(es_h1, dt, 2.0);
    row.err_u_l2 = discrete_norm(eu_l2, dt, 2.0);
    row.err_t_l2 = discrete_norm(et_l2, dt, 2.0);
    row.err_s_l2 = discrete_norm(es_l2, dt, 2.0);
    row.err_u_h1_max = discrete_norm(eu_h1, dt, inf);
    row.err_t_h1_max = discrete_norm(et_h1, dt, inf);
    row.err_s_h1_max = discrete_norm(es_h1, dt, inf);
    return row;
}

namespace {

template <typename Job>
std::vector<RateRow> run_levels(std::size_t count, int jobs, Job&& job) {
    std::vector<RateRow> rows(count);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) rows[i] = job(i);
        return rows;
    }
    for (std::size_t start = 0; start < count; start += jobs) {
        std::vector<std::future<RateRow>> batch;
        for (std::size_t i = start; i < std::min(count, start + jobs); ++i) {
            batch.push_back(std::async(std::launch::async, job, i));
        }
        for (std::size_t k = 0; k < batch.size(); ++k) rows[start + k] = batch[k].get();
    }
    return rows;
}

}  // namespace

RateTable spatial_sweep(const std::vector<int>& cells, double dt, const MmsOptions& options) {
    const ManufacturedSolution ms = reference_solution();
    RateTable table;
    table.rows = run_levels(cells.size(), options.jobs, [&](std::size_t i) {
        RateRow r = mms_run(cells[i], dt, options, ms);
        r.h_or_dt = 1.0 / cells[i];
        return r;
    });
    fill_rates(table);
    return table;
}

RateTable temporal_sweep(const std::vector<double>& dts, int cells, const MmsOptions& options) {
    const ManufacturedSolution ms = reference_solution();
    RateTable table;
    table.rows = run_levels(dts.size(), options.jobs, [&](std::size_t i) {
        RateRow r = mms_run(cells, dts[i], options, ms);
        r.h_or_dt = dts[i];
        return r;
    });
    fill_rates(table);
    return table;
}

}  // namespace ddbrink
