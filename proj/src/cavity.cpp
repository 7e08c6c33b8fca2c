#include "ddbrink/cavity.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "ddbrink/norms.hpp"
#include "ddbrink/vtk.hpp"

namespace ddbrink {

void CavityConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(ra > 0.0 && std::isfinite(ra), "ra must be > 0");
    require(pr > 0.0 && std::isfinite(pr), "pr must be > 0");
    require(le > 0.0 && std::isfinite(le), "le must be > 0");
    require(std::isfinite(n_ratio), "n_ratio must be finite");
    require(nx > 0 && ny > 0, "nx and ny must be positive");
    require(dt > 0.0, "dt must be > 0");
    require(t_end > 0.0, "t_end must be > 0");
    require(theta >= 0.5 && theta <= 1.0, "theta must lie in [1/2, 1]");
    require(eps_scale >= 0.0, "eps_scale must be >= 0");
    require(steady_window >= 0.0, "steady_window must be >= 0");
    require(steady_tol > 0.0, "steady_tol must be > 0");
}

SchemeParams map_dimensionless(const CavityConfig& c) {
    c.validate();
    SchemeParams p;
    p.theta = c.theta;
    p.dt = c.dt;
    p.nu = c.pr;
    p.gamma = 1.0;
    p.dc = 1.0 / c.le;
    p.da_inv = 0.0;
    p.g = {0.0, 1.0};
    p.beta_t = c.ra * c.pr;
    p.beta_s = c.n_ratio * p.beta_t;
    p.eps = c.eps_scale * p.nu;
    p.eps1 = c.eps_scale * p.gamma;
    p.eps2 = c.eps_scale * p.dc;
    p.validate();
    return p;
}

BoundaryData cavity_bc(const Discretization& disc, bool homogeneous) {
    const auto& mesh = disc.scalar.mesh();
    bool tagged = false;
    for (const auto& e : mesh.boundary_edges()) tagged |= (e.tag == BoundaryTag::Left);
    if (!tagged) throw std::invalid_argument("cavity mesh has no tagged hot wall");

    BoundaryData bc;
    bc.velocity_nodes = disc.velocity.boundary_nodes();
    for (BoundaryTag wall : {BoundaryTag::Left, BoundaryTag::Right}) {
        for (int n : disc.scalar.nodes_with_tag(wall)) bc.temperature_nodes.push_back(n);
    }
    bc.concentration_nodes = bc.temperature_nodes;
    if (!homogeneous) {
        const double width = mesh.width();
        auto wall_value = [width](const Point& x, double) { return x.x < 0.5 * width ? 1.0 : 0.0; };
        bc.temperature = wall_value;
        bc.concentration = wall_value;
    }
    bc.pressure_zero_mean = true;
    return bc;
}

WallFlux wall_flux(const FiniteElementSpace& scalar, const Vector& coeffs, BoundaryTag wall, int points) {
    if (wall != BoundaryTag::Left && wall != BoundaryTag::Right) {
        throw std::invalid_argument("wall flux needs a vertical wall, got " + to_string(wall));
    }
    if (coeffs.size() != scalar.dof_count()) throw std::invalid_argument("coefficient size mismatch");
    const TriangleMesh& mesh = scalar.mesh();
    const LineRule rule = gauss_legendre(points);
    WallFlux out;
    for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
        const auto& tri = mesh.triangles()[t];
        for (int k = 0; k < 3; ++k) {
            if (mesh.edge_tag(mesh.triangle_edges(t)[k]) != wall) continue;
            const Point& a = mesh.vertices()[tri[k]];
            const Point& b = mesh.vertices()[tri[(k + 1) % 3]];
            const double length = std::hypot(b.x - a.x, b.y - a.y);
            for (std::size_t q = 0; q < rule.points.size(); ++q) {
                std::array<double, 3> bary{};
                bary[k] = 1.0 - rule.points[q];
                bary[(k + 1) % 3] = rule.points[q];
                const double flux = -sample_scalar(scalar, coeffs, t, bary).grad[0];
                out.y.push_back(a.y + rule.points[q] * (b.y - a.y));
                out.local.push_back(flux);
                out.raw += rule.weights[q] * length * flux;
            }
        }
    }
    if (out.local.empty()) throw std::invalid_argument("mesh has no edges on wall " + to_string(wall));
    out.average = out.raw / mesh.height();
    return out;
}

NuShSample measure(const Discretization& disc, const SimState& state) {
    const WallFlux nh = nusselt(disc.scalar, state.temp_n, BoundaryTag::Left);
    const WallFlux nc = nusselt(disc.scalar, state.temp_n, BoundaryTag::Right);
    const WallFlux sh = sherwood(disc.scalar, state.conc_n, BoundaryTag::Left);
    const WallFlux sc = sherwood(disc.scalar, state.conc_n, BoundaryTag::Right);
    return {state.time, nh.average, nc.average, sh.average, sc.average, nh.raw, sh.raw};
}

namespace {

SimState cavity_initial_state(const Discretization& disc, const BoundaryData& bc, bool homogeneous) {
    const auto zero_u = [](const Point&) { return Vec2{0.0, 0.0}; };
    if (homogeneous) {
        const auto bump = [](const Point& x) {
            return std::sin(std::numbers::pi * x.x) * std::sin(0.5 * std::numbers::pi * x.y);
        };
        return initialize(disc, zero_u, bump, bump);
    }
    const auto zero = [](const Point&) { return 0.0; };
    SimState s = initialize(disc, zero_u, zero, zero);
    for (int n : bc.temperature_nodes) {
        const double v = bc.temperature(disc.scalar.node_coordinate(n), 0.0);
        s.temp_n[n] = s.temp_nm1[n] = v;
        s.conc_n[n] = s.conc_nm1[n] = v;
    }
    return s;
}

}  // namespace

CavityResult run_cavity(const CavityConfig& config, const CavityOutputs& outputs, const CavityObserver& observer) {
    const SchemeParams params = map_dimensionless(config);
    auto mesh = std::make_shared<const TriangleMesh>(
        build_structured_rect(config.nx, config.ny, CavityConfig::width, CavityConfig::height));
    const Discretization disc = make_discretization(mesh);
    const BoundaryData bc = cavity_bc(disc, config.homogeneous_walls);
    SimState state = cavity_initial_state(disc, bc, config.homogeneous_walls);

    CavityResult result;
    const bool writing = !outputs.dir.empty();
    std::ofstream csv;
    if (writing) {
        std::filesystem::create_directories(outputs.dir);
        const auto path = outputs.dir / "nu_sh.csv";
        csv.open(path);
        if (!csv) throw std::runtime_error("cannot open " + path.string());
        csv.precision(12);
        csv << "time,nu_hot,nu_cold,sh_hot,sh_cold,nu_hot_raw,sh_hot_raw\n";
        result.files.push_back(path);
    }
    auto record = [&](const NuShSample& s) {
        result.history.samples.push_back(s);
        if (writing) {
            csv << s.time << ',' << s.nu_hot << ',' << s.nu_cold << ',' << s.sh_hot << ',' << s.sh_cold << ','
                << s.nu_hot_raw << ',' << s.sh_hot_raw << '\n';
            csv.flush();
        }
    };

    StabilityMonitor monitor(disc, params, rectangle_poincare_constant(CavityConfig::width, CavityConfig::height));
    monitor.observe(state);
    record(measure(disc, state));

    const long window = config.steady_window > 0.0 ? std::max(1L, std::lround(config.steady_window / config.dt)) : 0;
    const int sample_every = std::max(1, outputs.sample_every);
    std::vector<double> nu_trace{result.history.samples.back().nu_hot};

    auto finish = [&]() {
        result.final_state = state;
        result.ledger_violations = monitor.violations();
        if (writing && outputs.ledger) {
            const auto path = outputs.dir / "stability_ledger.csv";
            std::ofstream out(path);
            write_ledger_csv(out, monitor.rows());
            result.files.push_back(path);
        }
    };

    TimeStepper stepper(disc, params, bc);
    const long steps = std::lround(config.t_end / config.dt);
    try {
        for (long i = 0; i < steps; ++i) {
            state = stepper.advance(state);
            ++result.steps;
            monitor.observe(state);
            const NuShSample sample = measure(disc, state);
            nu_trace.push_back(sample.nu_hot);
            const bool last = (i + 1 == steps);
            if (state.step % sample_every == 0 || last) record(sample);
            if (writing && outputs.snapshot_every > 0 && state.step % outputs.snapshot_every == 0) {
                result.files.push_back(write_snapshot(outputs.dir, disc, state));
            }
            if (observer && !observer(disc, state)) break;
            if (window > 0 && state.step >= window) {
                const double now = nu_trace.back();
                const double then = nu_trace[nu_trace.size() - 1 - window];
                if (std::abs(now - then) <= config.steady_tol * std::max(std::abs(now), 1e-12)) {
                    result.steady = true;
                    if (!last && result.history.samples.back().time != sample.time) record(sample);
                    break;
                }
            }
        }
    } catch (const DivergenceError&) {
        finish();
        throw;
    }
    finish();
    if (writing && (outputs.snapshot_every <= 0 || state.step % outputs.snapshot_every != 0)) {
        result.files.push_back(write_snapshot(outputs.dir, disc, state));
    }
    return result;
}

}  // namespace ddbrink
