#include "ddbrink/timestep.hpp"

#include <cmath>
#include <sstream>

namespace ddbrink {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

void check_theta(double theta) {
    require(theta >= 0.5 && theta <= 1.0, "theta must lie in [1/2, 1], got " + std::to_string(theta));
}

}  // namespace

void SchemeParams::validate() const {
    check_theta(theta);
    require(eps >= 0.0, "eps must be >= 0");
    require(eps1 >= 0.0, "eps1 must be >= 0");
    require(eps2 >= 0.0, "eps2 must be >= 0");
    require(dt > 0.0, "dt must be > 0");
    require(nu > 0.0, "nu must be > 0");
    require(gamma > 0.0, "gamma must be > 0");
    require(dc > 0.0, "dc must be > 0");
    require(da_inv >= 0.0, "da_inv must be >= 0");
    require(std::isfinite(beta_t) && std::isfinite(beta_s), "expansion coefficients must be finite");
    require(std::isfinite(g[0]) && std::isfinite(g[1]), "gravity must be finite");
}

TimeStencil d_coeffs(double theta) {
    check_theta(theta);
    return {theta + 0.5, -2.0 * theta, theta - 0.5};
}

TimeStencil f_coeffs(double theta, double delta, double mu) {
    require(mu > 0.0, "diffusivity must be > 0");
    require(delta >= 0.0, "stabilization must be >= 0");
    return {theta * (mu + delta) / mu, 1.0 - theta * (mu + 2.0 * delta) / mu, theta * delta / mu};
}

TimeStencil h_coeffs(double theta) {
    check_theta(theta);
    return {0.0, theta + 1.0, -theta};
}

Discretization make_discretization(std::shared_ptr<const TriangleMesh> mesh) {
    FiniteElementSpace velocity(mesh, 2, ValueRank::Vector2);
    FiniteElementSpace pressure(mesh, 1, ValueRank::Scalar);
    FiniteElementSpace scalar(mesh, 2, ValueRank::Scalar);
    Discretization d{mesh,
                     velocity,
                     pressure,
                     scalar,
                     assemble_mass(velocity),
                     assemble_stiffness(velocity),
                     assemble_mass(scalar),
                     assemble_stiffness(scalar),
                     assemble_divergence(velocity, pressure),
                     assemble_mass(pressure),
                     {},
                     0.0};
    d.pressure_weights = d.mass_p * Vector::Ones(d.mass_p.cols());
    d.area = d.pressure_weights.sum();
    return d;
}

SimState initialize(const Discretization& disc, const VectorField& u0, const ScalarField& temp0,
                    const ScalarField& conc0, const ScalarField& p0) {
    SimState s;
    s.u_n = interpolate(disc.velocity, u0);
    s.temp_n = interpolate(disc.scalar, temp0);
    s.conc_n = interpolate(disc.scalar, conc0);
    s.p_n = p0 ? interpolate(disc.pressure, p0) : Vector::Zero(disc.pressure.dof_count());
    s.u_nm1 = s.u_n;
    s.temp_nm1 = s.temp_n;
    s.conc_nm1 = s.conc_n;
    s.p_nm1 = s.p_n;
    return s;
}

SimState initialize_two_level(const Discretization& disc, const TimeVectorField& u, const TimeScalarField& temp,
                              const TimeScalarField& conc, double t0, double dt, const TimeScalarField& p) {
    auto at = [](const auto& f, double t) { return [&f, t](const Point& x) { return f(x, t); }; };
    SimState s;
    s.u_n = interpolate(disc.velocity, VectorField(at(u, t0)));
    s.u_nm1 = interpolate(disc.velocity, VectorField(at(u, t0 - dt)));
    s.temp_n = interpolate(disc.scalar, ScalarField(at(temp, t0)));
    s.temp_nm1 = interpolate(disc.scalar, ScalarField(at(temp, t0 - dt)));
    s.conc_n = interpolate(disc.scalar, ScalarField(at(conc, t0)));
    s.conc_nm1 = interpolate(disc.scalar, ScalarField(at(conc, t0 - dt)));
    if (p) {
        s.p_n = interpolate(disc.pressure, ScalarField(at(p, t0)));
        s.p_nm1 = interpolate(disc.pressure, ScalarField(at(p, t0 - dt)));
        for (Vector* v : {&s.p_n, &s.p_nm1}) v->array() -= disc.pressure_weights.dot(*v) / disc.area;
    } else {
        s.p_n = Vector::Zero(disc.pressure.dof_count());
        s.p_nm1 = s.p_n;
    }
    s.time = t0;
    return s;
}

TimeStepper::TimeStepper(const Discretization& disc, SchemeParams params, BoundaryData bc, Forcing forcing)
    : disc_(disc), params_(params), bc_(std::move(bc)), forcing_(std::move(forcing)) {
    params_.validate();
}

Vector TimeStepper::solve_scalar(const SparseMatrix& convection, const Vector& cur, const Vector& old,
                                 double diffusivity, double delta, const std::vector<int>& nodes,
                                 const TimeScalarField& value, const TimeScalarField& source, double t_mid,
                                 double t_new, SparseLUSolver& lu) {
    const double dt = params_.dt;
    const TimeStencil d = d_coeffs(params_.theta);
    const TimeStencil f = f_coeffs(params_.theta, delta, diffusivity);

    SparseMatrix k = (d.plus / dt) * disc_.mass_s + (diffusivity * f.plus) * disc_.stiffness_s + f.plus * convection;
    const Vector history = f.mid * cur + f.minus * old;
    Vector rhs = -(disc_.mass_s * (d.mid * cur + d.minus * old)) / dt -
                 diffusivity * (disc_.stiffness_s * history) - convection * history;
    if (source) rhs += assemble_load(disc_.scalar, ScalarField([&](const Point& x) { return source(x, t_mid); }));

    DirichletConstraints constraints;
    for (int n : nodes) constraints.add(n, value ? value(disc_.scalar.node_coordinate(n), t_new) : 0.0);
    apply_dirichlet(k, rhs, constraints);
    lu.factorize(k);
    return lu.solve(rhs);
}

SimState TimeStepper::advance(const SimState& s) {
    const auto& p = params_;
    const double dt = p.dt;
    const double t_mid = s.time + p.theta * dt;
    const double t_new = s.time + dt;
    const TimeStencil h = h_coeffs(p.theta);
    const TimeStencil d = d_coeffs(p.theta);

    const Vector wind = h.mid * s.u_n + h.minus * s.u_nm1;
    const SparseMatrix conv_s = assemble_convection_skew(disc_.scalar, disc_.velocity, wind);

    SimState next;
    next.time = t_new;
    next.step = s.step + 1;
    next.u_nm1 = s.u_n;
    next.p_nm1 = s.p_n;
    next.temp_nm1 = s.temp_n;
    next.conc_nm1 = s.conc_n;

    next.temp_n = solve_scalar(conv_s, s.temp_n, s.temp_nm1, p.gamma, p.eps1, bc_.temperature_nodes,
                               bc_.temperature, forcing_.phi, t_mid, t_new, lu_temp_);
    next.conc_n = solve_scalar(conv_s, s.conc_n, s.conc_nm1, p.dc, p.eps2, bc_.concentration_nodes,
                               bc_.concentration, forcing_.psi, t_mid, t_new, lu_conc_);

    // Velocity-pressure. The unknown pressure is F(p); p_{n+1} is recovered
    // from it and the two stored levels.
    const TimeStencil f = f_coeffs(p.theta, p.eps, p.nu);
    const SparseMatrix conv_u = expand_to_vector(conv_s);
    BlockSystem sys;
    sys.velocity_block = ((d.plus / dt) + p.da_inv * f.plus) * disc_.mass_u + (p.nu * f.plus) * disc_.stiffness_u +
                         f.plus * conv_u;
    const Vector history = f.mid * s.u_n + f.minus * s.u_nm1;
    sys.rhs_velocity = -(disc_.mass_u * (d.mid * s.u_n + d.minus * s.u_nm1)) / dt -
                       p.nu * (disc_.stiffness_u * history) - conv_u * history - p.da_inv * (disc_.mass_u * history);
    const Vector temp_ext = h.mid * s.temp_n + h.minus * s.temp_nm1;
    const Vector conc_ext = h.mid * s.conc_n + h.minus * s.conc_nm1;
    sys.rhs_velocity += assemble_buoyancy(disc_.velocity, disc_.scalar, p.g, p.beta_t, temp_ext);
    sys.rhs_velocity += assemble_buoyancy(disc_.velocity, disc_.scalar, p.g, p.beta_s, conc_ext);
    if (forcing_.f) {
        sys.rhs_velocity += assemble_load(disc_.velocity, VectorField([&](const Point& x) { return forcing_.f(x, t_mid); }));
    }
    sys.divergence = disc_.divergence;
    sys.rhs_pressure = Vector::Zero(disc_.pressure.dof_count());

    DirichletConstraints vel_bc;
    for (int n : bc_.velocity_nodes) {
        const Vec2 v = bc_.velocity ? bc_.velocity(disc_.velocity.node_coordinate(n), t_new) : Vec2{0.0, 0.0};
        vel_bc.add(2 * n, v[0]);
        vel_bc.add(2 * n + 1, v[1]);
    }
    PressureGauge gauge;
    gauge.zero_mean = bc_.pressure_zero_mean;
    gauge.weights = disc_.pressure_weights;
    SaddlePointSolution sol = saddle_.solve(sys, vel_bc, gauge);
    next.u_n = std::move(sol.velocity);
    next.p_n = (sol.pressure - f.mid * s.p_n - f.minus * s.p_nm1) / f.plus;

    for (const Vector* v : {&next.u_n, &next.p_n, &next.temp_n, &next.conc_n}) {
        if (!v->allFinite() || v->lpNorm<Eigen::Infinity>() > divergence_threshold) {
            std::ostringstream msg;
            msg << "solution diverged at step " << next.step << " (t = " << t_new << ")";
            throw DivergenceError(msg.str(), next.step);
        }
    }
    return next;
}

SimState advance(const SimState& state, const SchemeParams& params, const Discretization& disc,
                 const Forcing& forcing, const BoundaryData& bc) {
    TimeStepper stepper(disc, params, bc, forcing);
    return stepper.advance(state);
}

RunResult run(TimeStepper& stepper, SimState state, double t_end, const StepObserver& observer) {
    const double dt = stepper.params().dt;
    const long steps = std::lround((t_end - state.time) / dt);
    RunResult result;
    for (long i = 0; i < steps; ++i) {
        state = stepper.advance(state);
        ++result.steps;
        if (observer && !observer(state)) {
            result.stopped_early = (i + 1 < steps);
            break;
        }
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace ddbrink
