#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddbrink/assembly.hpp"
#include "ddbrink/solver.hpp"

namespace ddbrink {

/// Scheme and physics constants. Each curvature stabilization strength
/// (eps for u, eps1 for T, eps2 for S) is measured against its field's diffusivity.
struct SchemeParams {
    double theta = 1.0;
    double eps = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double dt = 1e-2;
    double nu = 1.0;
    double gamma = 1.0;
    double dc = 1.0;
    double da_inv = 0.0;
    double beta_t = 0.0;
    double beta_s = 0.0;
    Vec2 g{0.0, 1.0};

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct TimeStencil {
    double plus = 0.0;   // level n+1
    double mid = 0.0;    // level n
    double minus = 0.0;  // level n-1
};

/// Time difference weights: (theta+1/2, -2 theta, theta-1/2), to be divided by dt.
TimeStencil d_coeffs(double theta);
/// Stabilized evaluation weights (theta(mu+delta)/mu, 1-theta(mu+2delta)/mu, theta delta/mu).
TimeStencil f_coeffs(double theta, double delta, double mu);
/// Linear extrapolation weights to t_{n+theta}; `plus` is always zero.
TimeStencil h_coeffs(double theta);

/// Spaces and time-independent operators of the Taylor-Hood P2/P1 velocity
/// pressure pair and P2 temperature and concentration.
struct Discretization {
    std::shared_ptr<const TriangleMesh> mesh;
    FiniteElementSpace velocity;
    FiniteElementSpace pressure;
    FiniteElementSpace scalar;
    SparseMatrix mass_u;
    SparseMatrix stiffness_u;
    SparseMatrix mass_s;
    SparseMatrix stiffness_s;
    SparseMatrix divergence;
    SparseMatrix mass_p;
    Vector pressure_weights;
    double area = 0.0;
};

Discretization make_discretization(std::shared_ptr<const TriangleMesh> mesh);

/// Two consecutive time levels of all unknowns.
struct SimState {
    Vector u_n, u_nm1;
    Vector p_n, p_nm1;
    Vector temp_n, temp_nm1;
    Vector conc_n, conc_nm1;
    double time = 0.0;
    long step = 0;
};

/// Dirichlet data. Empty value functions mean homogeneous data on the listed nodes.
struct BoundaryData {
    std::vector<int> velocity_nodes;
    TimeVectorField velocity;
    std::vector<int> temperature_nodes;
    TimeScalarField temperature;
    std::vector<int> concentration_nodes;
    TimeScalarField concentration;
    /// Velocity prescribed on the whole boundary: pressure fixed up to a constant.
    bool pressure_zero_mean = true;
};

/// Body force and heat/species sources, evaluated at t_{n+theta}.
struct Forcing {
    TimeVectorField f;
    TimeScalarField phi;
    TimeScalarField psi;
};

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
    long step() const { return step_; }

private:
    long step_;
};

/// Both time levels set to the nodal interpolants of the initial data.
SimState initialize(const Discretization& disc, const VectorField& u0, const ScalarField& temp0,
                    const ScalarField& conc0, const ScalarField& p0 = {});

/// Levels n and n-1 taken from time dependent data at t0 and t0 - dt.
SimState initialize_two_level(const Discretization& disc, const TimeVectorField& u, const TimeScalarField& temp,
                              const TimeScalarField& conc, double t0, double dt, const TimeScalarField& p = {});

/// Advances the curvature-stabilized IMEX family one step. Temperature and
/// concentration are solved first, then velocity-pressure; all three use
/// only levels n and n-1, so the order does not affect the result.
class TimeStepper {
public:
    TimeStepper(const Discretization& disc, SchemeParams params, BoundaryData bc, Forcing forcing = {});

    SimState advance(const SimState& state);

    const SchemeParams& params() const { return params_; }
    const Discretization& discretization() const { return disc_; }

    /// Largest coefficient magnitude accepted before a step is declared divergent.
    double divergence_threshold = 1e10;

private:
    Vector solve_scalar(const SparseMatrix& convection, const Vector& cur, const Vector& old, double diffusivity,
                        double delta, const std::vector<int>& nodes, const TimeScalarField& value,
                        const TimeScalarField& source, double t_mid, double t_new, SparseLUSolver& lu);

    const Discretization& disc_;
    SchemeParams params_;
    BoundaryData bc_;
    Forcing forcing_;
    SparseLUSolver lu_temp_;
    SparseLUSolver lu_conc_;
    SaddlePointSolver saddle_;
};

SimState advance(const SimState& state, const SchemeParams& params, const Discretization& disc,
                 const Forcing& forcing, const BoundaryData& bc);

/// Called after every step; returning false stops the loop early.
using StepObserver = std::function<bool(const SimState&)>;

struct RunResult {
    SimState final_state;
    long steps = 0;
    bool stopped_early = false;
};

/// Fixed-step loop from state.time to t_end (round((t_end - time)/dt) steps).
RunResult run(TimeStepper& stepper, SimState state, double t_end, const StepObserver& observer = {});

}  // namespace ddbrink
