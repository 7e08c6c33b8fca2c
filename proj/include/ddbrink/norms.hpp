#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ddbrink/timestep.hpp"

namespace ddbrink {

/// Theta plus the (delta, mu) pair of the measured field, e.g. (eps, nu) for velocity.
struct GNormParams {
    double theta = 1.0;
    double eps = 0.0;
    double mu = 1.0;
};

/// Scalar blocks of the 2x2 block G matrix (each multiplies the identity).
struct GBlocks {
    double g11 = 0.0;
    double g12 = 0.0;
    double g22 = 0.0;
};

/// Blocks making the telescoping identity exact:
///   G = [(2θ+1)/4 + c]·I, -c·I ; -c·I, [(1-2θ)/4 + c]·I  with c = (θ+1)(2θ-1)/4 + θε/(2μ).
GBlocks g_blocks(const GNormParams& p);
/// theta(2 theta - 1) + 4 theta^2 eps / mu.
double f_factor(const GNormParams& p);

/// ([a; b], G [a; b]) with identity blocks realized by the mass matrix. May be negative.
double g_norm_sq(const Vector& a, const Vector& b, const SparseMatrix& mass, const GNormParams& p);
/// f_factor * ||w||^2.
double f_norm_sq(const Vector& w, const SparseMatrix& mass, const GNormParams& p);

/// |LHS - RHS| of
///   (D(w), F(w)) = (G(w_{n+1}, w_n) - G(w_n, w_{n-1}))/dt + F-norm(w_{n+1} - 2w_n + w_{n-1})/(4 dt).
double check_gf_identity(const Vector& w_np1, const Vector& w_n, const Vector& w_nm1, double dt,
                         const GNormParams& p, const SparseMatrix& mass);

/// Lower and upper bounds on the G-norm for the pair (a, b).
struct GNormBounds {
    double value = 0.0;
    double lower = 0.0;        // (2θ+1)/4 |a|^2 - (2θ-1)/4 |b|^2
    double upper = 0.0;        // (2θ+1)/4 |a|^2 + c |a-b|^2
    double upper_split = 0.0;  // ((2θ+1)/4 + 2c)|a|^2 + 2c |b|^2
    /// ((2θ+1)/4 + c)|a|^2 + c |b|^2. Not a valid bound in general (a = -b
    /// breaks it); kept for reporting only.
    double upper_split_tight = 0.0;
};
GNormBounds g_norm_bounds(const Vector& a, const Vector& b, const SparseMatrix& mass, const GNormParams& p);

/// Summary of the randomized identity and skew-symmetry checks.
struct IdentityReport {
    int draws = 0;
    double max_identity_residual = 0.0;  // residual / scale
    double max_lower_violation = 0.0;    // max(lower - value, 0) / scale
    double max_upper_violation = 0.0;
    double max_skew_asymmetry = 0.0;  // max |N + N^T|
    double max_skew_energy = 0.0;     // max |v^T N v| / (||v||^2 ||w||)
    long tight_split_violations = 0;  // draws where value > upper_split_tight
    bool identity_ok = false;
    bool bounds_ok = false;
    bool skew_ok = false;
    bool ok() const { return identity_ok && bounds_ok && skew_ok; }
};

/// Randomized verification over theta in {0.5, 0.75, 1}, eps/mu in {0, 0.5, 1},
/// plus skew-symmetry of convection matrices on meshes up to 16x32.
IdentityReport verify_identities(int draws, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Error norms

struct FieldError {
    double l2 = 0.0;
    double h1_semi = 0.0;
    double h1 = 0.0;  // sqrt(l2^2 + h1_semi^2)
};

FieldError scalar_error(const FiniteElementSpace& space, const Vector& coeffs, const ScalarField& exact,
                        const std::function<Vec2(const Point&)>& exact_grad, int strength = 8);
FieldError vector_error(const FiniteElementSpace& space, const Vector& coeffs, const VectorField& exact,
                        const std::function<std::array<Vec2, 2>(const Point&)>& exact_grad, int strength = 8);

/// (dt * sum |e_n|^m)^(1/m), or max |e_n| when m is infinite.
double discrete_norm(std::span<const double> step_norms, double dt, double m);

// ---------------------------------------------------------------------------
// Energy ledger for the unconditional stability bounds.

struct LedgerRow {
    long step = 0;
    double time = 0.0;
    double uu = 0.0, tt = 0.0, ss = 0.0;                // ||u_N||^2, ||T_N||^2, ||S_N||^2
    double curv_u = 0.0, curv_t = 0.0, curv_s = 0.0;    // accumulated curvature F-norms
    double diss_u = 0.0, diss_t = 0.0, diss_s = 0.0;    // accumulated dissipation terms
    double lhs_u = 0.0, lhs_t = 0.0, lhs_s = 0.0;       // full left hand sides
    double bound_u = 0.0, bound_t = 0.0, bound_s = 0.0; // right hand sides
    bool violated = false;
};

/// Accumulates the left and right hand sides of the stability bounds from
/// the sequence of computed levels. Level 0 is the initial state, level 1
/// the result of the first step; rows are produced from level 1 on.
class StabilityMonitor {
public:
    /// `poincare_constant` enters the velocity bound's constant
    /// C = 2 (max(|beta_t|, |beta_s|) |g| C_P)^2.
    StabilityMonitor(const Discretization& disc, const SchemeParams& params, double poincare_constant);

    /// Feed the initial state (level 0) and then every state after a step.
    void observe(const SimState& state);

    const std::vector<LedgerRow>& rows() const { return rows_; }
    long violations() const;
    double constant() const { return c_; }

private:
    struct Levels {
        Vector u, t, s;
    };
    const Discretization& disc_;
    SchemeParams params_;
    double c_;
    std::vector<Levels> window_;  // last three levels
    int levels_seen_ = 0;
    Levels level0_, level1_;
    double curv_u_ = 0.0, curv_t_ = 0.0, curv_s_ = 0.0;
    double diss_u_ = 0.0, diss_t_ = 0.0, diss_s_ = 0.0;
    std::vector<LedgerRow> rows_;
};

/// Poincare-Friedrichs constant of a width x height rectangle.
double rectangle_poincare_constant(double width, double height);

/// CSV with header step,time,uu,TT,SS,curv_u,curv_T,curv_S,bound_u,bound_T,bound_S,violated
void write_ledger_csv(std::ostream& out, const std::vector<LedgerRow>& rows);

}  // namespace ddbrink
