#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ddbrink/timestep.hpp"

namespace ddbrink {

/// Tall cavity of width 1 and height 2, heated and salted from the left.
struct CavityConfig {
    double ra = 1e4;
    double pr = 1.0;
    double le = 2.0;
    double n_ratio = 0.8;
    int nx = 25;
    int ny = 40;
    double dt = 1e-4;
    double t_end = 1.0;
    double theta = 1.0;
    double eps_scale = 1.0;
    /// Stop once Nu_av changes by less than steady_tol (relative) over
    /// steady_window time units. Zero window disables the check.
    double steady_window = 0.1;
    double steady_tol = 1e-4;
    /// Zero Dirichlet data on the vertical walls and a smooth initial bump,
    /// the setting of the energy bounds.
    bool homogeneous_walls = false;

    static constexpr double width = 1.0;
    static constexpr double height = 2.0;

    void validate() const;
};

/// nu = Pr, gamma = 1, dc = 1/Le, beta_t |g| = Ra Pr, beta_s = N beta_t,
/// g = (0, 1), eps = eps_scale * (nu, gamma, dc).
SchemeParams map_dimensionless(const CavityConfig& config);

/// No-slip on every wall, T = S = 1 on Left, 0 on Right, insulated Top and Bottom.
BoundaryData cavity_bc(const Discretization& disc, bool homogeneous = false);

/// Local wall flux -d/dx along a vertical wall and its averages.
struct WallFlux {
    std::vector<double> y;
    std::vector<double> local;
    double raw = 0.0;      // integral over the wall
    double average = 0.0;  // raw / wall length
};

/// Gauss points per wall edge set by `points`. Throws for Top and Bottom.
WallFlux wall_flux(const FiniteElementSpace& scalar, const Vector& coeffs, BoundaryTag wall, int points = 3);
inline WallFlux nusselt(const FiniteElementSpace& s, const Vector& temp, BoundaryTag wall) {
    return wall_flux(s, temp, wall);
}
inline WallFlux sherwood(const FiniteElementSpace& s, const Vector& conc, BoundaryTag wall) {
    return wall_flux(s, conc, wall);
}

struct NuShSample {
    double time = 0.0;
    double nu_hot = 0.0, nu_cold = 0.0;
    double sh_hot = 0.0, sh_cold = 0.0;
    double nu_hot_raw = 0.0, sh_hot_raw = 0.0;
};

struct NuShHistory {
    std::vector<NuShSample> samples;
};

NuShSample measure(const Discretization& disc, const SimState& state);

struct CavityOutputs {
    /// Empty: nothing written.
    std::filesystem::path dir;
    /// Write fields_<step>.vtk every k steps (0: only the final state).
    int snapshot_every = 0;
    /// nu_sh.csv row every k steps.
    int sample_every = 1;
    /// Write stability_ledger.csv.
    bool ledger = false;
};

struct CavityResult {
    NuShHistory history;
    SimState final_state;
    long steps = 0;
    bool steady = false;
    long ledger_violations = 0;
    std::vector<std::filesystem::path> files;
};

/// Extra per-step hook; returning false stops the run.
using CavityObserver = std::function<bool(const Discretization&, const SimState&)>;

/// Impulsive start from rest. DivergenceError propagates with the step index;
/// files written up to that point stay on disk.
CavityResult run_cavity(const CavityConfig& config, const CavityOutputs& outputs = {},
                        const CavityObserver& observer = {});

}  // namespace ddbrink
