#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ddbrink/norms.hpp"
#include "ddbrink/timestep.hpp"

namespace ddbrink {

using Mat2 = std::array<Vec2, 2>;  // row c = gradient of component c

/// Exact fields with the derivatives the forcing needs.
struct ManufacturedSolution {
    std::function<Vec2(const Point&, double)> u;
    std::function<Mat2(const Point&, double)> grad_u;
    std::function<Vec2(const Point&, double)> lap_u;
    std::function<Vec2(const Point&, double)> u_t;
    std::function<double(const Point&, double)> p;
    std::function<Vec2(const Point&, double)> grad_p;

    struct Scalar {
        std::function<double(const Point&, double)> value;
        std::function<Vec2(const Point&, double)> grad;
        std::function<double(const Point&, double)> lap;
        std::function<double(const Point&, double)> dt;
    };
    Scalar temp;
    Scalar conc;
};

/// u = (cos y, sin x) e^t, p = (x - y)(1 + t), T = sin(x+y) e^{1-t}, S = cos(x+y) e^{1-t}.
ManufacturedSolution reference_solution();

/// Source terms making the manufactured solution satisfy the Darcy-Brinkman
/// double-diffusive system with the given coefficients.
Forcing forcing(const ManufacturedSolution& ms, const SchemeParams& params);

double compute_rate(double e_coarse, double e_fine, double ratio);

struct RateRow {
    double h_or_dt = 0.0;
    double err_u_h1 = 0.0, err_t_h1 = 0.0, err_s_h1 = 0.0;
    double err_u_l2 = 0.0, err_t_l2 = 0.0, err_s_l2 = 0.0;
    double err_u_h1_max = 0.0, err_t_h1_max = 0.0, err_s_h1_max = 0.0;
    std::optional<double> rate_u, rate_t, rate_s;
};

struct RateTable {
    std::vector<RateRow> rows;
};

/// Fills the rate columns from consecutive rows; ratio is derived from h_or_dt.
void fill_rates(RateTable& table);

void write_rate_csv(std::ostream& out, const RateTable& table);

struct MmsOptions {
    SchemeParams params;  // dt is overridden by the sweeps
    double t_end = 0.1;
    /// Exact levels at t=0 and t=-dt instead of two copies of the t=0 interpolant.
    bool exact_start = true;
    /// Worker threads for independent levels.
    int jobs = 1;
};

/// Errors of one run on an n x n unit-square mesh with time step dt,
/// accumulated over levels 1..N in the (2,·) and (∞,·) norms.
RateRow mms_run(int n, double dt, const MmsOptions& options, const ManufacturedSolution& ms);

/// Levels are cell counts per side (h = 1/n); dt fixed.
RateTable spatial_sweep(const std::vector<int>& cells, double dt, const MmsOptions& options);
/// Time steps with a fixed n x n mesh.
RateTable temporal_sweep(const std::vector<double>& dts, int cells, const MmsOptions& options);

}  // namespace ddbrink
