#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ddbrink/cavity.hpp"
#include "ddbrink/config.hpp"
#include "ddbrink/mms.hpp"
#include "ddbrink/norms.hpp"

namespace py = pybind11;
using namespace ddbrink;

namespace {

py::dict rate_rows(const RateTable& t) {
    py::list rows;
    for (const RateRow& r : t.rows) {
        py::dict d;
        d["h_or_dt"] = r.h_or_dt;
        d["err_u_h1"] = r.err_u_h1;
        d["err_T_h1"] = r.err_t_h1;
        d["err_S_h1"] = r.err_s_h1;
        d["err_u_l2"] = r.err_u_l2;
        d["err_T_l2"] = r.err_t_l2;
        d["err_S_l2"] = r.err_s_l2;
        d["rate_u"] = r.rate_u;
        d["rate_T"] = r.rate_t;
        d["rate_S"] = r.rate_s;
        rows.append(d);
    }
    py::dict out;
    out["rows"] = rows;
    return out;
}

MmsOptions unit_mms(double theta, double eps, double t_end, bool exact_start, int jobs) {
    RunConfig c;
    c.theta = theta;
    c.eps = eps;
    c.jobs = jobs;
    c.validate();
    return mms_options(c, t_end, exact_start);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Darcy-Brinkman double-diffusive convection solver";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);

    py::class_<IdentityReport>(m, "IdentityReport")
        .def_readonly("draws", &IdentityReport::draws)
        .def_readonly("max_identity_residual", &IdentityReport::max_identity_residual)
        .def_readonly("max_lower_violation", &IdentityReport::max_lower_violation)
        .def_readonly("max_upper_violation", &IdentityReport::max_upper_violation)
        .def_readonly("max_skew_asymmetry", &IdentityReport::max_skew_asymmetry)
        .def_readonly("max_skew_energy", &IdentityReport::max_skew_energy)
        .def_readonly("tight_split_violations", &IdentityReport::tight_split_violations)
        .def("ok", &IdentityReport::ok);
    m.def("verify_identities", &verify_identities, py::arg("draws") = 100, py::arg("seed") = 42);

    m.def("compute_rate", &compute_rate, py::arg("e_coarse"), py::arg("e_fine"), py::arg("ratio"));

    m.def(
        "spatial_sweep",
        [](std::vector<int> cells, double dt, double t_end, double theta, double eps, bool exact_start, int jobs) {
            RateTable t;
            {
                py::gil_scoped_release release;
                t = spatial_sweep(cells, dt, unit_mms(theta, eps, t_end, exact_start, jobs));
            }
            return rate_rows(t);
        },
        py::arg("cells"), py::arg("dt") = 0.1 / 16, py::arg("t_end") = 0.1, py::arg("theta") = 1.0,
        py::arg("eps") = 0.0, py::arg("exact_start") = true, py::arg("jobs") = 1);

    m.def(
        "temporal_sweep",
        [](std::vector<double> dts, int cells, double t_end, double theta, double eps, bool exact_start, int jobs) {
            RateTable t;
            {
                py::gil_scoped_release release;
                t = temporal_sweep(dts, cells, unit_mms(theta, eps, t_end, exact_start, jobs));
            }
            return rate_rows(t);
        },
        py::arg("dts"), py::arg("cells"), py::arg("t_end") = 1.0, py::arg("theta") = 1.0, py::arg("eps") = 0.0,
        py::arg("exact_start") = true, py::arg("jobs") = 1);

    py::class_<CavityConfig>(m, "CavityConfig")
        .def(py::init<>())
        .def_readwrite("ra", &CavityConfig::ra)
        .def_readwrite("pr", &CavityConfig::pr)
        .def_readwrite("le", &CavityConfig::le)
        .def_readwrite("n_ratio", &CavityConfig::n_ratio)
        .def_readwrite("nx", &CavityConfig::nx)
        .def_readwrite("ny", &CavityConfig::ny)
        .def_readwrite("dt", &CavityConfig::dt)
        .def_readwrite("t_end", &CavityConfig::t_end)
        .def_readwrite("theta", &CavityConfig::theta)
        .def_readwrite("eps_scale", &CavityConfig::eps_scale)
        .def_readwrite("steady_window", &CavityConfig::steady_window)
        .def_readwrite("steady_tol", &CavityConfig::steady_tol)
        .def_readwrite("homogeneous_walls", &CavityConfig::homogeneous_walls);

    m.def(
        "run_cavity",
        [](const CavityConfig& c, std::filesystem::path out_dir, int snapshot_every, int sample_every, bool ledger) {
            CavityOutputs o;
            o.dir = std::move(out_dir);
            o.snapshot_every = snapshot_every;
            o.sample_every = sample_every;
            o.ledger = ledger;
            CavityResult r;
            {
                py::gil_scoped_release release;
                r = run_cavity(c, o);
            }
            py::list history;
            for (const NuShSample& s : r.history.samples) {
                py::dict d;
                d["time"] = s.time;
                d["nu_hot"] = s.nu_hot;
                d["nu_cold"] = s.nu_cold;
                d["sh_hot"] = s.sh_hot;
                d["sh_cold"] = s.sh_cold;
                history.append(d);
            }
            py::dict out;
            out["history"] = history;
            out["steps"] = r.steps;
            out["steady"] = r.steady;
            out["ledger_violations"] = r.ledger_violations;
            out["files"] = r.files;
            return out;
        },
        py::arg("config"), py::arg("out_dir") = std::filesystem::path{}, py::arg("snapshot_every") = 0,
        py::arg("sample_every") = 1, py::arg("ledger") = false);
}
