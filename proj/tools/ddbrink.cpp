// ddbrink: manufactured-solution sweeps, cavity benchmark and identity checks.
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <vector>

#include <CLI11.hpp>

#include "ddbrink/config.hpp"
#include "ddbrink/norms.hpp"

namespace {

using namespace ddbrink;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kDiverged = 2;
constexpr int kCheckFailed = 3;

struct Overrides {
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> items;

    template <typename T, typename Apply>
    void add(CLI::App* app, const std::string& name, T& storage, const std::string& help, Apply apply) {
        CLI::Option* opt = app->add_option(name, storage, help);
        items.emplace_back(opt, [&storage, apply](RunConfig& c) { apply(c, storage); });
    }
    void flag(CLI::App* app, const std::string& name, bool& storage, const std::string& help,
              std::function<void(RunConfig&, bool)> apply) {
        CLI::Option* opt = app->add_flag(name, storage, help);
        items.emplace_back(opt, [&storage, apply](RunConfig& c) { apply(c, storage); });
    }
    void apply(RunConfig& c) const {
        for (const auto& [opt, fn] : items) {
            if (opt->count() > 0) fn(c);
        }
    }
};

void write_manifest(const RunConfig& config, const std::vector<fs::path>& outputs, double seconds) {
    fs::create_directories(config.out_dir);
    nlohmann::ordered_json m;
    m["command"] = config.command;
    m["params"] = to_json(config);
    m["seed"] = config.seed;
    auto& list = m["outputs"] = nlohmann::json::array();
    for (const auto& p : outputs) list.push_back(p.string());
    m["wall_time_s"] = seconds;
    std::ofstream(config.out_dir / "manifest.json") << m.dump(2) << '\n';
}

fs::path write_rates(const RunConfig& config, const RateTable& table, const std::string& name) {
    fs::create_directories(config.out_dir);
    const fs::path path = config.out_dir / name;
    std::ofstream out(path);
    write_rate_csv(out, table);
    write_rate_csv(std::cout, table);
    return path;
}

int run_command(const RunConfig& config, std::vector<fs::path>& outputs) {
    if (config.command == "check-identities") {
        const IdentityReport r = verify_identities(config.draws, config.seed);
        fs::create_directories(config.out_dir);
        const fs::path path = config.out_dir / "identities.json";
        nlohmann::ordered_json j{{"draws", r.draws},
                                 {"max_identity_residual", r.max_identity_residual},
                                 {"max_lower_violation", r.max_lower_violation},
                                 {"max_upper_violation", r.max_upper_violation},
                                 {"max_skew_asymmetry", r.max_skew_asymmetry},
                                 {"max_skew_energy", r.max_skew_energy},
                                 {"tight_split_violations", r.tight_split_violations},
                                 {"identity_ok", r.identity_ok},
                                 {"bounds_ok", r.bounds_ok},
                                 {"skew_ok", r.skew_ok}};
        std::ofstream(path) << j.dump(2) << '\n';
        outputs.push_back(path);
        std::cout << j.dump(2) << '\n';
        std::cout << "INFO tight split bound exceeded in " << r.tight_split_violations << " of " << 9 * r.draws
                  << " draws\n";
        return r.ok() ? kOk : kCheckFailed;
    }
    if (config.command == "mms-spatial") {
        std::vector<int> cells;
        for (int i = 0, n = config.spatial.coarsest; i < config.spatial.levels; ++i, n *= 2) cells.push_back(n);
        const MmsOptions opts = mms_options(config, config.spatial.t_end, config.spatial.exact_start);
        outputs.push_back(write_rates(config, spatial_sweep(cells, config.spatial.dt, opts), "rates_spatial.csv"));
        return kOk;
    }
    if (config.command == "mms-temporal") {
        std::vector<double> dts;
        for (int i = 0; i < config.temporal.levels; ++i) dts.push_back(config.temporal.dt0 / std::pow(2.0, i));
        const MmsOptions opts = mms_options(config, config.temporal.t_end, config.temporal.exact_start);
        outputs.push_back(write_rates(config, temporal_sweep(dts, config.temporal.cells, opts), "rates_temporal.csv"));
        return kOk;
    }
    if (config.command == "cavity") {
        CavityConfig cav = config.cavity;
        cav.theta = config.theta;
        CavityOutputs out;
        out.dir = config.out_dir;
        out.snapshot_every = config.snapshot_every;
        out.sample_every = config.sample_every;
        out.ledger = config.ledger;
        try {
            const CavityResult r = run_cavity(cav, out);
            outputs.insert(outputs.end(), r.files.begin(), r.files.end());
            const NuShSample& s = r.history.samples.back();
            std::cout << "t=" << s.time << " steps=" << r.steps << (r.steady ? " (steady)" : "")
                      << " Nu_hot=" << s.nu_hot << " Nu_cold=" << s.nu_cold << " Sh_hot=" << s.sh_hot
                      << " Sh_cold=" << s.sh_cold << '\n';
            if (config.ledger) std::cout << "stability ledger violations: " << r.ledger_violations << '\n';
        } catch (const DivergenceError& e) {
            for (const char* name : {"nu_sh.csv", "stability_ledger.csv"}) {
                if (fs::exists(config.out_dir / name)) outputs.push_back(config.out_dir / name);
            }
            std::cerr << "divergence: " << e.what() << '\n';
            return kDiverged;
        }
        return kOk;
    }
    throw ConfigError("unknown command " + config.command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Darcy-Brinkman double-diffusive convection solver"};
    app.require_subcommand(1);

    std::string config_path;
    RunConfig flags;
    std::string out_dir;
    bool accelerated = false;
    Overrides ov;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file; flags override it")->check(CLI::ExistingFile);
        ov.add(sub, "--out", out_dir, "output directory", [](RunConfig& c, const std::string& v) { c.out_dir = v; });
        ov.add(sub, "--seed", flags.seed, "random seed", [](RunConfig& c, std::uint64_t v) { c.seed = v; });
        ov.add(sub, "--jobs", flags.jobs, "worker threads", [](RunConfig& c, int v) { c.jobs = v; });
        ov.add(sub, "--theta", flags.theta, "scheme parameter in [1/2, 1]", [](RunConfig& c, double v) { c.theta = v; });
    };

    CLI::App* ident = app.add_subcommand("check-identities", "randomized checks of the energy identity and skew convection");
    common(ident);
    ov.add(ident, "--draws", flags.draws, "draws per (theta, eps) pair", [](RunConfig& c, int v) { c.draws = v; });

    CLI::App* spatial = app.add_subcommand("mms-spatial", "spatial convergence on the manufactured solution");
    common(spatial);
    ov.add(spatial, "--eps", flags.eps, "stabilization", [](RunConfig& c, double v) { c.eps = v; });
    ov.add(spatial, "--levels", flags.spatial.levels, "mesh levels",
           [](RunConfig& c, int v) { c.spatial.levels = v; });
    ov.add(spatial, "--coarsest", flags.spatial.coarsest, "cells per side on the first level",
           [](RunConfig& c, int v) { c.spatial.coarsest = v; });
    ov.add(spatial, "--dt", flags.spatial.dt, "time step", [](RunConfig& c, double v) { c.spatial.dt = v; });
    ov.add(spatial, "--t-end", flags.spatial.t_end, "final time", [](RunConfig& c, double v) { c.spatial.t_end = v; });
    ov.flag(spatial, "--interpolant-start", flags.spatial.exact_start, "start from two copies of the t=0 interpolant",
            [](RunConfig& c, bool) { c.spatial.exact_start = false; });

    CLI::App* temporal = app.add_subcommand("mms-temporal", "temporal convergence on the manufactured solution");
    common(temporal);
    ov.add(temporal, "--eps", flags.eps, "stabilization", [](RunConfig& c, double v) { c.eps = v; });
    ov.add(temporal, "--levels", flags.temporal.levels, "time step levels",
           [](RunConfig& c, int v) { c.temporal.levels = v; });
    ov.add(temporal, "--dt0", flags.temporal.dt0, "largest time step", [](RunConfig& c, double v) { c.temporal.dt0 = v; });
    ov.add(temporal, "--cells", flags.temporal.cells, "cells per side",
           [](RunConfig& c, int v) { c.temporal.cells = v; });
    ov.add(temporal, "--t-end", flags.temporal.t_end, "final time", [](RunConfig& c, double v) { c.temporal.t_end = v; });
    ov.flag(temporal, "--interpolant-start", flags.temporal.exact_start, "start from two copies of the t=0 interpolant",
            [](RunConfig& c, bool) { c.temporal.exact_start = false; });

    CLI::App* cavity = app.add_subcommand("cavity", "buoyancy driven cavity, Nusselt and Sherwood numbers");
    common(cavity);
    CavityConfig& k = flags.cavity;
    ov.add(cavity, "--ra", k.ra, "Rayleigh number", [](RunConfig& c, double v) { c.cavity.ra = v; });
    ov.add(cavity, "--pr", k.pr, "Prandtl number", [](RunConfig& c, double v) { c.cavity.pr = v; });
    ov.add(cavity, "--le", k.le, "Lewis number", [](RunConfig& c, double v) { c.cavity.le = v; });
    ov.add(cavity, "--n-ratio", k.n_ratio, "buoyancy ratio N", [](RunConfig& c, double v) { c.cavity.n_ratio = v; });
    ov.add(cavity, "--nx", k.nx, "cells across", [](RunConfig& c, int v) { c.cavity.nx = v; });
    ov.add(cavity, "--ny", k.ny, "cells along the height", [](RunConfig& c, int v) { c.cavity.ny = v; });
    ov.add(cavity, "--dt", k.dt, "time step", [](RunConfig& c, double v) { c.cavity.dt = v; });
    ov.add(cavity, "--t-end", k.t_end, "final time", [](RunConfig& c, double v) { c.cavity.t_end = v; });
    ov.add(cavity, "--eps-scale", k.eps_scale, "stabilization relative to the diffusivities",
           [](RunConfig& c, double v) { c.cavity.eps_scale = v; });
    ov.add(cavity, "--steady-window", k.steady_window, "time span of the steady-state test (0 disables)",
           [](RunConfig& c, double v) { c.cavity.steady_window = v; });
    ov.add(cavity, "--steady-tol", k.steady_tol, "relative Nu change counted as steady",
           [](RunConfig& c, double v) { c.cavity.steady_tol = v; });
    ov.add(cavity, "--snapshot-every", flags.snapshot_every, "VTK snapshot cadence in steps",
           [](RunConfig& c, int v) { c.snapshot_every = v; });
    ov.add(cavity, "--sample-every", flags.sample_every, "nu_sh.csv cadence in steps",
           [](RunConfig& c, int v) { c.sample_every = v; });
    ov.flag(cavity, "--ledger", flags.ledger, "write the stability ledger", [](RunConfig& c, bool v) { c.ledger = v; });
    ov.flag(cavity, "--homogeneous-walls", k.homogeneous_walls, "zero wall data with a smooth initial bump",
            [](RunConfig& c, bool v) { c.cavity.homogeneous_walls = v; });
    cavity->add_flag("--accelerated", accelerated, "dt = 1e-3 with the steady-state stop");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    const auto start = std::chrono::steady_clock::now();
    RunConfig config;
    std::vector<fs::path> outputs;
    int code = kOk;
    try {
        if (!config_path.empty()) config = load_config(config_path);
        config.command = app.get_subcommands().front()->get_name();
        ov.apply(config);
        if (accelerated && config.command == "cavity") config.cavity.dt = 1e-3;
        config.cavity.theta = config.theta;
        config.validate();
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        code = run_command(config, outputs);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        code = kConfigError;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(config, outputs, seconds);
    return code;
}
