#include "ddbrink/config.hpp"

#include <fstream>
#include <set>

namespace ddbrink {

using nlohmann::json;
using nlohmann::ordered_json;

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    require(theta >= 0.5 && theta <= 1.0,
            "scheme.theta must lie in [1/2, 1] (the stable parameter box), got " + std::to_string(theta));
    require(eps >= 0.0, "scheme.eps must be >= 0");
    require(jobs >= 1, "jobs must be >= 1");
    require(snapshot_every >= 0, "snapshot_every must be >= 0");
    require(draws >= 1, "identities.draws must be >= 1");
    require(spatial.levels >= 1 && spatial.levels <= 8, "mms_spatial.levels must lie in [1, 8]");
    require(spatial.coarsest >= 1, "mms_spatial.coarsest must be >= 1");
    require(spatial.dt > 0.0 && spatial.t_end > 0.0, "mms_spatial.dt and t_end must be > 0");
    require(temporal.levels >= 1 && temporal.levels <= 16, "mms_temporal.levels must lie in [1, 16]");
    require(temporal.cells >= 1, "mms_temporal.cells must be >= 1");
    require(temporal.dt0 > 0.0 && temporal.t_end > 0.0, "mms_temporal.dt0 and t_end must be > 0");
    require(sample_every >= 1, "cavity.sample_every must be >= 1");
    CavityConfig c = cavity;
    c.theta = theta;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("cavity.") + e.what());
    }
}

ordered_json to_json(const RunConfig& c) {
    ordered_json j;
    j["command"] = c.command;
    j["out_dir"] = c.out_dir.string();
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    j["snapshot_every"] = c.snapshot_every;
    j["scheme"] = {{"theta", c.theta}, {"eps", c.eps}};
    j["mms_spatial"] = {{"levels", c.spatial.levels},
                        {"coarsest", c.spatial.coarsest},
                        {"dt", c.spatial.dt},
                        {"t_end", c.spatial.t_end},
                        {"exact_start", c.spatial.exact_start}};
    j["mms_temporal"] = {{"levels", c.temporal.levels},
                         {"dt0", c.temporal.dt0},
                         {"cells", c.temporal.cells},
                         {"t_end", c.temporal.t_end},
                         {"exact_start", c.temporal.exact_start}};
    const CavityConfig& k = c.cavity;
    j["cavity"] = {{"ra", k.ra},
                   {"pr", k.pr},
                   {"le", k.le},
                   {"n_ratio", k.n_ratio},
                   {"nx", k.nx},
                   {"ny", k.ny},
                   {"dt", k.dt},
                   {"t_end", k.t_end},
                   {"eps_scale", k.eps_scale},
                   {"steady_window", k.steady_window},
                   {"steady_tol", k.steady_tol},
                   {"homogeneous_walls", k.homogeneous_walls},
                   {"sample_every", c.sample_every},
                   {"ledger", c.ledger}};
    j["identities"] = {{"draws", c.draws}};
    return j;
}

namespace {

class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(where("") + " must be an object");
    }

    template <typename T>
    void get(const char* key, T& dst) {
        seen_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end()) return;
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!it->is_boolean()) throw ConfigError("");
            } else if constexpr (std::is_integral_v<T>) {
                if (!it->is_number_integer()) throw ConfigError("");
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!it->is_number()) throw ConfigError("");
            } else {
                if (!it->is_string()) throw ConfigError("");
            }
            dst = it->get<T>();
        } catch (const std::exception&) {
            throw ConfigError(where(key) + ": unexpected value " + it->dump());
        }
    }

    Reader section(const char* key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        static const json empty = json::object();
        return Reader(it == obj_.end() ? empty : *it, where(key));
    }

    void reject_unknown() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError("unknown key " + where(it.key()));
        }
    }

private:
    std::string where(const std::string& key) const {
        if (key.empty()) return path_.empty() ? "<root>" : path_;
        return path_.empty() ? key : path_ + "." + key;
    }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

}  // namespace

RunConfig from_json(const json& j, RunConfig c) {
    Reader root(j, "");
    root.get("command", c.command);
    std::string out = c.out_dir.string();
    root.get("out_dir", out);
    c.out_dir = out;
    root.get("seed", c.seed);
    root.get("jobs", c.jobs);
    root.get("snapshot_every", c.snapshot_every);
    {
        Reader s = root.section("scheme");
        s.get("theta", c.theta);
        s.get("eps", c.eps);
        s.reject_unknown();
    }
    {
        Reader s = root.section("mms_spatial");
        s.get("levels", c.spatial.levels);
        s.get("coarsest", c.spatial.coarsest);
        s.get("dt", c.spatial.dt);
        s.get("t_end", c.spatial.t_end);
        s.get("exact_start", c.spatial.exact_start);
        s.reject_unknown();
    }
    {
        Reader s = root.section("mms_temporal");
        s.get("levels", c.temporal.levels);
        s.get("dt0", c.temporal.dt0);
        s.get("cells", c.temporal.cells);
        s.get("t_end", c.temporal.t_end);
        s.get("exact_start", c.temporal.exact_start);
        s.reject_unknown();
    }
    {
        Reader s = root.section("cavity");
        CavityConfig& k = c.cavity;
        s.get("ra", k.ra);
        s.get("pr", k.pr);
        s.get("le", k.le);
        s.get("n_ratio", k.n_ratio);
        s.get("nx", k.nx);
        s.get("ny", k.ny);
        s.get("dt", k.dt);
        s.get("t_end", k.t_end);
        s.get("eps_scale", k.eps_scale);
        s.get("steady_window", k.steady_window);
        s.get("steady_tol", k.steady_tol);
        s.get("homogeneous_walls", k.homogeneous_walls);
        s.get("sample_every", c.sample_every);
        s.get("ledger", c.ledger);
        s.reject_unknown();
    }
    {
        Reader s = root.section("identities");
        s.get("draws", c.draws);
        s.reject_unknown();
    }
    root.reject_unknown();
    c.cavity.theta = c.theta;
    return c;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
    return from_json(j, std::move(base));
}

MmsOptions mms_options(const RunConfig& config, double t_end, bool exact_start) {
    MmsOptions o;
    o.params.theta = config.theta;
    o.params.eps = o.params.eps1 = o.params.eps2 = config.eps;
    o.params.nu = o.params.gamma = o.params.dc = 1.0;
    o.params.da_inv = 0.0;
    o.params.beta_t = o.params.beta_s = 1.0;
    o.params.g = {0.0, 1.0};
    o.t_end = t_end;
    o.exact_start = exact_start;
    o.jobs = config.jobs;
    return o;
}

}  // namespace ddbrink
