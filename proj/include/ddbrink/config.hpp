#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "ddbrink/cavity.hpp"
#include "ddbrink/mms.hpp"

namespace ddbrink {

struct MmsSpatialConfig {
    int levels = 5;
    int coarsest = 4;  // cells per side of the first level, doubled each level
    double dt = 0.1 / 16;
    double t_end = 0.1;
    bool exact_start = true;
};

struct MmsTemporalConfig {
    int levels = 5;
    double dt0 = 1.0;  // halved each level
    int cells = 64;
    double t_end = 1.0;
    bool exact_start = true;
};

struct RunConfig {
    std::string command;
    std::filesystem::path out_dir = "out";
    std::uint64_t seed = 42;
    int jobs = 1;
    int snapshot_every = 0;
    int draws = 100;

    double theta = 1.0;
    double eps = 0.0;  // MMS stabilization, relative to unit diffusivities

    MmsSpatialConfig spatial;
    MmsTemporalConfig temporal;
    CavityConfig cavity;
    int sample_every = 1;
    bool ledger = false;

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

nlohmann::ordered_json to_json(const RunConfig& config);
/// Strict: unknown keys and mistyped values raise ConfigError with the key path.
/// Missing keys keep the values already in `base`.
RunConfig from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Scheme parameters of the manufactured-solution problem.
MmsOptions mms_options(const RunConfig& config, double t_end, bool exact_start);

}  // namespace ddbrink
