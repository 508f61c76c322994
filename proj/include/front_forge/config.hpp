#pragma once

#include "front_forge/harness.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace front_forge {

/// Suites accepted by `verify --suite` and experiment.suites.
inline const std::vector<std::string> kSuites = {"super", "asym", "mono", "stability", "vfront", "pyramid", "tau"};

/**
 * @brief Everything one command needs, with every default materialized.
 *
 * Arrangement presets ("symmetric_pair", "pyramid") expand into explicit fronts, and an absent
 * grid origin is placed from the grid block, so the resolved JSON fully determines a run.
 */
struct RunConfig {
    struct Reaction {
        std::string kind = "cubic";  // "cubic" or "tabulated"
        double theta = 0.25;
        std::string table;           // CSV path for "tabulated"
    } reaction;

    struct Arrangement {
        std::string preset = "symmetric_pair";  // "symmetric_pair", "pyramid" or "custom"
        int N = 2;
        double alpha0 = 0.7853981633974483;     // pair half-angle and pyramid tilt
        std::vector<Front> fronts;
    } arrangement;

    ProfileOptions profile;

    struct Surface {
        SurfaceCheckOptions check;
        int calibration_samples = 10000;
        double safety = 2.0;
    } surface;

    struct Bounds {
        double eps_fraction = 0.5;
        double delta = 0.0;  // 0: sigma
        double alpha_shrink = 0.5;
    } bounds;

    struct Grid {
        std::vector<int> dims = {512, 512};
        double dx = 0.1;
        std::vector<double> lo;        // empty: centred in x, y starting at -y_below * extent
        double y_below = 0.3;
        std::string scheme = "explicit";  // "explicit" or "imex"
        double dt = 0.0;
        double cfl_fraction = 0.2;
        double imex_tol = 1e-10;
    } grid;

    struct Experiment {
        std::vector<std::string> suites = kSuites;
        ConstructOptions construct;
        ResidualOptions residual;
        AsymptoticsOptions asymptotics;
        double mono_rho = 5.0;
        double mono_shift = 1.0;
        StabilityOptions stability;
        VFrontOptions vfront;
        TauProbeOptions tau;
        double pyramid_far = 4.0;
    } experiment;

    std::uint64_t seed = 1;
    std::string output = "out";

    GridSpec grid_spec() const;
    SolverConfig solver_config() const;
    ReactionSpec reaction_spec() const;
};

/// Parses a config on top of the defaults. Unknown keys and wrong types throw ConfigError with
/// the JSON-pointer path of the offending key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Resolved form: every field, presets expanded.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace front_forge
