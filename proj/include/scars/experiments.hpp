#pragma once

#include "scars/config.hpp"
#include "scars/model.hpp"
#include "scars/projection_map.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace scars {

enum class Experiment { Lyapunov, Spectrum, Project, TimeAverage, ClassicalFidelity, ScarStats };

/// CLI subcommand names: lyapunov, spectrum, project, time-average, classical-fidelity, scar-stats.
std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

/// Fully resolved experiment parameters. Every field has a default; model keys
/// are those of load_model_config.
struct ExperimentConfig {
    Experiment experiment = Experiment::Spectrum;
    KeyValues model_keys;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    /// 0 selects the hardware concurrency.
    unsigned threads = 0;

    PhaseSpaceGrid grid{101, 201};
    /// Initial / reference orbit: "y", "mu" or "custom" (anchor_theta, anchor_phi).
    std::string anchor = "y";
    double anchor_theta = 0.0;
    double anchor_phi = 0.0;
    Manifold manifold = Manifold::IS;

    // lyapunov
    int scan_points = 20;
    double ratio_min = 0.01;
    double ratio_max = 1.0;
    int classical_n = 100;
    int steps_per_period = 1000;

    // project
    int n_eigenstates = 10;

    // time-average
    std::string method = "diagonal";
    double horizon = 2000.0;
    double dt = 0.5;

    // classical-fidelity
    int samples = 256;
    double delta = 0.05;
    double horizon_periods = 200.0;
    double transient_periods = 20.0;
    int sample_stride = 50;
    PhaseSpaceGrid classical_grid{31, 61};

    // scar-stats
    int n_random = 1000;
    int upo_orbits = 60;
    int upo_points = 400;

    /// Optional eigensystem cache file (spectrum, project, time-average, scar-stats).
    std::string cache;

    SpinChainModel model() const;
    ManifoldPoint anchor_point(Manifold m) const;
    /// Resolved parameters as a JSON object (threads excluded).
    std::string to_json() const;
};

/// Builds a config from key/value pairs; unknown keys and invalid values throw std::invalid_argument.
ExperimentConfig make_experiment_config(Experiment experiment, const KeyValues& kv);

struct RunResult {
    /// Output file names relative to out_dir, in emission order.
    std::vector<std::string> outputs;
    std::string manifest_path;
};

/// Runs the experiment, writes its artifacts to out_dir and a manifest.json
/// listing the resolved config and the SHA-256 of every output.
RunResult run(const ExperimentConfig& config);

/// Lower-case hex SHA-256 of a file.
std::string sha256_file(const std::string& path);

} // namespace scars
