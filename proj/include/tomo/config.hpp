#pragma once

#include "tomo/benchmark.hpp"
#include "tomo/coherence.hpp"
#include "tomo/solver.hpp"
#include "tomo/tuning.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tomo {

/// Every tunable of the pipeline as a flat key-value document. Parsed from
/// `key = value` lines ('#' starts a comment); unknown keys are rejected
/// and all values are validated against their owning type's invariants
/// before any computation starts.
struct RunConfig {
    // geometry (regular distribution unless geometry_csv is given)
    std::string geometry_csv;
    int baselines_n = 25;
    double baseline_min_m = -135.0;
    double baseline_max_m = 135.0;
    double wavelength_m = 0.031;
    double slant_range_m = 697000.0;

    // joint grid
    double elevation_min_m = -40.0;
    double elevation_max_m = 120.0;
    int elevation_points = 200;
    std::vector<std::string> motion_basis;  // "linear" or "sin:PERIOD:OFFSET"
    std::vector<double> motion_min;
    std::vector<double> motion_max;
    std::vector<int> motion_points;

    // engine + hyperparameters
    std::string engine = "abt";
    int num_layers = 15;
    double c1 = 0.036;
    double c2 = 0.0;
    double c3 = 0.52;
    bool support_selection = true;  // baseline engine only
    std::string schedule_mode = "weighted_random";
    std::string residual_mode = "full";
    std::string block_norm = "spectral";
    int initial_blocksize = 0;  // 0 = half-Rayleigh rule

    // analytic weight optimization
    double zeta_init = 0.1;
    double alpha_init = 0.1;
    double shrink_factor = 0.1;
    double f1_plateau_rtol = 1e-6;
    double f1_f2_match_rtol = 1e-3;
    int max_outer_iters = 5000;

    // cleanup / detection
    double cleanup_kappa = 0.05;
    int k_max = 2;
    int min_separation = 2;
    double detection_tolerance = 0.25;  // fraction of rho_s

    // scenario
    int num_scatterers = 2;
    double normalized_distance = 1.0;
    double snr_db = 6.0;
    double amplitude_ratio = 1.0;
    double phase_difference = 0.0;
    bool on_grid = true;
    int trials = 500;
    std::vector<double> distances = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2};

    // tuning
    std::vector<double> c1_grid;
    std::vector<double> c2_grid;
    std::vector<double> c3_grid;
    int refine_levels = 2;
    int tuning_samples = 256;

    // run control
    std::uint64_t seed = 1234;
    int threads = 0;  // 0 = TOMO_UNFOLD_THREADS env, then hardware
    bool verbose = false;
};

RunConfig parse_run_config(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::string& path);

/// Domain objects from the document. Each runs the owning type's
/// validation.
AcquisitionGeometry config_geometry(const RunConfig& cfg);
MotionBasis config_motion_basis(const RunConfig& cfg);
ParameterGrid config_grid(const RunConfig& cfg);
Hyperparameters config_hyperparameters(const RunConfig& cfg);
SolverOptions config_solver_options(const RunConfig& cfg);
WeightOptConfig config_weight_opt(const RunConfig& cfg);
TrialConfig config_trial(const RunConfig& cfg);
TuningConfig config_tuning(const RunConfig& cfg);
BenchmarkOptions config_benchmark_options(const RunConfig& cfg);

/// Builds every domain object once, surfacing any invariant violation
/// before computation starts.
void validate_run_config(const RunConfig& cfg);

/// The document serialized back to `key = value` lines (for manifests).
std::string dump_run_config(const RunConfig& cfg);

}  // namespace tomo
