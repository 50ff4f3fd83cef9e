#pragma once

#include "tomo/pipeline.hpp"
#include "tomo/rng.hpp"

#include <cstdint>
#include <vector>

namespace tomo {

/// One simulated point scatterer in physical coordinates.
struct ScattererSpec {
    double elevation = 0.0;              // meters
    std::vector<double> motion_coeffs;   // one per basis term, natural units
    double amplitude = 1.0;
    double phase = 0.0;                  // radians
};

/// Scenario for one Monte Carlo point: 1 or 2 scatterers, distance in
/// units of rho_s, worst-case controls for amplitude ratio and phase
/// difference.
struct TrialConfig {
    int num_scatterers = 2;
    double normalized_distance = 1.0;  // units of rho_s, scatterer 2 offset
    double amplitude_ratio = 1.0;      // >= 1; second amplitude = 1/ratio
    double phase_difference = 0.0;     // radians, phi_2 - phi_1
    double snr_db = 6.0;
    int trials = 500;
    std::uint64_t seed = 0;
    bool on_grid = true;

    void validate() const;
};

struct DetectionTolerance {
    double fraction_of_rayleigh = 0.25;
};

struct CurvePoint {
    double normalized_distance = 0.0;
    double snr_db = 0.0;
    double amplitude_ratio = 1.0;
    int trials = 0;
    int effective_detections = 0;
    double rate = 0.0;
};

struct SimulatedTrial {
    ReflectivityProfile truth;                  // synthesis amplitude scale
    std::vector<ScattererSpec> truth_scatterers;
    MeasurementVector measurement;
};

/// Draws scatterer placements and synthesizes one noisy measurement.
/// Scatterer 1 lands uniformly at random where the full constellation still
/// fits; scatterer 2 sits +normalized_distance * rho_s above it. Truth
/// entries are assigned to the nearest grid point (exact when on_grid).
SimulatedTrial simulate_trial(const TrialConfig& cfg, const SteeringMatrix& R_synth,
                              const AcquisitionGeometry& geo, Rng& rng);

/// Zeroes every entry with modulus below kappa * (max modulus).
ReflectivityProfile cleanup_profile(const ReflectivityProfile& gamma_hat, double kappa);

/// Projects |gamma| onto the elevation axis (max over motion indices),
/// finds local maxima, and greedily keeps up to k_max strongest peaks
/// pairwise separated by >= min_separation elevation grid steps. Each kept
/// peak reports the grid coordinates of its maximizing entry.
std::vector<ScattererSpec> model_order_selection(const ReflectivityProfile& cleaned,
                                                 const ParameterGrid& grid,
                                                 int k_max, int min_separation);

/// Fraction of trials whose detected count matches the truth and whose
/// greedy nearest-first elevation matching stays within
/// tol.fraction_of_rayleigh * rho_s everywhere.
double effective_detection_rate(const std::vector<std::vector<ScattererSpec>>& detections,
                                const std::vector<std::vector<ScattererSpec>>& truths,
                                const DetectionTolerance& tol, double rho_s);

struct BenchmarkOptions {
    double cleanup_kappa = 0.05;
    int k_max = 2;
    int min_separation = 2;
    DetectionTolerance tolerance;
    int threads = 1;
};

/// Full sweep: simulate -> invert -> cleanup -> model order selection ->
/// rate, one CurvePoint per TrialConfig. Per-trial RNG streams derive from
/// (config seed, trial index); results do not depend on worker count. A
/// trial that throws counts as not effective and is logged to stderr.
std::vector<CurvePoint> run_benchmark(const std::vector<TrialConfig>& sweep,
                                      const InversionSetup& setup,
                                      const Hyperparameters& hp,
                                      const BenchmarkOptions& options);

}  // namespace tomo
