#pragma once

#include "tomo/benchmark.hpp"
#include "tomo/pipeline.hpp"

#include <string>
#include <vector>

namespace tomo {

/// Coarse-to-fine search space. The same T simulated samples score every
/// candidate (common random numbers), so NMSE differences are attributable
/// to the hyperparameters alone.
struct TuningConfig {
    std::vector<double> c1_grid;
    std::vector<double> c2_grid;
    std::vector<double> c3_grid;
    int refine_levels = 2;  // zoom passes after the coarse one
    int samples = 256;      // T
    double snr_db = 6.0;
    TrialConfig scatterer_config;  // placement scenario; snr/seed overridden here
    std::uint64_t seed = 0;
    int num_layers = 15;
    bool support_selection = true;  // baseline engine only

    void validate() const;
};

/// Default coarse grids: c1 log-spaced over [1e-3, 1], c2 and c3 small
/// bracketing sets.
TuningConfig default_tuning_config();

/// Eq.-style NMSE: mean over samples of ||est - truth||^2 / ||truth||^2.
double nmse(const std::vector<ReflectivityProfile>& estimates,
            const std::vector<ReflectivityProfile>& truths);

/// The frozen sample set all candidates share.
struct TuningSamples {
    std::vector<ReflectivityProfile> truths;       // synthesis amplitude scale
    std::vector<ComplexVector> measurements;
    std::vector<std::uint64_t> solver_seeds;
    std::string digest;
};

TuningSamples make_tuning_samples(const TuningConfig& cfg, const InversionSetup& setup);

struct CandidateScore {
    Hyperparameters hp;
    double nmse = 0.0;
    int level = 0;
};

struct GridSearchResult {
    Hyperparameters best;
    double best_nmse = 0.0;
    std::vector<CandidateScore> trace;       // every candidate, in evaluation order
    std::vector<double> level_best;          // best NMSE after each level
    std::string sample_digest;
};

/// Exhaustive coarse pass, then refine_levels zooms. Each zoom centers a
/// same-cardinality grid on the incumbent, spanning its two neighboring
/// cells, so the incumbent is always re-scored and per-level best NMSE is
/// non-increasing. Fully deterministic given cfg.seed.
GridSearchResult grid_search(const InversionSetup& setup, const TuningConfig& cfg,
                             int threads);

}  // namespace tomo
