#include "tomo/tuning.hpp"

#include "tomo/digest.hpp"
#include "tomo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tomo {

void TuningConfig::validate() const {
    if (c1_grid.empty() || c2_grid.empty() || c3_grid.empty())
        throw ConfigError("tuning: all three grids must be non-empty");
    for (double v : c1_grid)
        if (!(v > 0.0)) throw ConfigError("tuning: c1 grid values must be > 0");
    for (double v : c2_grid)
        if (v < 0.0) throw ConfigError("tuning: c2 grid values must be >= 0");
    for (double v : c3_grid)
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("tuning: c3 grid values must be in (0,1)");
    if (refine_levels < 0) throw ConfigError("tuning: refine_levels must be >= 0");
    if (samples < 1) throw ConfigError("tuning: need T >= 1 samples");
    if (num_layers < 1) throw ConfigError("tuning: need at least one layer");
}

TuningConfig default_tuning_config() {
    TuningConfig cfg;
    cfg.c1_grid.resize(7);
    for (int i = 0; i < 7; ++i)
        cfg.c1_grid[static_cast<std::size_t>(i)] =
            std::pow(10.0, -3.0 + 3.0 * static_cast<double>(i) / 6.0);
    cfg.c2_grid = {0.0, 1e-4, 1e-3, 1e-2, 1e-1};
    cfg.c3_grid = {0.3, 0.45, 0.6, 0.75, 0.9};
    return cfg;
}

double nmse(const std::vector<ReflectivityProfile>& estimates,
            const std::vector<ReflectivityProfile>& truths) {
    if (estimates.size() != truths.size() || estimates.empty())
        throw ConfigError("nmse: sample lists must be non-empty and aligned");
    double acc = 0.0;
    for (std::size_t t = 0; t < truths.size(); ++t) {
        const double denom = truths[t].entries.squaredNorm();
        if (!(denom > 0.0)) throw ConfigError("nmse: truth sample with zero norm");
        acc += (estimates[t].entries - truths[t].entries).squaredNorm() / denom;
    }
    return acc / static_cast<double>(truths.size());
}

TuningSamples make_tuning_samples(const TuningConfig& cfg, const InversionSetup& setup) {
    cfg.validate();
    TrialConfig scenario = cfg.scatterer_config;
    scenario.snr_db = cfg.snr_db;
    scenario.trials = cfg.samples;

    TuningSamples samples;
    samples.truths.reserve(static_cast<std::size_t>(cfg.samples));
    samples.measurements.reserve(static_cast<std::size_t>(cfg.samples));
    Digest digest;
    for (int t = 0; t < cfg.samples; ++t) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
        SimulatedTrial trial = simulate_trial(scenario, setup.R_synth, setup.geo, rng);
        samples.solver_seeds.push_back(rng.next_u64());
        digest.update(trial.truth.entries);
        digest.update(trial.measurement.entries);
        samples.truths.push_back(std::move(trial.truth));
        samples.measurements.push_back(std::move(trial.measurement.entries));
    }
    samples.digest = digest.hex();
    return samples;
}

namespace {

double score_candidate(const InversionSetup& setup, const Hyperparameters& hp,
                       const TuningSamples& samples, PlanCache* cache, int threads) {
    const SolverPlan plan = make_plan_for(setup, hp, cache);
    const int count = static_cast<int>(samples.truths.size());
    std::vector<double> ratios(static_cast<std::size_t>(count), 0.0);
    parallel_for(count, threads, [&](int t) {
        const auto& truth = samples.truths[static_cast<std::size_t>(t)];
        const ReflectivityProfile estimate =
            invert_measurement(setup, plan, samples.measurements[static_cast<std::size_t>(t)],
                               samples.solver_seeds[static_cast<std::size_t>(t)]);
        ratios[static_cast<std::size_t>(t)] =
            (estimate.entries - truth.entries).squaredNorm() / truth.entries.squaredNorm();
    });
    // Sequential reduction keeps the score independent of worker count.
    double acc = 0.0;
    for (double r : ratios) acc += r;
    return acc / static_cast<double>(count);
}

// Same-cardinality zoom spanning the incumbent's two neighboring cells.
std::vector<double> zoom_axis(const std::vector<double>& grid, std::size_t best_index) {
    const std::size_t n = grid.size();
    if (n == 1) return grid;
    const double lo = grid[best_index == 0 ? 0 : best_index - 1];
    const double hi = grid[std::min(best_index + 1, n - 1)];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

}  // namespace

GridSearchResult grid_search(const InversionSetup& setup, const TuningConfig& cfg,
                             int threads) {
    cfg.validate();
    const TuningSamples samples = make_tuning_samples(cfg, setup);

    GridSearchResult result;
    result.sample_digest = samples.digest;
    result.best_nmse = std::numeric_limits<double>::infinity();

    PlanCache cache;
    std::vector<double> c1_axis = cfg.c1_grid;
    std::vector<double> c2_axis = cfg.c2_grid;
    std::vector<double> c3_axis = cfg.c3_grid;

    for (int level = 0; level <= cfg.refine_levels; ++level) {
        std::size_t best_i1 = 0, best_i2 = 0, best_i3 = 0;
        bool improved_this_level = false;
        for (std::size_t i1 = 0; i1 < c1_axis.size(); ++i1)
            for (std::size_t i2 = 0; i2 < c2_axis.size(); ++i2)
                for (std::size_t i3 = 0; i3 < c3_axis.size(); ++i3) {
                    Hyperparameters hp;
                    hp.c1 = c1_axis[i1];
                    hp.c2 = c2_axis[i2];
                    hp.c3 = c3_axis[i3];
                    hp.num_layers = cfg.num_layers;
                    hp.support_selection = cfg.support_selection;
                    const double score =
                        score_candidate(setup, hp, samples, &cache, threads);
                    result.trace.push_back({hp, score, level});
                    if (std::isfinite(score) && score < result.best_nmse) {
                        result.best_nmse = score;
                        result.best = hp;
                        best_i1 = i1;
                        best_i2 = i2;
                        best_i3 = i3;
                        improved_this_level = true;
                    } else if (std::isfinite(score) && !improved_this_level &&
                               score == result.best_nmse) {
                        // Incumbent re-scored at this level; remember where it
                        // sits so the next zoom centers on it.
                        best_i1 = i1;
                        best_i2 = i2;
                        best_i3 = i3;
                        improved_this_level = true;
                    }
                }
        if (!std::isfinite(result.best_nmse))
            throw NumericalError("grid search: every candidate produced non-finite NMSE");
        result.level_best.push_back(result.best_nmse);
        if (level < cfg.refine_levels) {
            c1_axis = zoom_axis(c1_axis, best_i1);
            c2_axis = zoom_axis(c2_axis, best_i2);
            c3_axis = zoom_axis(c3_axis, best_i3);
        }
    }
    return result;
}

}  // namespace tomo
