#include "tomo/benchmark.hpp"

#include "tomo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

namespace tomo {

namespace {

// Nearest axis index by absolute distance; ties go to the lower index.
int nearest_index(const std::vector<double>& axis, double value) {
    int best = 0;
    double best_dist = std::abs(axis[0] - value);
    for (std::size_t i = 1; i < axis.size(); ++i) {
        const double dist = std::abs(axis[i] - value);
        if (dist < best_dist) {
            best_dist = dist;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace

void TrialConfig::validate() const {
    if (num_scatterers != 1 && num_scatterers != 2)
        throw ConfigError("trial config: num_scatterers must be 1 or 2");
    if (num_scatterers == 2 && !(normalized_distance > 0.0))
        throw ConfigError("trial config: normalized_distance must be > 0 for doubles");
    if (!(amplitude_ratio >= 1.0))
        throw ConfigError("trial config: amplitude_ratio must be >= 1");
    if (trials < 1) throw ConfigError("trial config: trials must be >= 1");
}

SimulatedTrial simulate_trial(const TrialConfig& cfg, const SteeringMatrix& R_synth,
                              const AcquisitionGeometry& geo, Rng& rng) {
    cfg.validate();
    const ParameterGrid& grid = R_synth.grid;
    const auto& elevation_axis = grid.elevation_axis;
    const double rho_s = rayleigh_resolution(geo);

    const double offset =
        cfg.num_scatterers == 2 ? cfg.normalized_distance * rho_s : 0.0;
    const double lo = elevation_axis.front();
    const double hi = elevation_axis.back() - offset;
    if (hi < lo)
        throw ConfigError("simulate_trial: second scatterer falls outside the grid "
                          "(distance " + std::to_string(offset) + " m exceeds the axis)");

    SimulatedTrial trial;
    trial.truth.entries = ComplexVector::Zero(grid.total_size());

    const double s1 = rng.uniform(lo, hi);
    const double phi1 = rng.uniform(0.0, 2.0 * M_PI);
    for (int k = 0; k < cfg.num_scatterers; ++k) {
        ScattererSpec spec;
        spec.elevation = s1 + (k == 0 ? 0.0 : offset);
        spec.amplitude = k == 0 ? 1.0 : 1.0 / cfg.amplitude_ratio;
        spec.phase = phi1 + (k == 0 ? 0.0 : cfg.phase_difference);
        spec.motion_coeffs.resize(grid.motion_axes.size());
        for (std::size_t m = 0; m < grid.motion_axes.size(); ++m)
            spec.motion_coeffs[m] =
                rng.uniform(grid.motion_axes[m].front(), grid.motion_axes[m].back());

        std::vector<int> multi(grid.motion_axes.size() + 1);
        multi[0] = nearest_index(elevation_axis, spec.elevation);
        for (std::size_t m = 0; m < grid.motion_axes.size(); ++m)
            multi[m + 1] = nearest_index(grid.motion_axes[m], spec.motion_coeffs[m]);

        if (cfg.on_grid) {
            // Snap the physical scatterer onto its grid cell.
            spec.elevation = elevation_axis[static_cast<std::size_t>(multi[0])];
            for (std::size_t m = 0; m < grid.motion_axes.size(); ++m)
                spec.motion_coeffs[m] =
                    grid.motion_axes[m][static_cast<std::size_t>(multi[m + 1])];
        }

        trial.truth.entries[grid.flatten(multi)] += std::polar(spec.amplitude, spec.phase);
        trial.truth_scatterers.push_back(std::move(spec));
    }

    trial.measurement =
        synthesize_measurements(R_synth, trial.truth, cfg.snr_db, rng.next_u64());
    return trial;
}

ReflectivityProfile cleanup_profile(const ReflectivityProfile& gamma_hat, double kappa) {
    if (kappa < 0.0 || kappa >= 1.0)
        throw ConfigError("cleanup_profile: kappa must be in [0, 1)");
    double max_mod = 0.0;
    for (Eigen::Index i = 0; i < gamma_hat.entries.size(); ++i)
        max_mod = std::max(max_mod, std::abs(gamma_hat.entries[i]));

    ReflectivityProfile out;
    out.entries = gamma_hat.entries;
    const double floor = kappa * max_mod;
    for (Eigen::Index i = 0; i < out.entries.size(); ++i)
        if (std::abs(out.entries[i]) < floor) out.entries[i] = Complex(0.0, 0.0);
    return out;
}

std::vector<ScattererSpec> model_order_selection(const ReflectivityProfile& cleaned,
                                                 const ParameterGrid& grid,
                                                 int k_max, int min_separation) {
    if (k_max < 1) throw ConfigError("model_order_selection: k_max must be >= 1");
    if (cleaned.size() != grid.total_size())
        throw ConfigError("model_order_selection: profile does not match grid");

    const int elev_size = grid.elevation_size();
    const int motion_size = grid.total_size() / elev_size;

    // Elevation envelope: max modulus over the motion hypotheses, with the
    // maximizing flat index retained for coordinate read-out.
    std::vector<double> envelope(static_cast<std::size_t>(elev_size), 0.0);
    std::vector<int> arg_flat(static_cast<std::size_t>(elev_size), -1);
    for (int e = 0; e < elev_size; ++e) {
        for (int m = 0; m < motion_size; ++m) {
            const int flat = e * motion_size + m;
            const double mod = std::abs(cleaned.entries[flat]);
            if (arg_flat[static_cast<std::size_t>(e)] < 0 ||
                mod > envelope[static_cast<std::size_t>(e)]) {
                envelope[static_cast<std::size_t>(e)] = mod;
                arg_flat[static_cast<std::size_t>(e)] = flat;
            }
        }
    }

    std::vector<int> peaks;
    for (int e = 0; e < elev_size; ++e) {
        const double v = envelope[static_cast<std::size_t>(e)];
        if (v <= 0.0) continue;
        if (e > 0 && envelope[static_cast<std::size_t>(e - 1)] > v) continue;
        if (e + 1 < elev_size && envelope[static_cast<std::size_t>(e + 1)] > v) continue;
        peaks.push_back(e);
    }
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) {
        const double va = envelope[static_cast<std::size_t>(a)];
        const double vb = envelope[static_cast<std::size_t>(b)];
        if (va != vb) return va > vb;
        return a < b;
    });

    std::vector<int> kept;
    for (int e : peaks) {
        if (static_cast<int>(kept.size()) >= k_max) break;
        bool separated = true;
        for (int other : kept)
            if (std::abs(e - other) < min_separation) {
                separated = false;
                break;
            }
        if (separated) kept.push_back(e);
    }
    std::sort(kept.begin(), kept.end());

    std::vector<ScattererSpec> result;
    for (int e : kept) {
        const int flat = arg_flat[static_cast<std::size_t>(e)];
        const auto point = grid.point_at(flat);
        const Complex value = cleaned.entries[flat];
        ScattererSpec spec;
        spec.elevation = point[0];
        spec.motion_coeffs.assign(point.begin() + 1, point.end());
        spec.amplitude = std::abs(value);
        spec.phase = std::arg(value);
        result.push_back(std::move(spec));
    }
    return result;
}

double effective_detection_rate(const std::vector<std::vector<ScattererSpec>>& detections,
                                const std::vector<std::vector<ScattererSpec>>& truths,
                                const DetectionTolerance& tol, double rho_s) {
    if (!(tol.fraction_of_rayleigh > 0.0))
        throw ConfigError("effective_detection_rate: tolerance must be > 0");
    if (detections.size() != truths.size())
        throw ConfigError("effective_detection_rate: per-trial lists not aligned");
    if (detections.empty()) return 0.0;

    const double max_error = tol.fraction_of_rayleigh * rho_s;
    int effective = 0;
    for (std::size_t t = 0; t < detections.size(); ++t) {
        const auto& det = detections[t];
        const auto& truth = truths[t];
        if (det.size() != truth.size()) continue;

        // Greedy nearest-first one-to-one matching by elevation.
        std::vector<char> det_used(det.size(), 0), truth_used(truth.size(), 0);
        bool ok = true;
        for (std::size_t round = 0; round < det.size(); ++round) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t bi = 0, bj = 0;
            for (std::size_t i = 0; i < det.size(); ++i) {
                if (det_used[i]) continue;
                for (std::size_t j = 0; j < truth.size(); ++j) {
                    if (truth_used[j]) continue;
                    const double err = std::abs(det[i].elevation - truth[j].elevation);
                    if (err < best) {
                        best = err;
                        bi = i;
                        bj = j;
                    }
                }
            }
            if (best > max_error) {
                ok = false;
                break;
            }
            det_used[bi] = 1;
            truth_used[bj] = 1;
        }
        if (ok) ++effective;
    }
    return static_cast<double>(effective) / static_cast<double>(detections.size());
}

std::vector<CurvePoint> run_benchmark(const std::vector<TrialConfig>& sweep,
                                      const InversionSetup& setup,
                                      const Hyperparameters& hp,
                                      const BenchmarkOptions& options) {
    PlanCache cache;
    const SolverPlan plan = make_plan_for(setup, hp, &cache);
    const ParameterGrid& grid = setup.R_synth.grid;
    const double rho_s = setup.rayleigh_m;

    std::vector<CurvePoint> curve;
    curve.reserve(sweep.size());

    for (const TrialConfig& cfg : sweep) {
        cfg.validate();
        std::vector<char> effective(static_cast<std::size_t>(cfg.trials), 0);

        parallel_for(cfg.trials, options.threads, [&](int t) {
            try {
                Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
                SimulatedTrial trial = simulate_trial(cfg, setup.R_synth, setup.geo, rng);
                const std::uint64_t solver_seed = rng.next_u64();

                ReflectivityProfile estimate =
                    invert_measurement(setup, plan, trial.measurement.entries, solver_seed);
                ReflectivityProfile cleaned =
                    cleanup_profile(estimate, options.cleanup_kappa);
                const auto detected = model_order_selection(
                    cleaned, grid, options.k_max, options.min_separation);

                const double rate = effective_detection_rate(
                    {detected}, {trial.truth_scatterers}, options.tolerance, rho_s);
                effective[static_cast<std::size_t>(t)] = rate >= 1.0 ? 1 : 0;
            } catch (const std::exception& e) {
                std::cerr << "trial " << t << " failed: " << e.what() << "\n";
            }
        });

        CurvePoint point;
        point.normalized_distance = cfg.normalized_distance;
        point.snr_db = cfg.snr_db;
        point.amplitude_ratio = cfg.amplitude_ratio;
        point.trials = cfg.trials;
        point.effective_detections =
            static_cast<int>(std::count(effective.begin(), effective.end(), 1));
        point.rate = static_cast<double>(point.effective_detections) /
                     static_cast<double>(cfg.trials);
        curve.push_back(point);
    }
    return curve;
}

}  // namespace tomo
