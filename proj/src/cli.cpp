#include "tomo/cli.hpp"

#include "tomo/benchmark.hpp"
#include "tomo/config.hpp"
#include "tomo/digest.hpp"
#include "tomo/io.hpp"
#include "tomo/parallel.hpp"
#include "tomo/pipeline.hpp"
#include "tomo/tuning.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <optional>

namespace tomo::cli {

namespace {

using nlohmann::json;

std::string digest_text(const std::string& text) {
    Digest d;
    d.update(text.data(), text.size());
    return d.hex();
}

json hyperparameters_json(const Hyperparameters& hp) {
    return json{{"c1", hp.c1},
                {"c2", hp.c2},
                {"c3", hp.c3},
                {"num_layers", hp.num_layers},
                {"support_selection", hp.support_selection}};
}

json scatterers_json(const std::vector<ScattererSpec>& specs) {
    json arr = json::array();
    for (const auto& s : specs) {
        arr.push_back(json{{"elevation_m", s.elevation},
                           {"motion_coeffs", s.motion_coeffs},
                           {"amplitude", s.amplitude},
                           {"phase_rad", s.phase}});
    }
    return arr;
}

struct CommandContext {
    RunConfig cfg;
    std::string config_path;
    std::string config_text;
    bool verbose = false;

    json manifest_inputs = json::object();

    AcquisitionGeometry geometry() const { return config_geometry(cfg); }
    MotionBasis basis() const { return config_motion_basis(cfg); }
    ParameterGrid grid() const { return config_grid(cfg); }

    int threads() const { return resolve_threads(cfg.threads); }

    void note(const std::string& msg) const {
        if (verbose) std::cerr << msg << "\n";
    }
};

InversionSetup build_setup(CommandContext& ctx, const std::string& weights_path) {
    const auto geo = ctx.geometry();
    const auto basis = ctx.basis();
    const auto grid = ctx.grid();
    const auto options = config_solver_options(ctx.cfg);
    if (!weights_path.empty()) {
        AnalyticWeights w;
        w.entries = read_matrix(weights_path);
        w.source_matrix_digest = "";
        ctx.manifest_inputs["weights"] =
            json{{"path", weights_path}, {"digest", digest_hex(w.entries)}};
        ctx.note("loaded weights from " + weights_path);
        return make_inversion_setup(geo, basis, grid, options, std::move(w));
    }
    ctx.note("optimizing analytic weights");
    return make_inversion_setup(geo, basis, grid, options, config_weight_opt(ctx.cfg));
}

json base_manifest(const CommandContext& ctx, const std::string& command) {
    json m;
    m["command"] = command;
    m["seed"] = ctx.cfg.seed;
    m["threads"] = ctx.threads();
    m["config"] = json{{"path", ctx.config_path.empty() ? "<defaults>" : ctx.config_path},
                       {"text", dump_run_config(ctx.cfg)},
                       {"digest", digest_text(dump_run_config(ctx.cfg))}};
    m["inputs"] = ctx.manifest_inputs;
    return m;
}

int run_weights(CommandContext& ctx, const std::string& out_path,
                std::string sidecar_path) {
    const auto geo = ctx.geometry();
    const auto basis = ctx.basis();
    const auto grid = ctx.grid();
    const SteeringMatrix R = build_steering_matrix(geo, basis, grid, /*normalize=*/true);
    const WeightOptConfig wcfg = config_weight_opt(ctx.cfg);

    ctx.note("optimizing weights for a " + std::to_string(R.rows()) + "x" +
             std::to_string(R.cols()) + " dictionary");
    const AnalyticWeights weights = optimize_weights(R, wcfg);
    write_matrix(out_path, weights.entries);

    if (sidecar_path.empty()) sidecar_path = out_path + ".json";
    json sidecar;
    sidecar["source_matrix_digest"] = weights.source_matrix_digest;
    sidecar["weights_digest"] = digest_hex(weights.entries);
    sidecar["converged"] = weights.converged;
    sidecar["outer_iterations"] = weights.f1_history.size();
    sidecar["config"] = json{{"zeta_init", wcfg.zeta_init},
                             {"alpha_init", wcfg.alpha_init},
                             {"shrink_factor", wcfg.shrink_factor},
                             {"f1_plateau_rtol", wcfg.f1_plateau_rtol},
                             {"f1_f2_match_rtol", wcfg.f1_f2_match_rtol},
                             {"max_outer_iters", wcfg.max_outer_iters}};
    sidecar["f1_history"] = weights.f1_history;
    sidecar["f2_history"] = weights.f2_history;
    write_text_file(sidecar_path, sidecar.dump(2) + "\n");

    if (!weights.converged) {
        std::cerr << "weights: optimization did not converge within "
                  << wcfg.max_outer_iters << " outer iterations\n";
        return 2;
    }
    std::cout << "wrote " << out_path << " (" << weights.f1_history.size()
              << " outer iterations)\n";
    return 0;
}

int run_coherence(CommandContext& ctx, const std::string& weights_path) {
    const SteeringMatrix R =
        build_steering_matrix(ctx.geometry(), ctx.basis(), ctx.grid(), /*normalize=*/true);
    ComplexMatrix W;
    if (!weights_path.empty()) {
        W = read_matrix(weights_path);
        if (W.rows() != R.entries.rows() || W.cols() != R.entries.cols())
            throw ConfigError("coherence: weight matrix shape does not match the dictionary");
    } else {
        ctx.note("no --weights given, optimizing");
        W = optimize_weights(R, config_weight_opt(ctx.cfg)).entries;
    }
    const double mu_wr = mutual_coherence(W, R.entries);
    const double mu_rr = mutual_coherence(R.entries, R.entries);
    std::cout << "mu(W,R) = " << format_double(mu_wr) << "\n";
    std::cout << "mu(R,R) = " << format_double(mu_rr) << "\n";
    return 0;
}

int run_tune(CommandContext& ctx, const std::string& weights_path,
             const std::string& out_path) {
    const InversionSetup setup = build_setup(ctx, weights_path);
    const TuningConfig tuning = config_tuning(ctx.cfg);

    ctx.note("grid search over " +
             std::to_string(tuning.c1_grid.size() * tuning.c2_grid.size() *
                            tuning.c3_grid.size()) +
             " coarse candidates, T=" + std::to_string(tuning.samples));
    const GridSearchResult result = grid_search(setup, tuning, ctx.threads());

    json doc;
    doc["best"] = hyperparameters_json(result.best);
    doc["best_nmse"] = result.best_nmse;
    doc["level_best"] = result.level_best;
    doc["sample_digest"] = result.sample_digest;
    json trace = json::array();
    for (const auto& c : result.trace) {
        json entry = hyperparameters_json(c.hp);
        entry["nmse"] = c.nmse;
        entry["level"] = c.level;
        trace.push_back(entry);
    }
    doc["trace"] = trace;
    write_text_file(out_path, doc.dump(2) + "\n");
    std::cout << "best c1=" << result.best.c1 << " c2=" << result.best.c2
              << " c3=" << result.best.c3 << " nmse=" << result.best_nmse << "\n";
    return 0;
}

int run_invert(CommandContext& ctx, const std::string& weights_path,
               const std::string& input_path, const std::string& out_path,
               const std::string& scatterers_path) {
    const InversionSetup setup = build_setup(ctx, weights_path);

    ComplexVector g;
    if (input_path.size() >= 4 && input_path.substr(input_path.size() - 4) == ".csv")
        g = read_complex_vector_csv(input_path);
    else
        g = read_vector(input_path);
    if (g.size() != setup.R_synth.entries.rows())
        throw ConfigError("invert: measurement has " + std::to_string(g.size()) +
                          " entries but the stack has N=" +
                          std::to_string(setup.R_synth.entries.rows()));

    const SolverPlan plan = make_plan_for(setup, config_hyperparameters(ctx.cfg));
    const ReflectivityProfile estimate =
        invert_measurement(setup, plan, g, derive_seed(ctx.cfg.seed, 0));
    const auto opts = config_benchmark_options(ctx.cfg);
    const ReflectivityProfile cleaned = cleanup_profile(estimate, opts.cleanup_kappa);
    const auto detected = model_order_selection(cleaned, setup.R_synth.grid, opts.k_max,
                                                opts.min_separation);

    write_vector(out_path, cleaned.entries);
    if (!scatterers_path.empty()) {
        json doc;
        doc["scatterers"] = scatterers_json(detected);
        doc["rayleigh_m"] = setup.rayleigh_m;
        write_text_file(scatterers_path, doc.dump(2) + "\n");
    }
    std::cout << "detected " << detected.size() << " scatterer(s)\n";
    for (const auto& s : detected) {
        std::cout << "  elevation " << s.elevation << " m, amplitude " << s.amplitude;
        if (!s.motion_coeffs.empty()) {
            std::cout << ", motion (";
            for (std::size_t m = 0; m < s.motion_coeffs.size(); ++m)
                std::cout << (m ? ", " : "") << s.motion_coeffs[m];
            std::cout << ")";
        }
        std::cout << "\n";
    }
    return 0;
}

int run_simulate(CommandContext& ctx, const std::string& truth_path,
                 const std::string& meas_path, int count) {
    const auto geo = ctx.geometry();
    const auto basis = ctx.basis();
    const auto grid = ctx.grid();
    const SteeringMatrix R_synth = build_steering_matrix(geo, basis, grid, false);
    TrialConfig trial_cfg = config_trial(ctx.cfg);
    if (count > 0) trial_cfg.trials = count;

    ComplexMatrix truths(grid.total_size(), trial_cfg.trials);
    ComplexMatrix measurements(geo.num_acquisitions(), trial_cfg.trials);
    for (int t = 0; t < trial_cfg.trials; ++t) {
        Rng rng(derive_seed(trial_cfg.seed, static_cast<std::uint64_t>(t)));
        const SimulatedTrial trial = simulate_trial(trial_cfg, R_synth, geo, rng);
        truths.col(t) = trial.truth.entries;
        measurements.col(t) = trial.measurement.entries;
    }
    write_matrix(truth_path, truths);
    write_matrix(meas_path, measurements);
    std::cout << "wrote " << trial_cfg.trials << " (truth, measurement) pairs\n";
    return 0;
}

int run_benchmark_cmd(CommandContext& ctx, const std::string& weights_path,
                      const std::string& out_path, const std::string& manifest_path) {
    const auto start = std::chrono::steady_clock::now();
    const InversionSetup setup = build_setup(ctx, weights_path);
    const Hyperparameters hp = config_hyperparameters(ctx.cfg);
    BenchmarkOptions options = config_benchmark_options(ctx.cfg);
    options.threads = ctx.threads();

    std::vector<TrialConfig> sweep;
    const TrialConfig base = config_trial(ctx.cfg);
    for (double d : ctx.cfg.distances) {
        TrialConfig point = base;
        point.normalized_distance = d;
        sweep.push_back(point);
    }

    ctx.note("running " + std::to_string(sweep.size()) + " sweep points x " +
             std::to_string(base.trials) + " trials");
    const std::vector<CurvePoint> curve = run_benchmark(sweep, setup, hp, options);

    std::string csv = "normalized_distance,snr_db,amplitude_ratio,trials,"
                      "effective_detections,rate\n";
    for (const auto& p : curve) {
        csv += format_double(p.normalized_distance) + "," + format_double(p.snr_db) + "," +
               format_double(p.amplitude_ratio) + "," + std::to_string(p.trials) + "," +
               std::to_string(p.effective_detections) + "," + format_double(p.rate) + "\n";
    }
    write_text_file(out_path, csv);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!manifest_path.empty()) {
        json manifest = base_manifest(ctx, "benchmark");
        manifest["weight_digest"] = digest_hex(setup.weights.entries);
        manifest["rayleigh_m"] = setup.rayleigh_m;
        manifest["initial_blocksize"] = setup.options.initial_blocksize;
        manifest["hyperparameters"] = hyperparameters_json(hp);
        manifest["elapsed_seconds"] = elapsed;
        json points = json::array();
        for (const auto& p : curve)
            points.push_back(json{{"normalized_distance", p.normalized_distance},
                                  {"snr_db", p.snr_db},
                                  {"amplitude_ratio", p.amplitude_ratio},
                                  {"trials", p.trials},
                                  {"effective_detections", p.effective_detections},
                                  {"rate", p.rate}});
        manifest["points"] = points;
        write_text_file(manifest_path, manifest.dump(2) + "\n");
    }
    std::cout << "wrote " << out_path << " (" << curve.size() << " points, "
              << format_double(elapsed) << " s)\n";
    return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Unfolded sparse-recovery pipeline for (differential) SAR "
                 "tomographic inversion"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> threads_override;
    bool verbose = false;
    app.add_option("--config", config_path, "Run configuration file (key = value lines)");
    app.add_option("--seed", seed_override, "Master seed override");
    app.add_option("--threads", threads_override,
                   "Worker threads (default: TOMO_UNFOLD_THREADS, then hardware)");
    app.add_flag("--verbose", verbose, "Progress chatter on stderr");

    std::optional<std::string> engine_override, schedule_override, residual_override;
    std::optional<double> c1_override, c2_override, c3_override, snr_override,
        ratio_override;
    std::optional<int> layers_override, trials_override;
    std::optional<std::vector<double>> distances_override;
    app.add_option("--engine", engine_override, "abt | baseline");
    app.add_option("--schedule-mode", schedule_override, "weighted_random | sweep");
    app.add_option("--residual-mode", residual_override, "full | blockwise");
    app.add_option("--c1", c1_override, "Threshold scale hyperparameter");
    app.add_option("--c2", c2_override, "Momentum scale hyperparameter");
    app.add_option("--c3", c3_override, "Blocksize decay / support growth hyperparameter");
    app.add_option("--layers", layers_override, "Number of unfolded layers");
    app.add_option("--snr-db", snr_override, "Scenario SNR in dB");
    app.add_option("--trials", trials_override, "Monte Carlo trials per point");
    app.add_option("--amplitude-ratio", ratio_override, "Scenario amplitude ratio");
    app.add_option("--distances", distances_override,
                   "Normalized elevation distances for the sweep")
        ->delimiter(',');

    auto* weights_cmd = app.add_subcommand("weights", "Optimize analytic weights and save them");
    std::string weights_out, weights_sidecar;
    weights_cmd->add_option("--out", weights_out, "Output weight container (.cmx)")->required();
    weights_cmd->add_option("--sidecar", weights_sidecar,
                            "Sidecar JSON path (default: <out>.json)");

    auto* coherence_cmd =
        app.add_subcommand("coherence", "Report mu(W,R) and mu(R,R) for the configured stack");
    std::string coherence_weights;
    coherence_cmd->add_option("--weights", coherence_weights, "Precomputed weight container");

    auto* tune_cmd = app.add_subcommand("tune", "Coarse-to-fine hyperparameter grid search");
    std::string tune_weights, tune_out;
    tune_cmd->add_option("--weights", tune_weights, "Precomputed weight container");
    tune_cmd->add_option("--out", tune_out, "Output JSON with best hyperparameters and trace")
        ->required();

    auto* invert_cmd = app.add_subcommand("invert", "Invert one measurement vector");
    std::string invert_weights, invert_input, invert_out, invert_scatterers;
    invert_cmd->add_option("--weights", invert_weights, "Precomputed weight container");
    invert_cmd->add_option("--input", invert_input, "Measurement (.cmx column or .csv re,im)")
        ->required();
    invert_cmd->add_option("--out", invert_out, "Cleaned reflectivity output (.cmx)")
        ->required();
    invert_cmd->add_option("--scatterers", invert_scatterers, "Detected scatterer JSON");

    auto* simulate_cmd =
        app.add_subcommand("simulate", "Emit simulated (truth, measurement) pairs");
    std::string sim_truth, sim_meas;
    int sim_count = 0;
    simulate_cmd->add_option("--out-truth", sim_truth, "Truth matrix container (L x T)")
        ->required();
    simulate_cmd->add_option("--out-meas", sim_meas, "Measurement matrix container (N x T)")
        ->required();
    simulate_cmd->add_option("--count", sim_count, "Number of pairs (default: trials)");

    auto* benchmark_cmd =
        app.add_subcommand("benchmark", "Effective-detection-rate sweep over distances");
    std::string bench_weights, bench_out, bench_manifest;
    benchmark_cmd->add_option("--weights", bench_weights, "Precomputed weight container");
    benchmark_cmd->add_option("--out", bench_out, "Curve CSV output")->required();
    benchmark_cmd->add_option("--manifest", bench_manifest, "Run manifest JSON output");

    std::vector<std::string> raw = args;
    try {
        app.parse(raw.empty() ? std::vector<std::string>{}
                              : std::vector<std::string>(raw.rbegin(), raw.rend()));
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return 1;
    }

    try {
        CommandContext ctx;
        ctx.verbose = verbose;
        ctx.config_path = config_path;
        if (!config_path.empty()) {
            ctx.config_text = read_text_file(config_path);
            ctx.cfg = parse_run_config(ctx.config_text, config_path);
            ctx.manifest_inputs["config"] =
                json{{"path", config_path}, {"digest", digest_text(ctx.config_text)}};
        }
        if (seed_override) ctx.cfg.seed = *seed_override;
        if (threads_override) ctx.cfg.threads = *threads_override;
        if (verbose) ctx.cfg.verbose = true;
        if (engine_override) ctx.cfg.engine = *engine_override;
        if (schedule_override) ctx.cfg.schedule_mode = *schedule_override;
        if (residual_override) ctx.cfg.residual_mode = *residual_override;
        if (c1_override) ctx.cfg.c1 = *c1_override;
        if (c2_override) ctx.cfg.c2 = *c2_override;
        if (c3_override) ctx.cfg.c3 = *c3_override;
        if (layers_override) ctx.cfg.num_layers = *layers_override;
        if (snr_override) ctx.cfg.snr_db = *snr_override;
        if (trials_override) ctx.cfg.trials = *trials_override;
        if (ratio_override) ctx.cfg.amplitude_ratio = *ratio_override;
        if (distances_override) ctx.cfg.distances = *distances_override;

        validate_run_config(ctx.cfg);
        if (!ctx.cfg.geometry_csv.empty())
            ctx.manifest_inputs["geometry_csv"] =
                json{{"path", ctx.cfg.geometry_csv},
                     {"digest", digest_text(read_text_file(ctx.cfg.geometry_csv))}};

        if (weights_cmd->parsed()) return run_weights(ctx, weights_out, weights_sidecar);
        if (coherence_cmd->parsed()) return run_coherence(ctx, coherence_weights);
        if (tune_cmd->parsed()) return run_tune(ctx, tune_weights, tune_out);
        if (invert_cmd->parsed())
            return run_invert(ctx, invert_weights, invert_input, invert_out,
                              invert_scatterers);
        if (simulate_cmd->parsed()) return run_simulate(ctx, sim_truth, sim_meas, sim_count);
        if (benchmark_cmd->parsed())
            return run_benchmark_cmd(ctx, bench_weights, bench_out, bench_manifest);
        std::cerr << "error: no subcommand\n" << app.help();
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}

}  // namespace tomo::cli
