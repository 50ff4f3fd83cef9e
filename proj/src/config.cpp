#include "tomo/config.hpp"

#include "tomo/io.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace tomo {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double to_double(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError(where + ": expected a number, got '" + v + "'");
}

int to_int(const std::string& v, const std::string& where) {
    const double x = to_double(v, where);
    if (x != std::floor(x))
        throw ConfigError(where + ": expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (trim(v.substr(pos)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError(where + ": expected a non-negative integer, got '" + v + "'");
}

bool to_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(where + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> to_double_list(const std::string& v, const std::string& where) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(to_double(item, where));
    return out;
}

void resize_motion(RunConfig& cfg, std::size_t index) {
    if (cfg.motion_min.size() <= index) cfg.motion_min.resize(index + 1, 0.0);
    if (cfg.motion_max.size() <= index) cfg.motion_max.resize(index + 1, 0.0);
    if (cfg.motion_points.size() <= index) cfg.motion_points.resize(index + 1, 0);
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += v[i];
    }
    return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"geometry_csv", [](RunConfig& c, const std::string& v, const std::string&) { c.geometry_csv = v; }},
        {"baselines_n", [](RunConfig& c, const std::string& v, const std::string& w) { c.baselines_n = to_int(v, w); }},
        {"baseline_min_m", [](RunConfig& c, const std::string& v, const std::string& w) { c.baseline_min_m = to_double(v, w); }},
        {"baseline_max_m", [](RunConfig& c, const std::string& v, const std::string& w) { c.baseline_max_m = to_double(v, w); }},
        {"wavelength_m", [](RunConfig& c, const std::string& v, const std::string& w) { c.wavelength_m = to_double(v, w); }},
        {"slant_range_m", [](RunConfig& c, const std::string& v, const std::string& w) { c.slant_range_m = to_double(v, w); }},
        {"elevation_min_m", [](RunConfig& c, const std::string& v, const std::string& w) { c.elevation_min_m = to_double(v, w); }},
        {"elevation_max_m", [](RunConfig& c, const std::string& v, const std::string& w) { c.elevation_max_m = to_double(v, w); }},
        {"elevation_points", [](RunConfig& c, const std::string& v, const std::string& w) { c.elevation_points = to_int(v, w); }},
        {"motion_basis", [](RunConfig& c, const std::string& v, const std::string&) { c.motion_basis = split_list(v); }},
        {"engine", [](RunConfig& c, const std::string& v, const std::string&) { c.engine = v; }},
        {"num_layers", [](RunConfig& c, const std::string& v, const std::string& w) { c.num_layers = to_int(v, w); }},
        {"c1", [](RunConfig& c, const std::string& v, const std::string& w) { c.c1 = to_double(v, w); }},
        {"c2", [](RunConfig& c, const std::string& v, const std::string& w) { c.c2 = to_double(v, w); }},
        {"c3", [](RunConfig& c, const std::string& v, const std::string& w) { c.c3 = to_double(v, w); }},
        {"support_selection", [](RunConfig& c, const std::string& v, const std::string& w) { c.support_selection = to_bool(v, w); }},
        {"schedule_mode", [](RunConfig& c, const std::string& v, const std::string&) { c.schedule_mode = v; }},
        {"residual_mode", [](RunConfig& c, const std::string& v, const std::string&) { c.residual_mode = v; }},
        {"block_norm", [](RunConfig& c, const std::string& v, const std::string&) { c.block_norm = v; }},
        {"initial_blocksize", [](RunConfig& c, const std::string& v, const std::string& w) { c.initial_blocksize = to_int(v, w); }},
        {"zeta_init", [](RunConfig& c, const std::string& v, const std::string& w) { c.zeta_init = to_double(v, w); }},
        {"alpha_init", [](RunConfig& c, const std::string& v, const std::string& w) { c.alpha_init = to_double(v, w); }},
        {"shrink_factor", [](RunConfig& c, const std::string& v, const std::string& w) { c.shrink_factor = to_double(v, w); }},
        {"f1_plateau_rtol", [](RunConfig& c, const std::string& v, const std::string& w) { c.f1_plateau_rtol = to_double(v, w); }},
        {"f1_f2_match_rtol", [](RunConfig& c, const std::string& v, const std::string& w) { c.f1_f2_match_rtol = to_double(v, w); }},
        {"max_outer_iters", [](RunConfig& c, const std::string& v, const std::string& w) { c.max_outer_iters = to_int(v, w); }},
        {"cleanup_kappa", [](RunConfig& c, const std::string& v, const std::string& w) { c.cleanup_kappa = to_double(v, w); }},
        {"k_max", [](RunConfig& c, const std::string& v, const std::string& w) { c.k_max = to_int(v, w); }},
        {"min_separation", [](RunConfig& c, const std::string& v, const std::string& w) { c.min_separation = to_int(v, w); }},
        {"detection_tolerance", [](RunConfig& c, const std::string& v, const std::string& w) { c.detection_tolerance = to_double(v, w); }},
        {"num_scatterers", [](RunConfig& c, const std::string& v, const std::string& w) { c.num_scatterers = to_int(v, w); }},
        {"normalized_distance", [](RunConfig& c, const std::string& v, const std::string& w) { c.normalized_distance = to_double(v, w); }},
        {"snr_db", [](RunConfig& c, const std::string& v, const std::string& w) {
             c.snr_db = v == "inf" ? std::numeric_limits<double>::infinity() : to_double(v, w); }},
        {"amplitude_ratio", [](RunConfig& c, const std::string& v, const std::string& w) { c.amplitude_ratio = to_double(v, w); }},
        {"phase_difference", [](RunConfig& c, const std::string& v, const std::string& w) { c.phase_difference = to_double(v, w); }},
        {"on_grid", [](RunConfig& c, const std::string& v, const std::string& w) { c.on_grid = to_bool(v, w); }},
        {"trials", [](RunConfig& c, const std::string& v, const std::string& w) { c.trials = to_int(v, w); }},
        {"distances", [](RunConfig& c, const std::string& v, const std::string& w) { c.distances = to_double_list(v, w); }},
        {"c1_grid", [](RunConfig& c, const std::string& v, const std::string& w) { c.c1_grid = to_double_list(v, w); }},
        {"c2_grid", [](RunConfig& c, const std::string& v, const std::string& w) { c.c2_grid = to_double_list(v, w); }},
        {"c3_grid", [](RunConfig& c, const std::string& v, const std::string& w) { c.c3_grid = to_double_list(v, w); }},
        {"refine_levels", [](RunConfig& c, const std::string& v, const std::string& w) { c.refine_levels = to_int(v, w); }},
        {"tuning_samples", [](RunConfig& c, const std::string& v, const std::string& w) { c.tuning_samples = to_int(v, w); }},
        {"seed", [](RunConfig& c, const std::string& v, const std::string& w) { c.seed = to_u64(v, w); }},
        {"threads", [](RunConfig& c, const std::string& v, const std::string& w) { c.threads = to_int(v, w); }},
        {"verbose", [](RunConfig& c, const std::string& v, const std::string& w) { c.verbose = to_bool(v, w); }},
    };

    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(line_no);
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        const auto it = setters.find(key);
        if (it != setters.end()) {
            it->second(cfg, value, where + " (" + key + ")");
            continue;
        }
        // motionN_{min,max,points} for the N-th basis term (1-based).
        if (key.rfind("motion", 0) == 0) {
            const std::size_t us = key.find('_');
            if (us != std::string::npos && us > 6) {
                const std::string idx_str = key.substr(6, us - 6);
                const std::string field = key.substr(us + 1);
                bool numeric = !idx_str.empty() &&
                               std::all_of(idx_str.begin(), idx_str.end(),
                                           [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
                if (numeric && (field == "min" || field == "max" || field == "points")) {
                    const std::size_t index = static_cast<std::size_t>(std::stoi(idx_str)) - 1;
                    if (idx_str == "0" || index > 7)
                        throw ConfigError(where + ": motion term index out of range");
                    resize_motion(cfg, index);
                    if (field == "min") cfg.motion_min[index] = to_double(value, where);
                    else if (field == "max") cfg.motion_max[index] = to_double(value, where);
                    else cfg.motion_points[index] = to_int(value, where);
                    continue;
                }
            }
        }
        throw ConfigError(where + ": unknown key '" + key + "'");
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return parse_run_config(read_text_file(path), path);
}

AcquisitionGeometry config_geometry(const RunConfig& cfg) {
    AcquisitionGeometry geo;
    if (!cfg.geometry_csv.empty()) {
        const GeometryTable table = read_geometry_csv(cfg.geometry_csv);
        geo.baselines = table.baselines;
        geo.times = table.times;
        geo.wavelength = cfg.wavelength_m;
        geo.slant_range = cfg.slant_range_m;
        geo.validate();
        return geo;
    }
    return make_regular_geometry(cfg.baselines_n, cfg.baseline_min_m, cfg.baseline_max_m,
                                 cfg.wavelength_m, cfg.slant_range_m);
}

MotionBasis config_motion_basis(const RunConfig& cfg) {
    MotionBasis basis;
    for (const std::string& spec : cfg.motion_basis) {
        if (spec == "linear") {
            basis.terms.emplace_back(LinearMotion{});
        } else if (spec.rfind("sin", 0) == 0) {
            SinusoidalMotion term;
            const auto parts = split_list([&] {
                std::string s = spec.substr(3);
                std::replace(s.begin(), s.end(), ':', ',');
                return s;
            }());
            if (parts.size() > 2)
                throw ConfigError("motion_basis: bad sinusoidal spec '" + spec + "'");
            if (!parts.empty()) term.period_years = to_double(parts[0], "motion_basis");
            if (parts.size() > 1) term.phase_offset_years = to_double(parts[1], "motion_basis");
            basis.terms.emplace_back(term);
        } else {
            throw ConfigError("motion_basis: unknown term '" + spec +
                              "' (expected 'linear' or 'sin[:period[:offset]]')");
        }
    }
    return basis;
}

ParameterGrid config_grid(const RunConfig& cfg) {
    ParameterGrid grid;
    if (cfg.elevation_points < 1)
        throw ConfigError("config: elevation_points must be >= 1");
    grid.elevation_axis = linspace(cfg.elevation_min_m, cfg.elevation_max_m,
                                   cfg.elevation_points);
    const std::size_t terms = cfg.motion_basis.size();
    if (cfg.motion_min.size() > terms || cfg.motion_max.size() > terms ||
        cfg.motion_points.size() > terms)
        throw ConfigError("config: motionN_* keys given for more terms than motion_basis has");
    for (std::size_t m = 0; m < terms; ++m) {
        if (m >= cfg.motion_points.size() || cfg.motion_points[m] < 1)
            throw ConfigError("config: motion" + std::to_string(m + 1) +
                              "_points must be set and >= 1");
        grid.motion_axes.push_back(
            linspace(cfg.motion_min[m], cfg.motion_max[m], cfg.motion_points[m]));
    }
    grid.validate();
    return grid;
}

Hyperparameters config_hyperparameters(const RunConfig& cfg) {
    Hyperparameters hp;
    hp.c1 = cfg.c1;
    hp.c2 = cfg.c2;
    hp.c3 = cfg.c3;
    hp.num_layers = cfg.num_layers;
    hp.support_selection = cfg.support_selection;
    hp.validate();
    return hp;
}

SolverOptions config_solver_options(const RunConfig& cfg) {
    SolverOptions opt;
    if (cfg.engine == "abt") opt.engine = Engine::abt;
    else if (cfg.engine == "baseline") opt.engine = Engine::baseline;
    else throw ConfigError("config: engine must be 'abt' or 'baseline', got '" + cfg.engine + "'");

    if (cfg.schedule_mode == "weighted_random") opt.schedule_mode = ScheduleMode::weighted_random;
    else if (cfg.schedule_mode == "sweep") opt.schedule_mode = ScheduleMode::sweep;
    else throw ConfigError("config: schedule_mode must be 'weighted_random' or 'sweep'");

    if (cfg.residual_mode == "full") opt.residual_mode = ResidualMode::full;
    else if (cfg.residual_mode == "blockwise") opt.residual_mode = ResidualMode::blockwise;
    else throw ConfigError("config: residual_mode must be 'full' or 'blockwise'");

    if (cfg.block_norm == "spectral") opt.block_norm = BlockNorm::spectral;
    else if (cfg.block_norm == "frobenius") opt.block_norm = BlockNorm::frobenius;
    else throw ConfigError("config: block_norm must be 'spectral' or 'frobenius'");

    opt.initial_blocksize = cfg.initial_blocksize;
    opt.rng_seed = cfg.seed;
    return opt;
}

WeightOptConfig config_weight_opt(const RunConfig& cfg) {
    WeightOptConfig w;
    w.zeta_init = cfg.zeta_init;
    w.alpha_init = cfg.alpha_init;
    w.shrink_factor = cfg.shrink_factor;
    w.f1_plateau_rtol = cfg.f1_plateau_rtol;
    w.f1_f2_match_rtol = cfg.f1_f2_match_rtol;
    w.max_outer_iters = cfg.max_outer_iters;
    w.validate();
    return w;
}

TrialConfig config_trial(const RunConfig& cfg) {
    TrialConfig trial;
    trial.num_scatterers = cfg.num_scatterers;
    trial.normalized_distance = cfg.normalized_distance;
    trial.amplitude_ratio = cfg.amplitude_ratio;
    trial.phase_difference = cfg.phase_difference;
    trial.snr_db = cfg.snr_db;
    trial.trials = cfg.trials;
    trial.seed = cfg.seed;
    trial.on_grid = cfg.on_grid;
    trial.validate();
    return trial;
}

TuningConfig config_tuning(const RunConfig& cfg) {
    TuningConfig tuning = default_tuning_config();
    if (!cfg.c1_grid.empty()) tuning.c1_grid = cfg.c1_grid;
    if (!cfg.c2_grid.empty()) tuning.c2_grid = cfg.c2_grid;
    if (!cfg.c3_grid.empty()) tuning.c3_grid = cfg.c3_grid;
    tuning.refine_levels = cfg.refine_levels;
    tuning.samples = cfg.tuning_samples;
    tuning.snr_db = cfg.snr_db;
    tuning.scatterer_config = config_trial(cfg);
    tuning.seed = cfg.seed;
    tuning.num_layers = cfg.num_layers;
    tuning.support_selection = cfg.support_selection;
    tuning.validate();
    return tuning;
}

BenchmarkOptions config_benchmark_options(const RunConfig& cfg) {
    BenchmarkOptions opt;
    opt.cleanup_kappa = cfg.cleanup_kappa;
    opt.k_max = cfg.k_max;
    opt.min_separation = cfg.min_separation;
    opt.tolerance.fraction_of_rayleigh = cfg.detection_tolerance;
    opt.threads = cfg.threads;
    if (opt.cleanup_kappa < 0.0 || opt.cleanup_kappa >= 1.0)
        throw ConfigError("config: cleanup_kappa must be in [0,1)");
    if (opt.k_max < 1) throw ConfigError("config: k_max must be >= 1");
    if (opt.min_separation < 1) throw ConfigError("config: min_separation must be >= 1");
    if (!(opt.tolerance.fraction_of_rayleigh > 0.0))
        throw ConfigError("config: detection_tolerance must be > 0");
    return opt;
}

void validate_run_config(const RunConfig& cfg) {
    const AcquisitionGeometry geo = config_geometry(cfg);
    const MotionBasis basis = config_motion_basis(cfg);
    basis.validate(geo);
    const ParameterGrid grid = config_grid(cfg);
    if (grid.num_motion_axes() != basis.num_terms())
        throw ConfigError("config: motion axes and basis terms disagree");
    config_hyperparameters(cfg);
    config_solver_options(cfg);
    config_weight_opt(cfg);
    config_trial(cfg);
    config_benchmark_options(cfg);
    for (double d : cfg.distances)
        if (!(d > 0.0)) throw ConfigError("config: distances must all be > 0");
    if (cfg.initial_blocksize < 0)
        throw ConfigError("config: initial_blocksize must be >= 0");
}

std::string dump_run_config(const RunConfig& cfg) {
    std::string out;
    const auto add = [&out](const std::string& key, const std::string& value) {
        out += key + " = " + value + "\n";
    };
    if (!cfg.geometry_csv.empty()) add("geometry_csv", cfg.geometry_csv);
    add("baselines_n", std::to_string(cfg.baselines_n));
    add("baseline_min_m", format_double(cfg.baseline_min_m));
    add("baseline_max_m", format_double(cfg.baseline_max_m));
    add("wavelength_m", format_double(cfg.wavelength_m));
    add("slant_range_m", format_double(cfg.slant_range_m));
    add("elevation_min_m", format_double(cfg.elevation_min_m));
    add("elevation_max_m", format_double(cfg.elevation_max_m));
    add("elevation_points", std::to_string(cfg.elevation_points));
    if (!cfg.motion_basis.empty()) {
        add("motion_basis", join(cfg.motion_basis));
        for (std::size_t m = 0; m < cfg.motion_basis.size(); ++m) {
            const std::string prefix = "motion" + std::to_string(m + 1);
            add(prefix + "_min", format_double(cfg.motion_min[m]));
            add(prefix + "_max", format_double(cfg.motion_max[m]));
            add(prefix + "_points", std::to_string(cfg.motion_points[m]));
        }
    }
    add("engine", cfg.engine);
    add("num_layers", std::to_string(cfg.num_layers));
    add("c1", format_double(cfg.c1));
    add("c2", format_double(cfg.c2));
    add("c3", format_double(cfg.c3));
    add("support_selection", cfg.support_selection ? "true" : "false");
    add("schedule_mode", cfg.schedule_mode);
    add("residual_mode", cfg.residual_mode);
    add("block_norm", cfg.block_norm);
    add("initial_blocksize", std::to_string(cfg.initial_blocksize));
    add("zeta_init", format_double(cfg.zeta_init));
    add("alpha_init", format_double(cfg.alpha_init));
    add("shrink_factor", format_double(cfg.shrink_factor));
    add("f1_plateau_rtol", format_double(cfg.f1_plateau_rtol));
    add("f1_f2_match_rtol", format_double(cfg.f1_f2_match_rtol));
    add("max_outer_iters", std::to_string(cfg.max_outer_iters));
    add("cleanup_kappa", format_double(cfg.cleanup_kappa));
    add("k_max", std::to_string(cfg.k_max));
    add("min_separation", std::to_string(cfg.min_separation));
    add("detection_tolerance", format_double(cfg.detection_tolerance));
    add("num_scatterers", std::to_string(cfg.num_scatterers));
    add("normalized_distance", format_double(cfg.normalized_distance));
    add("snr_db", std::isinf(cfg.snr_db) ? "inf" : format_double(cfg.snr_db));
    add("amplitude_ratio", format_double(cfg.amplitude_ratio));
    add("phase_difference", format_double(cfg.phase_difference));
    add("on_grid", cfg.on_grid ? "true" : "false");
    add("trials", std::to_string(cfg.trials));
    add("distances", join(cfg.distances));
    if (!cfg.c1_grid.empty()) add("c1_grid", join(cfg.c1_grid));
    if (!cfg.c2_grid.empty()) add("c2_grid", join(cfg.c2_grid));
    if (!cfg.c3_grid.empty()) add("c3_grid", join(cfg.c3_grid));
    add("refine_levels", std::to_string(cfg.refine_levels));
    add("tuning_samples", std::to_string(cfg.tuning_samples));
    add("seed", std::to_string(cfg.seed));
    add("threads", std::to_string(cfg.threads));
    add("verbose", cfg.verbose ? "true" : "false");
    return out;
}

}  // namespace tomo
