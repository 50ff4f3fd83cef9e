#include "tomo/pipeline.hpp"

namespace tomo {

namespace {

InversionSetup make_setup_base(const AcquisitionGeometry& geo, const MotionBasis& basis,
                               const ParameterGrid& grid, const SolverOptions& options) {
    InversionSetup setup;
    setup.geo = geo;
    setup.basis = basis;
    setup.R_synth = build_steering_matrix(geo, basis, grid, /*normalize=*/false);
    setup.synthesis_norms = column_norms(setup.R_synth.entries);
    setup.R_inv = normalize_columns(setup.R_synth);
    setup.rayleigh_m = rayleigh_resolution(geo);
    setup.options = options;
    if (setup.options.initial_blocksize <= 0)
        setup.options.initial_blocksize = initial_blocksize(grid, setup.rayleigh_m);
    return setup;
}

}  // namespace

InversionSetup make_inversion_setup(const AcquisitionGeometry& geo,
                                    const MotionBasis& basis,
                                    const ParameterGrid& grid,
                                    const SolverOptions& options,
                                    const WeightOptConfig& weight_cfg) {
    InversionSetup setup = make_setup_base(geo, basis, grid, options);
    setup.weights = optimize_weights(setup.R_inv, weight_cfg);
    return setup;
}

InversionSetup make_inversion_setup(const AcquisitionGeometry& geo,
                                    const MotionBasis& basis,
                                    const ParameterGrid& grid,
                                    const SolverOptions& options,
                                    AnalyticWeights weights) {
    InversionSetup setup = make_setup_base(geo, basis, grid, options);
    if (weights.entries.rows() != setup.R_inv.entries.rows() ||
        weights.entries.cols() != setup.R_inv.entries.cols())
        throw ConfigError("inversion setup: weight matrix shape does not match the dictionary");
    setup.weights = std::move(weights);
    return setup;
}

SolverPlan make_plan_for(const InversionSetup& setup, const Hyperparameters& hp,
                         PlanCache* cache) {
    return make_solver_plan(setup.R_inv.entries, setup.weights.entries, hp,
                            setup.options, cache);
}

ReflectivityProfile invert_measurement(const InversionSetup& setup,
                                       const SolverPlan& plan,
                                       const ComplexVector& g,
                                       std::uint64_t solver_seed) {
    ReflectivityProfile estimate = run_inference(g, plan, solver_seed);
    for (Eigen::Index l = 0; l < estimate.entries.size(); ++l)
        estimate.entries[l] /= setup.synthesis_norms[l];
    return estimate;
}

}  // namespace tomo
