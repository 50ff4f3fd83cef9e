#pragma once

#include "tomo/coherence.hpp"
#include "tomo/geometry.hpp"
#include "tomo/solver.hpp"
#include "tomo/steering.hpp"
#include "tomo/synthesis.hpp"

#include <cstdint>

namespace tomo {

/// Hyperparameter-independent state for inverting measurements from one
/// stack: the synthesis-scale dictionary, its column-normalized twin, and
/// the analytic weights. Immutable once built; shared read-only by workers.
struct InversionSetup {
    AcquisitionGeometry geo;
    MotionBasis basis;
    SteeringMatrix R_synth;     // unnormalized, the scale measurements live in
    RealVector synthesis_norms; // column l2 norms of R_synth
    SteeringMatrix R_inv;       // column-normalized dictionary for inversion
    AnalyticWeights weights;
    double rayleigh_m = 0.0;
    SolverOptions options;      // initial_blocksize resolved (auto rule applied)
};

/// Builds both steering matrices and runs the weight optimization.
/// options.initial_blocksize <= 0 selects the half-Rayleigh rule.
InversionSetup make_inversion_setup(const AcquisitionGeometry& geo,
                                    const MotionBasis& basis,
                                    const ParameterGrid& grid,
                                    const SolverOptions& options,
                                    const WeightOptConfig& weight_cfg);

/// Same, but with precomputed weights (e.g. loaded from disk). The shape
/// must match the dictionary.
InversionSetup make_inversion_setup(const AcquisitionGeometry& geo,
                                    const MotionBasis& basis,
                                    const ParameterGrid& grid,
                                    const SolverOptions& options,
                                    AnalyticWeights weights);

/// Plan for one hyperparameter candidate against the setup's dictionary.
SolverPlan make_plan_for(const InversionSetup& setup, const Hyperparameters& hp,
                         PlanCache* cache = nullptr);

/// Inverts one measurement and maps the estimate back to the synthesis
/// amplitude scale (divides by the synthesis column norms).
ReflectivityProfile invert_measurement(const InversionSetup& setup,
                                       const SolverPlan& plan,
                                       const ComplexVector& g,
                                       std::uint64_t solver_seed);

}  // namespace tomo
