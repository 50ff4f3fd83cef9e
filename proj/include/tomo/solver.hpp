#pragma once

#include "tomo/blocks.hpp"
#include "tomo/grid.hpp"
#include "tomo/rng.hpp"
#include "tomo/synthesis.hpp"
#include "tomo/types.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

namespace tomo {

/// The three scalars that fully parameterize the unfolded network, plus the
/// layer count. support_selection applies to the baseline path only; the
/// blockwise path always uses plain soft thresholding.
struct Hyperparameters {
    double c1 = 0.1;
    double c2 = 0.0;
    double c3 = 0.5;
    int num_layers = 15;
    bool support_selection = false;

    void validate() const;
};

enum class Engine { baseline, abt };

/// Residual used in the blockwise update direction: `full` keeps
/// r = g - R gamma maintained incrementally across block updates;
/// `blockwise` is the literal per-block residual g - R_i gamma_i.
enum class ResidualMode { full, blockwise };

/// One inversion in flight. gamma is the current iterate, gamma_prev the
/// previous layer's iterate (the momentum reference), residual the cached
/// g - R gamma.
struct SolverState {
    ComplexVector gamma;
    ComplexVector gamma_prev;
    ComplexVector residual;
    int layer_index = 0;
    int blocksize = 1;
    bool converged = false;
};

/// Immutable per-blocksize data shared by all inversions: the partition,
/// cached block pseudoinverses, and the block sampling schedule.
struct BlockLevel {
    BlockPartition partition;
    std::vector<ComplexMatrix> pinvs;  // R_i^+ per block
    BlockSchedule schedule;
};

struct SolverOptions {
    Engine engine = Engine::abt;
    ScheduleMode schedule_mode = ScheduleMode::weighted_random;
    ResidualMode residual_mode = ResidualMode::full;
    BlockNorm block_norm = BlockNorm::spectral;
    int initial_blocksize = 1;  // B_1 on the flattened vector
    std::uint64_t rng_seed = 0;
};

/// Reusable pieces that depend only on the dictionary, not on the
/// hyperparameters: the full pseudoinverse and block levels keyed by
/// blocksize. Lets a tuning loop share them across candidate plans.
struct PlanCache {
    std::shared_ptr<const ComplexMatrix> R_pinv;
    std::map<int, std::shared_ptr<const BlockLevel>> levels;
};

/// Everything shareable across concurrent inversions against one
/// dictionary: the normalized dictionary, weights, full pseudoinverse, and
/// the per-blocksize caches for every level the blocksize schedule visits.
struct SolverPlan {
    ComplexMatrix R;  // column-normalized dictionary
    ComplexMatrix W;  // analytic weights for R
    std::shared_ptr<const ComplexMatrix> R_pinv;
    Hyperparameters hp;
    SolverOptions options;
    std::map<int, std::shared_ptr<const BlockLevel>> levels;

    const BlockLevel& level(int blocksize) const;
};

/// Grid points of the elevation axis within half a Rayleigh cell, times the
/// product of the motion-axis lengths, so one block spans a contiguous
/// half-Rayleigh elevation interval across all motion hypotheses.
int initial_blocksize(const ParameterGrid& grid, double rayleigh_resolution_m);

/// The geometric blocksize schedule B_{k+1} = max(1, round(c3 B_k)).
std::vector<int> blocksize_schedule(int b1, double c3, int num_layers);

/// One baseline layer:
///   theta = c1 ||R^+ r||_1,  beta = c2 ||gamma||_0,
///   p = clamp(round(c3 min(ln(||R^+ g||_1 / ||R^+ r||_1), L)), 0, L),
///   gamma <- eta_theta^p(gamma + W^H r + beta (gamma - gamma_prev)).
/// A zero ||R^+ r||_1 marks the state converged and leaves it unchanged.
void hyperlista_layer(SolverState& state, const ComplexVector& g,
                      const ComplexMatrix& R, const ComplexMatrix& W,
                      const ComplexMatrix& R_pinv, const Hyperparameters& hp);

/// One blockwise layer: J_k Gauss-Seidel block updates (sweep order or J_k
/// i.i.d. draws from the schedule distribution), per-block thresholds
/// theta_i = c1 ||R_i^+ (R_i gamma_i - g)||_1 and momentum weights
/// beta_i = c2 ||gamma_i||_0, no support selection, then the blocksize
/// update. rng may be null in sweep mode only.
void hyperlista_abt_layer(SolverState& state, const ComplexVector& g,
                          const ComplexMatrix& R, const ComplexMatrix& W,
                          const BlockLevel& level, const Hyperparameters& hp,
                          double c3, ResidualMode residual_mode,
                          ScheduleMode schedule_mode, Rng* rng);

/// Builds the shared plan: normalizes nothing (R must already be
/// column-normalized), computes the full pseudoinverse and all block-level
/// caches the blocksize schedule can reach. A non-null cache is consulted
/// first and extended with anything newly computed; the caller must only
/// reuse a cache with the same R.
SolverPlan make_solver_plan(const ComplexMatrix& R, const ComplexMatrix& W,
                            const Hyperparameters& hp, const SolverOptions& options,
                            PlanCache* cache = nullptr);

/// Full inference: gamma^0 = R^H g, K layers of the selected engine.
/// The result is in the dictionary's (column-normalized) amplitude scale.
ReflectivityProfile run_inference(const ComplexVector& g, const SolverPlan& plan,
                                  std::uint64_t rng_seed);

/// Convenience overload that builds a throwaway plan.
ReflectivityProfile run_inference(const ComplexVector& g, const ComplexMatrix& R,
                                  const ComplexMatrix& W, const Hyperparameters& hp,
                                  const SolverOptions& options);

}  // namespace tomo
