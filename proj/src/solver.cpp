#include "tomo/solver.hpp"

#include "tomo/pinv.hpp"
#include "tomo/thresholding.hpp"

#include <cmath>

namespace tomo {

void Hyperparameters::validate() const {
    if (!(c1 > 0.0)) throw ConfigError("hyperparameters: c1 must be > 0");
    if (c2 < 0.0) throw ConfigError("hyperparameters: c2 must be >= 0");
    if (!(c3 > 0.0 && c3 < 1.0)) throw ConfigError("hyperparameters: c3 must be in (0,1)");
    if (num_layers < 1) throw ConfigError("hyperparameters: need at least one layer");
}

const BlockLevel& SolverPlan::level(int blocksize) const {
    const auto it = levels.find(blocksize);
    if (it == levels.end() || !it->second)
        throw NumericalError("solver plan: no cached block level for blocksize " +
                             std::to_string(blocksize));
    return *it->second;
}

int initial_blocksize(const ParameterGrid& grid, double rayleigh_resolution_m) {
    const auto& axis = grid.elevation_axis;
    const int axis_size = grid.elevation_size();
    int steps = 1;
    if (axis_size >= 2) {
        const double mean_step = (axis.back() - axis.front()) / static_cast<double>(axis_size - 1);
        const double half_cell = 0.5 * rayleigh_resolution_m;
        steps = static_cast<int>(round_half_up(half_cell / mean_step));
        steps = std::clamp(steps, 1, axis_size);
    }
    int blocksize = steps;
    for (const auto& motion_axis : grid.motion_axes)
        blocksize *= static_cast<int>(motion_axis.size());
    return blocksize;
}

std::vector<int> blocksize_schedule(int b1, double c3, int num_layers) {
    std::vector<int> sizes;
    sizes.reserve(static_cast<std::size_t>(num_layers));
    int b = std::max(1, b1);
    for (int k = 0; k < num_layers; ++k) {
        sizes.push_back(b);
        b = std::max(1, static_cast<int>(round_half_up(c3 * b)));
    }
    return sizes;
}

void hyperlista_layer(SolverState& state, const ComplexVector& g,
                      const ComplexMatrix& R, const ComplexMatrix& W,
                      const ComplexMatrix& R_pinv, const Hyperparameters& hp) {
    const Eigen::Index total = R.cols();

    ComplexVector residual = g;
    residual.noalias() -= R * state.gamma;

    const double res_l1 = l1_norm(R_pinv * residual);
    if (res_l1 == 0.0) {
        state.residual = residual;
        state.converged = true;
        return;
    }

    const double theta = hp.c1 * res_l1;
    const double beta =
        hp.c2 * l0_count(state.gamma, numeric_zero_tolerance(state.gamma));

    ComplexVector pre = state.gamma;
    pre.noalias() += W.adjoint() * residual;
    if (beta != 0.0) pre += beta * (state.gamma - state.gamma_prev);

    ComplexVector next;
    if (hp.support_selection) {
        const double g_l1 = l1_norm(R_pinv * g);
        const double raw = hp.c3 * std::min(std::log(g_l1 / res_l1),
                                            static_cast<double>(total));
        const int p = static_cast<int>(
            std::clamp<long long>(round_half_up(raw), 0, static_cast<long long>(total)));
        next = support_selection_threshold(pre, theta, p);
    } else {
        next = soft_threshold_vector(pre, theta);
    }

    state.gamma_prev = std::move(state.gamma);
    state.gamma = std::move(next);
    state.residual = g;
    state.residual.noalias() -= R * state.gamma;
    ++state.layer_index;
}

void hyperlista_abt_layer(SolverState& state, const ComplexVector& g,
                          const ComplexMatrix& R, const ComplexMatrix& W,
                          const BlockLevel& level, const Hyperparameters& hp,
                          double c3, ResidualMode residual_mode,
                          ScheduleMode schedule_mode, Rng* rng) {
    const int num_blocks = level.partition.num_blocks();
    if (static_cast<int>(level.pinvs.size()) != num_blocks)
        throw NumericalError("abt layer: block pseudoinverse cache incomplete (" +
                             std::to_string(level.pinvs.size()) + " of " +
                             std::to_string(num_blocks) + ")");
    if (schedule_mode == ScheduleMode::weighted_random && rng == nullptr)
        throw ConfigError("abt layer: weighted_random schedule requires an rng");

    // J_k block visits per layer.
    std::vector<int> visits(static_cast<std::size_t>(num_blocks));
    if (schedule_mode == ScheduleMode::sweep) {
        for (int i = 0; i < num_blocks; ++i) visits[static_cast<std::size_t>(i)] = i;
    } else {
        for (int i = 0; i < num_blocks; ++i)
            visits[static_cast<std::size_t>(i)] = rng->sample_discrete(level.schedule.probabilities);
    }

    // Momentum reference: the previous layer's iterate, frozen across all
    // block updates of this layer.
    const ComplexVector layer_entry_gamma = state.gamma;
    const ComplexVector& momentum_ref = state.gamma_prev;

    ComplexVector residual = state.residual;  // g - R gamma, maintained incrementally

    for (int idx : visits) {
        const auto [lo, hi] = level.partition.ranges[static_cast<std::size_t>(idx)];
        const int width = hi - lo;
        const auto R_block = R.middleCols(lo, width);
        const auto W_block = W.middleCols(lo, width);
        const ComplexMatrix& pinv_block = level.pinvs[static_cast<std::size_t>(idx)];

        const ComplexVector gamma_block = state.gamma.segment(lo, width);

        // Threshold from the literal per-block expression R_i^+ (R_i gamma_i - g).
        ComplexVector block_misfit = R_block * gamma_block - g;
        const double theta = hp.c1 * l1_norm(pinv_block * block_misfit);
        const double beta =
            hp.c2 * l0_count(gamma_block, numeric_zero_tolerance(state.gamma));

        ComplexVector pre(width);
        if (residual_mode == ResidualMode::full) {
            pre.noalias() = W_block.adjoint() * residual;
        } else {
            pre.noalias() = W_block.adjoint() * (-block_misfit);
        }
        pre += gamma_block;
        if (beta != 0.0)
            pre += beta * (gamma_block - momentum_ref.segment(lo, width));

        const ComplexVector updated = soft_threshold_vector(pre, theta);
        if (residual_mode == ResidualMode::full)
            residual.noalias() -= R_block * (updated - gamma_block);
        state.gamma.segment(lo, width) = updated;
    }

    state.gamma_prev = layer_entry_gamma;
    if (residual_mode == ResidualMode::full) {
        state.residual = std::move(residual);
    } else {
        state.residual = g;
        state.residual.noalias() -= R * state.gamma;
    }
    state.blocksize = std::max(1, static_cast<int>(round_half_up(c3 * state.blocksize)));
    ++state.layer_index;
}

SolverPlan make_solver_plan(const ComplexMatrix& R, const ComplexMatrix& W,
                            const Hyperparameters& hp, const SolverOptions& options,
                            PlanCache* cache) {
    hp.validate();
    if (R.rows() != W.rows() || R.cols() != W.cols())
        throw ConfigError("solver plan: R and W shapes differ");
    if (options.initial_blocksize < 1)
        throw ConfigError("solver plan: initial blocksize must be >= 1");

    SolverPlan plan;
    plan.R = R;
    plan.W = W;
    plan.hp = hp;
    plan.options = options;

    if (cache && cache->R_pinv) {
        plan.R_pinv = cache->R_pinv;
    } else {
        plan.R_pinv = std::make_shared<const ComplexMatrix>(pseudoinverse(R));
        if (cache) cache->R_pinv = plan.R_pinv;
    }

    if (options.engine == Engine::abt) {
        const int total = static_cast<int>(R.cols());
        const int b1 = std::min(options.initial_blocksize, total);
        for (int blocksize : blocksize_schedule(b1, hp.c3, hp.num_layers)) {
            if (plan.levels.count(blocksize)) continue;
            if (cache) {
                const auto it = cache->levels.find(blocksize);
                if (it != cache->levels.end()) {
                    plan.levels.emplace(blocksize, it->second);
                    continue;
                }
            }
            auto level = std::make_shared<BlockLevel>();
            level->partition = partition_blocks(total, blocksize);
            level->pinvs.reserve(static_cast<std::size_t>(level->partition.num_blocks()));
            level->schedule.mode = options.schedule_mode;
            for (const auto& range : level->partition.ranges) {
                level->pinvs.push_back(
                    pseudoinverse(R.middleCols(range.first, range.second - range.first)));
                level->schedule.weights.push_back(block_weight(R, range, options.block_norm));
            }
            level->schedule.probabilities = block_probabilities(level->schedule.weights);
            if (cache) cache->levels.emplace(blocksize, level);
            plan.levels.emplace(blocksize, std::move(level));
        }
    }
    return plan;
}

ReflectivityProfile run_inference(const ComplexVector& g, const SolverPlan& plan,
                                  std::uint64_t rng_seed) {
    if (g.size() != plan.R.rows())
        throw ConfigError("run_inference: measurement length mismatch");

    SolverState state;
    state.gamma.noalias() = plan.R.adjoint() * g;
    state.gamma_prev = state.gamma;
    state.residual = g;
    state.residual.noalias() -= plan.R * state.gamma;
    state.blocksize = std::min(std::max(1, plan.options.initial_blocksize),
                               static_cast<int>(plan.R.cols()));

    Rng rng(rng_seed);
    for (int k = 0; k < plan.hp.num_layers && !state.converged; ++k) {
        if (plan.options.engine == Engine::baseline) {
            hyperlista_layer(state, g, plan.R, plan.W, *plan.R_pinv, plan.hp);
        } else {
            hyperlista_abt_layer(state, g, plan.R, plan.W, plan.level(state.blocksize),
                                 plan.hp, plan.hp.c3, plan.options.residual_mode,
                                 plan.options.schedule_mode, &rng);
        }
    }

    ReflectivityProfile profile;
    profile.entries = std::move(state.gamma);
    return profile;
}

ReflectivityProfile run_inference(const ComplexVector& g, const ComplexMatrix& R,
                                  const ComplexMatrix& W, const Hyperparameters& hp,
                                  const SolverOptions& options) {
    const SolverPlan plan = make_solver_plan(R, W, hp, options);
    return run_inference(g, plan, options.rng_seed);
}

}  // namespace tomo
