#pragma once

#include "tomo/types.hpp"

#include <utility>
#include <vector>

namespace tomo {

/// Contiguous half-open index ranges covering [0, L) in order. Under the
/// grid's flatten convention each block spans a contiguous elevation
/// interval.
struct BlockPartition {
    int blocksize = 1;
    std::vector<std::pair<int, int>> ranges;

    int num_blocks() const { return static_cast<int>(ranges.size()); }
};

enum class BlockNorm { spectral, frobenius };

enum class ScheduleMode { sweep, weighted_random };

/// Per-block selection weights L_i and the sampling distribution
/// P_i = L_i / sum(L).
struct BlockSchedule {
    ScheduleMode mode = ScheduleMode::weighted_random;
    std::vector<double> weights;
    std::vector<double> probabilities;
};

/// Blocks of length blocksize, the last possibly shorter.
BlockPartition partition_blocks(int total, int blocksize);

/// ||R_i^H R_i|| for the column block over `range`. Spectral norm by
/// default (power iteration on the Gram, 1e-8 relative tolerance);
/// Frobenius available behind the flag.
double block_weight(const ComplexMatrix& dictionary, std::pair<int, int> range,
                    BlockNorm norm = BlockNorm::spectral);

/// P_i = L_i / sum_j L_j.
std::vector<double> block_probabilities(const std::vector<double>& weights);

}  // namespace tomo
