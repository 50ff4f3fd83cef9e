#include "tomo/blocks.hpp"

#include <cmath>

namespace tomo {

BlockPartition partition_blocks(int total, int blocksize) {
    if (blocksize < 1)
        throw ConfigError("partition_blocks: blocksize must be >= 1");
    if (total < 1)
        throw ConfigError("partition_blocks: total must be >= 1");
    BlockPartition part;
    part.blocksize = blocksize;
    for (int start = 0; start < total; start += blocksize)
        part.ranges.emplace_back(start, std::min(start + blocksize, total));
    return part;
}

double block_weight(const ComplexMatrix& dictionary, std::pair<int, int> range,
                    BlockNorm norm) {
    const auto [lo, hi] = range;
    if (lo < 0 || hi > dictionary.cols() || lo >= hi)
        throw ConfigError("block_weight: empty or out-of-range block [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + ")");
    const auto block = dictionary.middleCols(lo, hi - lo);

    if (norm == BlockNorm::frobenius) {
        const ComplexMatrix gram = block.adjoint() * block;
        return gram.norm();
    }

    // Largest eigenvalue of the PSD Gram = squared top singular value of the
    // block. Power-iterate on the smaller of the two Gram forms.
    const bool use_cols = block.cols() <= block.rows();
    ComplexMatrix gram;
    if (use_cols)
        gram.noalias() = block.adjoint() * block;
    else
        gram.noalias() = block * block.adjoint();

    const Eigen::Index dim = gram.rows();
    ComplexVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v[i] = Complex(1.0 + static_cast<double>(i) / static_cast<double>(dim), 0.0);
    v /= v.norm();

    double lambda = 0.0;
    constexpr double rel_tol = 1e-8;
    constexpr int max_iters = 100000;
    for (int it = 0; it < max_iters; ++it) {
        ComplexVector next = gram * v;
        const double next_norm = next.norm();
        if (next_norm <= 0.0) return 0.0;  // block of zero columns
        next /= next_norm;
        const double estimate = std::real(Complex(next.adjoint() * gram * next));
        if (it > 0 && std::abs(estimate - lambda) <= rel_tol * std::max(estimate, 1e-300)) {
            return estimate;
        }
        lambda = estimate;
        v = std::move(next);
    }
    return lambda;
}

std::vector<double> block_probabilities(const std::vector<double>& weights) {
    if (weights.empty())
        throw ConfigError("block_probabilities: no weights");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ConfigError("block_probabilities: negative weight");
        sum += w;
    }
    if (!(sum > 0.0))
        throw ConfigError("block_probabilities: all weights zero");
    std::vector<double> probabilities(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        probabilities[i] = weights[i] / sum;
    return probabilities;
}

}  // namespace tomo
