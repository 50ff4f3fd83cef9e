#include "tomo/coherence.hpp"

#include "tomo/digest.hpp"
#include "tomo/pinv.hpp"

#include <cmath>
#include <limits>

namespace tomo {

namespace {

constexpr double kRescaleFloor = 1e-14;

// Column rescale enforcing diag(W^H R) = 1. Throws when a W column is
// (numerically) orthogonal to its R column.
void rescale_to_unit_diagonal(ComplexMatrix& weights, const ComplexMatrix& dictionary) {
    for (Eigen::Index i = 0; i < weights.cols(); ++i) {
        Complex d(0.0, 0.0);
        for (Eigen::Index n = 0; n < weights.rows(); ++n)
            d += std::conj(weights(n, i)) * dictionary(n, i);
        if (std::abs(d) < kRescaleFloor)
            throw NumericalError("coherence rescale: weight column " + std::to_string(i) +
                                 " orthogonal to its dictionary column");
        weights.col(i) /= std::conj(d);
    }
}

}  // namespace

void WeightOptConfig::validate() const {
    if (!(zeta_init > 0.0) || !(alpha_init > 0.0))
        throw ConfigError("weight optimization: zeta_init and alpha_init must be positive");
    if (!(shrink_factor > 0.0 && shrink_factor < 1.0))
        throw ConfigError("weight optimization: shrink_factor must be in (0,1)");
    if (!(f1_plateau_rtol > 0.0) || !(f1_f2_match_rtol > 0.0))
        throw ConfigError("weight optimization: tolerances must be positive");
    if (max_outer_iters < 1)
        throw ConfigError("weight optimization: max_outer_iters must be >= 1");
}

double mutual_coherence(const ComplexMatrix& weights, const ComplexMatrix& dictionary) {
    if (weights.rows() != dictionary.rows() || weights.cols() != dictionary.cols())
        throw ConfigError("mutual_coherence: shape mismatch");

    ComplexMatrix rescaled = weights;
    rescale_to_unit_diagonal(rescaled, dictionary);

    // Scalar accumulation in fixed order; L^2 pair dots of length N.
    double worst = 0.0;
    const Eigen::Index cols = dictionary.cols();
    const Eigen::Index rows = dictionary.rows();
    for (Eigen::Index i = 0; i < cols; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (i == j) continue;
            Complex acc(0.0, 0.0);
            for (Eigen::Index n = 0; n < rows; ++n)
                acc += std::conj(rescaled(n, i)) * dictionary(n, j);
            const double mag = std::abs(acc);
            if (mag > worst) worst = mag;
        }
    }
    return worst;
}

void pgd_step_D(WeightOptState& state, const ComplexMatrix& dictionary) {
    const Eigen::Index n = state.D.rows();
    const Eigen::Index total = state.D.cols();
    if (dictionary.rows() != n || dictionary.cols() != total || state.G.rows() != n ||
        state.G.cols() != n)
        throw ConfigError("pgd_step_D: shape mismatch");

    // D (D^H D - I) = (D D^H) D - D, so only the N x N Gram is formed.
    ComplexMatrix gram(n, n);
    gram.noalias() = state.D * state.D.adjoint();
    ComplexMatrix step(n, total);
    step.noalias() = gram * state.D;
    step -= state.D;

    ComplexMatrix coupling = state.D;
    coupling.noalias() -= state.G * dictionary;

    ComplexMatrix next = state.D - state.zeta * step - (state.zeta / state.alpha) * coupling;
    for (Eigen::Index l = 0; l < total; ++l) {
        const double norm = next.col(l).norm();
        if (!(norm > kRescaleFloor))
            throw NumericalError("pgd_step_D: column " + std::to_string(l) +
                                 " collapsed before projection");
        next.col(l) /= norm;
    }
    state.D = std::move(next);
}

ComplexMatrix update_G(const ComplexMatrix& D, const ComplexMatrix& dictionary_pinv) {
    if (D.cols() != dictionary_pinv.rows())
        throw ConfigError("update_G: shape mismatch");
    return D * dictionary_pinv;
}

double gram_residual_fro2(const ComplexMatrix& D) {
    // ||D^H D - I||_F^2 = ||D D^H||_F^2 - 2 ||D||_F^2 + L.
    ComplexMatrix gram = D * D.adjoint();
    const double value = gram.squaredNorm() - 2.0 * D.squaredNorm() +
                         static_cast<double>(D.cols());
    return std::max(0.0, value);
}

AnalyticWeights optimize_weights(const SteeringMatrix& R, const WeightOptConfig& cfg) {
    cfg.validate();
    const SteeringMatrix dict = normalize_columns(R);
    const ComplexMatrix& A = dict.entries;
    const Eigen::Index n = A.rows();

    const ComplexMatrix A_pinv = pseudoinverse(A);

    WeightOptState state;
    state.D = A;
    state.G = ComplexMatrix::Identity(n, n);
    state.zeta = cfg.zeta_init;
    state.alpha = cfg.alpha_init;

    // History starts at the raw dictionary: f1 = f2 = ||R^H R - I||_F^2.
    const double f_init = gram_residual_fro2(A);
    state.f1_history.push_back(f_init);
    state.f2_history.push_back(f_init);

    // f2 equals ||W^H R - I||_F^2 for W = G^H G R, so the best iterate is
    // the G with the smallest f2 seen so far.
    ComplexMatrix best_G = state.G;
    double best_f2 = f_init;
    bool converged = false;

    for (int iter = 0; iter < cfg.max_outer_iters; ++iter) {
        pgd_step_D(state, A);
        state.G = update_G(state.D, A_pinv);

        const double f1 = gram_residual_fro2(state.D);
        ComplexMatrix GR = state.G * A;
        const double f2 = gram_residual_fro2(GR);
        state.f1_history.push_back(f1);
        state.f2_history.push_back(f2);

        if (f2 < best_f2) {
            best_f2 = f2;
            best_G = state.G;
        }

        // Step shrinking on an f1 plateau; the f1/f2 agreement exit is only
        // tested after a plateau, matching the nested structure of the
        // alternating scheme.
        const std::size_t t = state.f1_history.size();
        if (t >= 2) {
            const double prev = state.f1_history[t - 2];
            if (std::abs(f1 - prev) <= cfg.f1_plateau_rtol * std::max(1.0, f1)) {
                state.zeta *= cfg.shrink_factor;
                state.alpha *= cfg.shrink_factor;
                if (std::abs(f1 - f2) <= cfg.f1_f2_match_rtol * std::max(1.0, f1)) {
                    converged = true;
                    break;
                }
            }
        }
    }

    AnalyticWeights out;
    out.converged = converged;
    out.f1_history = std::move(state.f1_history);
    out.f2_history = std::move(state.f2_history);
    out.source_matrix_digest = digest_hex(A);

    const ComplexMatrix& G_final = converged ? state.G : best_G;
    out.entries.noalias() = G_final.adjoint() * (G_final * A);
    rescale_to_unit_diagonal(out.entries, A);
    return out;
}

}  // namespace tomo
