#pragma once

#include "tomo/steering.hpp"
#include "tomo/types.hpp"

#include <string>
#include <vector>

namespace tomo {

/// Reconstruction weights from coherence minimization. diag(W^H R) = 1
/// within 1e-8 after the final rescale.
struct AnalyticWeights {
    ComplexMatrix entries;  // N x L
    std::string source_matrix_digest;
    bool converged = true;
    std::vector<double> f1_history;
    std::vector<double> f2_history;
};

struct WeightOptConfig {
    double zeta_init = 0.1;
    double alpha_init = 0.1;
    double shrink_factor = 0.1;
    double f1_plateau_rtol = 1e-6;
    double f1_f2_match_rtol = 1e-3;
    int max_outer_iters = 5000;

    void validate() const;
};

/// Alternating-optimization state. D keeps unit-norm columns after every
/// projection; G is the N x N Gram factor.
struct WeightOptState {
    ComplexMatrix D;  // N x L
    ComplexMatrix G;  // N x N
    double zeta = 0.1;
    double alpha = 0.1;
    std::vector<double> f1_history;
    std::vector<double> f2_history;
};

/// Generalized mutual coherence: rescale the columns of W so that
/// diag(W^H R) = 1, then return max_{i != j} |W_{:,i}^H R_{:,j}|.
/// Conjugate-transpose inner products throughout.
double mutual_coherence(const ComplexMatrix& weights, const ComplexMatrix& dictionary);

/// One projected-gradient step on D:
///   D <- P(D - zeta D (D^H D - I) - (zeta/alpha)(D - G R))
/// where P renormalizes every column to unit l2 norm. Only D changes.
void pgd_step_D(WeightOptState& state, const ComplexMatrix& dictionary);

/// G <- D R^+.
ComplexMatrix update_G(const ComplexMatrix& D, const ComplexMatrix& dictionary_pinv);

/// ||D^H D - I||_F^2 without forming the L x L Gram:
/// equals ||D D^H||_F^2 - 2 ||D||_F^2 + L.
double gram_residual_fro2(const ComplexMatrix& D);

/// Alternating scheme: PGD on D, closed-form G, geometric step shrinking on
/// f1 plateaus, termination when f1 and f2 agree. Output W = G^H G R with
/// columns rescaled so diag(W^H R) = 1 exactly. Deterministic.
AnalyticWeights optimize_weights(const SteeringMatrix& R, const WeightOptConfig& cfg);

}  // namespace tomo
