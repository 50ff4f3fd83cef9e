#pragma once

#include "tomo/geometry.hpp"
#include "tomo/grid.hpp"
#include "tomo/motion.hpp"
#include "tomo/types.hpp"

namespace tomo {

/// Irregularly sampled Fourier dictionary over the joint grid.
/// Unnormalized entries are pure phases (unit modulus); normalized means
/// every column has unit l2 norm.
struct SteeringMatrix {
    ComplexMatrix entries;  // N x L
    ParameterGrid grid;
    bool normalized = false;

    int rows() const { return static_cast<int>(entries.rows()); }
    int cols() const { return static_cast<int>(entries.cols()); }
};

/// entries[n, l] = exp(+j 2pi (xi_n s_l + sum_m eta_{m,n} p_{m,l})) with
/// xi_n = 2 b_n / (lambda r) and eta_{m,n} = 2 tau_m(t_n) / lambda.
/// The +j sign convention is used consistently here, in the adjoint, and
/// in synthesis.
SteeringMatrix build_steering_matrix(const AcquisitionGeometry& geo,
                                     const MotionBasis& basis,
                                     const ParameterGrid& grid,
                                     bool normalize);

/// Unit-l2-norm-column copy. No-op when already normalized.
SteeringMatrix normalize_columns(const SteeringMatrix& R);

/// Per-column l2 norms.
RealVector column_norms(const ComplexMatrix& m);

}  // namespace tomo
