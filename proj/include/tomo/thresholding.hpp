#pragma once

#include "tomo/types.hpp"

namespace tomo {

/// Proximal operator of the complex l1 norm: 0 when |x| <= theta, otherwise
/// the magnitude shrinks by theta and the phase is preserved.
Complex complex_soft_threshold(Complex x, double theta);

/// Elementwise soft threshold.
ComplexVector soft_threshold_vector(const ComplexVector& v, double theta);

/// Soft threshold with support selection: the p largest-magnitude entries
/// pass unchanged, all others are soft-thresholded. Magnitude ties break
/// toward the lower index.
ComplexVector support_selection_threshold(const ComplexVector& v, double theta, int p);

/// Numeric-zero tolerance for l0 counts on dense iterates:
/// 1e-6 times the max modulus of the iterate.
double numeric_zero_tolerance(const ComplexVector& v);

}  // namespace tomo
