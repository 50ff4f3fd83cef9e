#pragma once

#include "tomo/types.hpp"

namespace tomo {

/// Moore-Penrose pseudoinverse via SVD with singular values below
/// sigma_max * max(rows, cols) * eps treated as zero.
ComplexMatrix pseudoinverse(const ComplexMatrix& m);

}  // namespace tomo
