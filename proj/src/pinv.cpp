#include "tomo/pinv.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace tomo {

ComplexMatrix pseudoinverse(const ComplexMatrix& m) {
    if (!m.allFinite()) throw NumericalError("pseudoinverse: non-finite input");
    if (m.size() == 0) return ComplexMatrix(m.cols(), m.rows());

    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    const double cutoff = sigma.size() > 0
        ? sigma[0] * static_cast<double>(std::max(m.rows(), m.cols())) *
              std::numeric_limits<double>::epsilon()
        : 0.0;

    RealVector inv_sigma = RealVector::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma[i] > cutoff) inv_sigma[i] = 1.0 / sigma[i];

    return svd.matrixV() * inv_sigma.asDiagonal() *
           svd.matrixU().adjoint();
}

}  // namespace tomo
