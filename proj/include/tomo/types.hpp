#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace tomo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Invalid user input: bad config values, violated type invariants,
/// dimension mismatches. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: collapsed columns, impossible rescales,
/// non-convergence. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File-format or filesystem failure. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Sum of complex moduli.
inline double l1_norm(const ComplexVector& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += std::abs(v[i]);
    return s;
}

/// Count of entries with modulus above tol.
inline int l0_count(const ComplexVector& v, double tol) {
    int n = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > tol) ++n;
    return n;
}

/// Half-up rounding, used wherever the iteration rules round.
inline long long round_half_up(double x) {
    return static_cast<long long>(std::floor(x + 0.5));
}

}  // namespace tomo
