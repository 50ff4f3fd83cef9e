#include "tomo/thresholding.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace tomo {

Complex complex_soft_threshold(Complex x, double theta) {
    if (theta < 0.0) throw ConfigError("soft threshold: negative theta");
    const double mag = std::abs(x);
    if (mag <= theta) return Complex(0.0, 0.0);
    return x * ((mag - theta) / mag);
}

ComplexVector soft_threshold_vector(const ComplexVector& v, double theta) {
    ComplexVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out[i] = complex_soft_threshold(v[i], theta);
    return out;
}

ComplexVector support_selection_threshold(const ComplexVector& v, double theta, int p) {
    const int total = static_cast<int>(v.size());
    if (p < 0 || p > total)
        throw ConfigError("support selection: p = " + std::to_string(p) +
                          " out of range [0, " + std::to_string(total) + "]");
    if (p == 0) return soft_threshold_vector(v, theta);

    std::vector<int> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ma = std::abs(v[a]);
        const double mb = std::abs(v[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });

    std::vector<char> keep(static_cast<std::size_t>(total), 0);
    for (int k = 0; k < p; ++k) keep[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;

    ComplexVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out[i] = keep[static_cast<std::size_t>(i)] ? v[i] : complex_soft_threshold(v[i], theta);
    return out;
}

double numeric_zero_tolerance(const ComplexVector& v) {
    double max_mod = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        max_mod = std::max(max_mod, std::abs(v[i]));
    return 1e-6 * max_mod;
}

}  // namespace tomo
