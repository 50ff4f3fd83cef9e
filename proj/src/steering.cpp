#include "tomo/steering.hpp"

#include <cmath>

namespace tomo {

SteeringMatrix build_steering_matrix(const AcquisitionGeometry& geo,
                                     const MotionBasis& basis,
                                     const ParameterGrid& grid,
                                     bool normalize) {
    geo.validate();
    grid.validate();
    basis.validate(geo);
    if (grid.num_motion_axes() != basis.num_terms())
        throw ConfigError("build_steering_matrix: grid has " +
                          std::to_string(grid.num_motion_axes()) +
                          " motion axes but basis has " +
                          std::to_string(basis.num_terms()) + " terms");

    const int n_acq = geo.num_acquisitions();
    const int total = grid.total_size();
    const int n_terms = basis.num_terms();

    // Elevation frequency xi_n and motion frequencies eta_{m,n}.
    std::vector<double> xi(static_cast<std::size_t>(n_acq));
    std::vector<std::vector<double>> eta(
        static_cast<std::size_t>(n_terms),
        std::vector<double>(static_cast<std::size_t>(n_acq)));
    for (int n = 0; n < n_acq; ++n) {
        xi[static_cast<std::size_t>(n)] =
            2.0 * geo.baselines[static_cast<std::size_t>(n)] /
            (geo.wavelength * geo.slant_range);
        for (int m = 0; m < n_terms; ++m)
            eta[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] =
                2.0 * eval_motion_basis(basis, m, geo.times[static_cast<std::size_t>(n)]) /
                geo.wavelength;
    }

    SteeringMatrix result;
    result.grid = grid;
    result.normalized = normalize;
    result.entries.resize(n_acq, total);

    for (int l = 0; l < total; ++l) {
        const auto point = grid.point_at(l);
        for (int n = 0; n < n_acq; ++n) {
            double phase = xi[static_cast<std::size_t>(n)] * point[0];
            for (int m = 0; m < n_terms; ++m)
                phase += eta[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] *
                         point[static_cast<std::size_t>(m) + 1];
            result.entries(n, l) = std::polar(1.0, 2.0 * M_PI * phase);
        }
        if (normalize)
            result.entries.col(l) /= result.entries.col(l).norm();
    }
    return result;
}

SteeringMatrix normalize_columns(const SteeringMatrix& R) {
    if (R.normalized) return R;
    SteeringMatrix out = R;
    out.normalized = true;
    for (int l = 0; l < out.cols(); ++l) {
        const double norm = out.entries.col(l).norm();
        if (norm <= 0.0)
            throw NumericalError("normalize_columns: zero column " + std::to_string(l));
        out.entries.col(l) /= norm;
    }
    return out;
}

RealVector column_norms(const ComplexMatrix& m) {
    RealVector norms(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) norms[j] = m.col(j).norm();
    return norms;
}

}  // namespace tomo
