#pragma once

#include "tomo/types.hpp"

#include <optional>
#include <vector>

namespace tomo {

/// Physical description of a multi-baseline acquisition stack. Immutable
/// after construction; validate() is called by every consumer that builds
/// on it.
struct AcquisitionGeometry {
    std::vector<double> baselines;   // orthogonal baselines b_n, meters
    std::vector<double> times;       // acquisition times t_n, years from master
    double wavelength = 0.0;         // lambda, meters
    double slant_range = 0.0;        // r, meters
    std::optional<double> incidence_angle_deg;  // only for height conversion

    int num_acquisitions() const { return static_cast<int>(baselines.size()); }

    void validate() const;
};

/// Regularly spaced baselines over [b_min, b_max], all times zero.
AcquisitionGeometry make_regular_geometry(int n, double b_min, double b_max,
                                          double wavelength, double slant_range);

/// Inherent elevation resolution rho_s = lambda * r / (2 * baseline extent).
double rayleigh_resolution(const AcquisitionGeometry& geo);

}  // namespace tomo
