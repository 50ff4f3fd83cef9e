#pragma once

#include "tomo/geometry.hpp"

#include <variant>
#include <vector>

namespace tomo {

/// d(s, t) is modeled as a linear combination of base functions of time.
/// Three kinds are supported: linear (subsidence-style), sinusoidal
/// (seasonal/thermal, default period one year), and tabulated (arbitrary
/// per-acquisition values).
struct LinearMotion {};

struct SinusoidalMotion {
    double period_years = 1.0;
    double phase_offset_years = 0.0;
};

struct TabulatedMotion {
    std::vector<double> times;   // abscissae, must cover every queried t
    std::vector<double> values;  // one value per time
};

using MotionTerm = std::variant<LinearMotion, SinusoidalMotion, TabulatedMotion>;

struct MotionBasis {
    std::vector<MotionTerm> terms;

    int num_terms() const { return static_cast<int>(terms.size()); }

    /// Checks term shapes against a geometry (tabulated terms need exactly
    /// one value per acquisition, at the acquisition times).
    void validate(const AcquisitionGeometry& geo) const;
};

/// Base-function value tau_m(t). Linear -> t; sinusoidal -> sin(2pi (t-t0)/P);
/// tabulated -> stored value for a t that matches an abscissa exactly.
double eval_motion_basis(const MotionBasis& basis, int term_index, double t);

}  // namespace tomo
