#include "tomo/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace tomo {

void AcquisitionGeometry::validate() const {
    if (baselines.size() < 2)
        throw ConfigError("geometry: need at least 2 acquisitions, got " +
                          std::to_string(baselines.size()));
    if (baselines.size() != times.size())
        throw ConfigError("geometry: baselines and times differ in length");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw ConfigError("geometry: wavelength must be positive and finite");
    if (!(slant_range > 0.0) || !std::isfinite(slant_range))
        throw ConfigError("geometry: slant range must be positive and finite");
    for (double b : baselines)
        if (!std::isfinite(b)) throw ConfigError("geometry: non-finite baseline");
    for (double t : times)
        if (!std::isfinite(t)) throw ConfigError("geometry: non-finite time");
}

AcquisitionGeometry make_regular_geometry(int n, double b_min, double b_max,
                                          double wavelength, double slant_range) {
    if (n < 2) throw ConfigError("regular geometry: need n >= 2");
    AcquisitionGeometry geo;
    geo.baselines.resize(static_cast<std::size_t>(n));
    geo.times.assign(static_cast<std::size_t>(n), 0.0);
    geo.wavelength = wavelength;
    geo.slant_range = slant_range;
    for (int i = 0; i < n; ++i)
        geo.baselines[static_cast<std::size_t>(i)] =
            b_min + (b_max - b_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    geo.validate();
    return geo;
}

double rayleigh_resolution(const AcquisitionGeometry& geo) {
    geo.validate();
    const auto [lo, hi] = std::minmax_element(geo.baselines.begin(), geo.baselines.end());
    const double extent = *hi - *lo;
    if (extent <= 0.0)
        throw ConfigError("rayleigh_resolution: baseline extent is zero");
    return geo.wavelength * geo.slant_range / (2.0 * extent);
}

}  // namespace tomo
