#pragma once

#include "tomo/rng.hpp"
#include "tomo/steering.hpp"
#include "tomo/types.hpp"

#include <cstdint>
#include <limits>

namespace tomo {

struct MeasurementVector {
    ComplexVector entries;  // length N
    double snr_db = std::numeric_limits<double>::infinity();
};

/// Complex reflectivity over the flattened joint grid.
struct ReflectivityProfile {
    ComplexVector entries;  // length L

    int size() const { return static_cast<int>(entries.size()); }
};

/// g = R gamma + eps with eps i.i.d. circularly symmetric complex Gaussian.
/// Per-sample noise variance sigma^2 = (|R gamma|^2 / N) / 10^(snr_db/10);
/// snr_db = +inf gives the noiseless g = R gamma. Deterministic given seed.
MeasurementVector synthesize_measurements(const SteeringMatrix& R,
                                          const ReflectivityProfile& gamma,
                                          double snr_db,
                                          std::uint64_t rng_seed);

}  // namespace tomo
