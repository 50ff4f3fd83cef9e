#include "tomo/synthesis.hpp"

#include <cmath>

namespace tomo {

MeasurementVector synthesize_measurements(const SteeringMatrix& R,
                                          const ReflectivityProfile& gamma,
                                          double snr_db,
                                          std::uint64_t rng_seed) {
    if (gamma.size() != R.cols())
        throw ConfigError("synthesize_measurements: gamma length " +
                          std::to_string(gamma.size()) + " != L = " +
                          std::to_string(R.cols()));

    MeasurementVector out;
    out.snr_db = snr_db;
    out.entries = R.entries * gamma.entries;
    if (std::isinf(snr_db)) return out;

    const double n_acq = static_cast<double>(R.rows());
    const double signal_power = out.entries.squaredNorm() / n_acq;
    if (signal_power <= 0.0)
        throw ConfigError("synthesize_measurements: zero signal with finite SNR requested");

    // SNR = per-sample mean signal power over complex noise variance.
    const double sigma2 = signal_power / std::pow(10.0, snr_db / 10.0);
    const double scale = std::sqrt(sigma2 / 2.0);
    Rng rng(rng_seed);
    for (Eigen::Index n = 0; n < out.entries.size(); ++n)
        out.entries[n] += Complex(scale * rng.normal(), scale * rng.normal());
    return out;
}

}  // namespace tomo
