#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace tomo {

/// Deterministic random stream. Wraps std::mt19937_64 (whose output sequence
/// is fully specified by the standard) and derives uniforms and normals with
/// explicit arithmetic, so identical seeds give identical draws on every
/// platform and standard library. std::*_distribution is avoided for that
/// reason.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Standard normal via Box-Muller; draws are generated in pairs.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        // Guard the log against u1 == 0.
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Index draw from a normalized probability vector (inverse CDF walk).
    int sample_discrete(const std::vector<double>& probabilities) {
        if (probabilities.empty())
            throw std::invalid_argument("sample_discrete: empty distribution");
        const double u = uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i < probabilities.size(); ++i) {
            acc += probabilities[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(probabilities.size()) - 1;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// SplitMix64 finalizer; decorrelates derived seeds.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Per-stream seed derived from a master seed and a stream index. Trials and
/// candidates each get their own stream, so results do not depend on worker
/// count or execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix_seed(master ^ mix_seed(stream + 0x51a9b2c3d4e5f607ULL));
}

}  // namespace tomo
