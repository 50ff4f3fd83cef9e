#pragma once

#include "tomo/types.hpp"

#include <cstdint>
#include <cstring>
#include <string>

namespace tomo {

/// FNV-1a, 64-bit. Content digests for manifests and reproducibility
/// checks; not cryptographic.
class Digest {
public:
    void update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }

    void update(double x) { update(&x, sizeof(x)); }

    void update(const ComplexMatrix& m) {
        const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
        const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
        update(&rows, sizeof(rows));
        update(&cols, sizeof(cols));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                update(m(i, j).real());
                update(m(i, j).imag());
            }
    }

    void update(const ComplexVector& v) {
        update(ComplexMatrix(v));
    }

    std::uint64_t value() const { return state_; }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(16, '0');
        std::uint64_t v = state_;
        for (int i = 15; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = digits[v & 0xf];
            v >>= 4;
        }
        return out;
    }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string digest_hex(const ComplexMatrix& m) {
    Digest d;
    d.update(m);
    return d.hex();
}

}  // namespace tomo
