#include "tomo/grid.hpp"

#include <cmath>

namespace tomo {

namespace {

void check_strictly_increasing(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) throw ConfigError(std::string("grid: empty ") + name + " axis");
    for (std::size_t i = 0; i + 1 < axis.size(); ++i)
        if (!(axis[i] < axis[i + 1]))
            throw ConfigError(std::string("grid: ") + name + " axis not strictly increasing");
    for (double v : axis)
        if (!std::isfinite(v))
            throw ConfigError(std::string("grid: non-finite value on ") + name + " axis");
}

}  // namespace

int ParameterGrid::total_size() const {
    int total = elevation_size();
    for (const auto& axis : motion_axes)
        total *= static_cast<int>(axis.size());
    return total;
}

int ParameterGrid::flatten(const std::vector<int>& multi) const {
    if (multi.size() != motion_axes.size() + 1)
        throw ConfigError("grid: multi-index rank mismatch");
    if (multi[0] < 0 || multi[0] >= elevation_size())
        throw ConfigError("grid: elevation index out of range");
    int flat = multi[0];
    for (std::size_t m = 0; m < motion_axes.size(); ++m) {
        const int size_m = static_cast<int>(motion_axes[m].size());
        if (multi[m + 1] < 0 || multi[m + 1] >= size_m)
            throw ConfigError("grid: motion index out of range");
        flat = flat * size_m + multi[m + 1];
    }
    return flat;
}

std::vector<int> ParameterGrid::unflatten(int flat) const {
    if (flat < 0 || flat >= total_size())
        throw ConfigError("grid: flat index out of range");
    std::vector<int> multi(motion_axes.size() + 1, 0);
    for (std::size_t m = motion_axes.size(); m > 0; --m) {
        const int size_m = static_cast<int>(motion_axes[m - 1].size());
        multi[m] = flat % size_m;
        flat /= size_m;
    }
    multi[0] = flat;
    return multi;
}

std::vector<double> ParameterGrid::point_at(int flat) const {
    const auto multi = unflatten(flat);
    std::vector<double> point(multi.size());
    point[0] = elevation_axis[static_cast<std::size_t>(multi[0])];
    for (std::size_t m = 0; m < motion_axes.size(); ++m)
        point[m + 1] = motion_axes[m][static_cast<std::size_t>(multi[m + 1])];
    return point;
}

void ParameterGrid::validate() const {
    check_strictly_increasing(elevation_axis, "elevation");
    for (const auto& axis : motion_axes)
        check_strictly_increasing(axis, "motion");
    if (total_size() < 1) throw ConfigError("grid: total size must be >= 1");
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw ConfigError("linspace: need n >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

}  // namespace tomo
