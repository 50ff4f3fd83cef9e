#pragma once

#include "tomo/types.hpp"

#include <vector>

namespace tomo {

/// Joint elevation x motion discretization. Flattening convention:
/// elevation is the slowest-varying index, motion axes follow in
/// declaration order, the last axis varies fastest. Block partitions over
/// the flat index therefore cover contiguous elevation intervals.
struct ParameterGrid {
    std::vector<double> elevation_axis;             // meters, strictly increasing
    std::vector<std::vector<double>> motion_axes;   // one axis per basis term

    int num_motion_axes() const { return static_cast<int>(motion_axes.size()); }
    int elevation_size() const { return static_cast<int>(elevation_axis.size()); }

    /// Total flattened size L = L_s * prod(L_m).
    int total_size() const;

    /// multi = [elevation_index, motion_index_0, ...].
    int flatten(const std::vector<int>& multi) const;
    std::vector<int> unflatten(int flat) const;

    /// Parameter values at a flat index: [s, p_1, ..., p_M].
    std::vector<double> point_at(int flat) const;

    void validate() const;
};

/// n equally spaced points over [lo, hi].
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace tomo
