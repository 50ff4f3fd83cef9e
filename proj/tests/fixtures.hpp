// Shared scenario builders for the test binaries. Dictionary sizes here are
// kept small; the acceptance suite runs the full-size configurations.
#pragma once

#include "tomo/geometry.hpp"
#include "tomo/grid.hpp"
#include "tomo/motion.hpp"
#include "tomo/pipeline.hpp"
#include "tomo/steering.hpp"

namespace fixtures {

// TerraSAR-X-like stack: rho_s close to 40 m.
inline tomo::AcquisitionGeometry desk_geometry(int n = 25) {
    return tomo::make_regular_geometry(n, -135.0, 135.0, 0.031, 697000.0);
}

inline tomo::ParameterGrid elevation_grid(double lo, double hi, int points) {
    tomo::ParameterGrid grid;
    grid.elevation_axis = tomo::linspace(lo, hi, points);
    return grid;
}

// Small 3-D setup shared by the solver/benchmark/tuning tests; built once
// per binary (the weight optimization is the expensive part).
inline const tomo::InversionSetup& small_desk_setup() {
    static const tomo::InversionSetup setup = [] {
        const auto geo = desk_geometry();
        const tomo::MotionBasis basis;
        const auto grid = elevation_grid(-40.0, 80.0, 96);
        tomo::SolverOptions options;
        options.engine = tomo::Engine::abt;
        options.initial_blocksize = 0;  // half-Rayleigh rule
        return tomo::make_inversion_setup(geo, basis, grid, options,
                                          tomo::WeightOptConfig{});
    }();
    return setup;
}

}  // namespace fixtures
