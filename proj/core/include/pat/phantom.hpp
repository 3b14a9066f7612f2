#pragma once

#include <cstdint>

#include "pat/grid.hpp"

namespace pat {

/// Procedural 2D vessel phantom: random quadratic Bezier centerlines with
/// Gaussian cross-sections, compactly supported away from every boundary.
struct PhantomSpec {
    int n_perp = 42;
    int n_sensor = 172;
    uint64_t seed = 17;
    int vessels = 4;
    double radius_min = 0.8;   // voxels
    double radius_max = 2.0;   // voxels
    double amp_min = 0.45;
    double amp_max = 1.0;
    int margin = 3;            // zero voxels kept clear of every boundary

    void validate() const;
};

ImageField make_phantom(const PhantomSpec& spec, double spacing = 1.0);

}  // namespace pat
