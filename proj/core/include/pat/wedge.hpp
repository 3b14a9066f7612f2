#pragma once

#include <vector>

#include "pat/curvelet.hpp"

namespace pat {

/// One admissibility entry of the bow-tie restriction. Each materialized
/// wedge stands for an antipodal pair; `quadrant` follows the usual
/// display convention for a time x sensor volume: 'E' marks the pair on the
/// time-frequency axis (E and W), 'N' the pair on the sensor-frequency axis
/// (N and S).
struct WedgeAngle {
    int scale = 0;      // directional scale index (0 = coarsest directional)
    char quadrant = 0;  // 'E' (time axis) or 'N' (sensor axis)
    int l = 0;
    double beta_hat = 0.0;     // quadrant-relative angle after c_v scaling
    double beta_global = 0.0;  // measured from the time-frequency axis
    bool in_range = false;
    int wedge_index = 0;       // index into Tiling::wedge(scale, .)
};

/// Bow-tie admissible-angle bookkeeping for a data-domain tiling.
struct WedgeSpec {
    double theta_w = 0.0;  // half-opening of the admissible double wedge
    double cv = 0.0;
    uint64_t tiling_id = 0;
    std::vector<WedgeAngle> angles;  // all materialized wedges, every scale

    int in_range_count(int scale) const;
    int total_count(int scale) const;
};

/// Discrete wedge orientations via tangent equisampling, scaled by the voxel
/// sound speed, with bow-tie membership flags. Angles exactly on the
/// |beta| = theta_w boundary count as in range. Data arrays are time (rows) x
/// sensor (cols), so row-axis quadrants get tangents scaled by c_v and
/// column-axis quadrants by 1/c_v.
WedgeSpec discrete_angles(const Tiling& tiling, double cv, double theta_w = 0.0 /* pi/4 */);

/// Orthogonal projector P_W: zero every out-of-range wedge's coefficients,
/// keep the coarse (and any isotropic finest) block unchanged.
CurveletCoeffs project_range(const CurveletCoeffs& coeffs, const Tiling& tiling,
                             const WedgeSpec& spec);

/// Wedge-restricted transform Psi~ = P_W Psi and its adjoint/left inverse.
CurveletCoeffs analyze_wedge(const Array2d& u, const Tiling& tiling, const WedgeSpec& spec);
Array2d synthesize_wedge(const CurveletCoeffs& coeffs, const Tiling& tiling, const WedgeSpec& spec);

/// Squared coefficient energy split into in-range and out-of-range parts.
struct RangeEnergy {
    double in_range = 0.0;
    double out_of_range = 0.0;
    double coarse = 0.0;
};
RangeEnergy range_energy(const CurveletCoeffs& coeffs, const Tiling& tiling, const WedgeSpec& spec);

/// Frequency-plane render of the admissible set: 1 in-range wedges, 0
/// out-of-range, 0.5 the isotropic blocks (zero frequency centered).
Array2d wedge_mask(const Tiling& tiling, const WedgeSpec& spec);

}  // namespace pat
