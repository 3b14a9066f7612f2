#pragma once

#include <array>

#include "pat/array.hpp"

namespace pat {

/// Acquisition geometry and acoustic parameters for a planar (line) sensor
/// sitting on the first row of the image grid. Spacing is uniform in all
/// dimensions; sound speed is constant.
struct AcousticConfig {
    double c = 1500.0;    // sound speed, m/s
    double h_x = 0.0;     // spatial grid spacing, m
    double h_t = 0.0;     // temporal step, s
    int n_perp = 0;       // image depth in voxels
    int n_sensor = 0;     // sensor points along the detector line
    double T = 0.0;       // measurement duration, s

    /// Derive h_t (and T over the full diagonal travel time) from a target
    /// voxel sound speed. The phantom protocol is stated in terms of c_v,
    /// which together with the grid fixes h_t = c_v*h_x/c.
    static AcousticConfig from_cv(double c, double h_x, double cv, int n_perp, int n_sensor);

    void validate() const;

    double cv() const { return c * h_t / h_x; }
    /// Diagonal of the image cuboid in meters (longest source-sensor path).
    double x_max() const;
};

/// Discretized initial pressure p0 on the image grid (n_perp x n_sensor).
struct ImageField {
    Array2d values;
    double spacing = 0.0;  // h_x, m
};

/// Time x sensor pressure volume g(t, x_S).
struct DataField {
    Array2d values;    // n_t x n_sensor
    double dt = 0.0;   // h_t, s
    double cv = 0.0;   // voxel sound speed, dimensionless
};

/// c_v = c*h_t/h_x.
double compute_cv(const AcousticConfig& cfg);

/// n_t = ceil((1/c_v) * x_max/h_x): time steps for the wave to cross the
/// image diagonal.
int compute_n_t(const AcousticConfig& cfg);

struct UpscaleResult {
    double alpha = 1.0;
    std::array<int, 2> dims{0, 0};  // upscaled (n_perp, n_sensor), 2D only
};

/// Fair-comparison upscaling factor alpha = (n_t/n_perp)^(1/d) matching the
/// reconstruction grid cardinality to the data volume. n_perp may be
/// fractional (real-data protocols derive it as n_t*c_v). Grid dims use
/// round-half-away-from-zero per axis and are populated for d = 2.
UpscaleResult compute_upscale(double n_t, double n_perp, int d, int n_sensor = 0);

/// Bilinear interpolation onto a target grid with corner-aligned sampling.
/// Target dims must be >= source dims.
ImageField bilinear_upscale(const ImageField& img, int rows, int cols);

}  // namespace pat
