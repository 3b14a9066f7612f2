#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "pat/array.hpp"

namespace pat {

/// One directional wedge of the frequency tiling: tabulated window values and
/// the gather geometry that wraps its sheared support onto a small rectangle.
/// Wedges are tabulated on the positive half plane of their quadrant axis;
/// the antipodal wedge is implied by the real (symmetric) transform.
struct WedgeGeom {
    int axis = 0;     // 0: quadrant on the row-frequency axis, 1: column-frequency axis
    int l = 0;        // index within the quadrant, -P/2+1 .. P/2
    double beta_bin = 0.0;  // bin-space center angle atan((l-1/2)/(P/2))
    int u0 = 0;             // first axis coordinate with support (centered units)
    int n_u = 0;            // wedge length (axis direction)
    int n_v = 0;            // wedge width (cross direction)
    std::vector<int> v_start;   // per-u first cross coordinate (centered units)
    std::vector<int> v_len;     // per-u support length (<= n_v)
    std::vector<double> win;    // n_u x n_v window table, zero outside support

    double win_at(int i, int k) const { return win[static_cast<size_t>(i) * n_v + k]; }
};

/// Isotropic block (coarse scale, and the finest scale when the
/// wavelets-at-finest toggle is on): centered crop with a radial window.
struct BlockGeom {
    int rows = 0, cols = 0;      // grid and coefficient dims
    std::vector<double> win;     // rows x cols, small-grid index order
    std::vector<int> map_r;      // small row index -> original grid row
    std::vector<int> map_c;      // small col index -> original grid col
};

/// Frequency-plane tiling of the symmetric real curvelet transform with a
/// fixed grid shape. Windows form an exact partition of unity (sum of squares
/// one at every retained bin, antipodes and periodic images included), which
/// makes analyze/synthesize an exact tight frame.
class Tiling {
  public:
    /// n_angles_coarse2: angles at the second-coarsest scale, multiple of 4.
    /// Angle counts double every second scale toward fine. With
    /// wavelets_at_finest the top scale is a single isotropic block
    /// (the classic "wavelets at the finest scale" option); default is
    /// directional wedges everywhere.
    static Tiling build(int rows, int cols, int n_scales, int n_angles_coarse2,
                        bool wavelets_at_finest = false);

    int rows() const { return n1_; }
    int cols() const { return n2_; }
    int n_scales() const { return n_scales_; }
    int n_angles_coarse2() const { return n_angles2_; }
    bool wavelets_at_finest() const { return wavelets_finest_; }

    /// Directional scales are 2 .. (wavelets_at_finest ? n_scales-1 : n_scales).
    int n_directional_scales() const { return static_cast<int>(scales_.size()); }
    /// Angle slots L_j at directional scale index d (0-based from coarsest
    /// directional scale). Half the slots carry sqrt(2)*Re, the other half
    /// sqrt(2)*Im of the same wedges.
    int n_angles(int d) const { return static_cast<int>(scales_[d].size()) * 2; }
    const WedgeGeom& wedge(int d, int w) const { return scales_[d][w]; }
    const BlockGeom& coarse() const { return coarse_; }
    const BlockGeom* finest_block() const { return wavelets_finest_ ? &finest_ : nullptr; }

    size_t total_coeffs() const { return total_; }
    /// Flat offset of a wedge's Re (im=false) or Im (im=true) block.
    size_t wedge_offset(int d, int w, bool im) const;
    size_t coarse_offset() const { return 0; }
    size_t finest_offset() const { return finest_offset_; }

    uint64_t id() const { return id_; }
    /// Largest deviation of the window partition of unity before the final
    /// normalization pass (construction diagnostic).
    double pou_residual() const { return pou_residual_; }

    /// Frequency-plane label image (dominant window per bin) for inspection.
    Array2d tiling_labels() const;

  private:
    int n1_ = 0, n2_ = 0, n_scales_ = 0, n_angles2_ = 0;
    bool wavelets_finest_ = false;
    std::vector<std::vector<WedgeGeom>> scales_;
    BlockGeom coarse_, finest_;
    std::vector<std::vector<size_t>> wedge_offsets_;  // per scale: 2*|wedges| offsets (re then im)
    size_t finest_offset_ = 0;
    size_t total_ = 0;
    uint64_t id_ = 0;
    double pou_residual_ = 0.0;

    friend Tiling build_tiling_impl(int, int, int, int, bool);
};

/// Coefficients as one flat real vector plus the generating tiling's id.
struct CurveletCoeffs {
    std::vector<double> data;
    uint64_t tiling_id = 0;

    void check(const Tiling& t) const;
};

/// Forward transform: FFT, per-wedge window multiply and wrap, inverse FFT
/// per wedge. Numerical isometry; synthesize is its exact adjoint and left
/// inverse.
CurveletCoeffs analyze(const Array2d& u, const Tiling& t);
Array2d synthesize(const CurveletCoeffs& c, const Tiling& t);

/// ||u - synthesize(top-s coefficients)||_2 / ||u||_2.
double best_s_term_error(const Array2d& u, const Tiling& t, size_t s);

}  // namespace pat
