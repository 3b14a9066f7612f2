#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "pat/grid.hpp"
#include "pat/sensing.hpp"

namespace pat {

/// Spectral propagator for the constant-speed free-space wave equation on a
/// zero-padded periodic grid. The two-step recursion
///   p^{n+1} = 2 cos(c dt |k|) p^n - p^{n-1},   p^1 = cos(c dt |k|) p^0
/// is exact in time for each Fourier mode, so the forward map, its algebraic
/// transpose and the Dirichlet time reversal share one diagonal multiplier
/// table. Padding is sized so wrap-around energy cannot reach the sensor row
/// within the measurement window.
class Propagator {
  public:
    explicit Propagator(const AcousticConfig& cfg);

    const AcousticConfig& config() const { return cfg_; }
    int padded_rows() const { return p1_; }
    int padded_cols() const { return p2_; }
    int pad() const { return pad_; }
    int sensor_row() const { return 0; }
    int n_t() const { return n_t_; }
    const std::vector<double>& cos_table() const { return cos_; }

    /// PAT forward map A: initial pressure to sensor-row time series.
    /// Requires p0 zero on its boundary ring (compact support).
    DataField forward(const ImageField& p0) const;

    /// Exact algebraic transpose of the discrete forward map.
    ImageField adjoint(const DataField& g) const;

    /// Dirichlet re-emission time reversal: propagate backwards from rest
    /// imposing g(T-t) on the sensor row each step; when a pattern is given
    /// only the sampled sensor points are imposed.
    ImageField time_reverse(const DataField& g,
                            const std::optional<SamplingPattern>& pattern = std::nullopt) const;

  private:
    AcousticConfig cfg_;
    int p1_ = 0, p2_ = 0, pad_ = 0, n_t_ = 0;
    std::vector<double> cos_;  // p1_ x p2_ multiplier table

    void check_data(const DataField& g) const;
};

/// forward()/adjoint()/time_reverse() through a one-shot Propagator.
DataField wave_forward(const ImageField& p0, const AcousticConfig& cfg);
ImageField wave_adjoint(const DataField& g, const AcousticConfig& cfg);
ImageField wave_time_reverse(const DataField& g, const AcousticConfig& cfg,
                             const std::optional<SamplingPattern>& pattern = std::nullopt);

/// Wavefront direction map between image and data domains: beta = arctan(sin
/// theta), theta in (-pi/2, pi/2).
double wavefront_map(double theta);

}  // namespace pat
