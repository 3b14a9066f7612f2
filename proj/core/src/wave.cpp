#include "pat/wave.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pat/fft.hpp"

namespace pat {

using fft::cvec;
using cd = std::complex<double>;

Propagator::Propagator(const AcousticConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    n_t_ = compute_n_t(cfg_);
    // Any periodic image of the support is at least pad voxels of travel away
    // from the sensor row, so wrap-around cannot arrive within T.
    pad_ = static_cast<int>(std::ceil(n_t_ * cfg_.cv())) + 2;
    p1_ = fft::good_size(cfg_.n_perp + pad_);
    p2_ = fft::good_size(cfg_.n_sensor + pad_);

    cos_.resize(static_cast<size_t>(p1_) * p2_);
    const double cv = cfg_.cv();
    for (int i = 0; i < p1_; ++i) {
        double f1 = static_cast<double>(i <= p1_ / 2 ? i : i - p1_) / p1_;
        for (int j = 0; j < p2_; ++j) {
            double f2 = static_cast<double>(j <= p2_ / 2 ? j : j - p2_) / p2_;
            double theta = 2.0 * std::numbers::pi * cv * std::hypot(f1, f2);
            cos_[static_cast<size_t>(i) * p2_ + j] = std::cos(theta);
        }
    }
}

namespace {

/// x(0, :) of the spatial field whose unitary spectrum is `spec`:
/// column sums followed by a unitary 1D inverse DFT.
void extract_sensor_row(const cvec& spec, int p1, int p2, cvec& row) {
    row.assign(p2, cd{0.0, 0.0});
    const cd* s = spec.data();
    for (int i = 0; i < p1; ++i) {
        const cd* line = s + static_cast<size_t>(i) * p2;
        for (int j = 0; j < p2; ++j) row[j] += line[j];
    }
    fft::ifft1(row, p2);
    double inv = 1.0 / std::sqrt(static_cast<double>(p1));
    for (auto& z : row) z *= inv;
}

/// Unitary spectrum of a field holding `row` on the sensor row (row 0) and
/// zero elsewhere: constant across row frequency.
void sensor_row_spectrum(const std::vector<double>& row_vals, int p1, int p2, cvec& rowhat) {
    rowhat.assign(p2, cd{0.0, 0.0});
    for (size_t c = 0; c < row_vals.size(); ++c) rowhat[c] = row_vals[c];
    fft::fft1(rowhat, p2);
    double inv = 1.0 / std::sqrt(static_cast<double>(p1));
    for (auto& z : rowhat) z *= inv;
}

}  // namespace

void Propagator::check_data(const DataField& g) const {
    if (g.values.cols != cfg_.n_sensor) throw std::invalid_argument("wave: data sensor count mismatch");
    if (g.values.rows < 1) throw std::invalid_argument("wave: empty data");
    if (!all_finite(g.values)) throw std::invalid_argument("wave: data must be finite");
}

DataField Propagator::forward(const ImageField& p0) const {
    const Array2d& u = p0.values;
    if (u.rows != cfg_.n_perp || u.cols != cfg_.n_sensor)
        throw std::invalid_argument("wave: p0 shape does not match the acoustic grid");
    if (!all_finite(u)) throw std::invalid_argument("wave: p0 must be finite");
    // The padding keeps every periodic image of the support at least c*T away
    // from the sensor row, so p0 never reaches the padded boundary itself.

    const size_t n = static_cast<size_t>(p1_) * p2_;
    cvec cur(n), prev(n);
    for (int r = 0; r < u.rows; ++r)
        for (int c = 0; c < u.cols; ++c) cur[static_cast<size_t>(r) * p2_ + c] = u.at(r, c);
    fft::fft2(cur, p1_, p2_);

    DataField g;
    g.dt = cfg_.h_t;
    g.cv = cfg_.cv();
    g.values = Array2d(n_t_, cfg_.n_sensor);

    cvec row;
    extract_sensor_row(cur, p1_, p2_, row);
    for (int c = 0; c < cfg_.n_sensor; ++c) g.values.at(0, c) = row[c].real();

    if (n_t_ > 1) {
        prev = cur;  // prev <- p^0
        for (size_t i = 0; i < n; ++i) cur[i] *= cos_[i];  // cur <- p^1
        extract_sensor_row(cur, p1_, p2_, row);
        for (int c = 0; c < cfg_.n_sensor; ++c) g.values.at(1, c) = row[c].real();
    }
    for (int t = 2; t < n_t_; ++t) {
        for (size_t i = 0; i < n; ++i) {
            cd next = 2.0 * cos_[i] * cur[i] - prev[i];
            prev[i] = cur[i];
            cur[i] = next;
        }
        extract_sensor_row(cur, p1_, p2_, row);
        for (int c = 0; c < cfg_.n_sensor; ++c) g.values.at(t, c) = row[c].real();
    }
    return g;
}

ImageField Propagator::adjoint(const DataField& g) const {
    check_data(g);
    const int T = g.values.rows;
    const size_t n = static_cast<size_t>(p1_) * p2_;

    // Co-state recursion a^n = R^T g[n] + L a^{n+1} - a^{n+2} run in Fourier
    // space; the sensor-row injection is constant across row frequency.
    cvec a(n), a2(n), rowhat;
    std::vector<double> row_vals(cfg_.n_sensor);
    for (int t = T - 1; t >= 1; --t) {
        for (int c = 0; c < cfg_.n_sensor; ++c) row_vals[c] = g.values.at(t, c);
        sensor_row_spectrum(row_vals, p1_, p2_, rowhat);
        for (int i = 0; i < p1_; ++i) {
            cd* arow = a.data() + static_cast<size_t>(i) * p2_;
            cd* a2row = a2.data() + static_cast<size_t>(i) * p2_;
            const double* crow = cos_.data() + static_cast<size_t>(i) * p2_;
            for (int j = 0; j < p2_; ++j) {
                cd next = rowhat[j] + 2.0 * crow[j] * arow[j] - a2row[j];
                a2row[j] = arow[j];
                arow[j] = next;
            }
        }
    }

    // result = Z^T ( R^T g[0] + (1/2) L a^1 - a^2 )
    for (int c = 0; c < cfg_.n_sensor; ++c) row_vals[c] = g.values.at(0, c);
    sensor_row_spectrum(row_vals, p1_, p2_, rowhat);
    cvec res(n);
    if (T >= 2) {
        for (int i = 0; i < p1_; ++i) {
            cd* rrow = res.data() + static_cast<size_t>(i) * p2_;
            const cd* arow = a.data() + static_cast<size_t>(i) * p2_;
            const cd* a2row = a2.data() + static_cast<size_t>(i) * p2_;
            const double* crow = cos_.data() + static_cast<size_t>(i) * p2_;
            for (int j = 0; j < p2_; ++j) rrow[j] = rowhat[j] + crow[j] * arow[j] - a2row[j];
        }
    } else {
        for (int i = 0; i < p1_; ++i)
            for (int j = 0; j < p2_; ++j) res[static_cast<size_t>(i) * p2_ + j] = rowhat[j];
    }
    fft::ifft2(res, p1_, p2_);

    ImageField out;
    out.spacing = cfg_.h_x;
    out.values = Array2d(cfg_.n_perp, cfg_.n_sensor);
    for (int r = 0; r < cfg_.n_perp; ++r)
        for (int c = 0; c < cfg_.n_sensor; ++c)
            out.values.at(r, c) = res[static_cast<size_t>(r) * p2_ + c].real();
    return out;
}

ImageField Propagator::time_reverse(const DataField& g,
                                    const std::optional<SamplingPattern>& pattern) const {
    check_data(g);
    if (pattern && pattern->n_sensor != cfg_.n_sensor)
        throw std::invalid_argument("wave: pattern/sensor count mismatch");
    const int T = g.values.rows;
    const size_t n = static_cast<size_t>(p1_) * p2_;

    cvec cur(n), prev(n), row, rowhat;
    std::vector<double> delta(cfg_.n_sensor);
    for (int t = 0; t < T; ++t) {
        // impose g(T-1-t) on the (sampled) sensor points
        extract_sensor_row(cur, p1_, p2_, row);
        for (int c = 0; c < cfg_.n_sensor; ++c) {
            bool imposed = !pattern || pattern->is_selected(c);
            delta[c] = imposed ? g.values.at(T - 1 - t, c) - row[c].real() : 0.0;
        }
        sensor_row_spectrum(delta, p1_, p2_, rowhat);
        for (int i = 0; i < p1_; ++i) {
            cd* crow = cur.data() + static_cast<size_t>(i) * p2_;
            for (int j = 0; j < p2_; ++j) crow[j] += rowhat[j];
        }
        if (t < T - 1) {
            for (size_t i = 0; i < n; ++i) {
                cd next = 2.0 * cos_[i] * cur[i] - prev[i];
                prev[i] = cur[i];
                cur[i] = next;
            }
        }
    }
    fft::ifft2(cur, p1_, p2_);

    ImageField out;
    out.spacing = cfg_.h_x;
    out.values = Array2d(cfg_.n_perp, cfg_.n_sensor);
    // Re-emission from a line in free space radiates into both half spaces,
    // so the planar-sensor reconstruction carries a factor 2 (as in the
    // planar universal backprojection formula).
    for (int r = 0; r < cfg_.n_perp; ++r)
        for (int c = 0; c < cfg_.n_sensor; ++c)
            out.values.at(r, c) = 2.0 * cur[static_cast<size_t>(r) * p2_ + c].real();
    return out;
}

DataField wave_forward(const ImageField& p0, const AcousticConfig& cfg) {
    return Propagator(cfg).forward(p0);
}

ImageField wave_adjoint(const DataField& g, const AcousticConfig& cfg) {
    return Propagator(cfg).adjoint(g);
}

ImageField wave_time_reverse(const DataField& g, const AcousticConfig& cfg,
                             const std::optional<SamplingPattern>& pattern) {
    return Propagator(cfg).time_reverse(g, pattern);
}

double wavefront_map(double theta) {
    if (!(theta > -std::numbers::pi / 2 && theta < std::numbers::pi / 2))
        throw std::invalid_argument("wavefront_map: theta must lie in (-pi/2, pi/2)");
    return std::atan(std::sin(theta));
}

}  // namespace pat
