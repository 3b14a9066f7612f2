#include "pat/wedge.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pat {

int WedgeSpec::in_range_count(int scale) const {
    int n = 0;
    for (const auto& a : angles)
        if (a.scale == scale && a.in_range) ++n;
    return n;
}

int WedgeSpec::total_count(int scale) const {
    int n = 0;
    for (const auto& a : angles)
        if (a.scale == scale) ++n;
    return n;
}

WedgeSpec discrete_angles(const Tiling& tiling, double cv, double theta_w) {
    if (cv <= 0.0 || cv > 1.0) throw std::invalid_argument("discrete_angles: cv must lie in (0, 1]");
    const double pi = std::numbers::pi;
    if (theta_w <= 0.0) theta_w = pi / 4.0;

    WedgeSpec spec;
    spec.theta_w = theta_w;
    spec.cv = cv;
    spec.tiling_id = tiling.id();

    for (int d = 0; d < tiling.n_directional_scales(); ++d) {
        int nw = tiling.n_angles(d) / 2;
        for (int wi = 0; wi < nw; ++wi) {
            const WedgeGeom& w = tiling.wedge(d, wi);
            double P8 = 0.0;  // L_j/8 = P/2
            {
                // recover P from the quadrant population: nw = 2P
                P8 = nw / 4.0;
            }
            double frac = (w.l - 0.5) / P8;
            WedgeAngle a;
            a.scale = d;
            a.l = w.l;
            a.wedge_index = wi;
            if (w.axis == 0) {
                // rows carry time: tangents compress by c_v
                a.quadrant = 'E';
                a.beta_hat = std::atan(cv * frac);
                a.beta_global = a.beta_hat;
            } else {
                a.quadrant = 'N';
                a.beta_hat = std::atan(frac / cv);
                a.beta_global = (a.beta_hat >= 0.0 ? 1.0 : -1.0) * (pi / 2.0 - std::abs(a.beta_hat));
            }
            a.in_range = std::abs(a.beta_global) <= theta_w + 1e-12;
            spec.angles.push_back(a);
        }
    }
    return spec;
}

namespace {

void check_spec(const Tiling& tiling, const WedgeSpec& spec) {
    if (spec.tiling_id != tiling.id())
        throw std::invalid_argument("WedgeSpec: built for a different tiling");
}

}  // namespace

CurveletCoeffs project_range(const CurveletCoeffs& coeffs, const Tiling& tiling,
                             const WedgeSpec& spec) {
    coeffs.check(tiling);
    check_spec(tiling, spec);
    CurveletCoeffs out = coeffs;
    for (const auto& a : spec.angles) {
        if (a.in_range) continue;
        const WedgeGeom& w = tiling.wedge(a.scale, a.wedge_index);
        size_t n = static_cast<size_t>(w.n_u) * w.n_v;
        size_t off_re = tiling.wedge_offset(a.scale, a.wedge_index, false);
        size_t off_im = tiling.wedge_offset(a.scale, a.wedge_index, true);
        std::fill_n(out.data.begin() + off_re, n, 0.0);
        std::fill_n(out.data.begin() + off_im, n, 0.0);
    }
    return out;
}

CurveletCoeffs analyze_wedge(const Array2d& u, const Tiling& tiling, const WedgeSpec& spec) {
    return project_range(analyze(u, tiling), tiling, spec);
}

Array2d synthesize_wedge(const CurveletCoeffs& coeffs, const Tiling& tiling, const WedgeSpec& spec) {
    return synthesize(project_range(coeffs, tiling, spec), tiling);
}

RangeEnergy range_energy(const CurveletCoeffs& coeffs, const Tiling& tiling, const WedgeSpec& spec) {
    coeffs.check(tiling);
    check_spec(tiling, spec);
    RangeEnergy e;
    size_t coarse_n = static_cast<size_t>(tiling.coarse().rows) * tiling.coarse().cols;
    for (size_t i = 0; i < coarse_n; ++i) e.coarse += coeffs.data[i] * coeffs.data[i];
    if (tiling.finest_block()) {
        const BlockGeom* b = tiling.finest_block();
        size_t n = static_cast<size_t>(b->rows) * b->cols;
        for (size_t i = 0; i < n; ++i) {
            double x = coeffs.data[tiling.finest_offset() + i];
            e.coarse += x * x;
        }
    }
    for (const auto& a : spec.angles) {
        const WedgeGeom& w = tiling.wedge(a.scale, a.wedge_index);
        size_t n = static_cast<size_t>(w.n_u) * w.n_v;
        double s = 0.0;
        for (bool im : {false, true}) {
            size_t off = tiling.wedge_offset(a.scale, a.wedge_index, im);
            for (size_t i = 0; i < n; ++i) s += coeffs.data[off + i] * coeffs.data[off + i];
        }
        (a.in_range ? e.in_range : e.out_of_range) += s;
    }
    return e;
}

Array2d wedge_mask(const Tiling& tiling, const WedgeSpec& spec) {
    check_spec(tiling, spec);
    Array2d labels = tiling.tiling_labels();
    // label ids: 1 = coarse, then wedges in construction order, then finest
    std::vector<double> value;
    value.push_back(0.5);  // coarse
    for (const auto& a : spec.angles) value.push_back(a.in_range ? 1.0 : 0.0);
    if (tiling.finest_block()) value.push_back(0.5);
    Array2d out(labels.rows, labels.cols);
    for (size_t i = 0; i < labels.v.size(); ++i) {
        int id = static_cast<int>(labels.v[i]);
        out.v[i] = id >= 1 && id <= static_cast<int>(value.size()) ? value[id - 1] : 0.0;
    }
    return out;
}

}  // namespace pat
