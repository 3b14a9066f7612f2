#include "pat/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pat {

void PhantomSpec::validate() const {
    if (n_perp < 1 || n_sensor < 2) throw std::invalid_argument("PhantomSpec: bad dims");
    if (margin < 1) throw std::invalid_argument("PhantomSpec: margin must be >= 1");
    if (2 * margin + 2 >= n_perp || 2 * margin + 2 >= n_sensor)
        throw std::invalid_argument("PhantomSpec: dims too small for margins");
    if (radius_min <= 0.0 || radius_max < radius_min)
        throw std::invalid_argument("PhantomSpec: bad radius range");
    if (amp_min <= 0.0 || amp_max < amp_min || amp_max > 1.0)
        throw std::invalid_argument("PhantomSpec: amplitudes must satisfy 0 < amp_min <= amp_max <= 1");
    if (vessels < 0) throw std::invalid_argument("PhantomSpec: negative vessel count");
}

ImageField make_phantom(const PhantomSpec& spec, double spacing) {
    spec.validate();
    ImageField img;
    img.values = Array2d(spec.n_perp, spec.n_sensor);
    img.spacing = spacing;

    std::mt19937_64 rng(spec.seed);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };

    // Control points stay inside the margins with extra clearance for the
    // cross-section radius.
    for (int k = 0; k < spec.vessels; ++k) {
        double radius = uni(spec.radius_min, spec.radius_max);
        double amp = uni(spec.amp_min, spec.amp_max);
        double clear = spec.margin + 1.25 * radius + 1.0;  // margin + rasterized cut
        double rlo = clear, rhi = spec.n_perp - 1 - clear;
        double clo = clear, chi = spec.n_sensor - 1 - clear;
        if (rhi <= rlo || chi <= clo) continue;

        // Vessels run roughly along the sensor direction, like a vasculature
        // slice under a flat detector.
        double r0 = uni(rlo, rhi), r2 = uni(rlo, rhi);
        double c0 = uni(clo, clo + 0.25 * (chi - clo));
        double c2 = uni(chi - 0.25 * (chi - clo), chi);
        double r1 = uni(rlo, rhi);
        double c1 = uni(clo, chi);

        double sigma = radius / 2.0;
        double cut = 2.5 * sigma;
        int steps = static_cast<int>(4.0 * std::hypot(c2 - c0, r2 - r0)) + 8;
        for (int s = 0; s <= steps; ++s) {
            double t = static_cast<double>(s) / steps;
            double mt = 1.0 - t;
            double pr = mt * mt * r0 + 2 * mt * t * r1 + t * t * r2;
            double pc = mt * mt * c0 + 2 * mt * t * c1 + t * t * c2;
            int rmin = std::max(0, static_cast<int>(std::floor(pr - cut)));
            int rmax = std::min(spec.n_perp - 1, static_cast<int>(std::ceil(pr + cut)));
            int cmin = std::max(0, static_cast<int>(std::floor(pc - cut)));
            int cmax = std::min(spec.n_sensor - 1, static_cast<int>(std::ceil(pc + cut)));
            for (int r = rmin; r <= rmax; ++r) {
                for (int c = cmin; c <= cmax; ++c) {
                    double d2 = (r - pr) * (r - pr) + (c - pc) * (c - pc);
                    if (d2 > cut * cut) continue;
                    double val = amp * std::exp(-d2 / (2.0 * sigma * sigma));
                    // max-blend keeps overlaps bounded by the vessel amplitude
                    img.values.at(r, c) = std::max(img.values.at(r, c), val);
                }
            }
        }
    }

    // Hard-enforce compact support: zero out the margin ring and clip tiny
    // Gaussian tails so the support is genuinely compact.
    for (int r = 0; r < spec.n_perp; ++r)
        for (int c = 0; c < spec.n_sensor; ++c) {
            bool in_margin = r < spec.margin || r >= spec.n_perp - spec.margin || c < spec.margin ||
                             c >= spec.n_sensor - spec.margin;
            double& x = img.values.at(r, c);
            if (in_margin || x < 1e-3) x = 0.0;
            if (x > 1.0) x = 1.0;
        }
    return img;
}

}  // namespace pat
