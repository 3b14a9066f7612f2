#include "pat/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pat {

namespace {

// Separable Gaussian blur, 11 taps, sigma 1.5, normalized. Valid-region
// statistics only (window fully inside the image) so no padding convention
// leaks into the score.
constexpr int kWin = 11;
constexpr int kHalf = kWin / 2;

std::vector<double> gaussian_taps() {
    std::vector<double> w(kWin);
    double s = 0.0;
    for (int i = 0; i < kWin; ++i) {
        double x = i - kHalf;
        w[i] = std::exp(-x * x / (2.0 * 1.5 * 1.5));
        s += w[i];
    }
    for (double& x : w) x /= s;
    return w;
}

double window_weighted(const Array2d& a, const Array2d& b, int r0, int c0,
                       const std::vector<double>& w, bool product) {
    double acc = 0.0;
    for (int i = 0; i < kWin; ++i)
        for (int j = 0; j < kWin; ++j) {
            double va = a.at(r0 + i, c0 + j);
            double vb = product ? b.at(r0 + i, c0 + j) : 1.0;
            acc += w[i] * w[j] * (product ? va * vb : va);
        }
    return acc;
}

}  // namespace

MetricsReport metrics(const ImageField& rec, const ImageField& ref) {
    const Array2d& x = rec.values;
    const Array2d& y = ref.values;
    if (!x.same_shape(y)) throw std::invalid_argument("metrics: dimension mismatch");
    if (x.rows < kWin || x.cols < kWin)
        throw std::invalid_argument("metrics: image smaller than the SSIM window");

    MetricsReport rep;
    double se = 0.0, ref_e = 0.0, diff_e = 0.0, peak = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double d = x.v[i] - y.v[i];
        se += d * d;
        ref_e += y.v[i] * y.v[i];
        diff_e += d * d;
        peak = std::max(peak, y.v[i]);
    }
    rep.mse = se / static_cast<double>(x.size());

    const double inf = std::numeric_limits<double>::infinity();
    rep.psnr = rep.mse > 0.0 && peak > 0.0 ? 10.0 * std::log10(peak * peak / rep.mse) : inf;
    rep.snr = diff_e > 0.0 ? 20.0 * std::log10(std::sqrt(ref_e) / std::sqrt(diff_e)) : inf;

    // SSIM
    const double L = peak > 0.0 ? peak : 1.0;
    const double c1 = (0.01 * L) * (0.01 * L);
    const double c2 = (0.03 * L) * (0.03 * L);
    static const std::vector<double> w = gaussian_taps();
    double ssim_acc = 0.0;
    long count = 0;
    for (int r = 0; r + kWin <= x.rows; ++r) {
        for (int c = 0; c + kWin <= x.cols; ++c) {
            double mx = window_weighted(x, x, r, c, w, false);
            double my = window_weighted(y, y, r, c, w, false);
            double mxx = window_weighted(x, x, r, c, w, true);
            double myy = window_weighted(y, y, r, c, w, true);
            double mxy = window_weighted(x, y, r, c, w, true);
            double vx = mxx - mx * mx;
            double vy = myy - my * my;
            double cxy = mxy - mx * my;
            double s = ((2 * mx * my + c1) * (2 * cxy + c2)) /
                       ((mx * mx + my * my + c1) * (vx + vy + c2));
            ssim_acc += s;
            ++count;
        }
    }
    rep.ssim = ssim_acc / static_cast<double>(count);
    return rep;
}

}  // namespace pat
