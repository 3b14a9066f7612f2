#include "pat/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace pat {

AcousticConfig AcousticConfig::from_cv(double c, double h_x, double cv, int n_perp, int n_sensor) {
    if (cv <= 0.0 || cv > 1.0) throw std::invalid_argument("AcousticConfig: c_v must lie in (0, 1]");
    AcousticConfig cfg;
    cfg.c = c;
    cfg.h_x = h_x;
    cfg.h_t = cv * h_x / c;
    cfg.n_perp = n_perp;
    cfg.n_sensor = n_sensor;
    cfg.validate();
    cfg.T = compute_n_t(cfg) * cfg.h_t;
    return cfg;
}

void AcousticConfig::validate() const {
    if (c <= 0.0) throw std::invalid_argument("AcousticConfig: c must be positive");
    if (h_x <= 0.0) throw std::invalid_argument("AcousticConfig: h_x must be positive");
    if (h_t <= 0.0) throw std::invalid_argument("AcousticConfig: h_t must be positive");
    if (n_perp < 1) throw std::invalid_argument("AcousticConfig: n_perp must be >= 1");
    if (n_sensor < 2) throw std::invalid_argument("AcousticConfig: n_sensor must be >= 2");
    double v = cv();
    if (v > 1.0 + 1e-12)
        throw std::invalid_argument("AcousticConfig: c_v > 1 (temporally aliased acquisition)");
}

double AcousticConfig::x_max() const {
    return std::hypot(static_cast<double>(n_perp), static_cast<double>(n_sensor)) * h_x;
}

double compute_cv(const AcousticConfig& cfg) {
    cfg.validate();
    return cfg.cv();
}

int compute_n_t(const AcousticConfig& cfg) {
    cfg.validate();
    double steps = cfg.x_max() / (cfg.cv() * cfg.h_x);
    return static_cast<int>(std::ceil(steps));
}

namespace {
int round_half_away(double x) {
    return static_cast<int>(x >= 0.0 ? std::floor(x + 0.5) : std::ceil(x - 0.5));
}
}  // namespace

UpscaleResult compute_upscale(double n_t, double n_perp, int d, int n_sensor) {
    if (d != 2 && d != 3) throw std::invalid_argument("compute_upscale: d must be 2 or 3");
    if (n_perp < 1.0) throw std::invalid_argument("compute_upscale: n_perp must be >= 1");
    if (n_t < n_perp) throw std::invalid_argument("compute_upscale: n_t must be >= n_perp");
    UpscaleResult r;
    r.alpha = std::pow(n_t / n_perp, 1.0 / d);
    if (d == 2) {
        r.dims[0] = round_half_away(r.alpha * n_perp);
        r.dims[1] = n_sensor > 0 ? round_half_away(r.alpha * n_sensor) : 0;
    }
    return r;
}

ImageField bilinear_upscale(const ImageField& img, int rows, int cols) {
    const Array2d& src = img.values;
    if (rows < src.rows || cols < src.cols)
        throw std::invalid_argument("bilinear_upscale: target dims must be >= source dims");
    if (rows == src.rows && cols == src.cols) return img;

    ImageField out;
    out.values = Array2d(rows, cols);
    out.spacing = img.spacing * (rows > 1 ? static_cast<double>(src.rows - 1) / (rows - 1) : 1.0);

    double sr = rows > 1 ? static_cast<double>(src.rows - 1) / (rows - 1) : 0.0;
    double sc = cols > 1 ? static_cast<double>(src.cols - 1) / (cols - 1) : 0.0;
    for (int r = 0; r < rows; ++r) {
        double y = r * sr;
        int y0 = static_cast<int>(y);
        if (y0 > src.rows - 2) y0 = src.rows >= 2 ? src.rows - 2 : 0;
        double fy = src.rows >= 2 ? y - y0 : 0.0;
        for (int ccol = 0; ccol < cols; ++ccol) {
            double x = ccol * sc;
            int x0 = static_cast<int>(x);
            if (x0 > src.cols - 2) x0 = src.cols >= 2 ? src.cols - 2 : 0;
            double fx = src.cols >= 2 ? x - x0 : 0.0;
            int x1 = src.cols >= 2 ? x0 + 1 : x0;
            int y1 = src.rows >= 2 ? y0 + 1 : y0;
            double val = (1 - fy) * ((1 - fx) * src.at(y0, x0) + fx * src.at(y0, x1)) +
                         fy * ((1 - fx) * src.at(y1, x0) + fx * src.at(y1, x1));
            out.values.at(r, ccol) = val;
        }
    }
    return out;
}

}  // namespace pat
