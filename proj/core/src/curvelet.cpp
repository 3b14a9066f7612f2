#include "pat/curvelet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include "pat/fft.hpp"

namespace pat {

using fft::cvec;
using cd = std::complex<double>;

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

/// C-infinity step rising 0 -> 1 over [0, 1], normalized so that
/// rise(x)^2 + rise(1-x)^2 = 1 (Meyer window pair).
double meyer_rise(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double num = std::exp(1.0 - 1.0 / (1.0 - std::exp(1.0 - 1.0 / (1.0 - x))));
    double den = std::exp(1.0 - 1.0 / (1.0 - std::exp(1.0 - 1.0 / x)));
    return num / std::sqrt(num * num + den * den);
}

int imod(int v, int n) { return ((v % n) + n) % n; }

/// Per-axis radial lowpass: 1 on |v| <= plateau, Meyer fall to 0 at |v| =
/// outer. `padded` marks the initial lowpass of the extended finest grid when
/// the axis length is divisible by 3 (one extra forced zero keeps the
/// periodization an exact partition of unity).
struct RadialProfile {
    int plateau = 0;
    int outer = 0;
    int wlen = 1;
    bool padded = false;

    double at(int v) const {
        int a = std::abs(v);
        if (a <= plateau) return 1.0;
        if (a > outer) return 0.0;
        if (padded && a == outer) return 0.0;
        double x = static_cast<double>(a - plateau - 1) / wlen;
        return meyer_rise(1.0 - x);
    }
};

RadialProfile make_profile(double m, bool padded) {
    RadialProfile p;
    p.plateau = static_cast<int>(std::floor(m));
    p.outer = static_cast<int>(std::floor(2.0 * m));
    p.padded = padded;
    p.wlen = p.outer - p.plateau - 1 - (padded ? 1 : 0);
    if (p.plateau < 1 || p.wlen < 1)
        throw std::invalid_argument("Tiling: grid too small for the requested scale count");
    return p;
}

struct ScaleGeom {
    double m1 = 0.0, m2 = 0.0;
    int R1 = 0, R2 = 0;            // grid radius per axis
    RadialProfile lp1, lp2;        // this scale's lowpass
    RadialProfile ol1, ol2;        // outer lowpass (next scale / extension)

    double corona(int v1, int v2) const {
        double ol = ol1.at(v1) * ol2.at(v2);
        if (ol == 0.0) return 0.0;
        double lp = lp1.at(v1) * lp2.at(v2);
        return ol * std::sqrt(std::max(0.0, 1.0 - lp * lp));
    }
};

struct AngularFactors {
    bool corner_lo = false, corner_hi = false;
    double tau_lo = 0.0, tau_hi = 0.0;  // wedge boundaries (bin tangent)
    double h = 0.0, hc = 0.0;

    // a: normalized axis coordinate (> 0), b: normalized cross coordinate
    double eval(double a, double b) const {
        double tau = b / a;
        double left, right;
        if (corner_lo) {
            double den = a - b;
            left = den <= 0.0 ? 1.0 : meyer_rise(((a + b) / den / hc + 1.0) * 0.5);
        } else {
            left = meyer_rise((tau - (tau_lo - h)) / (2.0 * h));
        }
        if (corner_hi) {
            double den = a + b;
            right = den <= 0.0 ? 1.0 : meyer_rise(((a - b) / den / hc + 1.0) * 0.5);
        } else {
            right = meyer_rise(1.0 - (tau - (tau_hi - h)) / (2.0 * h));
        }
        return left * right;
    }

    double tau_support_lo() const { return corner_lo ? -(1.0 + hc) / (1.0 - hc) : tau_lo - h; }
    double tau_support_hi() const { return corner_hi ? (1.0 + hc) / (1.0 - hc) : tau_hi + h; }
};

uint64_t fnv_mix(uint64_t h, uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
    return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Tiling build_tiling_impl(int n1, int n2, int n_scales, int n_angles2, bool wavelets_finest) {
    if (n1 < 8 || n2 < 8) throw std::invalid_argument("Tiling: grid must be at least 8x8");
    if (n_scales < 2) throw std::invalid_argument("Tiling: need at least 2 scales");
    if (wavelets_finest && n_scales < 3)
        throw std::invalid_argument("Tiling: wavelets at finest needs at least 3 scales");
    if (n_angles2 < 8 || n_angles2 % 8 != 0)
        throw std::invalid_argument("Tiling: angle count must be a positive multiple of 8");

    Tiling t;
    t.n1_ = n1;
    t.n2_ = n2;
    t.n_scales_ = n_scales;
    t.n_angles2_ = n_angles2;
    t.wavelets_finest_ = wavelets_finest;

    const double M1 = n1 / 3.0, M2 = n2 / 3.0;
    const int J = n_scales;
    const int n_dir = wavelets_finest ? J - 2 : J - 1;  // directional scales j = 2 .. ...

    // Directional scale geometry, coarsest (d = 0, j = 2) to finest.
    std::vector<ScaleGeom> geo(n_dir);
    for (int d = 0; d < n_dir; ++d) {
        int j = d + 2;
        ScaleGeom& g = geo[d];
        g.m1 = M1 * std::pow(2.0, j - J - 1);
        g.m2 = M2 * std::pow(2.0, j - J - 1);
        g.R1 = static_cast<int>(std::floor(4.0 * g.m1));
        g.R2 = static_cast<int>(std::floor(4.0 * g.m2));
        g.lp1 = make_profile(g.m1, false);
        g.lp2 = make_profile(g.m2, false);
        bool top = d == n_dir - 1;
        bool extended_top = top && !wavelets_finest;
        g.ol1 = make_profile(2.0 * g.m1, extended_top && n1 % 3 == 0);
        g.ol2 = make_profile(2.0 * g.m2, extended_top && n2 % 3 == 0);
    }

    // Wedge tables.
    t.scales_.resize(n_dir);
    for (int d = 0; d < n_dir; ++d) {
        const ScaleGeom& g = geo[d];
        int L = n_angles2 << ((d + 1) / 2);  // doubles every second scale
        int P = L / 4;
        if (P % 2 != 0) throw std::invalid_argument("Tiling: angles per quadrant must be even");
        if (2 * std::min(g.R1, g.R2) < P)
            throw std::invalid_argument("Tiling: angle count too large for this grid");

        for (int axis = 0; axis < 2; ++axis) {
            int Ru = axis == 0 ? g.R1 : g.R2;
            int Rv = axis == 0 ? g.R2 : g.R1;
            for (int l = -P / 2 + 1; l <= P / 2; ++l) {
                AngularFactors ang;
                ang.h = 1.0 / P;
                ang.hc = 0.5 / P;
                ang.tau_lo = 2.0 * (l - 1) / P;
                ang.tau_hi = 2.0 * l / P;
                ang.corner_lo = (l - 1 == -P / 2);
                ang.corner_hi = (l == P / 2);

                WedgeGeom w;
                w.axis = axis;
                w.l = l;
                w.beta_bin = std::atan((l - 0.5) / (P / 2.0));

                // Narrow wedges on anisotropic grids may miss every integer
                // bin at some inner radii; such rows are kept as zero-length
                // entries so row index i always maps to coordinate u0 + i.
                std::vector<std::vector<double>> row_vals;
                std::vector<int> row_start;
                int first_u = -1, last_u = -1;
                for (int u = 1; u <= Ru; ++u) {
                    double a = static_cast<double>(u) / Ru;
                    double scale_v = static_cast<double>(u) * Rv / Ru;
                    int vlo = std::max(-Rv, static_cast<int>(std::floor(ang.tau_support_lo() * scale_v)) - 1);
                    int vhi = std::min(Rv, static_cast<int>(std::ceil(ang.tau_support_hi() * scale_v)) + 1);
                    std::vector<double> scan(static_cast<size_t>(vhi - vlo + 1), 0.0);
                    for (int v = vlo; v <= vhi; ++v) {
                        double b = static_cast<double>(v) / Rv;
                        int v1 = axis == 0 ? u : v;
                        int v2 = axis == 0 ? v : u;
                        scan[v - vlo] = g.corona(v1, v2) * ang.eval(a, b);
                    }
                    int lo = 0, hi = static_cast<int>(scan.size()) - 1;
                    while (lo <= hi && scan[lo] == 0.0) ++lo;
                    while (hi >= lo && scan[hi] == 0.0) --hi;
                    if (lo > hi) {
                        if (first_u >= 0) {
                            row_vals.emplace_back();
                            row_start.push_back(0);
                        }
                        continue;
                    }
                    if (first_u < 0) first_u = u;
                    last_u = u;
                    row_vals.emplace_back(scan.begin() + lo, scan.begin() + hi + 1);
                    row_start.push_back(vlo + lo);
                }
                if (first_u < 0) throw std::invalid_argument("Tiling: empty wedge (too many angles)");
                row_vals.resize(last_u - first_u + 1);  // drop trailing empties
                row_start.resize(last_u - first_u + 1);

                w.u0 = first_u;
                w.n_u = static_cast<int>(row_vals.size());
                w.n_v = 0;
                for (const auto& rv : row_vals) w.n_v = std::max(w.n_v, static_cast<int>(rv.size()));
                w.v_start = std::move(row_start);
                w.v_len.resize(w.n_u);
                w.win.assign(static_cast<size_t>(w.n_u) * w.n_v, 0.0);
                for (int i = 0; i < w.n_u; ++i) {
                    w.v_len[i] = static_cast<int>(row_vals[i].size());
                    std::copy(row_vals[i].begin(), row_vals[i].end(),
                              w.win.begin() + static_cast<size_t>(i) * w.n_v);
                }
                t.scales_[d].push_back(std::move(w));
            }
        }
    }

    // Coarse isotropic block: what remains after the coarsest directional
    // lowpass, on its centered crop.
    {
        RadialProfile c1 = geo[0].lp1, c2 = geo[0].lp2;
        int q1 = c1.outer, q2 = c2.outer;
        BlockGeom& b = t.coarse_;
        b.rows = 2 * q1 + 1;
        b.cols = 2 * q2 + 1;
        b.map_r.resize(b.rows);
        b.map_c.resize(b.cols);
        for (int s = 0; s < b.rows; ++s) b.map_r[s] = imod(((s + q1) % b.rows) - q1, n1);
        for (int s = 0; s < b.cols; ++s) b.map_c[s] = imod(((s + q2) % b.cols) - q2, n2);
        b.win.assign(static_cast<size_t>(b.rows) * b.cols, 0.0);
        for (int s1 = 0; s1 < b.rows; ++s1) {
            int v1 = ((s1 + q1) % b.rows) - q1;
            for (int s2 = 0; s2 < b.cols; ++s2) {
                int v2 = ((s2 + q2) % b.cols) - q2;
                b.win[static_cast<size_t>(s1) * b.cols + s2] = c1.at(v1) * c2.at(v2);
            }
        }
    }

    // Finest isotropic block (wavelets-at-finest toggle): full grid hipass.
    if (wavelets_finest) {
        RadialProfile f1 = make_profile(M1 / 2.0, false);
        RadialProfile f2 = make_profile(M2 / 2.0, false);
        BlockGeom& b = t.finest_;
        b.rows = n1;
        b.cols = n2;
        b.map_r.resize(n1);
        b.map_c.resize(n2);
        for (int s = 0; s < n1; ++s) b.map_r[s] = s;
        for (int s = 0; s < n2; ++s) b.map_c[s] = s;
        b.win.assign(static_cast<size_t>(n1) * n2, 0.0);
        for (int s1 = 0; s1 < n1; ++s1) {
            int v1 = s1 <= n1 / 2 ? s1 : s1 - n1;
            for (int s2 = 0; s2 < n2; ++s2) {
                int v2 = s2 <= n2 / 2 ? s2 : s2 - n2;
                double lp = f1.at(v1) * f2.at(v2);
                b.win[static_cast<size_t>(s1) * n2 + s2] = std::sqrt(std::max(0.0, 1.0 - lp * lp));
            }
        }
    }

    // Partition-of-unity accumulation over the original grid, periodic images
    // and antipodal wedges included, then exact normalization.
    Array2d D(n1, n2, 0.0);
    for (auto& scale : t.scales_)
        for (auto& w : scale)
            for (int i = 0; i < w.n_u; ++i)
                for (int k = 0; k < w.v_len[i]; ++k) {
                    double win = w.win_at(i, k);
                    if (win == 0.0) continue;
                    int u = w.u0 + i, v = w.v_start[i] + k;
                    int v1 = w.axis == 0 ? u : v;
                    int v2 = w.axis == 0 ? v : u;
                    D.at(imod(v1, n1), imod(v2, n2)) += win * win;
                    D.at(imod(-v1, n1), imod(-v2, n2)) += win * win;
                }
    auto accum_block = [&](const BlockGeom& b) {
        for (int s1 = 0; s1 < b.rows; ++s1)
            for (int s2 = 0; s2 < b.cols; ++s2) {
                double win = b.win[static_cast<size_t>(s1) * b.cols + s2];
                D.at(b.map_r[s1], b.map_c[s2]) += win * win;
            }
    };
    accum_block(t.coarse_);
    if (wavelets_finest) accum_block(t.finest_);

    double residual = 0.0;
    for (double x : D.v) {
        residual = std::max(residual, std::abs(x - 1.0));
        if (x < 0.2) throw std::logic_error("Tiling: coverage hole in the frequency plane");
    }
    t.pou_residual_ = residual;

    for (auto& scale : t.scales_)
        for (auto& w : scale)
            for (int i = 0; i < w.n_u; ++i)
                for (int k = 0; k < w.v_len[i]; ++k) {
                    double& win = w.win[static_cast<size_t>(i) * w.n_v + k];
                    if (win == 0.0) continue;
                    int u = w.u0 + i, v = w.v_start[i] + k;
                    int v1 = w.axis == 0 ? u : v;
                    int v2 = w.axis == 0 ? v : u;
                    win /= std::sqrt(D.at(imod(v1, n1), imod(v2, n2)));
                }
    auto norm_block = [&](BlockGeom& b) {
        for (int s1 = 0; s1 < b.rows; ++s1)
            for (int s2 = 0; s2 < b.cols; ++s2) {
                double& win = b.win[static_cast<size_t>(s1) * b.cols + s2];
                if (win != 0.0) win /= std::sqrt(D.at(b.map_r[s1], b.map_c[s2]));
            }
    };
    norm_block(t.coarse_);
    if (wavelets_finest) norm_block(t.finest_);

    // Flat coefficient layout: coarse, then per scale all Re blocks followed
    // by all Im blocks, then the finest isotropic block.
    size_t off = static_cast<size_t>(t.coarse_.rows) * t.coarse_.cols;
    t.wedge_offsets_.resize(n_dir);
    for (int d = 0; d < n_dir; ++d) {
        size_t nw = t.scales_[d].size();
        t.wedge_offsets_[d].resize(2 * nw);
        for (size_t im = 0; im < 2; ++im)
            for (size_t wi = 0; wi < nw; ++wi) {
                t.wedge_offsets_[d][im * nw + wi] = off;
                const WedgeGeom& w = t.scales_[d][wi];
                off += static_cast<size_t>(w.n_u) * w.n_v;
            }
    }
    t.finest_offset_ = off;
    if (wavelets_finest) off += static_cast<size_t>(t.finest_.rows) * t.finest_.cols;
    t.total_ = off;

    uint64_t h = 1469598103934665603ull;
    h = fnv_mix(h, n1);
    h = fnv_mix(h, n2);
    h = fnv_mix(h, n_scales);
    h = fnv_mix(h, n_angles2);
    h = fnv_mix(h, wavelets_finest ? 1 : 0);
    h = fnv_mix(h, t.total_);
    t.id_ = h;
    return t;
}

Tiling Tiling::build(int rows, int cols, int n_scales, int n_angles_coarse2, bool wavelets_at_finest) {
    return build_tiling_impl(rows, cols, n_scales, n_angles_coarse2, wavelets_at_finest);
}

size_t Tiling::wedge_offset(int d, int w, bool im) const {
    size_t nw = scales_[d].size();
    return wedge_offsets_[d][(im ? nw : 0) + w];
}

Array2d Tiling::tiling_labels() const {
    Array2d best(n1_, n2_, 0.0), label(n1_, n2_, 0.0);
    double id = 1.0;
    auto consider = [&](int r, int c, double win, double lab) {
        double w2 = win * win;
        if (w2 > best.at(r, c)) {
            best.at(r, c) = w2;
            label.at(r, c) = lab;
        }
    };
    for (int s1 = 0; s1 < coarse_.rows; ++s1)
        for (int s2 = 0; s2 < coarse_.cols; ++s2)
            consider(coarse_.map_r[s1], coarse_.map_c[s2],
                     coarse_.win[static_cast<size_t>(s1) * coarse_.cols + s2], id);
    for (const auto& scale : scales_)
        for (const auto& w : scale) {
            id += 1.0;
            for (int i = 0; i < w.n_u; ++i)
                for (int k = 0; k < w.v_len[i]; ++k) {
                    int u = w.u0 + i, v = w.v_start[i] + k;
                    int v1 = w.axis == 0 ? u : v;
                    int v2 = w.axis == 0 ? v : u;
                    consider(imod(v1, n1_), imod(v2, n2_), w.win_at(i, k), id);
                    consider(imod(-v1, n1_), imod(-v2, n2_), w.win_at(i, k), id);
                }
        }
    if (wavelets_finest_) {
        id += 1.0;
        for (int s1 = 0; s1 < finest_.rows; ++s1)
            for (int s2 = 0; s2 < finest_.cols; ++s2)
                consider(finest_.map_r[s1], finest_.map_c[s2],
                         finest_.win[static_cast<size_t>(s1) * finest_.cols + s2], id);
    }
    // center the zero frequency for display
    Array2d shifted(n1_, n2_);
    for (int r = 0; r < n1_; ++r)
        for (int c = 0; c < n2_; ++c)
            shifted.at(r, c) = label.at(imod(r - n1_ / 2, n1_), imod(c - n2_ / 2, n2_));
    return shifted;
}

void CurveletCoeffs::check(const Tiling& t) const {
    if (tiling_id != t.id() || data.size() != t.total_coeffs())
        throw std::invalid_argument("CurveletCoeffs: tiling mismatch");
}

// ---------------------------------------------------------------------------
// Transforms

CurveletCoeffs analyze(const Array2d& u, const Tiling& t) {
    if (u.rows != t.rows() || u.cols != t.cols())
        throw std::invalid_argument("analyze: dimension mismatch with tiling");
    const int n1 = t.rows(), n2 = t.cols();

    cvec X(static_cast<size_t>(n1) * n2);
    for (size_t i = 0; i < X.size(); ++i) X[i] = u.v[i];
    fft::fft2(X, n1, n2);

    CurveletCoeffs out;
    out.tiling_id = t.id();
    out.data.assign(t.total_coeffs(), 0.0);

    auto block_analyze = [&](const BlockGeom& b, size_t off) {
        cvec S(static_cast<size_t>(b.rows) * b.cols);
        for (int s1 = 0; s1 < b.rows; ++s1)
            for (int s2 = 0; s2 < b.cols; ++s2) {
                size_t si = static_cast<size_t>(s1) * b.cols + s2;
                S[si] = b.win[si] * X[static_cast<size_t>(b.map_r[s1]) * n2 + b.map_c[s2]];
            }
        fft::ifft2(S, b.rows, b.cols);
        for (size_t si = 0; si < S.size(); ++si) out.data[off + si] = S[si].real();
    };
    block_analyze(t.coarse(), t.coarse_offset());
    if (t.finest_block()) block_analyze(*t.finest_block(), t.finest_offset());

    for (int d = 0; d < t.n_directional_scales(); ++d) {
        int nw = t.n_angles(d) / 2;
        for (int wi = 0; wi < nw; ++wi) {
            const WedgeGeom& w = t.wedge(d, wi);
            cvec Y(static_cast<size_t>(w.n_u) * w.n_v, cd{0.0, 0.0});
            for (int i = 0; i < w.n_u; ++i) {
                size_t row = static_cast<size_t>(i) * w.n_v;
                for (int k = 0; k < w.v_len[i]; ++k) {
                    double win = w.win[row + k];
                    if (win == 0.0) continue;
                    int uu = w.u0 + i, vv = w.v_start[i] + k;
                    int v1 = w.axis == 0 ? uu : vv;
                    int v2 = w.axis == 0 ? vv : uu;
                    Y[row + k] = win * X[static_cast<size_t>(imod(v1, n1)) * n2 + imod(v2, n2)];
                }
            }
            fft::ifft2(Y, w.n_u, w.n_v);
            size_t off_re = t.wedge_offset(d, wi, false);
            size_t off_im = t.wedge_offset(d, wi, true);
            for (size_t i = 0; i < Y.size(); ++i) {
                out.data[off_re + i] = kSqrt2 * Y[i].real();
                out.data[off_im + i] = kSqrt2 * Y[i].imag();
            }
        }
    }
    return out;
}

Array2d synthesize(const CurveletCoeffs& c, const Tiling& t) {
    c.check(t);
    const int n1 = t.rows(), n2 = t.cols();
    cvec acc(static_cast<size_t>(n1) * n2, cd{0.0, 0.0});

    auto block_synth = [&](const BlockGeom& b, size_t off) {
        cvec S(static_cast<size_t>(b.rows) * b.cols);
        for (size_t si = 0; si < S.size(); ++si) S[si] = c.data[off + si];
        fft::fft2(S, b.rows, b.cols);
        for (int s1 = 0; s1 < b.rows; ++s1)
            for (int s2 = 0; s2 < b.cols; ++s2) {
                size_t si = static_cast<size_t>(s1) * b.cols + s2;
                acc[static_cast<size_t>(b.map_r[s1]) * n2 + b.map_c[s2]] += b.win[si] * S[si];
            }
    };
    block_synth(t.coarse(), t.coarse_offset());
    if (t.finest_block()) block_synth(*t.finest_block(), t.finest_offset());

    for (int d = 0; d < t.n_directional_scales(); ++d) {
        int nw = t.n_angles(d) / 2;
        for (int wi = 0; wi < nw; ++wi) {
            const WedgeGeom& w = t.wedge(d, wi);
            size_t off_re = t.wedge_offset(d, wi, false);
            size_t off_im = t.wedge_offset(d, wi, true);
            cvec Y(static_cast<size_t>(w.n_u) * w.n_v);
            for (size_t i = 0; i < Y.size(); ++i)
                Y[i] = kSqrt2 * cd{c.data[off_re + i], c.data[off_im + i]};
            fft::fft2(Y, w.n_u, w.n_v);
            for (int i = 0; i < w.n_u; ++i) {
                size_t row = static_cast<size_t>(i) * w.n_v;
                for (int k = 0; k < w.v_len[i]; ++k) {
                    double win = w.win[row + k];
                    if (win == 0.0) continue;
                    int uu = w.u0 + i, vv = w.v_start[i] + k;
                    int v1 = w.axis == 0 ? uu : vv;
                    int v2 = w.axis == 0 ? vv : uu;
                    acc[static_cast<size_t>(imod(v1, n1)) * n2 + imod(v2, n2)] += win * Y[row + k];
                }
            }
        }
    }

    fft::ifft2(acc, n1, n2);
    Array2d out(n1, n2);
    // the wedge scatter covers half the plane; the real part completes the
    // Hermitian half and halves nothing thanks to the sqrt(2) pairing
    for (size_t i = 0; i < acc.size(); ++i) out.v[i] = acc[i].real();
    return out;
}

double best_s_term_error(const Array2d& u, const Tiling& t, size_t s) {
    if (s > t.total_coeffs()) throw std::invalid_argument("best_s_term_error: s out of range");
    double nu = norm2(u);
    if (nu == 0.0) return 0.0;
    CurveletCoeffs c = analyze(u, t);
    if (s < c.data.size()) {
        std::vector<size_t> idx(c.data.size());
        std::iota(idx.begin(), idx.end(), size_t{0});
        std::nth_element(idx.begin(), idx.begin() + s, idx.end(), [&](size_t a, size_t b) {
            double fa = std::abs(c.data[a]), fb = std::abs(c.data[b]);
            return fa != fb ? fa > fb : a < b;
        });
        for (size_t i = s; i < idx.size(); ++i) c.data[idx[i]] = 0.0;
    }
    Array2d rec = synthesize(c, t);
    double err = 0.0;
    for (size_t i = 0; i < rec.v.size(); ++i) {
        double d = rec.v[i] - u.v[i];
        err += d * d;
    }
    return std::sqrt(err) / nu;
}

}  // namespace pat
