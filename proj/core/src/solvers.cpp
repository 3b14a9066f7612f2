#include "pat/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pat {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Vec axpy(double a, const Vec& x, const Vec& y) {  // a*x + y
    Vec out(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + y[i];
    return out;
}

double l1_weighted(const Vec& lambda, const Vec& f) {
    double s = 0.0;
    for (size_t i = 0; i < f.size(); ++i) s += lambda[i] * std::abs(f[i]);
    return s;
}

size_t sparsity_target(size_t m, double C, size_t ambient_n, size_t n_coeffs) {
    double s = static_cast<double>(m) / (C * std::log(static_cast<double>(ambient_n)));
    auto S = static_cast<size_t>(std::ceil(s));
    if (S < 1) S = 1;
    if (S > n_coeffs) S = n_coeffs;
    return S;
}

}  // namespace

void SolverConfig::validate() const {
    if (tau <= 0.0 || mu <= 0.0 || C <= 0.0 || eta <= 0.0 || eta >= 1.0 || k_max < 1)
        throw std::invalid_argument("SolverConfig: tau, mu, C positive; 0 < eta < 1; k_max >= 1");
}

std::string SolverRun::trace_csv() const {
    std::ostringstream out;
    out << "iteration,objective,fidelity,relative_change,wall_ms";
    out << (aux_name.empty() ? "" : "," + aux_name) << "\n";
    char buf[64];
    for (const auto& r : trace) {
        out << r.iter;
        auto put = [&](double x) {
            std::snprintf(buf, sizeof buf, ",%.12g", x);
            out << buf;
        };
        put(r.objective);
        put(r.fidelity);
        put(r.rel_change);
        put(r.wall_ms);
        if (!aux_name.empty()) put(r.aux);
        out << "\n";
    }
    return out.str();
}

WeightState update_weights(const Vec& f, size_t S) {
    if (f.empty()) throw std::invalid_argument("update_weights: empty input");
    if (S < 1 || S > f.size()) throw std::invalid_argument("update_weights: S out of range");
    for (double x : f)
        if (!std::isfinite(x)) throw std::invalid_argument("update_weights: non-finite input");

    WeightState ws;
    ws.S = S;
    double maxabs = 0.0;
    for (double x : f) maxabs = std::max(maxabs, std::abs(x));
    if (maxabs == 0.0) {
        // degenerate all-zero input: the floor takes over
        ws.epsilon = 1e-4;
    } else {
        Vec bar(f.size());
        for (size_t i = 0; i < f.size(); ++i) bar[i] = std::abs(f[i]) / maxabs;
        std::nth_element(bar.begin(), bar.begin() + (S - 1), bar.end(), std::greater<double>());
        ws.epsilon = std::max(bar[S - 1], 1e-4);
    }
    ws.lambda.resize(f.size());
    for (size_t i = 0; i < f.size(); ++i) ws.lambda[i] = 1.0 / (std::abs(f[i]) + ws.epsilon);
    return ws;
}

Vec soft_threshold(const Vec& y, const Vec& thresh) {
    if (y.size() != thresh.size()) throw std::invalid_argument("soft_threshold: size mismatch");
    Vec out(y.size());
    for (size_t i = 0; i < y.size(); ++i) {
        if (thresh[i] < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
        double m = std::abs(y[i]) - thresh[i];
        out[i] = m > 0.0 ? (y[i] > 0.0 ? m : -m) : 0.0;
    }
    return out;
}

Vec smw_inverse(const LinOp& apply_P, double mu, const Vec& rhs) {
    if (mu <= 0.0) throw std::invalid_argument("smw_inverse: mu must be positive");
    Vec p = apply_P(rhs);
    Vec out(rhs.size());
    double s = 1.0 / (mu + 1.0);
    for (size_t i = 0; i < rhs.size(); ++i) out[i] = (rhs[i] - s * p[i]) / mu;
    return out;
}

Vec cg_shifted(const LinOp& apply_M, double mu, const Vec& rhs, double tol, int iter_max,
               bool* converged) {
    Vec x(rhs.size(), 0.0);
    Vec r = rhs;  // b - (M + mu I) 0
    Vec p = r;
    double rho = dot(r, r);
    double bnorm = std::sqrt(rho);
    if (converged) *converged = true;
    if (bnorm == 0.0) return x;
    for (int it = 0; it < iter_max; ++it) {
        Vec q = apply_M(p);
        for (size_t i = 0; i < q.size(); ++i) q[i] += mu * p[i];
        double alpha = rho / dot(p, q);
        for (size_t i = 0; i < x.size(); ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        double rho_new = dot(r, r);
        if (std::sqrt(rho_new) <= tol * bnorm) return x;
        p = axpy(rho_new / rho, p, r);
        rho = rho_new;
    }
    if (converged) *converged = false;
    return x;
}

double power_iteration(const LinOp& apply_M, size_t dim, double tol, int iter_max, uint64_t seed,
                       bool* converged) {
    if (dim == 0) throw std::invalid_argument("power_iteration: empty operator");
    std::mt19937_64 rng(seed);
    Vec v(dim);
    for (auto& x : v) x = (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 0.5;
    double nv = norm2(v);
    for (auto& x : v) x /= nv;

    double lambda = 0.0;
    if (converged) *converged = false;
    for (int it = 0; it < iter_max; ++it) {
        Vec w = apply_M(v);
        double lambda_new = dot(v, w);
        double nw = norm2(w);
        if (nw == 0.0) {
            if (converged) *converged = true;
            return 0.0;
        }
        for (size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nw;
        if (it > 0 && std::abs(lambda_new - lambda) <= tol * std::abs(lambda_new)) {
            if (converged) *converged = true;
            return lambda_new;
        }
        lambda = lambda_new;
    }
    return lambda;
}

Vec cgls(const LinOp& apply_A, const LinOp& apply_At, const Vec& b, const Vec& x0, double tol,
         int iter_max, bool* converged) {
    Vec x = x0;
    Vec ax = apply_A(x);
    if (ax.size() != b.size()) throw std::invalid_argument("cgls: shape mismatch");
    Vec r(b.size());
    for (size_t i = 0; i < b.size(); ++i) r[i] = b[i] - ax[i];
    Vec s = apply_At(r);
    Vec p = s;
    double gamma = dot(s, s);
    double target = tol * norm2(apply_At(b));
    if (converged) *converged = true;
    if (std::sqrt(gamma) <= target) return x;
    for (int it = 0; it < iter_max; ++it) {
        Vec q = apply_A(p);
        double alpha = gamma / dot(q, q);
        for (size_t i = 0; i < x.size(); ++i) x[i] += alpha * p[i];
        for (size_t i = 0; i < r.size(); ++i) r[i] -= alpha * q[i];
        s = apply_At(r);
        double gamma_new = dot(s, s);
        if (std::sqrt(gamma_new) <= target) return x;
        p = axpy(gamma_new / gamma, p, s);
        gamma = gamma_new;
    }
    if (converged) *converged = false;
    return x;
}

// ---------------------------------------------------------------------------
// Reconstruction drivers

namespace {

Vec flatten(const Array2d& a) { return a.v; }

Array2d unflatten(Vec v, int rows, int cols) {
    Array2d a(rows, cols);
    a.v = std::move(v);
    return a;
}

void clip_nonnegative(Array2d& a) {
    for (double& x : a.v) x = std::max(0.0, x);
}

}  // namespace

std::pair<DataField, SolverRun> reconstruct_dr(const Measurements& b, const SamplingPattern& pat,
                                               const Tiling& tiling, const WedgeSpec& spec,
                                               const SolverConfig& cfg) {
    cfg.validate();
    const int n_t = b.values.rows;
    if (tiling.rows() != n_t || tiling.cols() != pat.n_sensor)
        throw std::invalid_argument("reconstruct_dr: tiling does not match the data grid");

    const size_t N = tiling.total_coeffs();
    const size_t m = b.values.size();
    const size_t ambient = static_cast<size_t>(n_t) * pat.n_sensor;
    const size_t S = sparsity_target(m, cfg.C, ambient, N);

    auto K = [&](const Vec& f) {  // Phi Psi~^dagger
        CurveletCoeffs c{f, tiling.id()};
        Array2d g = synthesize_wedge(c, tiling, spec);
        DataField gf{std::move(g), b.dt, b.cv};
        return flatten(subsample(gf, pat).values);
    };
    auto Kt = [&](const Vec& y) {  // Psi~ Phi^T
        Measurements mb{unflatten(y, n_t, static_cast<int>(pat.selected.size())), b.dt, b.cv};
        DataField g0 = zero_fill(mb, pat);
        return analyze_wedge(g0.values, tiling, spec).data;
    };
    auto P = [&](const Vec& f) { return Kt(K(f)); };

    const Vec bvec = flatten(b.values);
    const Vec Ktb = Kt(bvec);

    SolverRun run;
    run.aux_name = "smw_gap";
    auto t0 = Clock::now();

    Vec f(N, 1.0), y(N, 0.0), w(N, 0.0);
    WeightState ws;
    ws.lambda.assign(N, 1.0);
    run.converged = false;
    for (int k = 1; k <= cfg.k_max; ++k) {
        auto it0 = Clock::now();
        Vec rhs(N);
        for (size_t i = 0; i < N; ++i) rhs[i] = Ktb[i] + cfg.mu * (y[i] + w[i]);

        Vec f_new = cfg.use_smw ? smw_inverse(P, cfg.mu, rhs)
                                : cg_shifted(P, cfg.mu, rhs, cfg.cg_tol, cfg.cg_max);
        if (k == 1) {
            // exactness of the closed form depends on P being idempotent;
            // record the residual it leaves on this problem either way
            Vec cand = cfg.use_smw ? f_new : smw_inverse(P, cfg.mu, rhs);
            Vec chk = P(cand);
            double num = 0.0, den = 0.0;
            for (size_t i = 0; i < N; ++i) {
                double lhs = chk[i] + cfg.mu * cand[i] - rhs[i];
                num += lhs * lhs;
                den += rhs[i] * rhs[i];
            }
            run.smw_gap = den > 0.0 ? std::sqrt(num / den) : 0.0;
        }

        Vec thr(N);
        for (size_t i = 0; i < N; ++i) thr[i] = (cfg.tau / cfg.mu) * ws.lambda[i];
        Vec shr_in(N);
        for (size_t i = 0; i < N; ++i) shr_in[i] = f_new[i] - w[i];
        y = soft_threshold(shr_in, thr);
        for (size_t i = 0; i < N; ++i) w[i] = w[i] - (f_new[i] - y[i]);

        double dn = 0.0, fn = 0.0;
        for (size_t i = 0; i < N; ++i) {
            double d = f_new[i] - f[i];
            dn += d * d;
            fn += f[i] * f[i];
        }
        double rel = fn > 0.0 ? std::sqrt(dn / fn) : 1.0;

        Vec res = K(f_new);
        double fid = 0.0;
        for (size_t i = 0; i < m; ++i) {
            double d = res[i] - bvec[i];
            fid += d * d;
        }
        fid *= 0.5;

        IterRecord rec;
        rec.iter = k;
        rec.fidelity = fid;
        rec.objective = fid + cfg.tau * l1_weighted(ws.lambda, f_new);
        rec.rel_change = rel;
        rec.aux = run.smw_gap;
        rec.wall_ms = ms_since(it0);
        run.trace.push_back(rec);

        if (cfg.reweight) ws = update_weights(f_new, S);
        f = std::move(f_new);
        if (rel < cfg.eta) {
            run.converged = true;
            break;
        }
    }
    run.wall_ms = ms_since(t0);

    CurveletCoeffs cf{f, tiling.id()};
    Array2d g = synthesize_wedge(cf, tiling, spec);
    run.f = std::move(f);
    return {DataField{std::move(g), b.dt, b.cv}, std::move(run)};
}

std::pair<ImageField, SolverRun> reconstruct_p0r(const Measurements& b, const SamplingPattern& pat,
                                                 const Tiling& tiling_img, const SolverConfig& cfg,
                                                 const Propagator& prop) {
    cfg.validate();
    const AcousticConfig& ac = prop.config();
    if (tiling_img.rows() != ac.n_perp || tiling_img.cols() != ac.n_sensor)
        throw std::invalid_argument("reconstruct_p0r: tiling does not match the image grid");
    if (b.values.rows != prop.n_t())
        throw std::invalid_argument("reconstruct_p0r: data length does not match the propagator");

    const size_t N = tiling_img.total_coeffs();
    const size_t m = b.values.size();
    const size_t ambient = static_cast<size_t>(ac.n_perp) * ac.n_sensor;
    const size_t S = sparsity_target(m, cfg.C, ambient, N);

    auto G = [&](const Vec& f) {  // Phi A Psi^dagger
        CurveletCoeffs c{f, tiling_img.id()};
        ImageField p0{synthesize(c, tiling_img), ac.h_x};
        DataField g = prop.forward(p0);
        return flatten(subsample(g, pat).values);
    };
    auto Gt = [&](const Vec& yv) {  // Psi A^T Phi^T
        Measurements mb{unflatten(yv, b.values.rows, b.values.cols), b.dt, b.cv};
        DataField g0 = zero_fill(mb, pat);
        ImageField img = prop.adjoint(g0);
        return analyze(img.values, tiling_img).data;
    };

    SolverRun run;
    bool pw_ok = false;
    double L = power_iteration([&](const Vec& v) { return Gt(G(v)); }, N, cfg.power_tol,
                               cfg.power_max, cfg.seed, &pw_ok);
    if (L <= 0.0) throw std::runtime_error("reconstruct_p0r: Lipschitz estimate failed");
    // the power iteration approaches the spectral norm from below; a small
    // margin keeps the step inside the valid range
    L *= 1.01;
    run.lipschitz = L;
    const double mu = 1.0 / L;

    const Vec bvec = flatten(b.values);
    auto t0 = Clock::now();

    Vec f(N, 1.0), y(N, 0.0), f_prev;
    WeightState ws;
    ws.lambda.assign(N, 1.0);
    double alpha = 1.0;
    run.converged = false;
    for (int k = 1; k <= cfg.k_max; ++k) {
        auto it0 = Clock::now();
        Vec gy = G(y);
        for (size_t i = 0; i < m; ++i) gy[i] -= bvec[i];
        Vec grad = Gt(gy);
        Vec z(N);
        for (size_t i = 0; i < N; ++i) z[i] = y[i] - mu * grad[i];

        Vec thr(N);
        for (size_t i = 0; i < N; ++i) thr[i] = mu * cfg.tau * ws.lambda[i];
        Vec f_new = soft_threshold(z, thr);

        double alpha_new = (1.0 + std::sqrt(1.0 + 4.0 * alpha * alpha)) / 2.0;
        for (size_t i = 0; i < N; ++i)
            y[i] = f_new[i] + (alpha - 1.0) / alpha_new * (f_new[i] - f[i]);
        alpha = alpha_new;

        double dn = 0.0, fn = 0.0;
        for (size_t i = 0; i < N; ++i) {
            double d = f_new[i] - f[i];
            dn += d * d;
            fn += f[i] * f[i];
        }
        double rel = fn > 0.0 ? std::sqrt(dn / fn) : 1.0;

        Vec res = G(f_new);
        double fid = 0.0;
        for (size_t i = 0; i < m; ++i) {
            double d = res[i] - bvec[i];
            fid += d * d;
        }
        fid *= 0.5;

        IterRecord rec;
        rec.iter = k;
        rec.fidelity = fid;
        rec.objective = fid + cfg.tau * l1_weighted(ws.lambda, f_new);
        rec.rel_change = rel;
        rec.wall_ms = ms_since(it0);
        run.trace.push_back(rec);

        if (cfg.reweight) ws = update_weights(f_new, S);
        f = std::move(f_new);
        if (rel < cfg.eta) {
            run.converged = true;
            break;
        }
    }
    run.wall_ms = ms_since(t0);

    CurveletCoeffs cf{f, tiling_img.id()};
    ImageField p0{synthesize(cf, tiling_img), ac.h_x};
    clip_nonnegative(p0.values);
    run.f = std::move(f);
    return {std::move(p0), std::move(run)};
}

std::pair<ImageField, SolverRun> reconstruct_p0r_plus(const Measurements& b,
                                                      const SamplingPattern& pat,
                                                      const Tiling& tiling_img,
                                                      const SolverConfig& cfg,
                                                      const Propagator& prop) {
    cfg.validate();
    const AcousticConfig& ac = prop.config();
    if (tiling_img.rows() != ac.n_perp || tiling_img.cols() != ac.n_sensor)
        throw std::invalid_argument("reconstruct_p0r_plus: tiling does not match the image grid");
    if (b.values.rows != prop.n_t())
        throw std::invalid_argument("reconstruct_p0r_plus: data length mismatch");

    const size_t N = tiling_img.total_coeffs();
    const size_t n_img = static_cast<size_t>(ac.n_perp) * ac.n_sensor;
    const size_t m = b.values.size();
    const size_t S = sparsity_target(m, cfg.C, n_img, N);
    const double sq_mu = std::sqrt(cfg.mu);

    auto apply_phi_a = [&](const Vec& p) {
        ImageField img{unflatten(p, ac.n_perp, ac.n_sensor), ac.h_x};
        return flatten(subsample(prop.forward(img), pat).values);
    };
    auto apply_at_phit = [&](const Vec& r) {
        Measurements mb{unflatten(r, b.values.rows, b.values.cols), b.dt, b.cv};
        return flatten(prop.adjoint(zero_fill(mb, pat)).values);
    };
    auto psi = [&](const Vec& p) {
        return analyze(unflatten(p, ac.n_perp, ac.n_sensor), tiling_img).data;
    };
    auto psit = [&](const Vec& f) {
        CurveletCoeffs c{f, tiling_img.id()};
        return flatten(synthesize(c, tiling_img));
    };

    // stacked operator [Phi A; sqrt(mu) Psi; sqrt(mu) I]
    auto stacked = [&](const Vec& p) {
        Vec top = apply_phi_a(p);
        Vec mid = psi(p);
        Vec out;
        out.reserve(m + N + n_img);
        out.insert(out.end(), top.begin(), top.end());
        for (double x : mid) out.push_back(sq_mu * x);
        for (double x : p) out.push_back(sq_mu * x);
        return out;
    };
    auto stacked_t = [&](const Vec& r) {
        Vec top(r.begin(), r.begin() + m);
        Vec mid(r.begin() + m, r.begin() + m + N);
        Vec bot(r.begin() + m + N, r.end());
        Vec out = apply_at_phit(top);
        Vec mid_img = psit(mid);
        for (size_t i = 0; i < n_img; ++i) out[i] += sq_mu * mid_img[i] + sq_mu * bot[i];
        return out;
    };

    const Vec bvec = flatten(b.values);
    SolverRun run;
    run.aux_name = "primal_residual";
    auto t0 = Clock::now();

    Vec p(n_img, 0.0);
    Vec y1(N, 0.0), y2(n_img, 0.0), w1(N, 0.0), w2(n_img, 0.0);
    Vec f(N, 1.0);
    WeightState ws;
    ws.lambda.assign(N, 1.0);
    run.converged = false;
    for (int k = 1; k <= cfg.k_max; ++k) {
        auto it0 = Clock::now();
        Vec rhs;
        rhs.reserve(m + N + n_img);
        rhs.insert(rhs.end(), bvec.begin(), bvec.end());
        for (size_t i = 0; i < N; ++i) rhs.push_back(sq_mu * (y1[i] - w1[i]));
        for (size_t i = 0; i < n_img; ++i) rhs.push_back(sq_mu * (y2[i] - w2[i]));
        p = cgls(stacked, stacked_t, rhs, p, cfg.cgls_tol, cfg.cgls_max);

        Vec psip = psi(p);
        Vec thr(N), shr_in(N);
        for (size_t i = 0; i < N; ++i) {
            thr[i] = (cfg.tau / cfg.mu) * ws.lambda[i];
            shr_in[i] = psip[i] + w1[i];
        }
        y1 = soft_threshold(shr_in, thr);
        for (size_t i = 0; i < n_img; ++i) y2[i] = std::max(0.0, p[i] + w2[i]);

        double primal = 0.0;
        for (size_t i = 0; i < N; ++i) {
            double d = psip[i] - y1[i];
            w1[i] += d;
            primal += d * d;
        }
        for (size_t i = 0; i < n_img; ++i) {
            double d = p[i] - y2[i];
            w2[i] += d;
            primal += d * d;
        }

        double dn = 0.0, fn = 0.0;
        for (size_t i = 0; i < N; ++i) {
            double d = psip[i] - f[i];
            dn += d * d;
            fn += f[i] * f[i];
        }
        double rel = fn > 0.0 ? std::sqrt(dn / fn) : 1.0;

        Vec res = apply_phi_a(p);
        double fid = 0.0;
        for (size_t i = 0; i < m; ++i) {
            double d = res[i] - bvec[i];
            fid += d * d;
        }
        fid *= 0.5;

        IterRecord rec;
        rec.iter = k;
        rec.fidelity = fid;
        rec.objective = fid + cfg.tau * l1_weighted(ws.lambda, psip);
        rec.rel_change = rel;
        rec.aux = std::sqrt(primal);
        rec.wall_ms = ms_since(it0);
        run.trace.push_back(rec);

        if (cfg.reweight) ws = update_weights(psip, S);
        f = std::move(psip);
        if (rel < cfg.eta) {
            run.converged = true;
            break;
        }
    }
    run.wall_ms = ms_since(t0);

    ImageField out{unflatten(y2, ac.n_perp, ac.n_sensor), ac.h_x};
    run.f = std::move(f);
    return {std::move(out), std::move(run)};
}

}  // namespace pat
