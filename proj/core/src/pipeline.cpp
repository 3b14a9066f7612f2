#include "pat/pipeline.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pat/wave.hpp"

namespace pat {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

uint64_t get_u64(const io::Config& c, const std::string& sec, const std::string& key,
                 uint64_t fallback) {
    if (!c.has(sec, key)) return fallback;
    return std::stoull(c.get(sec, key));
}

SolverConfig solver_from(const io::Config& c, const std::string& sec, const SolverConfig& defaults) {
    SolverConfig s = defaults;
    s.tau = c.get_double_or(sec, "tau", s.tau);
    s.mu = c.get_double_or(sec, "mu", s.mu);
    s.C = c.get_double_or(sec, "C", s.C);
    s.eta = c.get_double_or(sec, "eta", s.eta);
    s.k_max = c.get_int_or(sec, "kmax", s.k_max);
    s.use_smw = c.get_int_or(sec, "smw", s.use_smw ? 1 : 0) != 0;
    s.cg_tol = c.get_double_or(sec, "cg_tol", s.cg_tol);
    s.cg_max = c.get_int_or(sec, "cg_max", s.cg_max);
    s.cgls_tol = c.get_double_or(sec, "cgls_tol", s.cgls_tol);
    s.cgls_max = c.get_int_or(sec, "cgls_max", s.cgls_max);
    s.seed = get_u64(c, sec, "seed", s.seed);
    return s;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_config(const io::Config& c) {
    ExperimentConfig e;
    double sound_speed = c.get_double_or("acoustic", "c", 1500.0);
    double h_x = c.get_double_or("acoustic", "hx", 11.628e-6);
    e.cv = c.get_double_or("acoustic", "cv", 0.3);
    int n_perp = c.get_int_or("acoustic", "n_perp", 42);
    int n_sensor = c.get_int_or("acoustic", "n_sensor", 172);
    e.acoustic = AcousticConfig::from_cv(sound_speed, h_x, e.cv, n_perp, n_sensor);

    e.phantom.n_perp = n_perp;
    e.phantom.n_sensor = n_sensor;
    e.phantom.seed = get_u64(c, "phantom", "seed", 17);
    e.phantom.vessels = c.get_int_or("phantom", "vessels", 6);
    e.phantom.radius_min = c.get_double_or("phantom", "radius_min", 1.0);
    e.phantom.radius_max = c.get_double_or("phantom", "radius_max", 2.6);
    e.phantom.amp_min = c.get_double_or("phantom", "amp_min", 0.45);
    e.phantom.amp_max = c.get_double_or("phantom", "amp_max", 1.0);
    e.phantom.margin = c.get_int_or("phantom", "margin", 3);

    e.noise_sigma = c.get_double_or("noise", "sigma", 0.01);
    e.noise_seed = get_u64(c, "noise", "seed", 101);

    e.rate = c.get_double_or("sampling", "rate", 0.25);
    std::string scheme = c.get_or("sampling", "scheme", "window");
    if (scheme == "window")
        e.scheme = SamplingScheme::WindowWeighted;
    else if (scheme == "uniform")
        e.scheme = SamplingScheme::Uniform;
    else
        throw std::runtime_error("config: unknown sampling scheme: " + scheme);
    e.window_lo = c.get_int_or("sampling", "window_lo", 66);
    e.window_hi = c.get_int_or("sampling", "window_hi", 106);
    e.weight = c.get_double_or("sampling", "weight", 5.0);
    e.sample_seed = get_u64(c, "sampling", "seed", 202);

    e.img_scales = c.get_int_or("tiling_image", "scales", 4);
    e.img_angles = c.get_int_or("tiling_image", "angles", 32);
    e.data_scales = c.get_int_or("tiling_data", "scales", 4);
    e.data_angles = c.get_int_or("tiling_data", "angles", 152);

    SolverConfig dr_def;
    dr_def.tau = 5e-5;
    dr_def.mu = 1.0;
    dr_def.eta = 5e-4;
    dr_def.k_max = 100;
    e.dr = solver_from(c, "solver_dr", dr_def);

    SolverConfig p0r_def;
    p0r_def.tau = 1e-3;
    p0r_def.eta = 5e-4;
    p0r_def.k_max = 100;
    e.p0r = solver_from(c, "solver_p0r", p0r_def);

    SolverConfig p0rp_def;
    p0rp_def.tau = 1e-4;
    p0rp_def.mu = 0.1;
    p0rp_def.eta = 5e-4;
    p0rp_def.k_max = 100;
    e.p0rp = solver_from(c, "solver_p0rp", p0rp_def);
    return e;
}

io::Config ExperimentConfig::to_config() const {
    io::Config c;
    c.set("acoustic", "c", fmt(acoustic.c));
    c.set("acoustic", "hx", fmt(acoustic.h_x));
    c.set("acoustic", "cv", fmt(cv));
    c.set("acoustic", "n_perp", std::to_string(acoustic.n_perp));
    c.set("acoustic", "n_sensor", std::to_string(acoustic.n_sensor));
    c.set("phantom", "seed", std::to_string(phantom.seed));
    c.set("phantom", "vessels", std::to_string(phantom.vessels));
    c.set("phantom", "radius_min", fmt(phantom.radius_min));
    c.set("phantom", "radius_max", fmt(phantom.radius_max));
    c.set("phantom", "amp_min", fmt(phantom.amp_min));
    c.set("phantom", "amp_max", fmt(phantom.amp_max));
    c.set("phantom", "margin", std::to_string(phantom.margin));
    c.set("noise", "sigma", fmt(noise_sigma));
    c.set("noise", "seed", std::to_string(noise_seed));
    c.set("sampling", "rate", fmt(rate));
    c.set("sampling", "scheme", scheme == SamplingScheme::WindowWeighted ? "window" : "uniform");
    c.set("sampling", "window_lo", std::to_string(window_lo));
    c.set("sampling", "window_hi", std::to_string(window_hi));
    c.set("sampling", "weight", fmt(weight));
    c.set("sampling", "seed", std::to_string(sample_seed));
    c.set("tiling_image", "scales", std::to_string(img_scales));
    c.set("tiling_image", "angles", std::to_string(img_angles));
    c.set("tiling_data", "scales", std::to_string(data_scales));
    c.set("tiling_data", "angles", std::to_string(data_angles));
    auto put_solver = [&](const std::string& sec, const SolverConfig& s) {
        c.set(sec, "tau", fmt(s.tau));
        c.set(sec, "mu", fmt(s.mu));
        c.set(sec, "C", fmt(s.C));
        c.set(sec, "eta", fmt(s.eta));
        c.set(sec, "kmax", std::to_string(s.k_max));
        c.set(sec, "smw", s.use_smw ? "1" : "0");
        c.set(sec, "cgls_tol", fmt(s.cgls_tol));
        c.set(sec, "cgls_max", std::to_string(s.cgls_max));
        c.set(sec, "seed", std::to_string(s.seed));
    };
    put_solver("solver_dr", dr);
    put_solver("solver_p0r", p0r);
    put_solver("solver_p0rp", p0rp);
    return c;
}

std::string ExperimentConfig::scope_hash(const std::string& scope) const {
    io::Config full = to_config();
    if (scope == "full") return full.hash();
    io::Config filtered;
    auto keep = [&](const std::string& section) {
        if (section == "acoustic" || section == "phantom" || section == "noise") return true;
        return scope == "sampling" && section == "sampling";
    };
    for (const auto& [sec, kv] : full.sections)
        if (keep(sec)) filtered.sections[sec] = kv;
    return filtered.hash();
}

SimulationResult simulate_stage(const ExperimentConfig& cfg) {
    SimulationResult r;
    r.phantom = make_phantom(cfg.phantom, cfg.acoustic.h_x);
    Propagator prop(cfg.acoustic);
    r.g_clean = prop.forward(r.phantom);
    r.g_noisy = add_noise(r.g_clean, cfg.noise_sigma, cfg.noise_seed);
    return r;
}

SubsampleResult subsample_stage(const ExperimentConfig& cfg, const DataField& g) {
    SubsampleResult r;
    r.pattern = make_pattern(cfg.acoustic.n_sensor, cfg.rate, cfg.scheme, cfg.sample_seed,
                             cfg.window_lo, cfg.window_hi, cfg.weight);
    r.b = subsample(g, r.pattern);
    r.b0 = zero_fill(r.b, r.pattern);
    return r;
}

ReconstructionResult reconstruct_stage(const ExperimentConfig& cfg, const std::string& method,
                                       const Measurements& b, const SamplingPattern& pattern) {
    Propagator prop(cfg.acoustic);
    ReconstructionResult out;
    auto clip = [](ImageField& img) {
        for (double& x : img.values.v) x = std::max(0.0, x);
    };

    if (method == "tr") {
        DataField b0 = zero_fill(b, pattern);
        out.p0 = prop.time_reverse(b0, pattern);
        clip(out.p0);
    } else if (method == "dr") {
        Tiling tiling = Tiling::build(prop.n_t(), cfg.acoustic.n_sensor, cfg.data_scales,
                                      cfg.data_angles);
        WedgeSpec spec = discrete_angles(tiling, cfg.cv);
        auto [g_rec, run] = reconstruct_dr(b, pattern, tiling, spec, cfg.dr);
        out.p0 = prop.time_reverse(g_rec);
        clip(out.p0);
        out.recovered_data = std::move(g_rec);
        out.run = std::move(run);
    } else if (method == "p0r") {
        Tiling tiling = Tiling::build(cfg.acoustic.n_perp, cfg.acoustic.n_sensor, cfg.img_scales,
                                      cfg.img_angles);
        auto [p0, run] = reconstruct_p0r(b, pattern, tiling, cfg.p0r, prop);
        out.p0 = std::move(p0);
        out.run = std::move(run);
    } else if (method == "p0r+") {
        Tiling tiling = Tiling::build(cfg.acoustic.n_perp, cfg.acoustic.n_sensor, cfg.img_scales,
                                      cfg.img_angles);
        auto [p0, run] = reconstruct_p0r_plus(b, pattern, tiling, cfg.p0rp, prop);
        out.p0 = std::move(p0);
        out.run = std::move(run);
    } else {
        throw std::invalid_argument("unknown method: " + method + " (expected tr|dr|p0r|p0r+)");
    }
    return out;
}

std::string metrics_csv_header() { return "method,mse,ssim,psnr,snr,config\n"; }

std::string metrics_csv_row(const std::string& method, const ImageField& rec,
                            const ImageField& reference, const std::string& config_hash) {
    ImageField ref = reference;
    if (!ref.values.same_shape(rec.values))
        ref = bilinear_upscale(ref, rec.values.rows, rec.values.cols);
    MetricsReport m = metrics(rec, ref);
    std::ostringstream out;
    out << method << "," << fmt(m.mse) << "," << fmt(m.ssim) << "," << fmt(m.psnr) << ","
        << fmt(m.snr) << "," << config_hash << "\n";
    return out.str();
}

}  // namespace pat
