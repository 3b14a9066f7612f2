// patcs: compressed-sensing photoacoustic reconstruction experiments.
// Pipeline: simulate -> subsample -> reconstruct (tr|dr|p0r|p0r+) -> metrics,
// fully deterministic under the config file; every stage can be rerun from
// its persisted intermediates.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "pat/io.hpp"
#include "pat/pipeline.hpp"
#include "pat/wave.hpp"
#include "pat/wedge.hpp"

namespace fs = std::filesystem;
using namespace pat;

namespace {

constexpr int kExitError = 1;
constexpr int kExitHashMismatch = 2;
constexpr int kExitNotConverged = 3;

struct StageCommon {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<uint64_t> seed;
    std::optional<double> rate;
    bool export_png = false;
};

void add_common(CLI::App* cmd, StageCommon& c) {
    cmd->add_option("--config", c.config_path, "experiment config file")->required();
    cmd->add_option("--out", c.out_dir, "output directory");
    cmd->add_option("--seed", c.seed, "master seed override (phantom, +1 noise, +2 sampling)");
    cmd->add_option("--rate", c.rate, "subsampling rate override in (0,1]")
        ->check(CLI::Range(1e-9, 1.0));
    cmd->add_flag("--export-png", c.export_png, "also export 16-bit grayscale PNGs");
}

ExperimentConfig load_experiment(const StageCommon& c) {
    ExperimentConfig e = ExperimentConfig::from_config(io::parse_config_file(c.config_path));
    if (c.seed) {
        e.phantom.seed = *c.seed;
        e.noise_seed = *c.seed + 1;
        e.sample_seed = *c.seed + 2;
    }
    if (c.rate) e.rate = *c.rate;
    return e;
}

io::Meta field_meta(const ExperimentConfig& e, const std::string& kind, const std::string& scope) {
    char buf[64];
    io::Meta m;
    m["kind"] = kind;
    m["scope"] = scope;
    m["config"] = e.scope_hash(scope);
    std::snprintf(buf, sizeof buf, "%.12g", e.acoustic.h_x);
    m["spacing"] = buf;
    std::snprintf(buf, sizeof buf, "%.12g", e.acoustic.h_t);
    m["dt"] = buf;
    std::snprintf(buf, sizeof buf, "%.12g", e.acoustic.c);
    m["c"] = buf;
    std::snprintf(buf, sizeof buf, "%.12g", e.cv);
    m["c_v"] = buf;
    return m;
}

/// Every artifact records the hash of the config sections it depends on
/// ("scope"); a consuming stage recomputes that scope hash from its own
/// effective config and refuses the input on mismatch.
void check_hash(const io::Meta& meta, const ExperimentConfig& e, const std::string& path) {
    auto it = meta.find("config");
    std::string scope = meta.count("scope") ? meta.at("scope") : "full";
    std::string expected = e.scope_hash(scope);
    if (it == meta.end() || it->second != expected)
        throw std::runtime_error("hash-mismatch: " + path +
                                 " was produced under a different config (found " +
                                 (it == meta.end() ? std::string("none") : it->second) +
                                 ", expected " + expected + ")");
}

void write_field(const ExperimentConfig& e, const std::string& path, const Array2d& a,
                 const std::string& kind, const std::string& scope, bool png) {
    io::write_array(path, a, field_meta(e, kind, scope));
    if (png) io::write_png16(path.substr(0, path.rfind('.')) + ".png", a);
}

int cmd_simulate(const StageCommon& c) {
    ExperimentConfig e = load_experiment(c);
    fs::create_directories(c.out_dir);
    SimulationResult sim = simulate_stage(e);
    std::string dir = c.out_dir + "/";
    write_field(e, dir + "phantom.f64", sim.phantom.values, "image", "sim", c.export_png);
    write_field(e, dir + "g_clean.f64", sim.g_clean.values, "data", "sim", c.export_png);
    write_field(e, dir + "g_noisy.f64", sim.g_noisy.values, "data", "sim", c.export_png);
    io::write_text_file(dir + "config_echo.ini",
                        "# hash=" + e.hash() + "\n" + e.to_config().canonical());
    std::printf("simulate: wrote phantom (%dx%d) and data (%dx%d) to %s (config %s)\n",
                sim.phantom.values.rows, sim.phantom.values.cols, sim.g_noisy.values.rows,
                sim.g_noisy.values.cols, c.out_dir.c_str(), e.hash().c_str());
    return 0;
}

int cmd_subsample(const StageCommon& c, const std::string& data_path) {
    ExperimentConfig e = load_experiment(c);
    fs::create_directories(c.out_dir);
    auto loaded = io::read_array(data_path);
    check_hash(loaded.meta, e, data_path);
    DataField g{std::move(loaded.values), e.acoustic.h_t, e.cv};

    SubsampleResult sub = subsample_stage(e, g);
    std::string dir = c.out_dir + "/";
    io::write_text_file(dir + "pattern.txt",
                        "# config=" + e.scope_hash("sampling") + "\n" + sub.pattern.serialize());
    write_field(e, dir + "b.f64", sub.b.values, "measurements", "sampling", c.export_png);
    write_field(e, dir + "b0.f64", sub.b0.values, "data_zero_filled", "sampling", c.export_png);
    std::printf("subsample: kept %zu of %d sensors (rate %.4g) -> %s\n", sub.pattern.selected.size(),
                e.acoustic.n_sensor, e.rate, c.out_dir.c_str());
    return 0;
}

SamplingPattern load_pattern(const std::string& path, const ExperimentConfig& e) {
    std::string text = io::read_text_file(path);
    auto pos = text.find("# config=");
    if (pos != std::string::npos) {
        std::string h = text.substr(pos + 9, 16);
        if (h != e.scope_hash("sampling"))
            throw std::runtime_error("hash-mismatch: " + path +
                                     " was produced under a different config");
    }
    return SamplingPattern::deserialize(text);
}

int cmd_reconstruct(const StageCommon& c, const std::string& method, const std::string& meas_path,
                    const std::string& pattern_path) {
    ExperimentConfig e = load_experiment(c);
    fs::create_directories(c.out_dir);
    auto loaded = io::read_array(meas_path);
    check_hash(loaded.meta, e, meas_path);

    // Time reversal also accepts a complete data volume (e.g. the recovered
    // g~ of the two-step method); every trace is imposed then, so
    // `reconstruct --method tr` on g~ reproduces the two-step composite.
    if (method == "tr" && loaded.meta.count("kind") && loaded.meta.at("kind") == "data") {
        if (loaded.values.cols != e.acoustic.n_sensor)
            throw std::runtime_error("data volume does not match the sensor count");
        DataField g{std::move(loaded.values), e.acoustic.h_t, e.cv};
        Propagator prop(e.acoustic);
        ImageField p0 = prop.time_reverse(g);
        for (double& x : p0.values.v) x = std::max(0.0, x);
        write_field(e, c.out_dir + "/p0_tr.f64", p0.values, "image", "full", c.export_png);
        std::printf("reconstruct tr: image %dx%d (full data volume)\n", p0.values.rows,
                    p0.values.cols);
        return 0;
    }

    SamplingPattern pattern = load_pattern(pattern_path, e);
    if (loaded.values.cols != static_cast<int>(pattern.selected.size()))
        throw std::runtime_error("measurements do not match the sampling pattern");
    Measurements b{std::move(loaded.values), e.acoustic.h_t, e.cv};

    ReconstructionResult rec = reconstruct_stage(e, method, b, pattern);
    std::string tag = method == "p0r+" ? "p0rp" : method;
    std::string dir = c.out_dir + "/";
    write_field(e, dir + "p0_" + tag + ".f64", rec.p0.values, "image", "full", c.export_png);
    if (rec.recovered_data)
        write_field(e, dir + "g_tilde.f64", rec.recovered_data->values, "data", "full", c.export_png);
    if (rec.run) io::write_text_file(dir + "trace_" + tag + ".csv", rec.run->trace_csv());

    bool converged = !rec.run || rec.run->converged;
    std::printf("reconstruct %s: image %dx%d%s%s\n", method.c_str(), rec.p0.values.rows,
                rec.p0.values.cols, rec.run ? "" : " (direct)",
                converged ? "" : " [warning: iteration cap reached]");
    return converged ? 0 : kExitNotConverged;
}

int cmd_metrics(const StageCommon& c, const std::string& rec_path, const std::string& ref_path,
                const std::string& name) {
    ExperimentConfig e = load_experiment(c);
    fs::create_directories(c.out_dir);
    auto rec = io::read_array(rec_path);
    auto ref = io::read_array(ref_path);
    check_hash(rec.meta, e, rec_path);
    check_hash(ref.meta, e, ref_path);
    ImageField rec_img{std::move(rec.values), e.acoustic.h_x};
    ImageField ref_img{std::move(ref.values), e.acoustic.h_x};

    std::string row = metrics_csv_row(name, rec_img, ref_img, e.hash());
    std::string path = c.out_dir + "/metrics.csv";
    bool fresh = !fs::exists(path);
    std::string existing = fresh ? metrics_csv_header() : io::read_text_file(path);
    io::write_text_file(path, existing + row);
    std::printf("metrics %s: %s", name.c_str(), row.c_str());
    return 0;
}

int cmd_transform(const StageCommon& c, const std::string& input_path, const std::string& domain,
                  const std::string& emit_tiling, const std::string& emit_mask) {
    ExperimentConfig e = load_experiment(c);
    fs::create_directories(c.out_dir);
    auto loaded = io::read_array(input_path);
    check_hash(loaded.meta, e, input_path);
    const Array2d& u = loaded.values;

    int scales = domain == "data" ? e.data_scales : e.img_scales;
    int angles = domain == "data" ? e.data_angles : e.img_angles;
    Tiling tiling = Tiling::build(u.rows, u.cols, scales, angles);
    WedgeSpec spec = discrete_angles(tiling, e.cv);

    CurveletCoeffs plain = analyze(u, tiling);
    Array2d roundtrip = synthesize(plain, tiling);
    double rt_err = 0.0, nrm = norm2(u);
    for (size_t i = 0; i < u.v.size(); ++i)
        rt_err += (roundtrip.v[i] - u.v[i]) * (roundtrip.v[i] - u.v[i]);

    RangeEnergy energy = range_energy(plain, tiling, spec);
    CurveletCoeffs restricted = project_range(plain, tiling, spec);
    Array2d projected = synthesize(restricted, tiling);
    double proj_err = 0.0;
    for (size_t i = 0; i < u.v.size(); ++i)
        proj_err += (projected.v[i] - u.v[i]) * (projected.v[i] - u.v[i]);

    std::printf("transform %s (%dx%d, %d scales, %d angles):\n", domain.c_str(), u.rows, u.cols,
                scales, angles);
    std::printf("  roundtrip_rel_error=%.3e\n", nrm > 0 ? std::sqrt(rt_err) / nrm : 0.0);
    std::printf("  coefficients=%zu\n", tiling.total_coeffs());
    std::printf("  in_range_energy=%.6g out_of_range_energy=%.6g coarse_energy=%.6g\n",
                energy.in_range, energy.out_of_range, energy.coarse);
    std::printf("  range_projection_rel_loss=%.4g\n", nrm > 0 ? std::sqrt(proj_err) / nrm : 0.0);
    for (int d = 0; d < tiling.n_directional_scales(); ++d)
        std::printf("  scale %d: angles=%d in_range=%d\n", d + 2, tiling.n_angles(d),
                    2 * spec.in_range_count(d));

    if (!emit_tiling.empty()) io::write_png16(emit_tiling, tiling.tiling_labels());
    if (!emit_mask.empty()) io::write_png16(emit_mask, wedge_mask(tiling, spec));

    if (c.export_png) {
        io::write_png16(c.out_dir + "/transform_input.png", u);
        io::write_png16(c.out_dir + "/transform_projected.png", projected);
        // coefficient magnitudes painted over the frequency plane: each bin
        // shows the log-energy of the wedge that dominates it
        Array2d labels = tiling.tiling_labels();
        std::vector<double> wedge_energy{0.0};  // label 0 = uncovered
        {
            size_t nc = static_cast<size_t>(tiling.coarse().rows) * tiling.coarse().cols;
            double ec = 0.0;
            for (size_t i = 0; i < nc; ++i) ec += plain.data[i] * plain.data[i];
            wedge_energy.push_back(ec);
        }
        for (int d = 0; d < tiling.n_directional_scales(); ++d)
            for (int wi = 0; wi < tiling.n_angles(d) / 2; ++wi) {
                const WedgeGeom& w = tiling.wedge(d, wi);
                size_t n = static_cast<size_t>(w.n_u) * w.n_v;
                double ew = 0.0;
                for (bool im : {false, true}) {
                    size_t off = tiling.wedge_offset(d, wi, im);
                    for (size_t i = 0; i < n; ++i) ew += plain.data[off + i] * plain.data[off + i];
                }
                wedge_energy.push_back(ew);
            }
        Array2d mag(labels.rows, labels.cols);
        for (size_t i = 0; i < labels.v.size(); ++i) {
            auto id = static_cast<size_t>(labels.v[i]);
            double ew = id < wedge_energy.size() ? wedge_energy[id] : 0.0;
            mag.v[i] = std::log10(1e-12 + ew);
        }
        io::write_png16(c.out_dir + "/transform_coeff_mag.png", mag);
    }
    return 0;
}

int cmd_run(const StageCommon& c, const std::vector<std::string>& methods) {
    ExperimentConfig e = load_experiment(c);
    fs::create_directories(c.out_dir);

    SimulationResult sim = simulate_stage(e);
    std::string dir = c.out_dir + "/";
    write_field(e, dir + "phantom.f64", sim.phantom.values, "image", "sim", c.export_png);
    write_field(e, dir + "g_noisy.f64", sim.g_noisy.values, "data", "sim", c.export_png);

    SubsampleResult sub = subsample_stage(e, sim.g_noisy);
    io::write_text_file(dir + "pattern.txt",
                        "# config=" + e.scope_hash("sampling") + "\n" + sub.pattern.serialize());
    write_field(e, dir + "b.f64", sub.b.values, "measurements", "sampling", c.export_png);

    std::string csv = metrics_csv_header();
    bool all_converged = true;
    for (const std::string& method : methods) {
        ReconstructionResult rec = reconstruct_stage(e, method, sub.b, sub.pattern);
        std::string tag = method == "p0r+" ? "p0rp" : method;
        write_field(e, dir + "p0_" + tag + ".f64", rec.p0.values, "image", "full", c.export_png);
        if (rec.recovered_data)
            write_field(e, dir + "g_tilde.f64", rec.recovered_data->values, "data", "full", c.export_png);
        if (rec.run) {
            io::write_text_file(dir + "trace_" + tag + ".csv", rec.run->trace_csv());
            all_converged = all_converged && rec.run->converged;
        }
        csv += metrics_csv_row(method, rec.p0, sim.phantom, e.hash());
        std::printf("run: %s done\n", method.c_str());
    }
    io::write_text_file(dir + "metrics.csv", csv);
    std::printf("run: metrics written to %smetrics.csv (config %s)\n", dir.c_str(),
                e.hash().c_str());
    return all_converged ? 0 : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compressed-sensing photoacoustic tomography toolkit"};
    app.require_subcommand(1);

    StageCommon common;
    std::string data_path, meas_path, pattern_path, method, rec_path, ref_path;
    std::string name = "rec", domain = "data", emit_tiling, emit_mask;
    std::string methods_csv = "tr,dr,p0r,p0r+";

    CLI::App* sim = app.add_subcommand("simulate", "phantom + forward data (+ noise)");
    add_common(sim, common);

    CLI::App* sub = app.add_subcommand("subsample", "sampling pattern + measurements");
    add_common(sub, common);
    sub->add_option("--data", data_path, "simulated data array (.f64)")->required();

    CLI::App* rec = app.add_subcommand("reconstruct", "recover p0 from measurements");
    add_common(rec, common);
    rec->add_option("--method", method, "tr|dr|p0r|p0r+")->required();
    rec->add_option("--measurements", meas_path, "measurement array b (.f64)")->required();
    rec->add_option("--pattern", pattern_path, "sampling pattern file")->required();

    CLI::App* met = app.add_subcommand("metrics", "image-quality metrics CSV row");
    add_common(met, common);
    met->add_option("--rec", rec_path, "reconstruction (.f64)")->required();
    met->add_option("--ref", ref_path, "reference image (.f64)")->required();
    met->add_option("--name", name, "method label for the CSV row");

    CLI::App* tra = app.add_subcommand("transform", "curvelet/wedge round-trip diagnostics");
    add_common(tra, common);
    tra->add_option("--input", data_path, "input array (.f64)")->required();
    tra->add_option("--domain", domain, "data|image")->check(CLI::IsMember({"data", "image"}));
    tra->add_option("--emit-tiling", emit_tiling, "write the frequency tiling render (PNG)");
    tra->add_option("--emit-mask", emit_mask, "write the in/out-of-range wedge mask (PNG)");

    CLI::App* run = app.add_subcommand("run", "full pipeline with metrics");
    add_common(run, common);
    run->add_option("--methods", methods_csv, "comma-separated subset of tr,dr,p0r,p0r+");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(common);
        if (sub->parsed()) return cmd_subsample(common, data_path);
        if (rec->parsed()) return cmd_reconstruct(common, method, meas_path, pattern_path);
        if (met->parsed()) return cmd_metrics(common, rec_path, ref_path, name);
        if (tra->parsed()) return cmd_transform(common, data_path, domain, emit_tiling, emit_mask);
        if (run->parsed()) {
            std::vector<std::string> methods;
            std::istringstream ss(methods_csv);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) methods.push_back(tok);
            return cmd_run(common, methods);
        }
    } catch (const std::exception& ex) {
        std::string what = ex.what();
        std::fprintf(stderr, "error: %s\n", what.c_str());
        return what.rfind("hash-mismatch", 0) == 0 ? kExitHashMismatch : kExitError;
    }
    return 0;
}
