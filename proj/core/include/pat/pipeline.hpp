#pragma once

#include <optional>
#include <string>

#include "pat/io.hpp"
#include "pat/metrics.hpp"
#include "pat/phantom.hpp"
#include "pat/sensing.hpp"
#include "pat/solvers.hpp"

namespace pat {

/// Everything one end-to-end experiment needs, parsed from a sectioned
/// key=value config with the vessel-phantom protocol as defaults.
struct ExperimentConfig {
    AcousticConfig acoustic;
    double cv = 0.3;
    PhantomSpec phantom;
    double noise_sigma = 0.01;
    uint64_t noise_seed = 101;
    double rate = 0.25;
    SamplingScheme scheme = SamplingScheme::WindowWeighted;
    int window_lo = 66, window_hi = 106;
    double weight = 5.0;
    uint64_t sample_seed = 202;
    int img_scales = 4, img_angles = 32;
    int data_scales = 4, data_angles = 152;
    SolverConfig dr, p0r, p0rp;

    static ExperimentConfig from_config(const io::Config& cfg);
    /// Canonical config echo (the hash of this is the pipeline identity).
    io::Config to_config() const;
    std::string hash() const { return to_config().hash(); }

    /// Lineage hash over only the config sections an artifact depends on:
    /// "sim" (acoustic, phantom, noise), "sampling" (sim + sampling) or
    /// "full". Lets a sampling-rate override reuse simulation outputs while
    /// still refusing inputs whose provenance actually differs.
    std::string scope_hash(const std::string& scope) const;
};

/// In-memory pipeline stages; the CLI persists each result to disk.
struct SimulationResult {
    ImageField phantom;
    DataField g_clean;
    DataField g_noisy;
};
SimulationResult simulate_stage(const ExperimentConfig& cfg);

struct SubsampleResult {
    SamplingPattern pattern;
    Measurements b;
    DataField b0;
};
SubsampleResult subsample_stage(const ExperimentConfig& cfg, const DataField& g);

struct ReconstructionResult {
    ImageField p0;
    std::optional<DataField> recovered_data;  // two-step only
    std::optional<SolverRun> run;
};
/// method: "tr", "dr", "p0r" or "p0r+". Outputs are clipped to nonnegative
/// values as post-processing when the method does not enforce them.
ReconstructionResult reconstruct_stage(const ExperimentConfig& cfg, const std::string& method,
                                       const Measurements& b, const SamplingPattern& pattern);

/// One metrics CSV row; the reference is bilinearly upscaled to the
/// reconstruction dims first when they differ.
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& method, const ImageField& rec,
                            const ImageField& reference, const std::string& config_hash);

}  // namespace pat
