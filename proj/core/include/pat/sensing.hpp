#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pat/grid.hpp"

namespace pat {

enum class SamplingScheme { Uniform, WindowWeighted };

/// Sensor-trace subsampling pattern: which whole sensors are kept. Rows of
/// the implied sensing matrix are distinct canonical basis vectors, so
/// Phi*Phi^T = I exactly and Phi^T*Phi is a 0/1 diagonal mask.
struct SamplingPattern {
    std::vector<int> selected;  // sorted unique indices in [0, n_sensor)
    int n_sensor = 0;
    uint64_t seed = 0;
    SamplingScheme scheme = SamplingScheme::Uniform;
    int window_lo = 0;  // [window_lo, window_hi) gets `weight` x probability
    int window_hi = 0;
    double weight = 1.0;

    bool is_selected(int idx) const;
    std::string serialize() const;
    static SamplingPattern deserialize(const std::string& text);
};

/// Seed-deterministic selection of ceil(rate*n_sensor) sensors without
/// replacement. The window-weighted scheme draws window sensors with `weight`
/// times the probability of the rest.
SamplingPattern make_pattern(int n_sensor, double rate, SamplingScheme scheme, uint64_t seed,
                             int window_lo = 0, int window_hi = 0, double weight = 5.0);

/// Subsampled measurements b = Phi g: only the selected traces, in pattern
/// order (n_t x m).
struct Measurements {
    Array2d values;
    double dt = 0.0;
    double cv = 0.0;
};

Measurements subsample(const DataField& g, const SamplingPattern& pat);

/// Zero-filled embedding b0 = Phi^T b.
DataField zero_fill(const Measurements& b, const SamplingPattern& pat);

/// g + e with e iid zero-mean Gaussian of standard deviation sigma
/// (seed-deterministic Box-Muller).
DataField add_noise(const DataField& g, double sigma, uint64_t seed);

}  // namespace pat
