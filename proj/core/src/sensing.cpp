#include "pat/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pat {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

bool SamplingPattern::is_selected(int idx) const {
    return std::binary_search(selected.begin(), selected.end(), idx);
}

std::string SamplingPattern::serialize() const {
    std::ostringstream out;
    out << "n_sensor=" << n_sensor << "\n";
    out << "seed=" << seed << "\n";
    out << "scheme=" << (scheme == SamplingScheme::Uniform ? "uniform" : "window") << "\n";
    out << "window_lo=" << window_lo << "\n";
    out << "window_hi=" << window_hi << "\n";
    out << "weight=" << weight << "\n";
    out << "indices=";
    for (size_t i = 0; i < selected.size(); ++i) out << (i ? "," : "") << selected[i];
    out << "\n";
    return out.str();
}

SamplingPattern SamplingPattern::deserialize(const std::string& text) {
    SamplingPattern p;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "n_sensor") p.n_sensor = std::stoi(val);
        else if (key == "seed") p.seed = std::stoull(val);
        else if (key == "scheme")
            p.scheme = val == "window" ? SamplingScheme::WindowWeighted : SamplingScheme::Uniform;
        else if (key == "window_lo") p.window_lo = std::stoi(val);
        else if (key == "window_hi") p.window_hi = std::stoi(val);
        else if (key == "weight") p.weight = std::stod(val);
        else if (key == "indices") {
            std::istringstream idx(val);
            std::string tok;
            while (std::getline(idx, tok, ','))
                if (!tok.empty()) p.selected.push_back(std::stoi(tok));
        }
    }
    if (p.n_sensor <= 0 || p.selected.empty())
        throw std::runtime_error("SamplingPattern: malformed pattern text");
    for (int idx : p.selected)
        if (idx < 0 || idx >= p.n_sensor) throw std::runtime_error("SamplingPattern: index out of range");
    if (!std::is_sorted(p.selected.begin(), p.selected.end()))
        throw std::runtime_error("SamplingPattern: indices must be sorted");
    return p;
}

SamplingPattern make_pattern(int n_sensor, double rate, SamplingScheme scheme, uint64_t seed,
                             int window_lo, int window_hi, double weight) {
    if (n_sensor < 1) throw std::invalid_argument("make_pattern: n_sensor must be >= 1");
    if (rate <= 0.0 || rate > 1.0) throw std::invalid_argument("make_pattern: rate must be in (0, 1]");
    if (rate * n_sensor < 1.0) throw std::invalid_argument("make_pattern: rate*n_sensor < 1");
    int m = static_cast<int>(std::ceil(rate * n_sensor));
    if (scheme == SamplingScheme::WindowWeighted) {
        if (window_lo < 0 || window_hi > n_sensor || window_lo >= window_hi)
            throw std::invalid_argument("make_pattern: window outside sensor extent");
        if (weight <= 0.0) throw std::invalid_argument("make_pattern: weight must be positive");
    }

    SamplingPattern p;
    p.n_sensor = n_sensor;
    p.seed = seed;
    p.scheme = scheme;
    p.window_lo = scheme == SamplingScheme::WindowWeighted ? window_lo : 0;
    p.window_hi = scheme == SamplingScheme::WindowWeighted ? window_hi : 0;
    p.weight = scheme == SamplingScheme::WindowWeighted ? weight : 1.0;

    // Weighted sampling without replacement via exponential races: sensor i
    // with weight w_i is kept if -log(u_i)/w_i ranks among the m smallest.
    std::mt19937_64 rng(seed);
    std::vector<std::pair<double, int>> keys(n_sensor);
    for (int i = 0; i < n_sensor; ++i) {
        double w = 1.0;
        if (scheme == SamplingScheme::WindowWeighted && i >= window_lo && i < window_hi) w = weight;
        double u = uniform01(rng);
        if (u <= 0.0) u = 0x1.0p-53;
        keys[i] = {-std::log(u) / w, i};
    }
    std::sort(keys.begin(), keys.end());
    p.selected.resize(m);
    for (int k = 0; k < m; ++k) p.selected[k] = keys[k].second;
    std::sort(p.selected.begin(), p.selected.end());
    return p;
}

Measurements subsample(const DataField& g, const SamplingPattern& pat) {
    if (g.values.cols != pat.n_sensor)
        throw std::invalid_argument("subsample: pattern/sensor count mismatch");
    Measurements b;
    b.dt = g.dt;
    b.cv = g.cv;
    b.values = Array2d(g.values.rows, static_cast<int>(pat.selected.size()));
    for (int t = 0; t < g.values.rows; ++t)
        for (size_t k = 0; k < pat.selected.size(); ++k)
            b.values.at(t, static_cast<int>(k)) = g.values.at(t, pat.selected[k]);
    return b;
}

DataField zero_fill(const Measurements& b, const SamplingPattern& pat) {
    if (b.values.cols != static_cast<int>(pat.selected.size()))
        throw std::invalid_argument("zero_fill: pattern/measurement mismatch");
    DataField g;
    g.dt = b.dt;
    g.cv = b.cv;
    g.values = Array2d(b.values.rows, pat.n_sensor);
    for (int t = 0; t < b.values.rows; ++t)
        for (size_t k = 0; k < pat.selected.size(); ++k)
            g.values.at(t, pat.selected[k]) = b.values.at(t, static_cast<int>(k));
    return g;
}

DataField add_noise(const DataField& g, double sigma, uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("add_noise: sigma must be >= 0");
    DataField out = g;
    if (sigma == 0.0) return out;
    std::mt19937_64 rng(seed);
    size_t n = out.values.size();
    for (size_t i = 0; i + 1 < n; i += 2) {
        double u1 = uniform01(rng), u2 = uniform01(rng);
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        out.values.v[i] += sigma * r * std::cos(2.0 * M_PI * u2);
        out.values.v[i + 1] += sigma * r * std::sin(2.0 * M_PI * u2);
    }
    if (n % 2) {
        double u1 = uniform01(rng), u2 = uniform01(rng);
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        out.values.v[n - 1] += sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    return out;
}

}  // namespace pat
