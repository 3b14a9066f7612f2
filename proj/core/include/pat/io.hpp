#pragma once

#include <map>
#include <string>
#include <vector>

#include "pat/array.hpp"

namespace pat::io {

/// Key=value sidecar entries accompanying a raw array file.
using Meta = std::map<std::string, std::string>;

/// Write a row-major little-endian float64 array to `path` and its sidecar to
/// the same basename with suffix ".meta". Extra entries are merged with the
/// shape line.
void write_array(const std::string& path, const Array2d& a, const Meta& meta = {});

struct LoadedArray {
    Array2d values;
    Meta meta;
};

LoadedArray read_array(const std::string& path);

/// 16-bit grayscale PNG, linear min-max normalization. Constant images map
/// to zero.
void write_png16(const std::string& path, const Array2d& a);

/// Sectioned key=value config file ("[section]" headers, '#' comments).
struct Config {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key) const;
    int get_int_or(const std::string& section, const std::string& key, int fallback) const;
    void set(const std::string& section, const std::string& key, const std::string& value);

    /// Canonical sorted dump used for hashing; independent of comments,
    /// ordering and whitespace in the source file.
    std::string canonical() const;
    /// FNV-1a 64-bit hash of the canonical dump, as 16 hex chars.
    std::string hash() const;
};

Config parse_config_file(const std::string& path);
Config parse_config_text(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pat::io
