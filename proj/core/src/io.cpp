#include "pat/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "array file format assumes a little-endian host");

namespace pat::io {

namespace {

std::string meta_path(const std::string& path) {
    auto slash = path.find_last_of('/');
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ".meta";
    return path.substr(0, dot) + ".meta";
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void write_array(const std::string& path, const Array2d& a, const Meta& meta) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(double)));
    if (!f) throw std::runtime_error("short write: " + path);

    Meta m = meta;
    std::ostringstream shape;
    shape << a.rows << "x" << a.cols;
    m["shape"] = shape.str();
    std::ofstream mf(meta_path(path));
    if (!mf) throw std::runtime_error("cannot open for writing: " + meta_path(path));
    for (const auto& [k, v] : m) mf << k << "=" << v << "\n";
}

LoadedArray read_array(const std::string& path) {
    std::ifstream mf(meta_path(path));
    if (!mf) throw std::runtime_error("missing sidecar: " + meta_path(path));
    LoadedArray out;
    std::string line;
    while (std::getline(mf, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        out.meta[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto it = out.meta.find("shape");
    if (it == out.meta.end()) throw std::runtime_error("sidecar lacks shape: " + meta_path(path));
    int rows = 0, cols = 0;
    if (std::sscanf(it->second.c_str(), "%dx%d", &rows, &cols) != 2 || rows < 1 || cols < 1)
        throw std::runtime_error("bad shape in sidecar: " + it->second);

    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    out.values = Array2d(rows, cols);
    f.read(reinterpret_cast<char*>(out.values.data()),
           static_cast<std::streamsize>(out.values.size() * sizeof(double)));
    if (f.gcount() != static_cast<std::streamsize>(out.values.size() * sizeof(double)))
        throw std::runtime_error("array file shorter than shape declares: " + path);
    return out;
}

// ---------------------------------------------------------------------------
// PNG writer: 16-bit grayscale, zlib stream with stored (uncompressed) deflate
// blocks so there is no external compression dependency and output bytes are
// fully deterministic.

namespace {

uint32_t crc32_update(uint32_t crc, const uint8_t* buf, size_t len) {
    static uint32_t table[256];
    static bool init = false;
    if (!init) {
        for (uint32_t n = 0; n < 256; ++n) {
            uint32_t c = n;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            table[n] = c;
        }
        init = true;
    }
    crc ^= 0xffffffffu;
    for (size_t i = 0; i < len; ++i) crc = table[(crc ^ buf[i]) & 0xff] ^ (crc >> 8);
    return crc ^ 0xffffffffu;
}

void put_be32(std::vector<uint8_t>& v, uint32_t x) {
    v.push_back(static_cast<uint8_t>(x >> 24));
    v.push_back(static_cast<uint8_t>(x >> 16));
    v.push_back(static_cast<uint8_t>(x >> 8));
    v.push_back(static_cast<uint8_t>(x));
}

void write_chunk(std::ofstream& f, const char type[4], const std::vector<uint8_t>& payload) {
    std::vector<uint8_t> head;
    put_be32(head, static_cast<uint32_t>(payload.size()));
    f.write(reinterpret_cast<const char*>(head.data()), 4);
    std::vector<uint8_t> body(type, type + 4);
    body.insert(body.end(), payload.begin(), payload.end());
    f.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
    std::vector<uint8_t> crc;
    put_be32(crc, crc32_update(0, body.data(), body.size()));
    f.write(reinterpret_cast<const char*>(crc.data()), 4);
}

std::vector<uint8_t> zlib_stored(const std::vector<uint8_t>& raw) {
    std::vector<uint8_t> z;
    z.push_back(0x78);
    z.push_back(0x01);
    size_t pos = 0;
    do {
        size_t n = std::min<size_t>(raw.size() - pos, 65535);
        bool last = pos + n == raw.size();
        z.push_back(last ? 1 : 0);
        z.push_back(static_cast<uint8_t>(n & 0xff));
        z.push_back(static_cast<uint8_t>(n >> 8));
        z.push_back(static_cast<uint8_t>(~n & 0xff));
        z.push_back(static_cast<uint8_t>((~n >> 8) & 0xff));
        z.insert(z.end(), raw.begin() + pos, raw.begin() + pos + n);
        pos += n;
    } while (pos < raw.size());
    uint32_t a = 1, b = 0;
    for (uint8_t byte : raw) {
        a = (a + byte) % 65521;
        b = (b + a) % 65521;
    }
    put_be32(z, (b << 16) | a);
    return z;
}

}  // namespace

void write_png16(const std::string& path, const Array2d& a) {
    if (a.rows < 1 || a.cols < 1) throw std::invalid_argument("write_png16: empty array");
    double lo = a.v[0], hi = a.v[0];
    for (double x : a.v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;

    std::vector<uint8_t> raw;
    raw.reserve(static_cast<size_t>(a.rows) * (1 + 2 * a.cols));
    for (int r = 0; r < a.rows; ++r) {
        raw.push_back(0);  // filter: none
        for (int c = 0; c < a.cols; ++c) {
            auto q = static_cast<uint32_t>((a.at(r, c) - lo) * scale + 0.5);
            if (q > 65535) q = 65535;
            raw.push_back(static_cast<uint8_t>(q >> 8));
            raw.push_back(static_cast<uint8_t>(q & 0xff));
        }
    }

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    static const uint8_t sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    f.write(reinterpret_cast<const char*>(sig), 8);

    std::vector<uint8_t> ihdr;
    put_be32(ihdr, static_cast<uint32_t>(a.cols));
    put_be32(ihdr, static_cast<uint32_t>(a.rows));
    ihdr.push_back(16);  // bit depth
    ihdr.push_back(0);   // grayscale
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    write_chunk(f, "IHDR", ihdr);
    write_chunk(f, "IDAT", zlib_stored(raw));
    write_chunk(f, "IEND", {});
}

// ---------------------------------------------------------------------------
// Config

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end() || !s->second.count(key))
        throw std::runtime_error("config: missing [" + section + "] " + key);
    return s->second.at(key);
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw std::runtime_error("config: [" + section + "] " + key + " is not a number: " + v);
    }
}

double Config::get_double_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key) const {
    double d = get_double(section, key);
    auto i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw std::runtime_error("config: [" + section + "] " + key + " is not an integer");
    return i;
}

int Config::get_int_or(const std::string& section, const std::string& key, int fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections[section][key] = value;
}

std::string Config::canonical() const {
    std::ostringstream out;
    for (const auto& [sec, kv] : sections)
        for (const auto& [k, v] : kv) out << sec << "." << k << "=" << v << "\n";
    return out.str();
}

std::string Config::hash() const {
    const std::string text = canonical();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Config parse_config_text(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config: malformed section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key=value at line " + std::to_string(lineno));
        cfg.sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

Config parse_config_file(const std::string& path) { return parse_config_text(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
}

}  // namespace pat::io
