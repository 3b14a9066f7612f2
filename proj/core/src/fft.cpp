#include "pat/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace pat::fft {

namespace {

std::mutex g_plan_mutex;

fftw_plan plan_2d(int rows, int cols, int sign) {
    static std::map<std::tuple<int, int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_tuple(rows, cols, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    cvec scratch(static_cast<size_t>(rows) * cols);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(rows, cols, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw_plan_dft_2d failed");
    cache.emplace(key, plan);
    return plan;
}

fftw_plan plan_1d(int n, int sign) {
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    cvec scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw_plan_dft_1d failed");
    cache.emplace(key, plan);
    return plan;
}

void scale(cvec& a, double s) {
    for (auto& z : a) z *= s;
}

}  // namespace

void fft2(cvec& a, int rows, int cols) {
    if (a.size() != static_cast<size_t>(rows) * cols) throw std::invalid_argument("fft2: size mismatch");
    fftw_plan plan = plan_2d(rows, cols, FFTW_FORWARD);
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(plan, p, p);
    scale(a, 1.0 / std::sqrt(static_cast<double>(a.size())));
}

void ifft2(cvec& a, int rows, int cols) {
    if (a.size() != static_cast<size_t>(rows) * cols) throw std::invalid_argument("ifft2: size mismatch");
    fftw_plan plan = plan_2d(rows, cols, FFTW_BACKWARD);
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(plan, p, p);
    scale(a, 1.0 / std::sqrt(static_cast<double>(a.size())));
}

void fft1(cvec& a, int n) {
    if (a.size() != static_cast<size_t>(n)) throw std::invalid_argument("fft1: size mismatch");
    fftw_plan plan = plan_1d(n, FFTW_FORWARD);
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(plan, p, p);
    scale(a, 1.0 / std::sqrt(static_cast<double>(n)));
}

void ifft1(cvec& a, int n) {
    if (a.size() != static_cast<size_t>(n)) throw std::invalid_argument("ifft1: size mismatch");
    fftw_plan plan = plan_1d(n, FFTW_BACKWARD);
    auto* p = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(plan, p, p);
    scale(a, 1.0 / std::sqrt(static_cast<double>(n)));
}

int good_size(int n) {
    if (n < 1) return 1;
    for (int m = n;; ++m) {
        int r = m;
        while (r % 2 == 0) r /= 2;
        while (r % 3 == 0) r /= 3;
        while (r % 5 == 0) r /= 5;
        if (r == 1) return m;
    }
}

}  // namespace pat::fft
