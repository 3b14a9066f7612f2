#pragma once

#include <complex>
#include <vector>

namespace pat::fft {

using cvec = std::vector<std::complex<double>>;

/// In-place 2D complex DFT, unitary scaling (1/sqrt(n) both ways).
/// Plans are cached per (rows, cols, direction) behind a mutex; execution is
/// thread-safe. All plans use FFTW_ESTIMATE so results are run-to-run
/// deterministic.
void fft2(cvec& a, int rows, int cols);
void ifft2(cvec& a, int rows, int cols);

/// In-place 1D complex DFT along a contiguous buffer, unitary scaling.
void fft1(cvec& a, int n);
void ifft1(cvec& a, int n);

/// Smallest 5-smooth integer >= n (fast FFTW sizes).
int good_size(int n);

}  // namespace pat::fft
