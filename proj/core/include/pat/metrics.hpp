#pragma once

#include "pat/grid.hpp"

namespace pat {

struct MetricsReport {
    double mse = 0.0;
    double ssim = 0.0;
    double psnr = 0.0;  // +inf when rec == ref
    double snr = 0.0;   // +inf when rec == ref
};

/// Image-quality metrics of a reconstruction against a reference of equal
/// dims (upscale the reference with bilinear_upscale first if they differ).
///   MSE   mean squared error
///   PSNR  10*log10(peak(ref)^2 / MSE)
///   SSIM  11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03, L=peak(ref)
///   SNR   20*log10(||ref|| / ||ref-rec||)
MetricsReport metrics(const ImageField& rec, const ImageField& ref);

}  // namespace pat
