#pragma once

#include "osvd/tensor.hpp"

#include <cstdint>
#include <string>

namespace osvd {

// Reconstruction quality of Ahat against the original A.
struct QualityReport {
    double err = 0.0;    // ||A - Ahat||_F / ||A||_F
    double ratio = 0.0;  // I1*I2*I3 / storage
    double mse = 0.0;    // ||A - Ahat||_F^2 / (I1*I2*I3)
    double psnr = 0.0;   // dB; +inf when mse == 0
    double ssim = 0.0;   // global SSIM
};

double relative_error(const Tensor3& a, const Tensor3& ahat);
double mse(const Tensor3& a, const Tensor3& ahat);

// 20 log10(max(A) / sqrt(MSE)); max is taken over the original only.
double psnr(const Tensor3& a, const Tensor3& ahat);
double psnr_from_mse(double peak, double mse);

// SSIM with a single window spanning the whole tensor. Variances and the
// covariance are normalized by N - 1; C1 = (0.01 L)^2, C2 = (0.03 L)^2 with
// L = max(A) - min(A).
double ssim_global(const Tensor3& a, const Tensor3& ahat);

QualityReport quality_report(const Tensor3& a, const Tensor3& ahat, std::uint64_t storage);

// "err,ratio,mse,psnr_db,ssim"
inline constexpr const char* kQualityCsvHeader = "err,ratio,mse,psnr_db,ssim";
// One CSV row in header order; an infinite PSNR is written as `inf`.
std::string to_csv_row(const QualityReport& r);
// Shortest decimal text that parses back to the same double; `inf`/`-inf`/`nan` otherwise.
std::string format_double(double x);

} // namespace osvd
