#include "osvd/metrics.hpp"

#include "osvd/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace osvd {

namespace {

void check_same_dims(const Tensor3& a, const Tensor3& ahat) {
    if (a.dims() != ahat.dims()) throw ValidationError("metrics: tensors have different dimensions");
}

double squared_difference(const Tensor3& a, const Tensor3& ahat) {
    check_same_dims(a, ahat);
    const auto x = a.data();
    const auto y = ahat.data();
    return pairwise_reduce(a.size(), [&](Index i) {
        const auto u = static_cast<std::size_t>(i);
        const double d = x[u] - y[u];
        return d * d;
    });
}

double max_entry(const Tensor3& t) { return *std::max_element(t.data().begin(), t.data().end()); }

// num/den, reading 0/0 as a perfect match.
double ratio_or_one(double num, double den) { return den == 0.0 && num == 0.0 ? 1.0 : num / den; }

} // namespace

double relative_error(const Tensor3& a, const Tensor3& ahat) {
    const double diff = squared_difference(a, ahat);
    const double norm = frob_norm(a);
    if (norm == 0.0) throw ValidationError("relative_error: original tensor is zero");
    return std::sqrt(diff) / norm;
}

double mse(const Tensor3& a, const Tensor3& ahat) {
    return squared_difference(a, ahat) / static_cast<double>(a.size());
}

double psnr_from_mse(double peak, double mse_value) {
    if (!(peak > 0.0)) throw ValidationError("psnr: max(A) must be positive");
    if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(peak / std::sqrt(mse_value));
}

double psnr(const Tensor3& a, const Tensor3& ahat) { return psnr_from_mse(max_entry(a), mse(a, ahat)); }

double ssim_global(const Tensor3& a, const Tensor3& ahat) {
    check_same_dims(a, ahat);
    const Index n = a.size();
    if (n < 2) throw ValidationError("ssim: need at least two entries");
    const auto x = a.data();
    const auto y = ahat.data();
    const auto at = [](std::span<const double> s, Index i) { return s[static_cast<std::size_t>(i)]; };

    const double mu_x = pairwise_reduce(n, [&](Index i) { return at(x, i); }) / static_cast<double>(n);
    const double mu_y = pairwise_reduce(n, [&](Index i) { return at(y, i); }) / static_cast<double>(n);
    const double denom = static_cast<double>(n - 1);
    const double var_x = pairwise_reduce(n, [&](Index i) {
        const double d = at(x, i) - mu_x;
        return d * d;
    }) / denom;
    const double var_y = pairwise_reduce(n, [&](Index i) {
        const double d = at(y, i) - mu_y;
        return d * d;
    }) / denom;
    const double cov = pairwise_reduce(n, [&](Index i) { return (at(x, i) - mu_x) * (at(y, i) - mu_y); }) / denom;

    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double range = *hi - *lo;
    const double c1 = (0.01 * range) * (0.01 * range);
    const double c2 = (0.03 * range) * (0.03 * range);

    const double luminance = ratio_or_one(2.0 * mu_x * mu_y + c1, mu_x * mu_x + mu_y * mu_y + c1);
    const double structure = ratio_or_one(2.0 * cov + c2, var_x + var_y + c2);
    return luminance * structure;
}

QualityReport quality_report(const Tensor3& a, const Tensor3& ahat, std::uint64_t storage) {
    if (storage == 0) throw ValidationError("quality_report: storage cost must be positive");
    QualityReport r;
    const double diff = squared_difference(a, ahat);
    const double norm = frob_norm(a);
    if (norm == 0.0) throw ValidationError("relative_error: original tensor is zero");
    r.err = std::sqrt(diff) / norm;
    r.mse = diff / static_cast<double>(a.size());
    r.ratio = static_cast<double>(a.size()) / static_cast<double>(storage);
    r.psnr = psnr_from_mse(max_entry(a), r.mse);
    r.ssim = ssim_global(a, ahat);
    return r;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string to_csv_row(const QualityReport& r) {
    return format_double(r.err) + "," + format_double(r.ratio) + "," + format_double(r.mse) + "," +
           format_double(r.psnr) + "," + format_double(r.ssim);
}

} // namespace osvd
