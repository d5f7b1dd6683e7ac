#include "oracles.hpp"

#include "osvd/errors.hpp"
#include "osvd/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>

using namespace osvd;

namespace {

Tensor3 scaled(const Tensor3& t, double c) {
    Tensor3 out = t;
    for (double& x : out.data()) x *= c;
    return out;
}

Tensor3 plus(const Tensor3& a, const Tensor3& b, double c) {
    Tensor3 out = a;
    for (std::size_t n = 0; n < out.data().size(); ++n) out.data()[n] += c * b.data()[n];
    return out;
}

// Global SSIM straight from the formula in long double.
double ssim_oracle(const Tensor3& a, const Tensor3& b) {
    const auto x = a.data();
    const auto y = b.data();
    const long double n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const long double mx = sx / n, my = sy / n;
    long double vx = 0, vy = 0, c = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        vx += (x[i] - mx) * (x[i] - mx);
        vy += (y[i] - my) * (y[i] - my);
        c += (x[i] - mx) * (y[i] - my);
    }
    vx /= n - 1;
    vy /= n - 1;
    c /= n - 1;
    const long double lo = *std::min_element(x.begin(), x.end());
    const long double hi = *std::max_element(x.begin(), x.end());
    const long double c1 = (0.01L * (hi - lo)) * (0.01L * (hi - lo));
    const long double c2 = (0.03L * (hi - lo)) * (0.03L * (hi - lo));
    return static_cast<double>((2 * mx * my + c1) * (2 * c + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2)));
}

} // namespace

TEST(RelativeError, Basics) {
    const Tensor3 a = oracle::random_tensor({4, 3, 2}, 1);
    EXPECT_EQ(relative_error(a, a), 0.0);
    EXPECT_DOUBLE_EQ(relative_error(a, Tensor3(a.dims())), 1.0);
    EXPECT_NEAR(relative_error(a, scaled(a, 0.75)), 0.25, 1e-15);
    EXPECT_THROW(relative_error(Tensor3(a.dims()), a), ValidationError);
    EXPECT_THROW(relative_error(a, Tensor3(4, 3, 3)), ValidationError);
}

TEST(Psnr, FortyDecibels) {
    EXPECT_DOUBLE_EQ(psnr_from_mse(1.0, 1e-4), 40.0);
    // max(A) = 1 and a uniform error of 0.01 give MSE = 1e-4.
    Tensor3 a(10, 10, 1);
    a(3, 4, 0) = 1.0;
    Tensor3 b = a;
    for (double& x : b.data()) x += 0.01;
    EXPECT_NEAR(psnr(a, b), 40.0, 1e-12);
}

TEST(Psnr, ExactIsInfiniteAndDoublingCostsSixDb) {
    const Tensor3 a = oracle::random_tensor({5, 4, 3}, 2);
    EXPECT_EQ(psnr(a, a), std::numeric_limits<double>::infinity());
    const Tensor3 e = oracle::random_tensor({5, 4, 3}, 3);
    const double p1 = psnr(a, plus(a, e, 0.01));
    const double p2 = psnr(a, plus(a, e, 0.02));
    EXPECT_NEAR(p1 - p2, 20.0 * std::log10(2.0), 1e-10);
    EXPECT_NEAR(p1 - p2, 6.0206, 1e-4);
}

TEST(Psnr, DecreasesWithError) {
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 10; ++k) {
        const double p = psnr_from_mse(2.0, 1e-3 * k);
        EXPECT_LT(p, prev);
        prev = p;
    }
}

TEST(Psnr, NonPositivePeakRejected) {
    EXPECT_THROW(psnr_from_mse(0.0, 1.0), ValidationError);
    Tensor3 neg(2, 2, 1);
    for (double& x : neg.data()) x = -1.0;
    EXPECT_THROW(psnr(neg, Tensor3(2, 2, 1)), ValidationError);
}

TEST(Ssim, IdenticalIsOne) {
    const Tensor3 a = oracle::random_tensor({6, 5, 4}, 4);
    EXPECT_DOUBLE_EQ(ssim_global(a, a), 1.0);
    Tensor3 flat(3, 3, 3);
    for (double& x : flat.data()) x = 2.0;
    EXPECT_EQ(ssim_global(flat, flat), 1.0);
}

TEST(Ssim, NegatedZeroMeanIsNegative) {
    Tensor3 a(4, 4, 2);
    for (Index n = 0; n < a.size(); ++n) a.data()[static_cast<std::size_t>(n)] = (n % 2 == 0 ? 1.0 : -1.0) * (1 + n % 5);
    const double mean = std::accumulate(a.data().begin(), a.data().end(), 0.0) / static_cast<double>(a.size());
    for (double& x : a.data()) x -= mean;
    EXPECT_LT(ssim_global(a, scaled(a, -1.0)), 0.0);
}

TEST(Ssim, SymmetricAndMatchesFormula) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Tensor3 a = oracle::random_tensor({7, 6, 5}, 10 + seed);
        const Tensor3 b = plus(a, oracle::random_tensor({7, 6, 5}, 50 + seed), 0.3);
        const double s = ssim_global(a, b);
        EXPECT_NEAR(s, ssim_oracle(a, b), 1e-12);
        // C1, C2 follow the first argument's range, so swap with a same-range partner.
        Tensor3 c = a;
        std::reverse(c.data().begin(), c.data().end());
        EXPECT_EQ(ssim_global(a, c), ssim_global(c, a));
        EXPECT_GE(s, -1.0);
        EXPECT_LE(s, 1.0);
    }
}

TEST(Ssim, SingleElementRejected) { EXPECT_THROW(ssim_global(Tensor3(1, 1, 1), Tensor3(1, 1, 1)), ValidationError); }

TEST(QualityReport, ExactReconstruction) {
    const Tensor3 a = oracle::random_tensor({100, 100, 50}, 5);
    const QualityReport r = quality_report(a, a, 10300);
    EXPECT_EQ(r.err, 0.0);
    EXPECT_EQ(r.mse, 0.0);
    EXPECT_EQ(r.psnr, std::numeric_limits<double>::infinity());
    EXPECT_DOUBLE_EQ(r.ssim, 1.0);
    EXPECT_NEAR(r.ratio, 48.5437, 1e-4);
    EXPECT_EQ(to_csv_row(r).substr(0, 4), "0,48");
    EXPECT_NE(to_csv_row(r).find(",inf,"), std::string::npos);
}

TEST(QualityReport, FieldsMatchComponents) {
    const Tensor3 a = oracle::random_tensor({6, 5, 4}, 6);
    const Tensor3 b = plus(a, oracle::random_tensor({6, 5, 4}, 7), 0.1);
    const QualityReport r = quality_report(a, b, 37);
    EXPECT_DOUBLE_EQ(r.err, relative_error(a, b));
    EXPECT_DOUBLE_EQ(r.mse, mse(a, b));
    EXPECT_DOUBLE_EQ(r.psnr, psnr(a, b));
    EXPECT_DOUBLE_EQ(r.ssim, ssim_global(a, b));
    EXPECT_DOUBLE_EQ(r.ratio, 120.0 / 37.0);
    // err^2 ||A||^2 = MSE * N.
    const double lhs = r.err * r.err * oracle::flat_dot(a, a);
    EXPECT_LE(oracle::relative_gap(lhs, r.mse * 120.0), 1e-12);
    EXPECT_THROW(quality_report(a, b, 0), ValidationError);
}

TEST(Csv, HeaderAndRoundTrip) {
    EXPECT_STREQ(kQualityCsvHeader, "err,ratio,mse,psnr_db,ssim");
    const QualityReport r{0.1, 48.54368932038835, 1e-4, 40.0, 0.99};
    EXPECT_EQ(to_csv_row(r), "0.1,48.54368932038835,1e-04,40,0.99");
    for (double x : {1.0 / 3.0, 6.02e-23, 12345.678}) EXPECT_EQ(std::stod(format_double(x)), x);
    EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(format_double(std::nan("")), "nan");
}
