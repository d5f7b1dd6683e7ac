#include "osvd/osvd.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

osvd_tensor* make_tensor(const std::vector<size_t>& d, const std::vector<double>& data) {
    osvd_tensor* t = nullptr;
    EXPECT_EQ(osvd_tensor_create(d.data(), data.data(), &t), OSVD_OK);
    return t;
}

std::vector<double> ramp(size_t n) {
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i) v[i] = std::sin(0.37 * static_cast<double>(i * i + 1));
    return v;
}

} // namespace

TEST(CApi, VersionAndThreads) {
    EXPECT_STRNE(osvd_version(), "");
    EXPECT_GE(osvd_worker_threads(), 1);
}

TEST(CApi, TensorLifecycle) {
    const std::vector<size_t> d{3, 2, 2};
    osvd_tensor* t = make_tensor(d, ramp(12));
    size_t got[3];
    osvd_tensor_dims(t, got);
    EXPECT_EQ(got[0], 3u);
    EXPECT_EQ(got[2], 2u);
    EXPECT_EQ(osvd_tensor_data(t)[5], ramp(12)[5]);
    size_t r = 0;
    EXPECT_EQ(osvd_tensor_rank3(t, -1.0, &r), OSVD_OK);
    EXPECT_EQ(r, 2u);
    osvd_tensor_free(t);

    osvd_tensor* zeros = nullptr;
    ASSERT_EQ(osvd_tensor_create(d.data(), nullptr, &zeros), OSVD_OK);
    EXPECT_EQ(osvd_tensor_frob_norm(zeros), 0.0);
    osvd_tensor_free(zeros);
}

TEST(CApi, ValidationErrorsReported) {
    const size_t bad[3] = {0, 2, 2};
    osvd_tensor* t = nullptr;
    EXPECT_EQ(osvd_tensor_create(bad, nullptr, &t), OSVD_ERR_VALIDATION);
    EXPECT_EQ(t, nullptr);
    EXPECT_STRNE(osvd_last_error(), "");

    const size_t d[3] = {2, 2, 2};
    osvd_tensor* zeros = nullptr;
    ASSERT_EQ(osvd_tensor_create(d, nullptr, &zeros), OSVD_OK);
    osvd_factors* f = nullptr;
    EXPECT_EQ(osvd_decompose_full(zeros, &f), OSVD_ERR_VALIDATION);
    EXPECT_EQ(f, nullptr);
    osvd_tensor_free(zeros);
    EXPECT_EQ(osvd_tensor_load("/nonexistent/x.ot3", &t), OSVD_ERR_IO);
}

TEST(CApi, DecomposeReconstructAndWeights) {
    const std::vector<size_t> d{6, 5, 4};
    osvd_tensor* t = make_tensor(d, ramp(120));
    osvd_factors* full = nullptr;
    ASSERT_EQ(osvd_decompose_full(t, &full), OSVD_OK);
    size_t k1 = 0, k2max = 0, dims[3];
    osvd_factors_shape(full, dims, &k1, &k2max);
    EXPECT_EQ(k1, 4u);
    EXPECT_EQ(k2max, 5u);

    osvd_tensor* rec = nullptr;
    ASSERT_EQ(osvd_reconstruct(full, &rec), OSVD_OK);
    osvd_quality q{};
    uint64_t storage = 0;
    ASSERT_EQ(osvd_factors_storage_cost(full, &storage), OSVD_OK);
    ASSERT_EQ(osvd_quality_report(t, rec, storage, &q), OSVD_OK);
    EXPECT_LE(q.err, 1e-12);

    double w = 0.0, sum = 0.0;
    for (size_t i = 1; i <= k1; ++i)
        for (size_t j = 1; j <= k2max; ++j) {
            ASSERT_EQ(osvd_factors_weight(full, i, j, &w), OSVD_OK);
            sum += w * w;
        }
    const double n = osvd_tensor_frob_norm(t);
    EXPECT_NEAR(sum, n * n, 1e-10 * n * n);
    EXPECT_EQ(osvd_factors_weight(full, 0, 1, &w), OSVD_ERR_VALIDATION);

    const size_t k2[2] = {2, 1};
    osvd_factors* trunc = nullptr;
    ASSERT_EQ(osvd_decompose_truncated(t, 2, k2, &trunc), OSVD_OK);
    osvd_tensor* approx = nullptr;
    ASSERT_EQ(osvd_reconstruct(trunc, &approx), OSVD_OK);
    double exact = 0.0;
    ASSERT_EQ(osvd_truncation_error(full, 2, k2, &exact), OSVD_OK);
    ASSERT_EQ(osvd_quality_report(t, approx, 10, &q), OSVD_OK);
    EXPECT_NEAR(q.err * q.err * n * n, exact, 1e-10 * exact);

    const size_t qv[2] = {1, 1};
    const osvd_truncation spec{2, k2, 2, 1, qv, 5};
    double bound = 0.0;
    ASSERT_EQ(osvd_error_bound(full, &spec, &bound), OSVD_OK);
    EXPECT_GE(bound, std::sqrt(exact));

    osvd_factors* rnd = nullptr;
    ASSERT_EQ(osvd_decompose_randomized(t, &spec, &rnd), OSVD_OK);
    double s3[2];
    osvd_factors_sigma3(rnd, s3);
    EXPECT_GT(s3[0], s3[1]);
    size_t k2out[2];
    osvd_factors_k2(rnd, k2out);
    EXPECT_EQ(k2out[0], 2u);
    EXPECT_EQ(k2out[1], 1u);
    EXPECT_GE(osvd_factors_timings(rnd).stage1_seconds, 0.0);

    osvd_tensor* rterm = nullptr;
    ASSERT_EQ(osvd_r_term_approx(full, 20, &rterm), OSVD_OK);
    EXPECT_EQ(osvd_r_term_approx(full, 21, &rec), OSVD_ERR_VALIDATION);

    for (auto* x : {t, rec, approx, rterm}) osvd_tensor_free(x);
    for (auto* x : {full, trunc, rnd}) osvd_factors_free(x);
}

TEST(CApi, WarningsExposed) {
    const std::vector<size_t> d{4, 3, 3};
    osvd_tensor* t = make_tensor(d, ramp(36));
    const size_t k2[1] = {9};
    const size_t q[1] = {0};
    const osvd_truncation spec{1, k2, 0, 0, q, 1};
    osvd_factors* f = nullptr;
    ASSERT_EQ(osvd_decompose_randomized(t, &spec, &f), OSVD_OK);
    ASSERT_GE(osvd_factors_warning_count(f), 1u);
    EXPECT_NE(std::string(osvd_factors_warning(f, 0)).find("rank"), std::string::npos);
    EXPECT_EQ(osvd_factors_warning(f, 99), nullptr);
    osvd_factors_free(f);
    osvd_tensor_free(t);
}

TEST(CApi, GenerateSaveLoad) {
    const size_t d[3] = {10, 8, 6};
    osvd_tensor* t = nullptr;
    osvd_factors* truth = nullptr;
    ASSERT_EQ(osvd_generate(d, 3, OSVD_DECAY_FAST, 4, 7, &t, &truth), OSVD_OK);
    size_t r = 0;
    ASSERT_EQ(osvd_tensor_rank3(t, 1e-10, &r), OSVD_OK);
    EXPECT_EQ(r, 3u);

    const fs::path dir = fs::temp_directory_path() / "osvd_c_api_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string tpath = (dir / "t.ot3").string();
    ASSERT_EQ(osvd_tensor_save(t, tpath.c_str()), OSVD_OK);
    osvd_tensor* back = nullptr;
    ASSERT_EQ(osvd_tensor_load(tpath.c_str(), &back), OSVD_OK);
    EXPECT_EQ(std::memcmp(osvd_tensor_data(t), osvd_tensor_data(back), 480 * sizeof(double)), 0);

    const std::string fdir = (dir / "truth").string();
    ASSERT_EQ(osvd_factors_save(truth, fdir.c_str(), "{\"k\":1}"), OSVD_OK);
    osvd_factors* loaded = nullptr;
    ASSERT_EQ(osvd_factors_load(fdir.c_str(), &loaded), OSVD_OK);
    double a = 0, b = 0;
    osvd_factors_weight(truth, 2, 3, &a);
    osvd_factors_weight(loaded, 2, 3, &b);
    EXPECT_EQ(a, b);
    EXPECT_EQ(osvd_factors_save(truth, fdir.c_str(), "{bad"), OSVD_ERR_VALIDATION);

    EXPECT_EQ(osvd_generate(d, 3, static_cast<osvd_decay>(7), 4, 7, &t, nullptr), OSVD_ERR_VALIDATION);
    osvd_tensor_free(t);
    osvd_tensor_free(back);
    osvd_factors_free(truth);
    osvd_factors_free(loaded);
    fs::remove_all(dir);
}

TEST(CApi, StorageAndCsv) {
    const size_t d[3] = {100, 100, 50};
    uint64_t s = 0;
    ASSERT_EQ(osvd_storage_cost(d, 5, 10, &s), OSVD_OK);
    EXPECT_EQ(s, 10300u);
    EXPECT_STREQ(osvd_quality_csv_header(), "err,ratio,mse,psnr_db,ssim");
    const osvd_quality q{0, 2.5, 0, INFINITY, 1};
    char small[4];
    const size_t need = osvd_quality_csv_row(&q, small, sizeof small);
    EXPECT_EQ(need, std::strlen("0,2.5,0,inf,1"));
    EXPECT_STREQ(small, "0,2");
    std::vector<char> buf(need + 1);
    osvd_quality_csv_row(&q, buf.data(), buf.size());
    EXPECT_STREQ(buf.data(), "0,2.5,0,inf,1");
}
