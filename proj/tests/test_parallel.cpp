#include "oracles.hpp"

#include "osvd/decomposition.hpp"
#include "osvd/errors.hpp"
#include "osvd/parallel.hpp"
#include "osvd/randomized.hpp"

#include <gtest/gtest.h>

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>

using namespace osvd;

TEST(ParallelFor, VisitsEveryIndexOnce) {
    std::vector<int> hits(100, 0);
    parallel_for(100, [&](Index i) { hits[static_cast<std::size_t>(i)] += 1; });
    for (int h : hits) EXPECT_EQ(h, 1);
    parallel_for(0, [&](Index) { FAIL(); });
}

TEST(ParallelFor, RethrowsLowestIndexException) {
    try {
        parallel_for(10, [](Index i) {
            if (i == 3) throw ValidationError("three");
            if (i == 7) throw std::runtime_error("seven");
        });
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_STREQ(e.what(), "three");
    }
}

TEST(ParallelFor, EnvironmentSetsThreadCount) {
    ::setenv(kThreadsEnvVar, "3", 1);
    EXPECT_EQ(worker_threads(), 3);
    ::setenv(kThreadsEnvVar, "garbage", 1);
    EXPECT_EQ(worker_threads(), omp_get_max_threads());
    ::unsetenv(kThreadsEnvVar);
    EXPECT_GE(worker_threads(), 1);
}

TEST(ParallelFor, ResultsIndependentOfThreadCount) {
    const Tensor3 t = oracle::random_tensor({20, 15, 12}, 1);
    const TruncationSpec spec = TruncationSpec::uniform(6, 4, 5, 1, 77);
    ::setenv(kThreadsEnvVar, "1", 1);
    const OsvdFactors a = rosvd(t, spec);
    const OsvdFactors ta = tosvd(t, 6, std::vector<Index>(6, 3));
    ::setenv(kThreadsEnvVar, "4", 1);
    const OsvdFactors b = rosvd(t, spec);
    const OsvdFactors tb = tosvd(t, 6, std::vector<Index>(6, 3));
    ::unsetenv(kThreadsEnvVar);
    EXPECT_EQ(a.ufaces, b.ufaces);
    EXPECT_EQ(a.sfaces, b.sfaces);
    EXPECT_EQ(a.vfaces, b.vfaces);
    EXPECT_EQ(ta.ufaces, tb.ufaces);
    EXPECT_EQ(ta.sfaces, tb.sfaces);
}
