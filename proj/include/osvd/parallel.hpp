#pragma once

#include "osvd/tensor.hpp"

#include <functional>

namespace osvd {

// Name of the environment variable holding the worker thread count.
inline constexpr const char* kThreadsEnvVar = "OSVD_NUM_THREADS";

// Threads used by face loops: $OSVD_NUM_THREADS when set to a positive
// integer, otherwise the OpenMP default.
int worker_threads();

// Runs body(0..n-1), possibly concurrently. Iterations must write disjoint
// outputs. The first exception thrown (lowest index) is rethrown after the loop.
void parallel_for(Index n, const std::function<void(Index)>& body);

} // namespace osvd
