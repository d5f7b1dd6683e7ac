#include "osvd/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

namespace osvd {

int worker_threads() {
    if (const char* env = std::getenv(kThreadsEnvVar)) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    }
    return omp_get_max_threads();
}

void parallel_for(Index n, const std::function<void(Index)>& body) {
    if (n <= 0) return;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    const int threads = worker_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1 && n > 1)
    for (Index i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace osvd
