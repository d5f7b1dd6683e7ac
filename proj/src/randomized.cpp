#include "osvd/randomized.hpp"

#include "face_store.hpp"
#include "osvd/errors.hpp"
#include "osvd/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace osvd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double squared_tail(std::span<const double> s, std::size_t from) {
    if (from >= s.size()) return 0.0;
    const auto tail = s.subspan(from);
    return pairwise_reduce(static_cast<Index>(tail.size()), [&](Index j) {
        const double v = tail[static_cast<std::size_t>(j)];
        return v * v;
    });
}

double inflation(Index k, Index p, Index q, double tau) {
    return 1.0 + static_cast<double>(k) / static_cast<double>(p - 1) *
                     std::pow(tau, 4.0 * static_cast<double>(q));
}

} // namespace

TruncationSpec TruncationSpec::uniform(Index k1, Index k2, Index p, Index q, std::uint64_t seed) {
    TruncationSpec spec;
    spec.k1 = k1;
    spec.k2.assign(static_cast<std::size_t>(std::max<Index>(k1, 0)), k2);
    spec.p = p;
    spec.q0 = q;
    spec.q.assign(static_cast<std::size_t>(std::max<Index>(k1, 0)), q);
    spec.seed = seed;
    return spec;
}

void validate(const TruncationSpec& spec) {
    if (spec.k1 < 1) throw ValidationError("truncation spec: k1 must be at least 1");
    if (static_cast<Index>(spec.k2.size()) != spec.k1) {
        throw ValidationError("truncation spec: k2 must have k1 = " + std::to_string(spec.k1) + " entries");
    }
    if (static_cast<Index>(spec.q.size()) != spec.k1) {
        throw ValidationError("truncation spec: q must have k1 = " + std::to_string(spec.k1) + " entries");
    }
    if (spec.p < 0) throw ValidationError("truncation spec: oversampling p must be non-negative");
    if (spec.q0 < 0) throw ValidationError("truncation spec: q0 must be non-negative");
    for (Index k : spec.k2) {
        if (k < 1) throw ValidationError("truncation spec: every k2 entry must be at least 1");
    }
    for (Index q : spec.q) {
        if (q < 0) throw ValidationError("truncation spec: every q entry must be non-negative");
    }
}

OsvdFactors rosvd(const Tensor3& t, const TruncationSpec& spec) {
    validate(spec);
    const Dims dims = t.dims();
    const Index r1 = std::min(dims[2], dims[0] * dims[1]);
    const Index r2 = std::min(dims[0], dims[1]);
    if (spec.k1 > r1) {
        throw ValidationError("rosvd: k1 = " + std::to_string(spec.k1) + " exceeds min(I3, I1*I2) = " +
                              std::to_string(r1));
    }

    std::vector<std::string> warnings;
    std::vector<Index> k2 = spec.k2;
    for (std::size_t i = 0; i < k2.size(); ++i) {
        if (k2[i] > r2) {
            warnings.push_back("rosvd: face " + std::to_string(i + 1) + " rank reduced from " +
                               std::to_string(k2[i]) + " to min(I1, I2) = " + std::to_string(r2));
            k2[i] = r2;
        }
    }

    const auto start = Clock::now();
    const Matrix a3 = mode_n_unfold(t, 3);
    RandomizedSvd mode3 = rsvd(a3, spec.k1, spec.p, spec.q0, RngSpec{spec.seed, 0});
    for (auto& w : mode3.warnings) warnings.push_back("mode-3 sketch: " + std::move(w));
    // Row i is sigma_i * V3(:,i)^T in exact arithmetic; projecting keeps the
    // I3 = 1 case bit-identical to a plain rsvd of the slice.
    const Matrix projected = mode3.svd.u.transpose() * a3;
    const double stage1 = seconds_since(start);

    OsvdFactors f = detail::allocate_factors(dims, spec.k1, k2);
    f.u3 = mode3.svd.u;
    f.sigma3 = mode3.svd.s;

    std::vector<std::vector<std::string>> face_warnings(static_cast<std::size_t>(spec.k1));
    const auto stage2_start = Clock::now();
    parallel_for(spec.k1, [&](Index i) {
        const auto idx = static_cast<std::size_t>(i);
        Matrix face(dims[0], dims[1]);
        Eigen::Map<Vector>(face.data(), face.size()) = projected.row(i).transpose();
        RandomizedSvd r = rsvd(face, k2[idx], spec.p, spec.q[idx],
                               RngSpec{spec.seed, static_cast<std::uint64_t>(i) + 1});
        detail::store_face(f, i, r.svd, 1.0);
        for (auto& w : r.warnings) face_warnings[idx].push_back("face " + std::to_string(i + 1) + ": " + std::move(w));
    });
    f.timings = {stage1, seconds_since(stage2_start)};
    for (auto& fw : face_warnings) {
        for (auto& w : fw) warnings.push_back(std::move(w));
    }
    f.warnings = std::move(warnings);
    return f;
}

double expected_error_bound(std::span<const double> sigma3, const std::vector<std::vector<double>>& weights,
                            const TruncationSpec& spec) {
    validate(spec);
    if (spec.p < 2) throw ValidationError("expected_error_bound: oversampling p must be at least 2");
    if (weights.size() != sigma3.size()) {
        throw ValidationError("expected_error_bound: one weight row per mode-3 singular value required");
    }
    const auto k1 = static_cast<std::size_t>(spec.k1);

    // Part one: faces dropped by the mode-3 sketch.
    std::vector<double> dropped;
    for (std::size_t i = k1; i < weights.size(); ++i) dropped.push_back(squared_tail(weights[i], 0));
    const double tail1 = pairwise_sum(dropped);
    double part1 = 0.0;
    if (tail1 > 0.0) part1 = inflation(spec.k1, spec.p, spec.q0, singular_value_gap(sigma3, spec.k1)) * tail1;

    // Part two: slots dropped inside the kept faces.
    std::vector<double> kept;
    for (std::size_t i = 0; i < k1 && i < weights.size(); ++i) {
        const Index k2 = spec.k2[i];
        const double tail = squared_tail(weights[i], static_cast<std::size_t>(k2));
        if (tail == 0.0) continue;
        kept.push_back(inflation(k2, spec.p, spec.q[i], singular_value_gap(weights[i], k2)) * tail);
    }
    const double part2 = pairwise_sum(kept);
    return std::sqrt(part1) + std::sqrt(part2);
}

double expected_error_bound(const OsvdFactors& full, const TruncationSpec& spec) {
    validate(full);
    std::vector<std::vector<double>> weights(static_cast<std::size_t>(full.k1()));
    for (Index i = 0; i < full.k1(); ++i) {
        const Vector w = full.face_weights(i);
        weights[static_cast<std::size_t>(i)].assign(w.data(), w.data() + w.size());
    }
    return expected_error_bound(std::span<const double>(full.sigma3.data(), static_cast<std::size_t>(full.sigma3.size())),
                                weights, spec);
}

std::uint64_t storage_cost(const Dims& dims, Index k1, Index k2) {
    if (k1 < 1 || k2 < 1) throw ValidationError("storage_cost: ranks must be positive");
    const auto a = static_cast<std::uint64_t>(k1);
    const auto b = static_cast<std::uint64_t>(k2);
    return a * b * static_cast<std::uint64_t>(dims[0]) + a * b * static_cast<std::uint64_t>(dims[1]) +
           a * static_cast<std::uint64_t>(dims[2]) + a * b;
}

std::uint64_t storage_cost(const Dims& dims, const TruncationSpec& spec) {
    validate(spec);
    return storage_cost(dims, spec.k1, *std::max_element(spec.k2.begin(), spec.k2.end()));
}

std::uint64_t storage_cost(const OsvdFactors& f) {
    validate(f);
    return storage_cost(f.dims(), f.k1(), *std::max_element(f.k2.begin(), f.k2.end()));
}

double compression_ratio_spec(const Dims& dims, Index k1, Index k2) {
    const double elements = static_cast<double>(dims[0]) * static_cast<double>(dims[1]) * static_cast<double>(dims[2]);
    return elements / static_cast<double>(storage_cost(dims, k1, k2));
}

double compression_ratio_spec(const Dims& dims, const TruncationSpec& spec) {
    validate(spec);
    return compression_ratio_spec(dims, spec.k1, *std::max_element(spec.k2.begin(), spec.k2.end()));
}

} // namespace osvd
