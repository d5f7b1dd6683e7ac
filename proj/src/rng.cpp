#include "osvd/rng.hpp"

#include "osvd/errors.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace osvd {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

// Uniform in (0, 1]: 53 random bits, never exactly zero so log() is finite.
inline double unit_open_left(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

inline double unit_closed_open(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

} // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

namespace {

// One Philox block yields a Box-Muller pair; entries 2b and 2b+1 share block b.
std::pair<double, double> gaussian_pair(const RngSpec& rng, std::uint64_t block) noexcept {
    const PhiloxCounter ctr{static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                            static_cast<std::uint32_t>(rng.stream),
                            static_cast<std::uint32_t>(rng.stream >> 32)};
    const PhiloxKey key{static_cast<std::uint32_t>(rng.seed), static_cast<std::uint32_t>(rng.seed >> 32)};
    const PhiloxCounter r = philox4x32_10(ctr, key);
    const double u1 = unit_open_left(r[0], r[1]);
    const double u2 = unit_closed_open(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

} // namespace

double gaussian_at(const RngSpec& rng, std::uint64_t index) noexcept {
    const auto [even, odd] = gaussian_pair(rng, index >> 1);
    return (index & 1u) ? odd : even;
}

Matrix gaussian_matrix(Index rows, Index cols, const RngSpec& rng) {
    if (rows < 1 || cols < 1) throw ValidationError("gaussian matrix dimensions must be positive");
    Matrix out(rows, cols);
    double* p = out.data();
    const auto n = static_cast<std::uint64_t>(rows * cols);
    for (std::uint64_t i = 0; i < n; i += 2) {
        const auto [even, odd] = gaussian_pair(rng, i >> 1);
        p[i] = even;
        if (i + 1 < n) p[i + 1] = odd;
    }
    return out;
}

} // namespace osvd
