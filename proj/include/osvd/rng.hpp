#pragma once

#include "osvd/tensor.hpp"

#include <array>
#include <cstdint>

namespace osvd {

// Identifies one reproducible random stream. The generator is counter-based,
// so (seed, stream) alone determines every value drawn from it.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// Philox4x32-10 block cipher (Salmon et al., Random123).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

// Standard normal entry number `index` (column-major position) of the stream.
double gaussian_at(const RngSpec& rng, std::uint64_t index) noexcept;

// rows x cols matrix of i.i.d. N(0,1) entries, filled column-major.
Matrix gaussian_matrix(Index rows, Index cols, const RngSpec& rng);

} // namespace osvd
