#pragma once

#include "osvd/decomposition.hpp"
#include "osvd/rng.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace osvd {

// Diagonal pattern of the synthetic core faces (1-based face i, slot j):
// Slow: 1/(i+j)^2, Fast: exp(-j - i/7).
enum class DecayKind { Slow, Fast };

double decay_weight(DecayKind kind, Index face, Index slot);
std::string_view to_string(DecayKind kind);
std::optional<DecayKind> parse_decay(std::string_view name);

// Haar-distributed matrix with orthonormal columns: Q from the QR of a
// Gaussian matrix, with columns flipped so that R has a non-negative diagonal.
Matrix random_orthonormal(Index rows, Index cols, const RngSpec& rng);

struct SyntheticTensor {
    Tensor3 tensor;
    // Construction factors. Face i carries the i-th pattern weights, which need
    // not match the ordering (or the weights) of the tensor's own O-SVD.
    OsvdFactors truth;
};

// T = (U *3 S *3 V) x3 U3 with U3 an I3 x R3 random orthonormal matrix (stream 0)
// and per-face orthonormal U(:,:,i), V(:,:,i)^T of r2cap columns drawn from
// stream 1000 + i.
SyntheticTensor synthetic_oriented(Index i1, Index i2, Index i3, Index r3, DecayKind kind, Index r2cap,
                                   std::uint64_t seed);

} // namespace osvd
