#pragma once

#include "osvd/decomposition.hpp"

#include <cstdint>
#include <vector>

namespace osvd {

inline constexpr Index kDefaultOversampling = 5;

// Target ranks and sampling controls for the randomized O-SVD.
struct TruncationSpec {
    Index k1 = 1;
    std::vector<Index> k2;  // one rank per face
    Index p = kDefaultOversampling;
    Index q0 = 0;           // power iterations for the mode-3 sketch
    std::vector<Index> q;   // power iterations per face
    std::uint64_t seed = 0;

    // Same k2 and q for every face.
    static TruncationSpec uniform(Index k1, Index k2, Index p, Index q, std::uint64_t seed);
};

// Throws ValidationError unless k1 >= 1, |k2| = |q| = k1, every k2 >= 1, p >= 0
// and all iteration counts are non-negative.
void validate(const TruncationSpec& spec);

// Randomized O-SVD.
//
// Stage 1 sketches A_(3) with rsvd(A_(3), k1, p, q0) using stream 0 of the seed.
// Stage 2 takes each face matrix of A x3 U3^T, i.e. sigma_i * reshape(V3(:,i)),
// and applies rsvd(face, k2[i], p, q[i]) with stream i (1-based). Face ranks
// above min(I1, I2) and oversampling that does not fit are clamped with a
// warning recorded on the result.
OsvdFactors rosvd(const Tensor3& t, const TruncationSpec& spec);

// Expected-error bound for rosvd, from the weight table of the exact O-SVD:
//   sqrt((1 + k1/(p-1) tau_k1^(4 q0)) * sum_{i>k1} sum_j s_jji^2)
//   + sqrt(sum_{i<=k1} (1 + k2_i/(p-1) tau_(k2_i)^(4 q_i)) * sum_{j>k2_i} s_jji^2)
// tau_k1 is the gap of sigma3 and tau_(k2_i) the gap of face i's weights. The
// inner sums run over j strictly greater than k2_i.
double expected_error_bound(const OsvdFactors& full, const TruncationSpec& spec);

// Same bound from explicit inputs: sigma3 descending, weights[i] the weights of
// face i descending.
double expected_error_bound(std::span<const double> sigma3, const std::vector<std::vector<double>>& weights,
                            const TruncationSpec& spec);

// Factor storage k1*k2*I1 + k1*k2*I2 + k1*I3 + k1*k2, with k2 = max(spec.k2).
std::uint64_t storage_cost(const Dims& dims, Index k1, Index k2);
std::uint64_t storage_cost(const Dims& dims, const TruncationSpec& spec);
std::uint64_t storage_cost(const OsvdFactors& f);

// I1*I2*I3 / storage_cost.
double compression_ratio_spec(const Dims& dims, Index k1, Index k2);
double compression_ratio_spec(const Dims& dims, const TruncationSpec& spec);

} // namespace osvd
