#pragma once

#include "osvd/svd_kernel.hpp"
#include "osvd/tensor.hpp"

#include <string>
#include <vector>

namespace osvd {

struct StageTimings {
    double stage1_seconds = 0.0;  // mode-3 SVD or sketch
    double stage2_seconds = 0.0;  // face loop
};

// Oriented SVD factors
//   A ~= (Ufaces *3 Sfaces *3 Vfaces) x3 U3
// with k1 faces. Face i keeps k2[i] terms; the face tensors are zero-padded to
// k2max = max(k2) columns/rows.
struct OsvdFactors {
    Matrix u3;             // I3 x k1, orthonormal columns
    Vector sigma3;         // k1 mode-3 singular values, descending
    Tensor3 ufaces{1, 1, 1};  // I1 x k2max x k1
    Tensor3 sfaces{1, 1, 1};  // k2max x k2max x k1, diagonal slices
    Tensor3 vfaces{1, 1, 1};  // k2max x I2 x k1
    std::vector<Index> k2;

    StageTimings timings;
    std::vector<std::string> warnings;

    Index k1() const noexcept { return u3.cols(); }
    Index k2max() const noexcept { return sfaces.dim(1); }
    Dims dims() const { return {ufaces.dim(1), vfaces.dim(2), u3.rows()}; }

    // Weight s_jji, 0-based face i and slot j.
    double weight(Index i, Index j) const { return sfaces(j, j, i); }
    // Weights of face i, slots 0..k2[i]-1.
    Vector face_weights(Index i) const;
    Index term_count() const;
};

// One term s * (u o v o w) of the outer-product form.
struct Rank1Term {
    double weight;
    Vector u;  // length I1
    Vector v;  // length I2
    Vector w;  // length I3
    Index face;
    Index slot;

    Tensor3 to_tensor() const;  // weight * (u o v o w)
};

struct BlockTerm {
    Matrix h;  // I1 x I2 face matrix U_r S_r V_r
    Vector u;  // I3 mode-3 vector
};

// Exact O-SVD. Faces are the R3 = rank3(T) leading singular directions of
// A_(3); each keeps all r2 = min(I1, I2) slots. Throws on a zero tensor.
OsvdFactors osvd_full(const Tensor3& t);

// k-term truncated O-SVD: truncated SVD of A_(3) to k1 terms, then for every
// face the rank-k2[i] SVD of reshape(V3(:,i), [I1, I2]), cores scaled by the
// i-th mode-3 singular value.
OsvdFactors tosvd(const Tensor3& t, Index k1, const std::vector<Index>& k2);

Tensor3 reconstruct(const OsvdFactors& f);

// Terms in (face, slot) order.
std::vector<Rank1Term> rank1_terms(const OsvdFactors& f);

// Sum of the r heaviest terms of a full decomposition; ties go to the lower
// (face, slot) pair.
Tensor3 r_term_approx(const OsvdFactors& full, Index r);

// Squared error of the (k1, k2) truncation, computed from the weight table of a
// full decomposition. Faces past k1 contribute all of their weights; k2 entries
// of zero drop a face entirely. k1 may range up to min(I3, I1*I2).
double truncation_error_exact(const OsvdFactors& full, Index k1, const std::vector<Index>& k2);

// H_r = U_r S_r V_r paired with u_r = U3(:, r).
std::vector<BlockTerm> block_term_form(const OsvdFactors& f);

// Checks internal shape consistency; throws ValidationError when broken.
void validate(const OsvdFactors& f);

} // namespace osvd
