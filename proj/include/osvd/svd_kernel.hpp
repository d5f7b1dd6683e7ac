#pragma once

#include "osvd/rng.hpp"
#include "osvd/tensor.hpp"

#include <string>
#include <vector>

namespace osvd {

// Economy factorization M ~= U * diag(s) * V^T with s descending.
struct SvdFactors {
    Matrix u;
    Vector s;
    Matrix v;

    Index rank() const noexcept { return s.size(); }
    Matrix product() const { return u * s.asDiagonal() * v.transpose(); }
};

// Full economy SVD, k = min(rows, cols). Sign convention: in every column of U
// the entry of largest magnitude (first on ties) is non-negative, and the
// matching column of V is flipped along with it.
SvdFactors economy_svd(const Matrix& m);

// Leading k factors of economy_svd(m).
SvdFactors truncated_svd(const Matrix& m, Index k);

// Thin Q from Householder QR: min(rows, cols) orthonormal columns spanning a
// superset of range(m). Zero columns leave the reflector at identity, so a zero
// matrix maps to the leading canonical vectors.
Matrix qr_thin(const Matrix& m);

// Applies the economy_svd sign convention in place.
void normalize_signs(SvdFactors& f);

struct RandomizedSvd {
    SvdFactors svd;       // rank-k factors, U_k = Q * U
    Matrix range;         // Q, the orthonormal sketch basis (k + p columns)
    Index oversampling;   // p after clamping
    std::vector<std::string> warnings;
};

// Randomized SVD with q rounds of power iteration, re-orthonormalizing after
// every product:
//   Y0 = M*Omega, Q0 R0 = Y0
//   for j = 1..q: Q^_j R^_j = M^T Q_{j-1};  Q_j R_j = M Q^_j
//   B = Q^T M, [U, S, V] = svds(B, k), U_k = Q U
// Omega is n x (k+p) Gaussian drawn from `rng`. If k + p exceeds min(m, n), p is
// reduced and a warning recorded; k itself must not exceed min(m, n).
RandomizedSvd rsvd(const Matrix& m, Index k, Index p, Index q, const RngSpec& rng);

// Squared Frobenius error bound of rsvd in expectation:
//   (1 + k/(p-1) * tau_k^(4q)) * sum_{j>k} s_j^2,   tau_k = s_{k+1} / s_k.
// `s` are the exact singular values in descending order; k is 1-based.
double rsvd_error_bound(std::span<const double> s, Index k, Index p, Index q);

// tau_k = s_{k+1}/s_k (1-based k). Zero when s_{k+1} is zero or absent; throws
// when s_k is zero but s_{k+1} is not.
double singular_value_gap(std::span<const double> s, Index k);

} // namespace osvd
