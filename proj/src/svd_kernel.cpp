#include "osvd/svd_kernel.hpp"

#include "osvd/errors.hpp"

#include <cmath>
#include <string>

namespace osvd {

void normalize_signs(SvdFactors& f) {
    for (Index j = 0; j < f.u.cols(); ++j) {
        Index arg = 0;
        double best = -1.0;
        for (Index i = 0; i < f.u.rows(); ++i) {
            const double a = std::abs(f.u(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (f.u(arg, j) < 0.0) {
            f.u.col(j) = -f.u.col(j);
            f.v.col(j) = -f.v.col(j);
        }
    }
}

SvdFactors economy_svd(const Matrix& m) {
    if (m.size() == 0) throw ValidationError("economy_svd: empty matrix");
    if (!m.allFinite()) throw ValidationError("economy_svd: matrix has non-finite entries");
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw NumericalError("economy_svd: dense SVD failed to converge");
    }
    SvdFactors f{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    if (!f.u.allFinite() || !f.v.allFinite() || !f.s.allFinite()) {
        throw NumericalError("economy_svd: dense SVD produced non-finite factors");
    }
    normalize_signs(f);
    return f;
}

SvdFactors truncated_svd(const Matrix& m, Index k) {
    const Index kmax = std::min(m.rows(), m.cols());
    if (k < 1 || k > kmax) {
        throw ValidationError("truncated_svd: rank " + std::to_string(k) + " outside [1, " +
                              std::to_string(kmax) + "]");
    }
    SvdFactors full = economy_svd(m);
    if (k == kmax) return full;
    return {full.u.leftCols(k), full.s.head(k), full.v.leftCols(k)};
}

Matrix qr_thin(const Matrix& m) {
    if (m.rows() < 1 || m.cols() < 1) throw ValidationError("qr_thin: empty matrix");
    const Index cols = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ() * Matrix::Identity(m.rows(), cols);
}

RandomizedSvd rsvd(const Matrix& m, Index k, Index p, Index q, const RngSpec& rng) {
    const Index min_dim = std::min(m.rows(), m.cols());
    if (k < 1 || k > min_dim) {
        throw ValidationError("rsvd: target rank " + std::to_string(k) + " outside [1, " +
                              std::to_string(min_dim) + "]");
    }
    if (p < 0) throw ValidationError("rsvd: oversampling must be non-negative");
    if (q < 0) throw ValidationError("rsvd: power iteration count must be non-negative");

    RandomizedSvd out;
    if (k + p > min_dim) {
        out.warnings.push_back("rsvd: oversampling reduced from " + std::to_string(p) + " to " +
                               std::to_string(min_dim - k) + " so that k + p <= " +
                               std::to_string(min_dim));
        p = min_dim - k;
    }
    out.oversampling = p;

    const Matrix omega = gaussian_matrix(m.cols(), k + p, rng);
    Matrix q_basis = qr_thin(m * omega);
    for (Index j = 0; j < q; ++j) {
        const Matrix q_hat = qr_thin(m.transpose() * q_basis);
        q_basis = qr_thin(m * q_hat);
    }
    const Matrix b = q_basis.transpose() * m;
    SvdFactors small = truncated_svd(b, k);
    out.svd.u = q_basis * small.u;
    out.svd.s = std::move(small.s);
    out.svd.v = std::move(small.v);
    normalize_signs(out.svd);
    out.range = std::move(q_basis);
    return out;
}

double singular_value_gap(std::span<const double> s, Index k) {
    if (k < 1) throw ValidationError("singular value gap: k must be at least 1");
    const auto idx = static_cast<std::size_t>(k);
    if (idx >= s.size()) return 0.0;
    const double next = s[idx];
    const double cur = s[idx - 1];
    if (next == 0.0) return 0.0;
    if (cur == 0.0) {
        throw ValidationError("singular value gap undefined: s_k = 0 while s_{k+1} > 0");
    }
    return next / cur;
}

double rsvd_error_bound(std::span<const double> s, Index k, Index p, Index q) {
    if (p < 2) throw ValidationError("rsvd_error_bound: oversampling p must be at least 2");
    if (q < 0) throw ValidationError("rsvd_error_bound: q must be non-negative");
    if (k < 1 || static_cast<std::size_t>(k) + 1 > s.size()) {
        throw ValidationError("rsvd_error_bound: need 1 <= k and k + 1 <= len(s)");
    }
    const auto tail = s.subspan(static_cast<std::size_t>(k));
    const double tail_sq =
        pairwise_reduce(static_cast<Index>(tail.size()), [&](Index j) {
            const double v = tail[static_cast<std::size_t>(j)];
            return v * v;
        });
    if (tail_sq == 0.0) return 0.0;
    const double tau = singular_value_gap(s, k);
    const double factor =
        1.0 + static_cast<double>(k) / static_cast<double>(p - 1) * std::pow(tau, 4.0 * static_cast<double>(q));
    return factor * tail_sq;
}

} // namespace osvd
