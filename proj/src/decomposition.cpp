#include "osvd/decomposition.hpp"

#include "face_store.hpp"
#include "osvd/errors.hpp"
#include "osvd/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

namespace osvd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Index r1_of(const Dims& d) { return std::min(d[2], d[0] * d[1]); }
Index r2_of(const Dims& d) { return std::min(d[0], d[1]); }

// Reshapes V3(:, i) into the I1 x I2 face matrix.
Matrix face_matrix(const Matrix& v3, Index i, const Dims& dims) {
    return Eigen::Map<const Matrix>(v3.col(i).data(), dims[0], dims[1]);
}

} // namespace

namespace detail {

OsvdFactors allocate_factors(const Dims& dims, Index k1, const std::vector<Index>& k2) {
    const Index k2max = *std::max_element(k2.begin(), k2.end());
    OsvdFactors f;
    f.u3 = Matrix::Zero(dims[2], k1);
    f.sigma3 = Vector::Zero(k1);
    f.ufaces = Tensor3(dims[0], k2max, k1);
    f.sfaces = Tensor3(k2max, k2max, k1);
    f.vfaces = Tensor3(k2max, dims[1], k1);
    f.k2 = k2;
    return f;
}

void store_face(OsvdFactors& f, Index i, const SvdFactors& face, double scale) {
    const Index k = face.rank();
    f.ufaces.slice(i).leftCols(k) = face.u;
    auto s = f.sfaces.slice(i);
    for (Index j = 0; j < k; ++j) s(j, j) = scale * face.s(j);
    f.vfaces.slice(i).topRows(k) = face.v.transpose();
}

} // namespace detail

Vector OsvdFactors::face_weights(Index i) const {
    const Index k = k2.at(static_cast<std::size_t>(i));
    Vector w(k);
    for (Index j = 0; j < k; ++j) w(j) = sfaces(j, j, i);
    return w;
}

Index OsvdFactors::term_count() const { return std::accumulate(k2.begin(), k2.end(), Index{0}); }

Tensor3 Rank1Term::to_tensor() const {
    Tensor3 out(u.size(), v.size(), w.size());
    const Matrix face = weight * u * v.transpose();
    for (Index k = 0; k < w.size(); ++k) out.slice(k) = w(k) * face;
    return out;
}

void validate(const OsvdFactors& f) {
    const Index k1 = f.u3.cols();
    if (k1 < 1) throw ValidationError("factors: no faces");
    if (f.sigma3.size() != k1 || static_cast<Index>(f.k2.size()) != k1) {
        throw ValidationError("factors: sigma3/k2 length does not match the face count");
    }
    const Index k2max = f.sfaces.dim(1);
    if (f.sfaces.dim(2) != k2max || f.sfaces.dim(3) != k1 || f.ufaces.dim(2) != k2max ||
        f.ufaces.dim(3) != k1 || f.vfaces.dim(1) != k2max || f.vfaces.dim(3) != k1) {
        throw ValidationError("factors: face tensor shapes are inconsistent");
    }
    for (Index k : f.k2) {
        if (k < 1 || k > k2max) throw ValidationError("factors: per-face rank outside [1, k2max]");
    }
}

OsvdFactors osvd_full(const Tensor3& t) {
    const Dims dims = t.dims();
    const auto start = Clock::now();
    const SvdFactors mode3 = economy_svd(mode_n_unfold(t, 3));
    if (mode3.s(0) == 0.0) throw ValidationError("osvd_full: zero tensor has no O-SVD");
    const double cutoff = default_rank_tolerance(dims) * mode3.s(0);
    const auto r3 = static_cast<Index>((mode3.s.array() > cutoff).count());
    const double stage1 = seconds_since(start);

    const Index r2 = r2_of(dims);
    OsvdFactors f = detail::allocate_factors(dims, r3, std::vector<Index>(static_cast<std::size_t>(r3), r2));
    f.u3 = mode3.u.leftCols(r3);
    f.sigma3 = mode3.s.head(r3);

    const auto stage2_start = Clock::now();
    parallel_for(r3, [&](Index i) {
        detail::store_face(f, i, economy_svd(face_matrix(mode3.v, i, dims)), mode3.s(i));
    });
    f.timings = {stage1, seconds_since(stage2_start)};
    return f;
}

OsvdFactors tosvd(const Tensor3& t, Index k1, const std::vector<Index>& k2) {
    const Dims dims = t.dims();
    const Index r1 = r1_of(dims);
    const Index r2 = r2_of(dims);
    if (k1 < 1 || k1 > r1) {
        throw ValidationError("tosvd: k1 = " + std::to_string(k1) + " outside [1, " + std::to_string(r1) + "]");
    }
    if (static_cast<Index>(k2.size()) != k1) {
        throw ValidationError("tosvd: k2 has " + std::to_string(k2.size()) + " entries, expected k1 = " +
                              std::to_string(k1));
    }
    for (Index k : k2) {
        if (k < 1 || k > r2) {
            throw ValidationError("tosvd: face rank " + std::to_string(k) + " outside [1, " +
                                  std::to_string(r2) + "]");
        }
    }

    const auto start = Clock::now();
    const SvdFactors mode3 = truncated_svd(mode_n_unfold(t, 3), k1);
    const double stage1 = seconds_since(start);

    OsvdFactors f = detail::allocate_factors(dims, k1, k2);
    f.u3 = mode3.u;
    f.sigma3 = mode3.s;

    const auto stage2_start = Clock::now();
    parallel_for(k1, [&](Index i) {
        const SvdFactors face = truncated_svd(face_matrix(mode3.v, i, dims), k2[static_cast<std::size_t>(i)]);
        detail::store_face(f, i, face, mode3.s(i));
    });
    f.timings = {stage1, seconds_since(stage2_start)};
    return f;
}

Tensor3 reconstruct(const OsvdFactors& f) {
    validate(f);
    const Dims dims = f.dims();
    const Index k1 = f.k1();
    // Column i holds vec(U_i S_i V_i); the tensor is then H * U3^T in slice-column layout.
    Matrix h(dims[0] * dims[1], k1);
    for (Index i = 0; i < k1; ++i) {
        const Index k = f.k2[static_cast<std::size_t>(i)];
        const Vector w = f.face_weights(i);
        Eigen::Map<Matrix> face(h.col(i).data(), dims[0], dims[1]);
        face.noalias() = f.ufaces.slice(i).leftCols(k) * w.asDiagonal() * f.vfaces.slice(i).topRows(k);
    }
    Tensor3 out(dims);
    out.slices_as_columns().noalias() = h * f.u3.transpose();
    return out;
}

std::vector<Rank1Term> rank1_terms(const OsvdFactors& f) {
    validate(f);
    std::vector<Rank1Term> terms;
    terms.reserve(static_cast<std::size_t>(f.term_count()));
    for (Index i = 0; i < f.k1(); ++i) {
        for (Index j = 0; j < f.k2[static_cast<std::size_t>(i)]; ++j) {
            terms.push_back(Rank1Term{f.weight(i, j), f.ufaces.slice(i).col(j),
                                      f.vfaces.slice(i).row(j).transpose(), f.u3.col(i), i, j});
        }
    }
    return terms;
}

Tensor3 r_term_approx(const OsvdFactors& full, Index r) {
    std::vector<Rank1Term> terms = rank1_terms(full);
    const auto total = static_cast<Index>(terms.size());
    if (r < 1 || r > total) {
        throw ValidationError("r_term_approx: r = " + std::to_string(r) + " outside [1, " +
                              std::to_string(total) + "]");
    }
    // Terms arrive in (face, slot) order, so a stable sort breaks ties lexicographically.
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Rank1Term& a, const Rank1Term& b) { return a.weight > b.weight; });

    const Dims dims = full.dims();
    Tensor3 out(dims);
    auto cols = out.slices_as_columns();
    for (Index n = 0; n < r; ++n) {
        const Rank1Term& term = terms[static_cast<std::size_t>(n)];
        Vector face(dims[0] * dims[1]);
        Eigen::Map<Matrix>(face.data(), dims[0], dims[1]).noalias() = term.weight * term.u * term.v.transpose();
        cols.noalias() += face * term.w.transpose();
    }
    return out;
}

double truncation_error_exact(const OsvdFactors& full, Index k1, const std::vector<Index>& k2) {
    validate(full);
    const Dims dims = full.dims();
    const Index r1 = r1_of(dims);
    const Index r2 = r2_of(dims);
    for (Index k : full.k2) {
        if (k != r2) throw ValidationError("truncation_error_exact: factors must be a full O-SVD");
    }
    if (k1 < 0 || k1 > r1) {
        throw ValidationError("truncation_error_exact: k1 = " + std::to_string(k1) + " outside [0, " +
                              std::to_string(r1) + "]");
    }
    if (static_cast<Index>(k2.size()) != k1) {
        throw ValidationError("truncation_error_exact: k2 must have k1 entries");
    }
    for (Index k : k2) {
        if (k < 0 || k > r2) {
            throw ValidationError("truncation_error_exact: face rank " + std::to_string(k) + " outside [0, " +
                                  std::to_string(r2) + "]");
        }
    }

    // Faces of the full decomposition beyond R3 carry zero weight and are absent.
    std::vector<double> discarded;
    for (Index i = 0; i < full.k1(); ++i) {
        const Index kept = i < k1 ? k2[static_cast<std::size_t>(i)] : 0;
        for (Index j = kept; j < r2; ++j) {
            const double s = full.weight(i, j);
            discarded.push_back(s * s);
        }
    }
    return pairwise_sum(discarded);
}

std::vector<BlockTerm> block_term_form(const OsvdFactors& f) {
    validate(f);
    std::vector<BlockTerm> blocks;
    blocks.reserve(static_cast<std::size_t>(f.k1()));
    for (Index i = 0; i < f.k1(); ++i) {
        const Index k = f.k2[static_cast<std::size_t>(i)];
        const Vector w = f.face_weights(i);
        blocks.push_back(BlockTerm{f.ufaces.slice(i).leftCols(k) * w.asDiagonal() * f.vfaces.slice(i).topRows(k),
                                   f.u3.col(i)});
    }
    return blocks;
}

} // namespace osvd
