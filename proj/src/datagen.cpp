#include "osvd/datagen.hpp"

#include "face_store.hpp"
#include "osvd/errors.hpp"

#include <cmath>
#include <string>

namespace osvd {

namespace {

constexpr std::uint64_t kFaceStreamBase = 1000;

// Orthonormalizes the columns of g, sign-fixed so that diag(R) >= 0.
Matrix haar_orthonormalize(const Matrix& g) {
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
    const auto& r = qr.matrixQR();
    for (Index j = 0; j < g.cols(); ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

} // namespace

double decay_weight(DecayKind kind, Index face, Index slot) {
    const auto i = static_cast<double>(face);
    const auto j = static_cast<double>(slot);
    switch (kind) {
    case DecayKind::Slow:
        return 1.0 / ((i + j) * (i + j));
    case DecayKind::Fast:
        return std::exp(-j - i / 7.0);
    }
    return 0.0;
}

std::string_view to_string(DecayKind kind) { return kind == DecayKind::Slow ? "slow" : "fast"; }

std::optional<DecayKind> parse_decay(std::string_view name) {
    if (name == "slow") return DecayKind::Slow;
    if (name == "fast") return DecayKind::Fast;
    return std::nullopt;
}

Matrix random_orthonormal(Index rows, Index cols, const RngSpec& rng) {
    if (rows < 1 || cols < 1) throw ValidationError("random_orthonormal: dimensions must be positive");
    if (cols > rows) {
        throw ValidationError("random_orthonormal: cannot fit " + std::to_string(cols) +
                              " orthonormal columns in dimension " + std::to_string(rows));
    }
    return haar_orthonormalize(gaussian_matrix(rows, cols, rng));
}

SyntheticTensor synthetic_oriented(Index i1, Index i2, Index i3, Index r3, DecayKind kind, Index r2cap,
                                   std::uint64_t seed) {
    if (i1 < 1 || i2 < 1 || i3 < 1) throw ValidationError("synthetic_oriented: dimensions must be positive");
    const Index r1 = std::min(i3, i1 * i2);
    const Index r2 = std::min(i1, i2);
    if (r3 < 1 || r3 > r1) {
        throw ValidationError("synthetic_oriented: rank3 = " + std::to_string(r3) + " outside [1, " +
                              std::to_string(r1) + "]");
    }
    if (r2cap < 1 || r2cap > r2) {
        throw ValidationError("synthetic_oriented: r2cap = " + std::to_string(r2cap) + " outside [1, " +
                              std::to_string(r2) + "]");
    }

    const Dims dims{i1, i2, i3};
    OsvdFactors truth = detail::allocate_factors(dims, r3, std::vector<Index>(static_cast<std::size_t>(r3), r2cap));
    truth.u3 = random_orthonormal(i3, r3, RngSpec{seed, 0});

    Matrix faces(i1 * i2, r3);
    for (Index i = 0; i < r3; ++i) {
        // Top rows feed U(:,:,i), bottom rows V(:,:,i)^T: independent Gaussian blocks.
        const Matrix g = gaussian_matrix(i1 + i2, r2cap, RngSpec{seed, kFaceStreamBase + static_cast<std::uint64_t>(i) + 1});
        SvdFactors face{haar_orthonormalize(g.topRows(i1)), Vector(r2cap), haar_orthonormalize(g.bottomRows(i2))};
        for (Index j = 0; j < r2cap; ++j) face.s(j) = decay_weight(kind, i + 1, j + 1);
        truth.sigma3(i) = face.s.norm();
        detail::store_face(truth, i, face, 1.0);
        Eigen::Map<Matrix>(faces.col(i).data(), i1, i2).noalias() = face.product();
    }

    Tensor3 t(dims);
    t.slices_as_columns().noalias() = faces * truth.u3.transpose();
    return {std::move(t), std::move(truth)};
}

} // namespace osvd
