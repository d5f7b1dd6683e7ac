#include "osvd/tensor.hpp"

#include "osvd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace osvd {

namespace {

void check_dims(const Dims& dims) {
    for (Index d : dims) {
        if (d < 1) throw ValidationError("tensor dimensions must be positive");
    }
}

std::size_t element_count(const Dims& dims) {
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
           static_cast<std::size_t>(dims[2]);
}

void check_mode(int mode) {
    if (mode < 1 || mode > 3) {
        throw ValidationError("mode must be 1, 2 or 3, got " + std::to_string(mode));
    }
}

} // namespace

Tensor3::Tensor3(Dims dims) : dims_(dims) {
    check_dims(dims_);
    data_.assign(element_count(dims_), 0.0);
}

Tensor3::Tensor3(Dims dims, std::vector<double> data) : dims_(dims), data_(std::move(data)) {
    check_dims(dims_);
    if (data_.size() != element_count(dims_)) {
        throw ValidationError("tensor data length " + std::to_string(data_.size()) +
                              " does not match dimensions");
    }
    if (!std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); })) {
        throw ValidationError("tensor entries must be finite");
    }
}

Eigen::Map<const Matrix> Tensor3::slice(Index k) const {
    return {data_.data() + k * dims_[0] * dims_[1], dims_[0], dims_[1]};
}

Eigen::Map<Matrix> Tensor3::slice(Index k) {
    return {data_.data() + k * dims_[0] * dims_[1], dims_[0], dims_[1]};
}

Eigen::Map<const Matrix> Tensor3::slices_as_columns() const {
    return {data_.data(), dims_[0] * dims_[1], dims_[2]};
}

Eigen::Map<Matrix> Tensor3::slices_as_columns() {
    return {data_.data(), dims_[0] * dims_[1], dims_[2]};
}

Matrix frontal_slice(const Tensor3& t, Index k) {
    if (k < 1 || k > t.dim(3)) {
        throw ValidationError("frontal slice index " + std::to_string(k) + " out of range [1, " +
                              std::to_string(t.dim(3)) + "]");
    }
    return t.slice(k - 1);
}

Matrix mode_n_unfold(const Tensor3& t, int mode) {
    check_mode(mode);
    const auto [n1, n2, n3] = t.dims();
    switch (mode) {
    case 1: {
        // Columns are the mode-1 fibers in storage order.
        return Eigen::Map<const Matrix>(t.data().data(), n1, n2 * n3);
    }
    case 2: {
        Matrix out(n2, n1 * n3);
        for (Index k = 0; k < n3; ++k) {
            out.middleCols(k * n1, n1) = t.slice(k).transpose();
        }
        return out;
    }
    default:
        return t.slices_as_columns().transpose();
    }
}

Tensor3 mode_n_fold(const Matrix& m, int mode, Dims dims) {
    check_mode(mode);
    check_dims(dims);
    const auto [n1, n2, n3] = dims;
    const Index rows = dims[static_cast<std::size_t>(mode - 1)];
    const Index cols = n1 * n2 * n3 / rows;
    if (m.rows() != rows || m.cols() != cols) {
        throw ValidationError("matrix shape does not match the mode-" + std::to_string(mode) +
                              " unfolding of the requested dimensions");
    }
    Tensor3 out(dims);
    switch (mode) {
    case 1:
        Eigen::Map<Matrix>(out.data().data(), n1, n2 * n3) = m;
        break;
    case 2:
        for (Index k = 0; k < n3; ++k) {
            out.slice(k) = m.middleCols(k * n1, n1).transpose();
        }
        break;
    default:
        out.slices_as_columns() = m.transpose();
        break;
    }
    return out;
}

Tensor3 mode_n_product(const Tensor3& t, const Matrix& m, int mode) {
    check_mode(mode);
    if (m.cols() != t.dim(mode)) {
        throw ValidationError("mode-" + std::to_string(mode) + " product: matrix has " +
                              std::to_string(m.cols()) + " columns, tensor dimension is " +
                              std::to_string(t.dim(mode)));
    }
    Dims dims = t.dims();
    dims[static_cast<std::size_t>(mode - 1)] = m.rows();
    Tensor3 out(dims);
    switch (mode) {
    case 1:
        Eigen::Map<Matrix>(out.data().data(), dims[0], dims[1] * dims[2]).noalias() =
            m * Eigen::Map<const Matrix>(t.data().data(), t.dim(1), t.dim(2) * t.dim(3));
        break;
    case 2:
        for (Index k = 0; k < dims[2]; ++k) {
            out.slice(k).noalias() = t.slice(k) * m.transpose();
        }
        break;
    default:
        out.slices_as_columns().noalias() = t.slices_as_columns() * m.transpose();
        break;
    }
    return out;
}

Tensor3 facewise_product(const Tensor3& a, const Tensor3& b) {
    if (a.dim(2) != b.dim(1)) {
        throw ValidationError("facewise product: inner dimensions differ");
    }
    if (a.dim(3) != b.dim(3)) {
        throw ValidationError("facewise product: frontal slice counts differ");
    }
    Tensor3 out(a.dim(1), b.dim(2), a.dim(3));
    for (Index k = 0; k < a.dim(3); ++k) {
        out.slice(k).noalias() = a.slice(k) * b.slice(k);
    }
    return out;
}

Tensor3 transpose3(const Tensor3& t) {
    Tensor3 out(t.dim(2), t.dim(1), t.dim(3));
    for (Index k = 0; k < t.dim(3); ++k) {
        out.slice(k) = t.slice(k).transpose();
    }
    return out;
}

double inner(const Tensor3& a, const Tensor3& b) {
    if (a.dims() != b.dims()) throw ValidationError("inner product: dimensions differ");
    const auto x = a.data();
    const auto y = b.data();
    return pairwise_reduce(a.size(), [&](Index i) {
        const auto u = static_cast<std::size_t>(i);
        return x[u] * y[u];
    });
}

double frob_norm(const Tensor3& t) {
    const auto x = t.data();
    return std::sqrt(pairwise_reduce(t.size(), [&](Index i) {
        const double v = x[static_cast<std::size_t>(i)];
        return v * v;
    }));
}

Matrix reshape_vec(std::span<const double> v, Index i1, Index i2) {
    if (i1 < 1 || i2 < 1 || static_cast<Index>(v.size()) != i1 * i2) {
        throw ValidationError("reshape: vector length " + std::to_string(v.size()) +
                              " does not equal " + std::to_string(i1) + "x" + std::to_string(i2));
    }
    return Eigen::Map<const Matrix>(v.data(), i1, i2);
}

double default_rank_tolerance(const Dims& dims) {
    return static_cast<double>(std::max(dims[2], dims[0] * dims[1])) *
           std::numeric_limits<double>::epsilon();
}

Index rank3(const Tensor3& t, double tol) {
    if (!(tol >= 0.0)) throw ValidationError("rank tolerance must be non-negative");
    // A_(3)^T has the same singular values and is the storage layout as-is.
    Eigen::BDCSVD<Matrix> svd(t.slices_as_columns());
    const Vector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    const double cutoff = tol * s(0);
    return static_cast<Index>((s.array() > cutoff).count());
}

Index rank3(const Tensor3& t) { return rank3(t, default_rank_tolerance(t.dims())); }

double pairwise_sum(std::span<const double> values) {
    return pairwise_reduce(static_cast<Index>(values.size()),
                           [&](Index i) { return values[static_cast<std::size_t>(i)]; });
}

} // namespace osvd
