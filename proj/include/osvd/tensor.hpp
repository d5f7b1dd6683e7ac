#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace osvd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// (I1, I2, I3)
using Dims = std::array<Index, 3>;

// Dense real third-order tensor.
//
// Storage is column-major with the mode-1 index fastest and the mode-3 index
// slowest: entry (i1, i2, i3) (0-based) lives at i1 + i2*I1 + i3*I1*I2. Every
// frontal slice is therefore a contiguous column-major I1 x I2 block, and the
// whole buffer read as an (I1*I2) x I3 matrix is the transpose of the mode-3
// unfolding.
class Tensor3 {
public:
    // Zero tensor.
    explicit Tensor3(Dims dims);
    Tensor3(Index i1, Index i2, Index i3) : Tensor3(Dims{i1, i2, i3}) {}
    // Takes ownership of data; rejects a length mismatch or non-finite entries.
    Tensor3(Dims dims, std::vector<double> data);

    const Dims& dims() const noexcept { return dims_; }
    Index dim(int mode) const { return dims_.at(static_cast<std::size_t>(mode - 1)); }
    Index size() const noexcept { return static_cast<Index>(data_.size()); }

    double operator()(Index i1, Index i2, Index i3) const noexcept {
        return data_[static_cast<std::size_t>(i1 + dims_[0] * (i2 + dims_[1] * i3))];
    }
    double& operator()(Index i1, Index i2, Index i3) noexcept {
        return data_[static_cast<std::size_t>(i1 + dims_[0] * (i2 + dims_[1] * i3))];
    }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    // Frontal slice k (0-based) as a view.
    Eigen::Map<const Matrix> slice(Index k) const;
    Eigen::Map<Matrix> slice(Index k);

    // The buffer viewed as (I1*I2) x I3: column k is vec of frontal slice k.
    Eigen::Map<const Matrix> slices_as_columns() const;
    Eigen::Map<Matrix> slices_as_columns();

    bool operator==(const Tensor3&) const = default;

private:
    Dims dims_;
    std::vector<double> data_;
};

// Copy of frontal slice k, 1-based to match the usual A(:,:,k) notation.
Matrix frontal_slice(const Tensor3& t, Index k);

// Mode-n unfolding A_(n) of shape I_n x (product of the other two dims).
// Column order: mode 1 -> c = i2 + i3*I2, mode 2 -> c = i1 + i3*I1,
// mode 3 -> c = i1 + i2*I1, so row k of A_(3) is vec(A(:,:,k)).
Matrix mode_n_unfold(const Tensor3& t, int mode);

// Inverse of mode_n_unfold.
Tensor3 mode_n_fold(const Matrix& m, int mode, Dims dims);

// T x_n M: replaces I_n with M.rows(); unfold(result, n) = M * unfold(T, n).
Tensor3 mode_n_product(const Tensor3& t, const Matrix& m, int mode);

// Slice-by-slice product: result(:,:,k) = A(:,:,k) * B(:,:,k).
Tensor3 facewise_product(const Tensor3& a, const Tensor3& b);

// Transposes every frontal slice.
Tensor3 transpose3(const Tensor3& t);

double inner(const Tensor3& a, const Tensor3& b);
double frob_norm(const Tensor3& t);

// Column-major fill of an I1 x I2 matrix from v.
Matrix reshape_vec(std::span<const double> v, Index i1, Index i2);

// Numerical 3-rank: count of singular values of A_(3) strictly above
// tol * sigma_max. Zero tensor has 3-rank 0.
Index rank3(const Tensor3& t, double tol);
Index rank3(const Tensor3& t);
double default_rank_tolerance(const Dims& dims);

// Sum with pairwise (tree) reduction; order is fixed by the input length only.
double pairwise_sum(std::span<const double> values);

template <typename F>
double pairwise_reduce(Index n, F&& term);

} // namespace osvd

#include "osvd/detail/pairwise.hpp"
