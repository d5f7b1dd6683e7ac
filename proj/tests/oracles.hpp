#pragma once

// Brute-force reference computations for the unit and acceptance tests. These
// work from index formulas and elementwise loops only, so they stay independent
// of the library's Eigen-mapped implementations.

#include "osvd/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using osvd::Dims;
using osvd::Index;
using osvd::Matrix;
using osvd::Tensor3;
using osvd::Vector;

inline Tensor3 random_tensor(Dims dims, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> data(static_cast<std::size_t>(dims[0] * dims[1] * dims[2]));
    for (double& x : data) x = normal(gen);
    return Tensor3(dims, std::move(data));
}

inline Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
    }
    return m;
}

// Entry (i1, i2, i3), 0-based, straight from the flat-offset formula.
inline double at(const Tensor3& t, Index i1, Index i2, Index i3) {
    const auto& d = t.dims();
    return t.data()[static_cast<std::size_t>(i1 + i2 * d[0] + i3 * d[0] * d[1])];
}

// Mode-n unfolding from the documented column-index formulas.
inline Matrix unfold(const Tensor3& t, int mode) {
    const auto [n1, n2, n3] = t.dims();
    Matrix out;
    if (mode == 1) out.resize(n1, n2 * n3);
    if (mode == 2) out.resize(n2, n1 * n3);
    if (mode == 3) out.resize(n3, n1 * n2);
    for (Index i3 = 0; i3 < n3; ++i3) {
        for (Index i2 = 0; i2 < n2; ++i2) {
            for (Index i1 = 0; i1 < n1; ++i1) {
                const double v = at(t, i1, i2, i3);
                if (mode == 1) out(i1, i2 + i3 * n2) = v;
                if (mode == 2) out(i2, i1 + i3 * n1) = v;
                if (mode == 3) out(i3, i1 + i2 * n1) = v;
            }
        }
    }
    return out;
}

// T x_n M by the defining sum b = sum_{i_n} a * m(j, i_n).
inline Tensor3 mode_product(const Tensor3& t, const Matrix& m, int mode) {
    Dims d = t.dims();
    Dims out_dims = d;
    out_dims[static_cast<std::size_t>(mode - 1)] = m.rows();
    Tensor3 out(out_dims);
    for (Index i3 = 0; i3 < out_dims[2]; ++i3) {
        for (Index i2 = 0; i2 < out_dims[1]; ++i2) {
            for (Index i1 = 0; i1 < out_dims[0]; ++i1) {
                double acc = 0.0;
                const Index n = d[static_cast<std::size_t>(mode - 1)];
                for (Index k = 0; k < n; ++k) {
                    if (mode == 1) acc += at(t, k, i2, i3) * m(i1, k);
                    if (mode == 2) acc += at(t, i1, k, i3) * m(i2, k);
                    if (mode == 3) acc += at(t, i1, i2, k) * m(i3, k);
                }
                out(i1, i2, i3) = acc;
            }
        }
    }
    return out;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix c = Matrix::Zero(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    }
    return c;
}

inline Matrix slice(const Tensor3& t, Index k) {
    Matrix m(t.dim(1), t.dim(2));
    for (Index j = 0; j < t.dim(2); ++j) {
        for (Index i = 0; i < t.dim(1); ++i) m(i, j) = at(t, i, j, k);
    }
    return m;
}

inline double flat_dot(const Tensor3& a, const Tensor3& b) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < a.data().size(); ++i) acc += static_cast<long double>(a.data()[i]) * b.data()[i];
    return static_cast<double>(acc);
}

inline double squared_distance(const Tensor3& a, const Tensor3& b) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        const long double d = static_cast<long double>(a.data()[i]) - b.data()[i];
        acc += d * d;
    }
    return static_cast<double>(acc);
}

inline double relative_distance(const Tensor3& a, const Tensor3& b) {
    return std::sqrt(squared_distance(a, b)) / std::sqrt(flat_dot(a, a));
}

// Singular values, descending, from the symmetric eigenproblem of the smaller
// Gram matrix. A separate route from the bidiagonal SVD used by the library.
inline Vector singular_values(const Matrix& m) {
    const Matrix gram = m.rows() <= m.cols() ? Matrix(m * m.transpose()) : Matrix(m.transpose() * m);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    Vector ev = eig.eigenvalues().reverse();
    for (Index i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(ev(i), 0.0));
    return ev;
}

inline double orthonormality_defect(const Matrix& q) {
    return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

// Numerical rank by counting singular values above tol * max. One-sided
// Jacobi keeps small singular values accurate, unlike the Gram route above.
inline Index numerical_rank(const Matrix& m, double tol) {
    const Vector s = Eigen::JacobiSVD<Matrix>(m).singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    return static_cast<Index>((s.array() > tol * s(0)).count());
}

inline double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace oracle
