#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "qeig/error.hpp"
#include "qeig/hlcr.hpp"
#include "qeig/quaternion.hpp"

namespace qeig {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using QuatVector = std::vector<Quaternion>;

/// Dense row-major matrix over a (possibly non-commutative) ring.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw Error(ErrorCode::NonSquare, "ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t l = 0; l < n; ++l) m(l, l) = T(Quaternion(1.0));
        return m;
    }

    static Matrix diagonal(const std::vector<T>& entries) {
        Matrix m(entries.size(), entries.size());
        for (std::size_t l = 0; l < entries.size(); ++l) m(l, l) = entries[l];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<T>& entries() const { return data_; }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t c = 0; c < b.cols_; ++c) {
                T acc{};
                for (std::size_t k = 0; k < a.cols_; ++k) acc += a(r, k) * b(k, c);
                out(r, c) = acc;
            }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using QuatMatrix = Matrix<Quaternion>;
using HlcrMatrix = Matrix<HlcrElement>;

// ---------------------------------------------------------------------------
// Norms and comparisons

template <typename T>
double frobenius_norm(const Matrix<T>& m) {
    double s = 0.0;
    for (const auto& e : m.entries()) s += norm(e) * norm(e);
    return std::sqrt(s);
}

template <typename T>
double max_abs_diff(const Matrix<T>& x, const Matrix<T>& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < x.entries().size(); ++i)
        m = std::max(m, max_abs_diff(x.entries()[i], y.entries()[i]));
    return m;
}

inline double norm(const QuatVector& v) {
    double s = 0.0;
    for (const auto& q : v) s += norm_squared(q);
    return std::sqrt(s);
}

inline double max_abs_diff(const QuatVector& x, const QuatVector& y) {
    if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, max_abs_diff(x[i], y[i]));
    return m;
}

template <typename T>
bool all_finite(const Matrix<T>& m) {
    for (const auto& e : m.entries())
        if (!std::isfinite(norm(e))) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Vector algebra (right multiplication by scalars)

inline QuatVector operator*(const QuatMatrix& m, const QuatVector& v) {
    if (m.cols() != v.size()) throw Error(ErrorCode::DimensionMismatch, "operator/vector size mismatch");
    QuatVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * v[c];
    return out;
}

inline QuatVector apply(const HlcrMatrix& m, const QuatVector& v) {
    if (m.cols() != v.size()) throw Error(ErrorCode::DimensionMismatch, "operator/vector size mismatch");
    QuatVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r] += apply(m(r, c), v[c]);
    return out;
}

/// psi * q, the right scalar action.
inline QuatVector right_multiply(const QuatVector& v, const Quaternion& q) {
    QuatVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * q;
    return out;
}

inline QuatVector operator-(const QuatVector& x, const QuatVector& y) {
    if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
    QuatVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

/// Quaternionic inner product: sum of conj(phi_l) psi_l.
inline Quaternion inner_product(const QuatVector& phi, const QuatVector& psi) {
    if (phi.size() != psi.size()) throw Error(ErrorCode::DimensionMismatch, "inner product of unequal lengths");
    Quaternion s;
    for (std::size_t l = 0; l < phi.size(); ++l) s += conjugate(phi[l]) * psi[l];
    return s;
}

/// Complex projection of the quaternionic inner product.
inline Complex complex_inner_product(const QuatVector& phi, const QuatVector& psi) {
    return complex_projection(inner_product(phi, psi));
}

// ---------------------------------------------------------------------------
// Symplectic complexification (interleaved layout x1, y1, ..., xn, yn)

inline ComplexVector complexify_vector(const QuatVector& v) {
    ComplexVector out(2 * static_cast<Eigen::Index>(v.size()));
    for (std::size_t l = 0; l < v.size(); ++l) {
        const auto [x, y] = symplectic_split(v[l]);
        out(2 * l) = x;
        out(2 * l + 1) = y;
    }
    return out;
}

inline QuatVector dequaternionify_vector(const ComplexVector& v) {
    if (v.size() % 2 != 0) throw Error(ErrorCode::OddDimension, "complex vector has odd length");
    QuatVector out(static_cast<std::size_t>(v.size() / 2));
    for (std::size_t l = 0; l < out.size(); ++l) out[l] = from_symplectic(v(2 * l), v(2 * l + 1));
    return out;
}

template <typename T>
ComplexMatrix complexify_matrix(const Matrix<T>& m) {
    const auto r = static_cast<Eigen::Index>(m.rows());
    const auto c = static_cast<Eigen::Index>(m.cols());
    ComplexMatrix out(2 * r, 2 * c);
    for (Eigen::Index l = 0; l < r; ++l)
        for (Eigen::Index k = 0; k < c; ++k)
            out.block<2, 2>(2 * l, 2 * k) = to_block(m(static_cast<std::size_t>(l), static_cast<std::size_t>(k)));
    return out;
}

inline HlcrMatrix dequaternionify_matrix(const ComplexMatrix& c) {
    if (c.rows() != c.cols()) throw Error(ErrorCode::NonSquare, "complex matrix is not square");
    if (c.rows() % 2 != 0) throw Error(ErrorCode::OddDimension, "complex matrix has odd dimension");
    const auto n = static_cast<std::size_t>(c.rows() / 2);
    HlcrMatrix out(n, n);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = 0; k < n; ++k)
            out(l, k) = from_block(c.block<2, 2>(2 * static_cast<Eigen::Index>(l), 2 * static_cast<Eigen::Index>(k)));
    return out;
}

inline HlcrMatrix widen(const QuatMatrix& m) {
    HlcrMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = HlcrElement(m(r, c));
    return out;
}

/// Drops the R_i parts when every entry satisfies |P| <= 1e-12 (1 + |Q|).
inline std::optional<QuatMatrix> narrow(const HlcrMatrix& m) {
    QuatMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const auto& e = m(r, c);
            if (norm(e.P) > 1e-12 * (1.0 + norm(e.Q))) return std::nullopt;
            out(r, c) = e.Q;
        }
    return out;
}

/// Quaternionic matrix with the given complex 2n x 2n counterpart; requires the block symmetry.
inline std::optional<QuatMatrix> quaternionify_matrix(const ComplexMatrix& c) {
    return narrow(dequaternionify_matrix(c));
}

// ---------------------------------------------------------------------------
// Adjoints and hermiticity

inline QuatMatrix adjoint(const QuatMatrix& m) {
    QuatMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = conjugate(m(r, c));
    return out;
}

/// Adjoint under the complex geometry, computed on the complex counterpart.
inline HlcrMatrix adjoint(const HlcrMatrix& m) {
    return dequaternionify_matrix(complexify_matrix(m).adjoint());
}

template <typename T>
bool is_hermitian(const Matrix<T>& m, double tol) {
    if (!m.is_square()) return false;
    return max_abs_diff(m, adjoint(m)) <= tol;
}

template <typename T>
bool is_antihermitian(const Matrix<T>& m, double tol) {
    if (!m.is_square()) return false;
    const Matrix<T> sum = m + adjoint(m);
    double worst = 0.0;
    for (const auto& e : sum.entries()) worst = std::max(worst, max_abs_diff(e, T{}));
    return worst <= tol;
}

// ---------------------------------------------------------------------------
// Inversion through the complex counterpart

inline ComplexMatrix invert_complex(const ComplexMatrix& c) {
    Eigen::FullPivLU<ComplexMatrix> lu(c);
    if (!lu.isInvertible()) throw Error(ErrorCode::SingularMatrix, "matrix is numerically singular");
    return lu.inverse();
}

inline HlcrMatrix inverse(const HlcrMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::NonSquare, "inverse of a non-square matrix");
    return dequaternionify_matrix(invert_complex(complexify_matrix(m)));
}

inline QuatMatrix inverse(const QuatMatrix& m) {
    if (!m.is_square()) throw Error(ErrorCode::NonSquare, "inverse of a non-square matrix");
    const HlcrMatrix inv = dequaternionify_matrix(invert_complex(complexify_matrix(m)));
    QuatMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = inv(r, c).Q;
    return out;
}

}  // namespace qeig
