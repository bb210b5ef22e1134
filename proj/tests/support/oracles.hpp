#pragma once

// Reference computations that avoid the library code paths under test, plus
// seeded random generators for property tests.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qeig/qeig.hpp"

namespace oracle {

using qeig::Complex;
using qeig::ComplexMatrix;
using qeig::Quaternion;

// Product of basis units from the defining relations i^2 = j^2 = k^2 = ijk = -1.
// Index 0..3 stands for 1, i, j, k; result is sign * unit.
inline std::pair<int, int> unit_product(int x, int y) {
    static const int table[4][4][2] = {
        {{1, 0}, {1, 1}, {1, 2}, {1, 3}},
        {{1, 1}, {-1, 0}, {1, 3}, {-1, 2}},
        {{1, 2}, {-1, 3}, {-1, 0}, {1, 1}},
        {{1, 3}, {1, 2}, {-1, 1}, {-1, 0}},
    };
    return {table[x][y][0], table[x][y][1]};
}

// Hamilton product by distributing over the basis table.
inline Quaternion mul(const Quaternion& p, const Quaternion& q) {
    const std::array<double, 4> a{p.a, p.b, p.c, p.d}, b{q.a, q.b, q.c, q.d};
    std::array<double, 4> out{};
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
            const auto [sign, unit] = unit_product(x, y);
            out[static_cast<std::size_t>(unit)] += sign * a[static_cast<std::size_t>(x)] * b[static_cast<std::size_t>(y)];
        }
    return {out[0], out[1], out[2], out[3]};
}

// 2x2 complex matrix of x -> apply(e, x), read off from the images of 1 and j
// (the complex coordinates of x + j y are (x, y)).
inline qeig::Block2 block_by_action(const qeig::HlcrElement& e) {
    qeig::Block2 b;
    const auto [x1, y1] = qeig::symplectic_split(oracle::mul(e.Q, Quaternion(1.0)) + oracle::mul(e.P, oracle::mul(Quaternion(1.0), Quaternion::i())));
    const auto [x2, y2] = qeig::symplectic_split(oracle::mul(e.Q, Quaternion::j()) + oracle::mul(e.P, oracle::mul(Quaternion::j(), Quaternion::i())));
    b << x1, x2, y1, y2;
    return b;
}

inline std::vector<Complex> eigenvalues(const ComplexMatrix& M) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(M, false);
    std::vector<Complex> out;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.push_back(es.eigenvalues()(k));
    return out;
}

// Product of (x - r) over the roots, highest degree first.
inline std::vector<Complex> poly_from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> c{1.0};
    for (const Complex& r : roots) {
        std::vector<Complex> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k] += c[k];
            next[k + 1] -= r * c[k];
        }
        c = next;
    }
    return c;
}

// True when A B^-1 is diagonal in the complex picture, i.e. A and B differ by
// a left factor acting on each row separately.
inline double off_diagonal_ratio(const ComplexMatrix& A, const ComplexMatrix& B) {
    const ComplexMatrix R = A * B.inverse();
    double off = 0.0;
    for (Eigen::Index r = 0; r < R.rows(); ++r)
        for (Eigen::Index c = 0; c < R.cols(); ++c)
            if (r != c) off = std::max(off, std::abs(R(r, c)));
    return off;
}

class Random {
public:
    explicit Random(std::uint64_t seed) : gen_(seed) {}

    double normal() { return dist_(gen_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

    Quaternion quaternion() { return {normal(), normal(), normal(), normal()}; }
    Complex complex() { return {normal(), normal()}; }

    Quaternion unit() {
        const Quaternion q = quaternion();
        return q / qeig::norm(q);
    }

    qeig::HlcrElement hlcr() { return {quaternion(), quaternion()}; }

    qeig::QuatMatrix quat_matrix(std::size_t n) {
        qeig::QuatMatrix m(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m(r, c) = quaternion();
        return m;
    }

    qeig::HlcrMatrix hlcr_matrix(std::size_t n) {
        qeig::HlcrMatrix m(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m(r, c) = hlcr();
        return m;
    }

    qeig::QuatVector quat_vector(std::size_t n) {
        qeig::QuatVector v(n);
        for (auto& q : v) q = quaternion();
        return v;
    }

    ComplexMatrix complex_matrix(Eigen::Index n) {
        ComplexMatrix m(n, n);
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex();
        return m;
    }

    ComplexMatrix unitary(Eigen::Index n) {
        Eigen::HouseholderQR<ComplexMatrix> qr(complex_matrix(n));
        return qr.householderQ() * ComplexMatrix::Identity(n, n);
    }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace oracle
