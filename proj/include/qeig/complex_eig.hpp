#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "qeig/detail/assignment.hpp"
#include "qeig/error.hpp"
#include "qeig/matrix.hpp"

namespace qeig {

struct HessenbergResult {
    ComplexMatrix H;  // upper Hessenberg
    ComplexMatrix U;  // unitary, U* M U = H
};

struct ComplexEigResult {
    std::vector<Complex> eigenvalues;
    ComplexMatrix eigenvectors;      // unit 2-norm columns, same order as eigenvalues
    std::vector<double> residuals;   // |M v - lambda v| per pair
    std::vector<bool> flagged;       // residual above tol * |M|
    bool defective_flag = false;
    double condition_estimate = 1.0;
};

inline constexpr double kDefaultEigTol = 1e-10;

/// Householder reduction to upper Hessenberg form.
inline HessenbergResult hessenberg_reduce(const ComplexMatrix& M) {
    if (M.rows() != M.cols()) throw Error(ErrorCode::NonSquare, "hessenberg_reduce needs a square matrix");
    const Eigen::Index n = M.rows();
    ComplexMatrix H = M;
    ComplexMatrix U = ComplexMatrix::Identity(n, n);

    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        const Eigen::Index len = n - k - 1;
        ComplexVector v = H.block(k + 1, k, len, 1);
        const double xnorm = v.norm();
        if (xnorm == 0.0) continue;
        const Complex x0 = v(0);
        const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
        v(0) += phase * xnorm;  // v = x + e^{i arg x0} |x| e1, avoids cancellation
        const double vnorm = v.norm();
        if (vnorm == 0.0) continue;
        v /= vnorm;

        // H <- P H P with P = I - 2 v v*
        auto rows = H.block(k + 1, 0, len, n);
        const Eigen::RowVectorXcd left = v.adjoint() * rows;
        rows.noalias() -= 2.0 * v * left;
        auto cols = H.block(0, k + 1, n, len);
        const ComplexVector right = cols * v;
        cols.noalias() -= 2.0 * right * v.adjoint();
        auto ucols = U.block(0, k + 1, n, len);
        const ComplexVector uright = ucols * v;
        ucols.noalias() -= 2.0 * uright * v.adjoint();

        for (Eigen::Index r = k + 2; r < n; ++r) H(r, k) = 0.0;
    }
    return {H, U};
}

namespace detail {

// Eigenvalue of the trailing 2x2 block [[a, b], [c, d]] closest to d.
inline Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
    const Complex t = 0.5 * (a - d);
    const Complex disc = std::sqrt(t * t + b * c);
    const Complex den1 = t + disc;
    const Complex den2 = t - disc;
    const Complex den = std::abs(den1) >= std::abs(den2) ? den1 : den2;
    if (std::abs(den) == 0.0) return d;
    return d - b * c / den;
}

// Givens rotation [c s; -conj(s) c] with real c mapping (x, y) to (r, 0).
struct Givens {
    double c = 1.0;
    Complex s = 0.0;
};

inline Givens make_givens(Complex x, Complex y) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ay == 0.0) return {};
    if (ax == 0.0) return {0.0, std::conj(y) / ay};
    const double r = std::hypot(ax, ay);
    return {ax / r, (x / ax) * std::conj(y) / r};
}

// Shifted QR iteration on a Hessenberg matrix; returns the diagonal of the
// converged triangular form.
inline std::vector<Complex> hessenberg_qr_eigenvalues(ComplexMatrix H) {
    const Eigen::Index n = H.rows();
    std::vector<Complex> out(static_cast<std::size_t>(n));
    if (n == 0) return out;
    const double eps = std::numeric_limits<double>::epsilon();
    const long max_iter = 100 * static_cast<long>(n);
    long total = 0;
    int iter = 0;
    Eigen::Index iu = n - 1;

    while (iu > 0) {
        Eigen::Index il = iu;
        while (il > 0) {
            const double sub = std::abs(H(il, il - 1));
            const double diag = std::abs(H(il - 1, il - 1)) + std::abs(H(il, il));
            if (sub <= eps * diag || sub < std::numeric_limits<double>::min()) {
                H(il, il - 1) = 0.0;
                break;
            }
            --il;
        }
        if (il == iu) {
            --iu;
            iter = 0;
            continue;
        }
        if (++total > max_iter)
            throw Error(ErrorCode::NoConvergence, "QR iteration did not converge");
        ++iter;

        Complex shift;
        if (iter % 10 == 0) {
            double s = std::abs(H(iu, iu - 1).real());
            if (iu >= 2) s += std::abs(H(iu - 1, iu - 2).real());
            shift = s;
        } else {
            shift = wilkinson_shift(H(iu - 1, iu - 1), H(iu - 1, iu), H(iu, iu - 1), H(iu, iu));
        }

        // Explicit single-shift step on the active window il..iu.
        for (Eigen::Index k = il; k <= iu; ++k) H(k, k) -= shift;
        std::vector<Givens> rot(static_cast<std::size_t>(iu - il));
        for (Eigen::Index k = il; k < iu; ++k) {
            const Givens g = make_givens(H(k, k), H(k + 1, k));
            rot[static_cast<std::size_t>(k - il)] = g;
            for (Eigen::Index j = k; j <= iu; ++j) {
                const Complex x = H(k, j), y = H(k + 1, j);
                H(k, j) = g.c * x + g.s * y;
                H(k + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
        }
        for (Eigen::Index k = il; k < iu; ++k) {
            const Givens& g = rot[static_cast<std::size_t>(k - il)];
            const Eigen::Index top = std::min(k + 2, iu);
            for (Eigen::Index r = il; r <= top; ++r) {
                const Complex x = H(r, k), y = H(r, k + 1);
                H(r, k) = g.c * x + std::conj(g.s) * y;
                H(r, k + 1) = -g.s * x + g.c * y;
            }
        }
        for (Eigen::Index k = il; k <= iu; ++k) H(k, k) += shift;
    }
    for (Eigen::Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = H(k, k);
    return out;
}

// Solves (M - mu I) x = b by partial-pivot LU; pivots smaller than floor are
// replaced by floor so exactly singular shifts do not break down.
class ShiftedSolver {
public:
    ShiftedSolver(const ComplexMatrix& M, Complex mu, double floor) : lu_(M), perm_(M.rows()) {
        const Eigen::Index n = M.rows();
        for (Eigen::Index k = 0; k < n; ++k) lu_(k, k) -= mu;
        for (Eigen::Index k = 0; k < n; ++k) perm_[k] = k;
        for (Eigen::Index k = 0; k < n; ++k) {
            Eigen::Index p = k;
            for (Eigen::Index r = k + 1; r < n; ++r)
                if (std::abs(lu_(r, k)) > std::abs(lu_(p, k))) p = r;
            if (p != k) {
                lu_.row(k).swap(lu_.row(p));
                std::swap(perm_[k], perm_[p]);
            }
            if (std::abs(lu_(k, k)) < floor) lu_(k, k) = floor;
            for (Eigen::Index r = k + 1; r < n; ++r) {
                const Complex f = lu_(r, k) / lu_(k, k);
                lu_(r, k) = f;
                if (f != Complex(0.0))
                    lu_.block(r, k + 1, 1, n - k - 1) -= f * lu_.block(k, k + 1, 1, n - k - 1);
            }
        }
    }

    ComplexVector solve(const ComplexVector& b) const {
        const Eigen::Index n = lu_.rows();
        ComplexVector x(n);
        for (Eigen::Index k = 0; k < n; ++k) x(k) = b(perm_[k]);
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index j = 0; j < k; ++j) x(k) -= lu_(k, j) * x(j);
        for (Eigen::Index k = n - 1; k >= 0; --k) {
            for (Eigen::Index j = k + 1; j < n; ++j) x(k) -= lu_(k, j) * x(j);
            x(k) /= lu_(k, k);
        }
        return x;
    }

private:
    ComplexMatrix lu_;
    std::vector<Eigen::Index> perm_;
};

// Deterministic start vector for the s-th inverse iteration.
inline ComplexVector start_vector(Eigen::Index n, std::size_t s) {
    ComplexVector b(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double t = static_cast<double>(k + 1) * (0.7548776662466927 + 0.1 * static_cast<double>(s));
        b(k) = Complex(1.0 + 0.5 * std::sin(3.1 * t), 0.5 * std::cos(1.7 * t));
    }
    return b / b.norm();
}

// Row-reduces the basis of a subspace (columns of B) so the result does not
// depend on which basis the numerical method happened to return.
inline ComplexMatrix canonical_basis(const ComplexMatrix& B) {
    ComplexMatrix R = B.transpose();  // one basis vector per row
    const Eigen::Index m = R.rows(), n = R.cols();
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < n && row < m; ++col) {
        double best = 0.0;
        Eigen::Index piv = row;
        for (Eigen::Index r = row; r < m; ++r)
            if (std::abs(R(r, col)) > best) {
                best = std::abs(R(r, col));
                piv = r;
            }
        if (best <= 1e-6 * R.cwiseAbs().maxCoeff()) continue;
        R.row(row).swap(R.row(piv));
        R.row(row) /= R(row, col);
        for (Eigen::Index r = 0; r < m; ++r)
            if (r != row) R.row(r) -= R(r, col) * R.row(row);
        ++row;
    }
    ComplexMatrix out = R.transpose();
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        const double nc = out.col(c).norm();
        if (nc > 0.0) out.col(c) /= nc;
    }
    return out;
}

}  // namespace detail

/// Eigenvalues only: Hessenberg reduction followed by shifted QR.
inline std::vector<Complex> eigenvalues(const ComplexMatrix& M) {
    if (M.rows() != M.cols()) throw Error(ErrorCode::NonSquare, "eigenvalues need a square matrix");
    return detail::hessenberg_qr_eigenvalues(hessenberg_reduce(M).H);
}

/// 2-norm condition number of V, or infinity when V is singular.
inline double condition_number(const ComplexMatrix& V) {
    if (V.size() == 0) return 1.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(V);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

/**
 * Full eigendecomposition. Eigenvalues closer than 1e-9 max(1, |M|) are
 * treated as one cluster: the cluster gets its mean as common eigenvalue and
 * a canonical basis of the numerical null space of M - mu I. Isolated
 * eigenvalues get their vector by inverse iteration.
 */
inline ComplexEigResult eig(const ComplexMatrix& M, double tol = kDefaultEigTol) {
    if (M.rows() != M.cols()) throw Error(ErrorCode::NonSquare, "eig needs a square matrix");
    const Eigen::Index n = M.rows();
    ComplexEigResult res;
    res.eigenvectors = ComplexMatrix(n, n);
    if (n == 0) return res;

    const double mnorm = M.norm();
    const double scale = std::max(1.0, mnorm);
    std::vector<Complex> raw = eigenvalues(M);

    // Group into clusters (single linkage, deterministic order of first appearance).
    const double cluster_tol = 1e-9 * scale;
    std::vector<int> label(raw.size(), -1);
    int nclusters = 0;
    for (std::size_t a = 0; a < raw.size(); ++a) {
        if (label[a] >= 0) continue;
        label[a] = nclusters;
        std::vector<std::size_t> stack{a};
        while (!stack.empty()) {
            const std::size_t x = stack.back();
            stack.pop_back();
            for (std::size_t b = 0; b < raw.size(); ++b)
                if (label[b] < 0 && std::abs(raw[b] - raw[x]) <= cluster_tol) {
                    label[b] = nclusters;
                    stack.push_back(b);
                }
        }
        ++nclusters;
    }

    const double floor = std::max(1e-13 * mnorm, std::numeric_limits<double>::min());
    Eigen::Index col = 0;
    for (int c = 0; c < nclusters; ++c) {
        std::vector<std::size_t> members;
        Complex mu = 0.0;
        for (std::size_t a = 0; a < raw.size(); ++a)
            if (label[a] == c) {
                members.push_back(a);
                mu += raw[a];
            }
        const auto m = static_cast<Eigen::Index>(members.size());
        mu /= static_cast<double>(m);

        ComplexMatrix vecs(n, m);
        if (m == 1) {
            const detail::ShiftedSolver solver(M, mu, floor);
            ComplexVector v = detail::start_vector(n, 0);
            for (int it = 0; it < 3; ++it) {
                v = solver.solve(v);
                v /= v.norm();
            }
            vecs.col(0) = v;
        } else {
            ComplexMatrix shifted = M;
            shifted.diagonal().array() -= mu;
            Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
            vecs = detail::canonical_basis(svd.matrixV().rightCols(m));
        }

        for (Eigen::Index k = 0; k < m; ++k) {
            const ComplexVector v = vecs.col(k);
            const double r = (M * v - mu * v).norm();
            res.eigenvalues.push_back(mu);
            res.eigenvectors.col(col++) = v;
            res.residuals.push_back(r);
            res.flagged.push_back(r > tol * scale);
        }
    }

    res.condition_estimate = condition_number(res.eigenvectors);
    res.defective_flag = res.condition_estimate > 1.0 / tol ||
                         std::any_of(res.flagged.begin(), res.flagged.end(), [](bool f) { return f; });
    return res;
}

/// Monic characteristic polynomial det(lambda I - M), highest degree first.
inline std::vector<Complex> charpoly(const ComplexMatrix& M) {
    if (M.rows() != M.cols()) throw Error(ErrorCode::NonSquare, "charpoly needs a square matrix");
    const Eigen::Index n = M.rows();
    if (n > 12) throw Error(ErrorCode::DimensionTooLarge, "charpoly is limited to dimension 12");
    std::vector<Complex> coeffs(static_cast<std::size_t>(n) + 1);
    coeffs[0] = 1.0;
    ComplexMatrix Mk = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        Mk = M * Mk;
        Mk.diagonal().array() += coeffs[static_cast<std::size_t>(k - 1)];
        coeffs[static_cast<std::size_t>(k)] = -(M * Mk).trace() / static_cast<double>(k);
    }
    return coeffs;
}

inline Complex polyval(const std::vector<Complex>& coeffs, Complex z) {
    Complex acc = 0.0;
    for (const Complex& c : coeffs) acc = acc * z + c;
    return acc;
}

/// Roots of a polynomial (highest degree first) by Durand-Kerner iteration.
inline std::vector<Complex> roots(std::vector<Complex> coeffs) {
    if (coeffs.empty() || coeffs.front() == Complex(0.0))
        throw Error(ErrorCode::Unsupported, "polynomial needs a nonzero leading coefficient");
    if (coeffs.size() > 13) throw Error(ErrorCode::DimensionTooLarge, "roots is limited to degree 12");
    const Complex lead = coeffs.front();
    for (Complex& c : coeffs) c /= lead;
    const std::size_t deg = coeffs.size() - 1;
    if (deg == 0) return {};

    double cmax = 0.0;
    for (const Complex& c : coeffs) cmax = std::max(cmax, std::abs(c));
    double radius = 0.0;  // Cauchy bound
    for (std::size_t k = 1; k < coeffs.size(); ++k) radius = std::max(radius, std::abs(coeffs[k]));
    radius += 1.0;

    std::vector<Complex> z(deg);
    const Complex seed(0.4, 0.9);
    Complex w = 1.0;
    for (std::size_t k = 0; k < deg; ++k) {
        w *= seed;
        z[k] = 0.5 * radius * w;
    }

    for (int it = 0; it < 2000; ++it) {
        double change = 0.0;
        for (std::size_t k = 0; k < deg; ++k) {
            Complex den = 1.0;
            for (std::size_t j = 0; j < deg; ++j)
                if (j != k) den *= z[k] - z[j];
            if (den == Complex(0.0)) den = 1e-300;
            const Complex step = polyval(coeffs, z[k]) / den;
            z[k] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change <= 1e-15 * radius) break;
    }

    // Newton polish; the derivative may vanish at multiple roots, so keep the
    // better of the polished and unpolished values.
    std::vector<Complex> deriv(deg);
    for (std::size_t k = 0; k < deg; ++k) deriv[k] = coeffs[k] * static_cast<double>(deg - k);
    for (Complex& r : z) {
        for (int it = 0; it < 3; ++it) {
            const Complex d = polyval(deriv, r);
            if (d == Complex(0.0)) break;
            const Complex next = r - polyval(coeffs, r) / d;
            if (std::abs(polyval(coeffs, next)) >= std::abs(polyval(coeffs, r))) break;
            r = next;
        }
        if (std::abs(polyval(coeffs, r)) > 1e-8 * cmax)
            throw Error(ErrorCode::NoConvergence, "Durand-Kerner iteration did not converge");
    }
    return z;
}

/// Largest distance between two multisets of complex numbers under the
/// optimal one-to-one matching.
inline double multiset_distance(const std::vector<Complex>& x, const std::vector<Complex>& y) {
    if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> cost(x.size(), std::vector<double>(y.size()));
    for (std::size_t a = 0; a < x.size(); ++a)
        for (std::size_t b = 0; b < y.size(); ++b) cost[a][b] = std::abs(x[a] - y[b]);
    const auto match = detail::min_cost_assignment(cost);
    double worst = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) worst = std::max(worst, cost[a][match[a]]);
    return worst;
}

}  // namespace qeig
