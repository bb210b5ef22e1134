#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

#include "qeig/complex_eig.hpp"
#include "qeig/detail/assignment.hpp"
#include "qeig/error.hpp"
#include "qeig/matrix.hpp"

namespace qeig {

/// Which member of each conjugate pair represents it in the reduced spectrum.
enum class Convention { PositiveImag, NegativeImag };

inline constexpr double kDefaultPairTol = 1e-8;

struct RightEigOptions {
    double eig_tol = kDefaultEigTol;
    double pair_tol = kDefaultPairTol;
    Convention convention = Convention::PositiveImag;
};

struct RightEigResult {
    std::vector<Complex> reduced_spectrum;  // one value per conjugate pair
    std::vector<Complex> full_spectrum;     // (lambda_l, conj lambda_l) for each l
    std::vector<QuatVector> eigenvectors;   // unit norm, M psi_l = psi_l lambda_l
    std::vector<double> residuals;          // |M psi - psi lambda|
    std::optional<QuatMatrix> diagonalizer; // S_H with S_H M S_H^-1 diagonal
    bool diagonalizable = false;
    double condition_estimate = 1.0;        // of the complexified eigenvector matrix
};

struct ClinEigResult {
    std::vector<Complex> spectrum;         // all 2n values, no pairing
    std::vector<QuatVector> eigenvectors;  // apply(M, psi) = psi lambda
    std::vector<double> residuals;
    std::optional<HlcrMatrix> diagonalizer;
    std::optional<HlcrMatrix> diagonal;
    bool diagonalizable = false;
    double condition_estimate = 1.0;
};

// ---------------------------------------------------------------------------
// Conjugate pairing

/// (x, y) -> (-conj(y), conj(x)) per block; the complex image of psi -> psi j.
inline ComplexVector partner_eigenvector(const ComplexVector& phi) {
    if (phi.size() % 2 != 0) throw Error(ErrorCode::OddDimension, "partner needs an even-length vector");
    ComplexVector out(phi.size());
    for (Eigen::Index l = 0; l < phi.size(); l += 2) {
        out(l) = -std::conj(phi(l + 1));
        out(l + 1) = std::conj(phi(l));
    }
    return out;
}

/**
 * Index pairs (a, b) with eigs[b] ~ conj(eigs[a]); the member with
 * nonnegative imaginary part comes first. Greedy nearest-conjugate matching,
 * falling back to an optimal assignment whose cycles are cut into pairs.
 * tol is relative to max(1, max |lambda|).
 */
inline std::vector<std::pair<std::size_t, std::size_t>> pair_indices(const std::vector<Complex>& eigs,
                                                                     double tol = kDefaultPairTol) {
    const std::size_t m = eigs.size();
    if (m % 2 != 0) throw Error(ErrorCode::UnpairedEigenvalue, "odd number of eigenvalues");
    double scale = 1.0;
    for (const Complex& z : eigs) scale = std::max(scale, std::abs(z));
    const double gate = tol * scale;
    auto dist = [&](std::size_t a, std::size_t b) { return std::abs(eigs[a] - std::conj(eigs[b])); };
    auto ordered = [&](std::size_t a, std::size_t b) {
        return eigs[a].imag() >= eigs[b].imag() ? std::pair{a, b} : std::pair{b, a};
    };

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<bool> used(m, false);
    bool greedy_ok = true;
    for (std::size_t a = 0; a < m && greedy_ok; ++a) {
        if (used[a]) continue;
        std::size_t best = m;
        for (std::size_t b = 0; b < m; ++b)
            if (b != a && !used[b] && (best == m || dist(a, b) < dist(a, best))) best = b;
        if (best == m || dist(a, best) > gate) {
            greedy_ok = false;
            break;
        }
        used[a] = used[best] = true;
        pairs.push_back(ordered(a, best));
    }
    if (greedy_ok) return pairs;

    std::vector<std::vector<double>> cost(m, std::vector<double>(m));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) cost[a][b] = a == b ? 1e300 : dist(a, b);
    const auto sigma = detail::min_cost_assignment(cost);
    pairs.clear();
    std::vector<bool> seen(m, false);
    for (std::size_t start = 0; start < m; ++start) {
        if (seen[start]) continue;
        std::vector<std::size_t> cycle;
        for (std::size_t x = start; !seen[x]; x = sigma[x]) {
            seen[x] = true;
            cycle.push_back(x);
        }
        if (cycle.size() % 2 != 0)
            throw Error(ErrorCode::UnpairedEigenvalue, "spectrum is not closed under conjugation");
        for (std::size_t k = 0; k < cycle.size(); k += 2) {
            if (dist(cycle[k], cycle[k + 1]) > gate)
                throw Error(ErrorCode::UnpairedEigenvalue, "spectrum is not closed under conjugation");
            pairs.push_back(ordered(cycle[k], cycle[k + 1]));
        }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& x, const auto& y) { return std::min(x.first, x.second) < std::min(y.first, y.second); });
    return pairs;
}

inline std::vector<std::pair<Complex, Complex>> pair_spectrum(const std::vector<Complex>& eigs,
                                                              double tol = kDefaultPairTol) {
    std::vector<std::pair<Complex, Complex>> out;
    for (const auto& [a, b] : pair_indices(eigs, tol)) out.emplace_back(eigs[a], eigs[b]);
    return out;
}

// ---------------------------------------------------------------------------
// Helpers shared by the right-eigenvalue routines

namespace detail {

// Multiplies by a complex phase so the first significant entry is real positive,
// then normalizes.
inline ComplexVector fix_phase(ComplexVector v) {
    const double n = v.norm();
    if (n == 0.0) return v;
    for (Eigen::Index k = 0; k < v.size(); ++k)
        if (std::abs(v(k)) > 1e-8 * n) {
            v *= std::conj(v(k)) / std::abs(v(k));
            break;
        }
    return v / n;
}

// Index of the first component whose modulus is within a relative 1e-9 of the largest.
inline std::size_t dominant_index(const QuatVector& v) {
    double big = 0.0;
    for (const auto& q : v) big = std::max(big, norm(q));
    for (std::size_t l = 0; l < v.size(); ++l)
        if (norm(v[l]) >= (1.0 - 1e-9) * big) return l;
    return 0;
}

// Three-way comparison of doubles with an absolute tolerance.
inline int cmp(double x, double y, double tol) {
    if (x < y - tol) return -1;
    if (x > y + tol) return 1;
    return 0;
}

// Stable insertion sort; tolerant comparators are not strict weak orders, so
// std::sort is avoided.
template <typename T, typename Less>
void stable_insertion_sort(std::vector<T>& items, Less less) {
    for (std::size_t k = 1; k < items.size(); ++k)
        for (std::size_t j = k; j > 0 && less(items[j], items[j - 1]); --j) std::swap(items[j], items[j - 1]);
}

// Chooses up to count columns of cand whose quaternionic forms are
// H-independent, i.e. the span of {v, J v} grows by two with every pick.
inline std::vector<Eigen::Index> select_quaternionic_independent(const ComplexMatrix& cand, std::size_t count) {
    std::vector<Eigen::Index> picked;
    std::vector<ComplexVector> basis;
    auto residual = [&](ComplexVector v) {
        for (const auto& b : basis) v -= b * b.dot(v);
        for (const auto& b : basis) v -= b * b.dot(v);
        return v;
    };
    for (Eigen::Index c = 0; c < cand.cols() && picked.size() < count; ++c) {
        const ComplexVector v = cand.col(c) / cand.col(c).norm();
        const ComplexVector r = residual(v);
        if (r.norm() <= 1e-6) continue;
        picked.push_back(c);
        basis.push_back(r / r.norm());
        const ComplexVector r2 = residual(partner_eigenvector(v));
        if (r2.norm() > 1e-12) basis.push_back(r2 / r2.norm());
    }
    return picked;
}

// Orthonormal basis of the column span (thin Householder QR).
inline ComplexMatrix orthonormal_columns(const ComplexMatrix& B) {
    Eigen::HouseholderQR<ComplexMatrix> qr(B);
    return qr.householderQ() * ComplexMatrix::Identity(B.rows(), B.cols());
}

inline double quaternionic_residual(const QuatMatrix& M, const QuatVector& psi, Complex lambda) {
    return norm(M * psi - right_multiply(psi, Quaternion(lambda)));
}

inline QuatMatrix columns_to_matrix(const std::vector<QuatVector>& cols) {
    const std::size_t n = cols.empty() ? 0 : cols.front().size();
    QuatMatrix V(n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < n; ++r) V(r, c) = cols[c][r];
    return V;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Quaternionic-linear operators

/**
 * Reduced right spectrum of a quaternionic matrix: one complex eigenvalue
 * per conjugate pair of the complexified spectrum together with a unit
 * eigenvector, M psi = psi lambda.
 *
 * Pairs are listed by the index of each eigenvector's dominant component,
 * ties broken by eigenvalue (real part descending, imaginary ascending).
 * Under NegativeImag every non-real pair is reported as (conj lambda, psi j)
 * in the same order; real pairs are left as they are.
 */
inline RightEigResult right_spectrum_quaternionic(const QuatMatrix& M, const RightEigOptions& opt = {}) {
    if (!M.is_square()) throw Error(ErrorCode::NonSquare, "right eigenproblem needs a square matrix");
    const ComplexMatrix C = complexify_matrix(M);
    const ComplexEigResult e = eig(C, opt.eig_tol);
    const auto pairs = pair_indices(e.eigenvalues, opt.pair_tol);

    double scale = 1.0;
    for (const Complex& z : e.eigenvalues) scale = std::max(scale, std::abs(z));
    const double real_gate = opt.pair_tol * scale;

    struct Entry {
        Complex lambda;
        ComplexVector phi;
        QuatVector psi;
    };
    std::vector<Entry> entries;
    bool complete = true;

    // Real pairs with a common value share an eigenspace; pick H-independent
    // vectors inside it.
    std::vector<std::pair<std::size_t, std::size_t>> real_pairs;
    for (const auto& [a, b] : pairs) {
        const Complex lam = 0.5 * (e.eigenvalues[a] + std::conj(e.eigenvalues[b]));
        if (std::abs(lam.imag()) > real_gate) {
            entries.push_back({lam, e.eigenvectors.col(static_cast<Eigen::Index>(a)), {}});
        } else {
            real_pairs.emplace_back(a, b);
        }
    }
    std::vector<bool> grouped(real_pairs.size(), false);
    for (std::size_t g = 0; g < real_pairs.size(); ++g) {
        if (grouped[g]) continue;
        const double value = e.eigenvalues[real_pairs[g].first].real();
        std::vector<Eigen::Index> cols;
        for (std::size_t h = g; h < real_pairs.size(); ++h) {
            if (grouped[h]) continue;
            if (std::abs(e.eigenvalues[real_pairs[h].first].real() - value) > 1e-9 * scale) continue;
            grouped[h] = true;
            cols.push_back(static_cast<Eigen::Index>(real_pairs[h].first));
            cols.push_back(static_cast<Eigen::Index>(real_pairs[h].second));
        }
        std::sort(cols.begin(), cols.end());
        ComplexMatrix cand(C.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) cand.col(static_cast<Eigen::Index>(k)) = e.eigenvectors.col(cols[k]);
        const std::size_t need = cols.size() / 2;
        auto picked = detail::select_quaternionic_independent(cand, need);
        if (picked.size() < need) {
            complete = false;
            for (Eigen::Index c = 0; picked.size() < need; ++c)
                if (std::find(picked.begin(), picked.end(), c) == picked.end()) picked.push_back(c);
        }
        for (const Eigen::Index c : picked) entries.push_back({Complex(value, 0.0), cand.col(c), {}});
    }

    for (auto& en : entries) {
        en.phi = detail::fix_phase(en.phi);
        en.psi = dequaternionify_vector(en.phi);
    }

    const double tie = 1e-9 * scale;
    detail::stable_insertion_sort(entries, [&](const Entry& x, const Entry& y) {
        const std::size_t dx = detail::dominant_index(x.psi), dy = detail::dominant_index(y.psi);
        if (dx != dy) return dx < dy;
        if (const int c = detail::cmp(x.lambda.real(), y.lambda.real(), tie); c != 0) return c > 0;
        return detail::cmp(x.lambda.imag(), y.lambda.imag(), tie) < 0;
    });

    if (opt.convention == Convention::NegativeImag) {
        for (auto& en : entries) {
            if (std::abs(en.lambda.imag()) <= real_gate) continue;
            en.lambda = std::conj(en.lambda);
            en.phi = partner_eigenvector(en.phi);
            en.psi = right_multiply(en.psi, Quaternion::j());
        }
    }

    RightEigResult r;
    r.condition_estimate = e.condition_estimate;
    const double mnorm = frobenius_norm(M);
    bool residuals_ok = true;
    ComplexMatrix Vc(C.rows(), C.cols());
    for (std::size_t l = 0; l < entries.size(); ++l) {
        const auto& en = entries[l];
        r.reduced_spectrum.push_back(en.lambda);
        r.full_spectrum.push_back(en.lambda);
        r.full_spectrum.push_back(std::conj(en.lambda));
        r.eigenvectors.push_back(en.psi);
        const double res = detail::quaternionic_residual(M, en.psi, en.lambda);
        r.residuals.push_back(res);
        residuals_ok = residuals_ok && res <= 1e-9 * mnorm * norm(en.psi) + 1e-300;
        Vc.col(static_cast<Eigen::Index>(2 * l)) = en.phi;
        Vc.col(static_cast<Eigen::Index>(2 * l + 1)) = partner_eigenvector(en.phi);
    }

    r.diagonalizable = complete && residuals_ok && !e.defective_flag;
    if (r.diagonalizable) {
        r.condition_estimate = condition_number(Vc);
        if (r.condition_estimate > 1.0 / opt.eig_tol) {
            r.diagonalizable = false;
        } else {
            try {
                r.diagonalizer = inverse(detail::columns_to_matrix(r.eigenvectors));
            } catch (const Error&) {
                r.diagonalizable = false;
            }
        }
    }
    return r;
}

/// (psi u, conj(u) lambda u): the same eigenpair seen through another ray representative.
inline std::pair<QuatVector, Quaternion> rephase_eigenpair(const QuatVector& psi, const Quaternion& lambda,
                                                           const UnitQuaternion& u) {
    return {right_multiply(psi, u.value()), conjugate(u.value()) * lambda * u.value()};
}

struct QuatDiagonalization {
    QuatMatrix S;  // S M S^-1 = D
    QuatMatrix D;
    double residual = 0.0;  // Frobenius norm of S M S^-1 - D
};

/**
 * S_H is the inverse of the matrix whose columns are the reduced-spectrum
 * eigenvectors, so S_H M S_H^-1 = diag(lambda_1, ..., lambda_n).
 */
inline QuatDiagonalization diagonalize_quaternionic(const QuatMatrix& M, const RightEigOptions& opt = {}) {
    const RightEigResult r = right_spectrum_quaternionic(M, opt);
    if (!r.diagonalizable || !r.diagonalizer)
        throw Error(ErrorCode::NotDiagonalizable, "complexified matrix has no complete eigenvector set");
    const QuatMatrix V = detail::columns_to_matrix(r.eigenvectors);
    std::vector<Quaternion> diag;
    for (const Complex& z : r.reduced_spectrum) diag.emplace_back(z);
    QuatDiagonalization out{*r.diagonalizer, QuatMatrix::diagonal(diag), 0.0};
    out.residual = frobenius_norm(out.S * M * V - out.D);
    if (out.residual > 1e-8 * std::max(1.0, frobenius_norm(M)))
        throw Error(ErrorCode::SingularEigenvectorMatrix, "diagonalizer fails its residual check");
    return out;
}

// ---------------------------------------------------------------------------
// Complex-linear operators

/**
 * Full right spectrum of an operator with entries in the left algebra plus
 * R_i. All 2n eigenvalues are returned, ordered by |Im| ascending, then real
 * part descending, then imaginary part descending.
 */
inline ClinEigResult right_spectrum_complexlinear(const HlcrMatrix& M, double tol = kDefaultEigTol) {
    if (!M.is_square()) throw Error(ErrorCode::NonSquare, "right eigenproblem needs a square matrix");
    const ComplexMatrix C = complexify_matrix(M);
    const ComplexEigResult e = eig(C, tol);

    double scale = 1.0;
    for (const Complex& z : e.eigenvalues) scale = std::max(scale, std::abs(z));
    const double tie = 1e-9 * scale;
    std::vector<Eigen::Index> order(e.eigenvalues.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<Eigen::Index>(k);
    detail::stable_insertion_sort(order, [&](Eigen::Index x, Eigen::Index y) {
        const Complex a = e.eigenvalues[static_cast<std::size_t>(x)];
        const Complex b = e.eigenvalues[static_cast<std::size_t>(y)];
        if (const int c = detail::cmp(std::abs(a.imag()), std::abs(b.imag()), tie); c != 0) return c < 0;
        if (const int c = detail::cmp(a.real(), b.real(), tie); c != 0) return c > 0;
        return detail::cmp(a.imag(), b.imag(), tie) > 0;
    });

    ClinEigResult r;
    const double mnorm = frobenius_norm(M);
    bool residuals_ok = true;
    ComplexMatrix V(C.rows(), C.cols());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Complex lam = e.eigenvalues[static_cast<std::size_t>(order[k])];
        const ComplexVector phi = detail::fix_phase(e.eigenvectors.col(order[k]));
        V.col(static_cast<Eigen::Index>(k)) = phi;
        const QuatVector psi = dequaternionify_vector(phi);
        const double res = norm(apply(M, psi) - right_multiply(psi, Quaternion(lam)));
        residuals_ok = residuals_ok && res <= 1e-9 * mnorm + 1e-300;
        r.spectrum.push_back(lam);
        r.eigenvectors.push_back(psi);
        r.residuals.push_back(res);
    }
    r.condition_estimate = condition_number(V);
    r.diagonalizable = residuals_ok && !e.defective_flag && r.condition_estimate <= 1.0 / tol;
    if (r.diagonalizable) {
        try {
            r.diagonalizer = dequaternionify_matrix(invert_complex(V));
        } catch (const Error&) {
            r.diagonalizable = false;
        }
        ComplexMatrix Dc = ComplexMatrix::Zero(C.rows(), C.cols());
        for (std::size_t k = 0; k < r.spectrum.size(); ++k)
            Dc(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = r.spectrum[k];
        r.diagonal = dequaternionify_matrix(Dc);
    }
    return r;
}

struct ClinDiagonalization {
    HlcrMatrix S;  // S M S^-1 = D
    HlcrMatrix D;  // diagonal entries (l1 + conj l2)/2 + ((l1 - conj l2)/2i) R_i
    double residual = 0.0;
};

inline ClinDiagonalization diagonalize_complexlinear(const HlcrMatrix& M, double tol = kDefaultEigTol) {
    const ClinEigResult r = right_spectrum_complexlinear(M, tol);
    if (!r.diagonalizable || !r.diagonalizer || !r.diagonal)
        throw Error(ErrorCode::NotDiagonalizable, "complexified matrix has no complete eigenvector set");
    const HlcrMatrix Sinv = inverse(*r.diagonalizer);
    ClinDiagonalization out{*r.diagonalizer, *r.diagonal, 0.0};
    out.residual = frobenius_norm(out.S * M * Sinv - out.D);
    if (out.residual > 1e-8 * std::max(1.0, frobenius_norm(M)))
        throw Error(ErrorCode::SingularEigenvectorMatrix, "diagonalizer fails its residual check");
    return out;
}

// ---------------------------------------------------------------------------
// Anti-hermitian to hermitian

/**
 * For anti-hermitian A with reduced spectrum i|lambda_l| and orthonormal
 * eigenvectors v_l, returns H = sum_l v_l |lambda_l| v_l^dagger.
 */
inline QuatMatrix hermitian_from_antihermitian(const QuatMatrix& A, double tol = 1e-9) {
    if (!A.is_square() || !is_antihermitian(A, tol))
        throw Error(ErrorCode::NotAntiHermitian, "matrix is not anti-hermitian");
    const RightEigResult r = right_spectrum_quaternionic(A);
    if (!r.diagonalizable) throw Error(ErrorCode::NotDiagonalizable, "eigenvectors do not span");
    const double scale = std::max(1.0, frobenius_norm(A));
    for (const Complex& z : r.reduced_spectrum)
        if (std::abs(z.real()) > tol * scale)
            throw Error(ErrorCode::NotAntiHermitian, "spectrum is not purely imaginary");

    // Eigenvectors of a normal operator for distinct eigenvalues are already
    // orthogonal; Gram-Schmidt only acts inside degenerate eigenspaces, where
    // the overlaps are complex and the result stays an eigenvector.
    std::vector<QuatVector> v;
    for (std::size_t l = 0; l < r.eigenvectors.size(); ++l) {
        QuatVector w = r.eigenvectors[l];
        for (std::size_t m = 0; m < l; ++m) {
            if (std::abs(r.reduced_spectrum[m] - r.reduced_spectrum[l]) > 1e-8 * scale) continue;
            w = w - right_multiply(v[m], inner_product(v[m], w));
        }
        const double nw = norm(w);
        if (nw <= 1e-8) throw Error(ErrorCode::NotDiagonalizable, "degenerate eigenvectors are dependent");
        v.push_back(right_multiply(w, Quaternion(1.0 / nw)));
    }

    const std::size_t n = A.rows();
    QuatMatrix H(n, n);
    for (std::size_t l = 0; l < v.size(); ++l) {
        const double mag = std::abs(r.reduced_spectrum[l]);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) H(a, b) += mag * (v[l][a] * conjugate(v[l][b]));
    }
    return H;
}

// ---------------------------------------------------------------------------
// Common eigenbasis of commuting operators

struct CoSpectrumResult {
    std::vector<QuatVector> basis;                  // common eigenvectors
    std::vector<std::pair<Complex, Complex>> pairs; // (lambda1, lambda2) per basis vector
};

/// Complex right eigenvalue of psi under M, or nullopt if psi is not an eigenvector within tol.
inline std::optional<Complex> right_eigenvalue_of(const QuatMatrix& M, const QuatVector& psi, double tol = 1e-8) {
    const double n2 = norm(psi) * norm(psi);
    if (n2 == 0.0) return std::nullopt;
    const Quaternion q = inner_product(psi, M * psi) / n2;
    const Complex lam = complex_projection(q);
    if (detail::quaternionic_residual(M, psi, lam) > tol * std::max(1.0, frobenius_norm(M)) * std::sqrt(n2))
        return std::nullopt;
    return lam;
}

/// Eigenvalue pairs of two operators on a given common basis.
inline CoSpectrumResult co_spectrum_on_basis(const QuatMatrix& M1, const QuatMatrix& M2,
                                             const std::vector<QuatVector>& basis, double tol = 1e-8) {
    CoSpectrumResult out;
    for (const auto& psi : basis) {
        const auto l1 = right_eigenvalue_of(M1, psi, tol);
        const auto l2 = right_eigenvalue_of(M2, psi, tol);
        if (!l1 || !l2)
            throw Error(ErrorCode::NotSimultaneouslyDiagonalizable, "basis vector is not a common eigenvector");
        out.basis.push_back(psi);
        out.pairs.emplace_back(*l1, *l2);
    }
    return out;
}

/// Replaces psi_l by psi_l j wherever flip[l] is set; both eigenvalues get conjugated.
inline CoSpectrumResult flip_basis(const CoSpectrumResult& r, const std::vector<bool>& flip) {
    CoSpectrumResult out = r;
    for (std::size_t l = 0; l < out.basis.size() && l < flip.size(); ++l) {
        if (!flip[l]) continue;
        out.basis[l] = right_multiply(out.basis[l], Quaternion::j());
        out.pairs[l] = {std::conj(out.pairs[l].first), std::conj(out.pairs[l].second)};
    }
    return out;
}

/**
 * Common eigenbasis of commuting quaternionic matrices. Each eigenspace of
 * the complexified M1 with Im lambda >= 0 is searched for eigenvectors of the
 * complexified M2; the positive-imaginary convention is applied to M1 only,
 * so degenerate M1 eigenvalues are split by the M2 values.
 */
inline CoSpectrumResult co_spectrum(const QuatMatrix& M1, const QuatMatrix& M2, double tol = 1e-8) {
    if (!M1.is_square() || !M2.is_square() || M1.rows() != M2.rows())
        throw Error(ErrorCode::DimensionMismatch, "co_spectrum needs square matrices of equal size");
    const double n1 = frobenius_norm(M1), n2 = frobenius_norm(M2);
    if (frobenius_norm(M1 * M2 - M2 * M1) > 1e-9 * std::max(1.0, n1 * n2))
        throw Error(ErrorCode::NotCommuting, "matrices do not commute");

    const ComplexMatrix C1 = complexify_matrix(M1);
    const ComplexMatrix C2 = complexify_matrix(M2);
    const ComplexEigResult e1 = eig(C1);
    if (e1.defective_flag) throw Error(ErrorCode::NotSimultaneouslyDiagonalizable, "first matrix is defective");

    double scale = 1.0;
    for (const Complex& z : e1.eigenvalues) scale = std::max(scale, std::abs(z));
    const double gate = tol * scale;
    const double c2scale = std::max(1.0, C2.norm());

    struct Entry {
        Complex l1, l2;
        ComplexVector phi;
        QuatVector psi;
    };
    std::vector<Entry> entries;
    std::vector<bool> done(e1.eigenvalues.size(), false);
    for (std::size_t a = 0; a < e1.eigenvalues.size(); ++a) {
        if (done[a]) continue;
        const Complex mu = e1.eigenvalues[a];
        std::vector<Eigen::Index> members;
        for (std::size_t b = a; b < e1.eigenvalues.size(); ++b)
            if (!done[b] && std::abs(e1.eigenvalues[b] - mu) <= gate) {
                done[b] = true;
                members.push_back(static_cast<Eigen::Index>(b));
            }
        if (mu.imag() < -gate) continue;  // represented by the partners of the conjugate space

        ComplexMatrix B(C1.rows(), static_cast<Eigen::Index>(members.size()));
        for (std::size_t k = 0; k < members.size(); ++k) B.col(static_cast<Eigen::Index>(k)) = e1.eigenvectors.col(members[k]);
        B = detail::orthonormal_columns(B);
        const ComplexMatrix R = B.adjoint() * C2 * B;
        if ((C2 * B - B * R).norm() > tol * c2scale)
            throw Error(ErrorCode::NotSimultaneouslyDiagonalizable, "eigenspace is not invariant under the second matrix");
        const ComplexEigResult er = eig(R);
        if (er.defective_flag)
            throw Error(ErrorCode::NotSimultaneouslyDiagonalizable, "second matrix is defective on an eigenspace");
        const ComplexMatrix W = B * er.eigenvectors;

        const bool real_space = std::abs(mu.imag()) <= gate;
        std::vector<Eigen::Index> picked;
        if (real_space) {
            picked = detail::select_quaternionic_independent(W, members.size() / 2);
            if (picked.size() * 2 != members.size())
                throw Error(ErrorCode::NotSimultaneouslyDiagonalizable, "real eigenspace lacks an H-independent basis");
        } else {
            for (Eigen::Index c = 0; c < W.cols(); ++c) picked.push_back(c);
        }
        for (const Eigen::Index c : picked) {
            const ComplexVector phi = detail::fix_phase(W.col(c));
            entries.push_back({real_space ? Complex(mu.real(), 0.0) : mu, er.eigenvalues[static_cast<std::size_t>(c)],
                               phi, dequaternionify_vector(phi)});
        }
    }
    if (entries.size() != M1.rows())
        throw Error(ErrorCode::NotSimultaneouslyDiagonalizable, "could not assemble a common basis");

    const double tie = 1e-9 * scale;
    detail::stable_insertion_sort(entries, [&](const Entry& x, const Entry& y) {
        const std::size_t dx = detail::dominant_index(x.psi), dy = detail::dominant_index(y.psi);
        if (dx != dy) return dx < dy;
        if (const int c = detail::cmp(x.l1.real(), y.l1.real(), tie); c != 0) return c > 0;
        if (const int c = detail::cmp(x.l1.imag(), y.l1.imag(), tie); c != 0) return c < 0;
        return detail::cmp(x.l2.imag(), y.l2.imag(), tie) > 0;
    });

    CoSpectrumResult out;
    for (const auto& en : entries) {
        out.basis.push_back(en.psi);
        out.pairs.emplace_back(en.l1, en.l2);
    }
    return out;
}

}  // namespace qeig
