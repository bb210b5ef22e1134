#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "qeig/complex_eig.hpp"
#include "qeig/error.hpp"
#include "qeig/matrix.hpp"
#include "qeig/right_eig.hpp"

namespace qeig {

struct LeftSolution {
    Quaternion q;      // left eigenvalue: M psi = q psi
    QuatVector psi;
    double residual = 0.0;  // |M psi - q psi| / (|M| |psi|)
    bool family_flag = false;
};

/// A continuum of solutions psi = (1, psi2) detected through a rank-deficient Jacobian.
struct LeftFamily {
    int dimension = 0;                 // null-space dimension of the Jacobian in psi2
    std::string constraint;            // invariants observed over the samples
    std::vector<LeftSolution> samples;
    std::optional<double> magnitude;   // |q| when constant over the samples
};

struct LeftEigResult {
    std::vector<LeftSolution> solutions;  // isolated roots, then one representative per family
    std::vector<LeftFamily> families;
};

/// |M psi - q psi| / (|M| |psi|).
inline double verify_left_pair(const QuatMatrix& M, const Quaternion& q, const QuatVector& psi) {
    if (!M.is_square() || M.cols() != psi.size())
        throw Error(ErrorCode::DimensionMismatch, "matrix and vector sizes differ");
    QuatVector qpsi(psi.size());
    for (std::size_t l = 0; l < psi.size(); ++l) qpsi[l] = q * psi[l];
    const double r = norm(M * psi - qpsi);
    const double den = frobenius_norm(M) * norm(psi);
    if (den == 0.0) return r;
    return r / den;
}

namespace detail {

inline Eigen::Vector4d to_vec(const Quaternion& q) { return {q.a, q.b, q.c, q.d}; }
inline Quaternion to_quat(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }

// The quadratic A x^2 + B x - C = 0 left after eliminating q with psi1 = 1.
struct LeftQuadratic {
    Quaternion A, B, C;

    Quaternion value(const Quaternion& x) const { return A * x * x + B * x - C; }

    Eigen::Matrix4d jacobian(const Quaternion& x) const {
        Eigen::Matrix4d J;
        const Quaternion basis[4] = {Quaternion(1.0), Quaternion::i(), Quaternion::j(), Quaternion::k()};
        for (int c = 0; c < 4; ++c) {
            const Quaternion& h = basis[c];
            J.col(c) = to_vec(A * (x * h + h * x) + B * h);
        }
        return J;
    }

    double scale() const { return std::max(1.0, norm(A) + norm(B) + norm(C)); }
};

// Gauss-Newton with pseudo-inverse steps and backtracking.
inline std::optional<Quaternion> newton_root(const LeftQuadratic& f, Quaternion x, double bound) {
    const double s = f.scale();
    for (int it = 0; it < 100; ++it) {
        const Eigen::Vector4d F = to_vec(f.value(x));
        const double fn = F.norm();
        if (fn <= 1e-15 * s) break;
        Eigen::JacobiSVD<Eigen::Matrix4d> svd(f.jacobian(x), Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::Vector4d sv = svd.singularValues();
        Eigen::Vector4d inv = Eigen::Vector4d::Zero();
        for (int k = 0; k < 4; ++k)
            if (sv(k) > 1e-12 * std::max(sv(0), 1e-300)) inv(k) = 1.0 / sv(k);
        const Eigen::Vector4d step = -(svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * F);
        if (step.norm() == 0.0) break;
        bool accepted = false;
        for (double t = 1.0; t > 1e-4; t *= 0.5) {
            const Quaternion xn = x + to_quat(t * step);
            if (norm(f.value(xn)) < fn) {
                x = xn;
                accepted = true;
                break;
            }
        }
        if (!accepted || norm(x) > bound) break;
    }
    if (norm(f.value(x)) > 1e-11 * s) return std::nullopt;
    return x;
}

inline int null_dimension(const LeftQuadratic& f, const Quaternion& x) {
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(f.jacobian(x));
    const auto& sv = svd.singularValues();
    int d = 0;
    for (int k = 0; k < 4; ++k)
        if (sv(k) < 1e-6 * f.scale()) ++d;
    return d;
}

inline Eigen::MatrixXd null_basis(const LeftQuadratic& f, const Quaternion& x, int d) {
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(f.jacobian(x), Eigen::ComputeFullV);
    return svd.matrixV().rightCols(d);
}

inline bool near_any(const std::vector<Quaternion>& xs, const Quaternion& x) {
    return std::any_of(xs.begin(), xs.end(), [&](const Quaternion& y) { return max_abs_diff(x, y) <= 1e-6; });
}

// Descending lexicographic order on components, 1e-9 tolerance.
inline bool lex_greater(const Quaternion& x, const Quaternion& y) {
    const double xs[4] = {x.a, x.b, x.c, x.d}, ys[4] = {y.a, y.b, y.c, y.d};
    for (int k = 0; k < 4; ++k)
        if (const int c = cmp(xs[k], ys[k], 1e-9); c != 0) return c > 0;
    return false;
}

inline std::string format_number(double v) {
    if (std::abs(v) < 5e-13) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// "name = value" for every quantity that stays constant over the samples.
inline std::string describe_invariants(const std::vector<Quaternion>& xs, const std::vector<Quaternion>& qs, int dim) {
    struct Probe {
        const char* name;
        double (*get)(const Quaternion&);
        bool on_q;
    };
    static const Probe probes[] = {
        {"|psi2|", [](const Quaternion& x) { return norm(x); }, false},
        {"Re(psi2)", [](const Quaternion& x) { return x.a; }, false},
        {"|q|", [](const Quaternion& x) { return norm(x); }, true},
        {"Re(q)", [](const Quaternion& x) { return x.a; }, true},
        {"q.i", [](const Quaternion& x) { return x.b; }, true},
        {"q.j", [](const Quaternion& x) { return x.c; }, true},
        {"q.k", [](const Quaternion& x) { return x.d; }, true},
    };
    std::string text = std::to_string(dim) + "-parameter family in psi2";
    std::string parts;
    for (const auto& p : probes) {
        const auto& src = p.on_q ? qs : xs;
        double lo = p.get(src.front()), hi = lo;
        for (const auto& v : src) {
            lo = std::min(lo, p.get(v));
            hi = std::max(hi, p.get(v));
        }
        if (hi - lo > 1e-8) continue;
        if (!parts.empty()) parts += ", ";
        parts += std::string(p.name) + " = " + format_number(0.5 * (lo + hi));
    }
    if (!parts.empty()) text += "; " + parts;
    return text;
}

}  // namespace detail

/**
 * Left eigenvalue problem M psi = q psi for 2x2 quaternionic M.
 *
 * With psi1 = 1 the first row gives q = M11 + M12 psi2, and the second row
 * becomes M12 psi2^2 + (M11 - M22) psi2 - M21 = 0. That equation is solved
 * over R^4 by Gauss-Newton from 64 fixed seeds. Roots where the Jacobian
 * loses rank are reported as families with at least eight samples. The
 * psi1 = 0 branch exists only when M12 = 0 and contributes q = M22.
 */
inline LeftEigResult left_eig_2x2(const QuatMatrix& M) {
    if (M.rows() != 2 || M.cols() != 2) {
        if (M.is_square() && M.rows() > 2)
            throw Error(ErrorCode::Unsupported, "left eigenproblems are only solved for 2x2 matrices");
        throw Error(ErrorCode::NotTwoByTwo, "left_eig_2x2 needs a 2x2 matrix");
    }
    const detail::LeftQuadratic f{M(0, 1), M(0, 0) - M(1, 1), M(1, 0)};
    const double r = 1.0 + frobenius_norm(M);
    const double bound = 1e6 * r;

    auto make_solution = [&](const Quaternion& x, bool family) {
        LeftSolution s;
        s.psi = {Quaternion(1.0), x};
        s.q = M(0, 0) + M(0, 1) * x;
        s.residual = verify_left_pair(M, s.q, s.psi);
        s.family_flag = family;
        return s;
    };

    // Deterministic 64-point subsample of the 5^4 grid {-r, -r/2, 0, r/2, r}^4.
    const double levels[5] = {-r, -0.5 * r, 0.0, 0.5 * r, r};
    std::vector<Quaternion> isolated;
    std::vector<std::pair<int, std::vector<Quaternion>>> by_dim;  // family points grouped by null dimension
    for (int s = 0; s < 64; ++s) {
        int idx = (s * 39 + 7) % 625;
        double comp[4];
        for (int k = 0; k < 4; ++k) {
            comp[k] = levels[idx % 5];
            idx /= 5;
        }
        const auto root = detail::newton_root(f, Quaternion(comp[0], comp[1], comp[2], comp[3]), bound);
        if (!root) continue;
        const int d = detail::null_dimension(f, *root);
        if (d == 0) {
            if (!detail::near_any(isolated, *root)) isolated.push_back(*root);
            continue;
        }
        auto it = std::find_if(by_dim.begin(), by_dim.end(), [&](const auto& g) { return g.first == d; });
        if (it == by_dim.end()) {
            by_dim.push_back({d, {}});
            it = std::prev(by_dim.end());
        }
        if (!detail::near_any(it->second, *root)) it->second.push_back(*root);
    }

    LeftEigResult out;
    detail::stable_insertion_sort(isolated, detail::lex_greater);
    for (const auto& x : isolated) out.solutions.push_back(make_solution(x, false));

    std::sort(by_dim.begin(), by_dim.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [dim, pts] : by_dim) {
        // Walk along the null space and re-project until there are enough samples.
        for (int attempt = 0; pts.size() < 8 && attempt < 64; ++attempt) {
            const Quaternion base = pts[static_cast<std::size_t>(attempt) % pts.size()];
            const Eigen::MatrixXd N = detail::null_basis(f, base, dim);
            const Eigen::Index col = attempt % N.cols();
            const double sign = (attempt / N.cols()) % 2 == 0 ? 1.0 : -1.0;
            const double len = 0.35 * (1.0 + norm(base)) * (1.0 + 0.25 * (attempt / (2 * N.cols())));
            const Eigen::Vector4d dir = N.col(col);
            const auto root = detail::newton_root(f, base + detail::to_quat(sign * len * dir), bound);
            if (root && detail::null_dimension(f, *root) == dim && !detail::near_any(pts, *root)) pts.push_back(*root);
        }
        LeftFamily fam;
        fam.dimension = dim;
        std::vector<Quaternion> qs;
        for (const auto& x : pts) {
            fam.samples.push_back(make_solution(x, true));
            qs.push_back(fam.samples.back().q);
        }
        fam.constraint = detail::describe_invariants(pts, qs, dim);
        double lo = norm(qs.front()), hi = lo;
        for (const auto& q : qs) {
            lo = std::min(lo, norm(q));
            hi = std::max(hi, norm(q));
        }
        if (hi - lo <= 1e-8) fam.magnitude = 0.5 * (lo + hi);
        out.solutions.push_back(fam.samples.front());
        out.families.push_back(std::move(fam));
    }

    if (norm(M(0, 1)) <= 1e-12 * r) {
        LeftSolution s;
        s.psi = {Quaternion(), Quaternion(1.0)};
        s.q = M(1, 1);
        s.residual = verify_left_pair(M, s.q, s.psi);
        out.solutions.push_back(s);
    }

    if (out.solutions.empty()) throw Error(ErrorCode::NoRootsFound, "no seed converged to a left eigenpair");
    return out;
}

/// Isolated |q| values, plus one constant |q| per family that has one.
inline std::vector<double> left_magnitudes(const LeftEigResult& r) {
    std::vector<double> mags;
    for (const auto& s : r.solutions)
        if (!s.family_flag) mags.push_back(norm(s.q));
    for (const auto& f : r.families)
        if (f.magnitude) mags.push_back(*f.magnitude);
    return mags;
}

struct MagnitudeReport {
    std::vector<double> right;  // |lambda| over the reduced right spectrum
    std::vector<double> left;   // see left_magnitudes
    bool equal = false;         // same multiset within 1e-8
};

inline MagnitudeReport left_right_magnitude_report(const QuatMatrix& M) {
    if (M.rows() != 2 || M.cols() != 2) throw Error(ErrorCode::NotTwoByTwo, "magnitude report needs a 2x2 matrix");
    MagnitudeReport rep;
    for (const Complex& z : right_spectrum_quaternionic(M).reduced_spectrum) rep.right.push_back(std::abs(z));
    rep.left = left_magnitudes(left_eig_2x2(M));
    std::vector<double> a = rep.right, b = rep.left;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    rep.equal = a.size() == b.size();
    for (std::size_t k = 0; rep.equal && k < a.size(); ++k) rep.equal = std::abs(a[k] - b[k]) <= 1e-8;
    return rep;
}

enum class SimilarityVerdict {
    SameLeftSpectrumNotSimilar,
    SameLeftSpectrumSameComplexSpectrum,
    DifferentLeftSpectrumSameComplexSpectrum,
    DifferentLeftSpectrumNotSimilar,
};

constexpr std::string_view to_string(SimilarityVerdict v) {
    switch (v) {
    case SimilarityVerdict::SameLeftSpectrumNotSimilar: return "SAME_LEFT_SPECTRUM_NOT_SIMILAR";
    case SimilarityVerdict::SameLeftSpectrumSameComplexSpectrum: return "SAME_LEFT_SPECTRUM_SAME_COMPLEX_SPECTRUM";
    case SimilarityVerdict::DifferentLeftSpectrumSameComplexSpectrum: return "DIFFERENT_LEFT_SPECTRUM_SAME_COMPLEX_SPECTRUM";
    case SimilarityVerdict::DifferentLeftSpectrumNotSimilar: return "DIFFERENT_LEFT_SPECTRUM_NOT_SIMILAR";
    }
    return "UNKNOWN";
}

struct SimilarityComparison {
    bool same_left_spectrum = false;      // isolated left spectra agree up to eigenclass
    bool same_complex_spectrum = false;   // complexified spectra agree within 1e-8
    double complex_spectrum_distance = 0.0;
    std::vector<Complex> complex_spectrum_m;
    std::vector<Complex> complex_spectrum_n;
    LeftEigResult left_m;
    LeftEigResult left_n;
    SimilarityVerdict verdict = SimilarityVerdict::DifferentLeftSpectrumNotSimilar;
};

/**
 * Similar matrices have equal complexified spectra, so a mismatch there
 * rules out similarity even when the left spectra coincide.
 */
inline SimilarityComparison compare_left_spectra_similarity(const QuatMatrix& M, const QuatMatrix& N) {
    if (M.rows() != 2 || M.cols() != 2 || N.rows() != 2 || N.cols() != 2)
        throw Error(ErrorCode::NotTwoByTwo, "comparison needs two 2x2 matrices");
    SimilarityComparison c;
    c.left_m = left_eig_2x2(M);
    c.left_n = left_eig_2x2(N);

    std::vector<Quaternion> lm, ln;
    for (const auto& s : c.left_m.solutions)
        if (!s.family_flag) lm.push_back(s.q);
    for (const auto& s : c.left_n.solutions)
        if (!s.family_flag) ln.push_back(s.q);
    c.same_left_spectrum = lm.size() == ln.size() && c.left_m.families.size() == c.left_n.families.size();
    if (c.same_left_spectrum) {
        std::vector<std::vector<double>> cost(lm.size(), std::vector<double>(ln.size()));
        for (std::size_t a = 0; a < lm.size(); ++a)
            for (std::size_t b = 0; b < ln.size(); ++b)
                cost[a][b] = std::abs(lm[a].a - ln[b].a) + std::abs(norm(lm[a]) - norm(ln[b]));
        const auto match = detail::min_cost_assignment(cost);
        for (std::size_t a = 0; a < lm.size(); ++a)
            c.same_left_spectrum = c.same_left_spectrum && same_eigenclass(lm[a], ln[match[a]], 1e-8);
    }

    c.complex_spectrum_m = eig(complexify_matrix(M)).eigenvalues;
    c.complex_spectrum_n = eig(complexify_matrix(N)).eigenvalues;
    c.complex_spectrum_distance = multiset_distance(c.complex_spectrum_m, c.complex_spectrum_n);
    c.same_complex_spectrum = c.complex_spectrum_distance <= 1e-8;

    if (c.same_left_spectrum)
        c.verdict = c.same_complex_spectrum ? SimilarityVerdict::SameLeftSpectrumSameComplexSpectrum
                                            : SimilarityVerdict::SameLeftSpectrumNotSimilar;
    else
        c.verdict = c.same_complex_spectrum ? SimilarityVerdict::DifferentLeftSpectrumSameComplexSpectrum
                                            : SimilarityVerdict::DifferentLeftSpectrumNotSimilar;
    return c;
}

}  // namespace qeig
