#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "support/oracles.hpp"

using namespace qeig;

namespace {

const Quaternion I = Quaternion::i(), J = Quaternion::j(), K = Quaternion::k();
const Quaternion One(1.0);
const Complex kI(0.0, 1.0);

const Complex kLambda1 = std::pow(2.0, 0.25) * std::exp(kI * (3.0 * std::numbers::pi / 8.0));
const Complex kLambda2 = -std::conj(kLambda1);

QuatMatrix ijki() { return {{I, J}, {K, I}}; }

HlcrMatrix complex_linear_example() {
    return {{HlcrElement(J, -I), HlcrElement(One, -K)}, {HlcrElement(-One, -K), HlcrElement(J, I)}};
}

// |<a|b>| = |a||b| in the complex picture, i.e. b = a c for some complex c.
double parallel_defect(const QuatVector& a, const QuatVector& b) {
    const ComplexVector x = complexify_vector(a), y = complexify_vector(b);
    const Complex c = x.dot(y) / x.squaredNorm();
    return (y - c * x).norm() / y.norm();
}

int complex_rank(const ComplexMatrix& A, double tol) {
    Eigen::JacobiSVD<ComplexMatrix> svd(A);
    const auto& s = svd.singularValues();
    int r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > tol * s(0)) ++r;
    return r;
}

QuatMatrix random_antihermitian(oracle::Random& rng, std::size_t n) {
    const QuatMatrix X = rng.quat_matrix(n);
    return X - adjoint(X);
}

}  // namespace

TEST(Partner, Examples) {
    const ComplexVector e = (ComplexVector(2) << 1.0, 0.0).finished();
    EXPECT_EQ(partner_eigenvector(e), (ComplexVector(2) << 0.0, 1.0).finished());

    const Complex l1s = std::conj(kLambda1);
    const ComplexVector phi = (ComplexVector(4) << -1.0 + kI * kLambda1, 0.0, 0.0, 1.0).finished();
    const ComplexVector expected = (ComplexVector(4) << 0.0, -1.0 - kI * l1s, -1.0, 0.0).finished();
    EXPECT_LE((partner_eigenvector(phi) - expected).norm(), 1e-15);
    EXPECT_THROW(partner_eigenvector(ComplexVector::Zero(3)), Error);
}

TEST(Partner, TwiceIsMinusIdentityAndMapsEigenpairs) {
    oracle::Random rng(51);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 6));
        const ComplexMatrix C = complexify_matrix(rng.quat_matrix(n));
        const ComplexVector v = complexify_vector(rng.quat_vector(n));
        EXPECT_EQ(partner_eigenvector(partner_eigenvector(v)), -v);

        const ComplexEigResult e = eig(C);
        for (Eigen::Index k = 0; k < C.rows(); ++k) {
            const ComplexVector phi = e.eigenvectors.col(k);
            const Complex lam = e.eigenvalues[static_cast<std::size_t>(k)];
            const double r = (C * phi - lam * phi).norm();
            const ComplexVector p = partner_eigenvector(phi);
            // The partner map itself is exact; the slack covers rounding in evaluating the residual.
            EXPECT_LE((C * p - std::conj(lam) * p).norm(), r * (1 + 4 * 2.3e-16) + 8 * 2.3e-16 * C.norm());
        }
    }
}

TEST(PairSpectrum, Examples) {
    const auto p = pair_spectrum({kI, -kI, 2.0, 2.0});
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p[0], std::make_pair(kI, -kI));
    EXPECT_EQ(p[1], std::make_pair(Complex(2.0), Complex(2.0)));

    const auto q = pair_spectrum({1.0 + kI, 1.0 - kI + 1e-12}, 1e-9);
    EXPECT_EQ(q.size(), 1u);

    const auto a = pair_spectrum(eig(complexify_matrix(ijki())).eigenvalues);
    ASSERT_EQ(a.size(), 2u);
    std::vector<Complex> firsts;
    for (const auto& [x, y] : a) {
        EXPECT_LE(std::abs(x - std::conj(y)), 1e-12);
        firsts.push_back(x.imag() >= 0 ? x : y);
    }
    EXPECT_LE(multiset_distance(firsts, {kLambda1, kLambda2}), 1e-12);
}

TEST(PairSpectrum, UnpairedRaises) {
    try {
        (void)pair_spectrum({kI, 2.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnpairedEigenvalue);
    }
}

TEST(PairSpectrum, ConjugateClosureOnRandomQuaternionicMatrices) {
    oracle::Random rng(52);
    for (int t = 0; t < 200; ++t) {
        const ComplexMatrix C = complexify_matrix(rng.quat_matrix(static_cast<std::size_t>(rng.integer(1, 8))));
        const auto ev = eig(C).eigenvalues;
        std::vector<Complex> conj_ev;
        for (const Complex& z : ev) conj_ev.push_back(std::conj(z));
        EXPECT_LE(multiset_distance(ev, conj_ev), 1e-8 * std::max(1.0, C.norm()));
        EXPECT_NO_THROW(pair_spectrum(ev));
    }
}

TEST(RightSpectrum, IjkiGolden) {
    const QuatMatrix M = ijki();
    const RightEigResult r = right_spectrum_quaternionic(M);
    ASSERT_EQ(r.reduced_spectrum.size(), 2u);
    EXPECT_LE(std::abs(r.reduced_spectrum[0] - kLambda1), 1e-10);
    EXPECT_LE(std::abs(r.reduced_spectrum[1] - kLambda2), 1e-10);
    ASSERT_EQ(r.full_spectrum.size(), 4u);
    EXPECT_LE(std::abs(r.full_spectrum[1] - std::conj(kLambda1)), 1e-10);

    const Complex l1s = std::conj(kLambda1);
    const QuatVector g1{Quaternion(-1.0 + kI * kLambda1), J};
    const QuatVector g2{J * Quaternion(1.0 - kI * l1s), One};
    EXPECT_LE(parallel_defect(g1, r.eigenvectors[0]), 1e-10);
    EXPECT_LE(parallel_defect(g2, r.eigenvectors[1]), 1e-10);
    for (double res : r.residuals) EXPECT_LE(res, 1e-10);
    EXPECT_TRUE(r.diagonalizable);
}

TEST(RightSpectrum, GoldenVectorsSatisfyTheEquation) {
    const QuatMatrix M = ijki();
    const Complex l1s = std::conj(kLambda1);
    const QuatVector g1{Quaternion(-1.0 + kI * kLambda1), J};
    const QuatVector g2{J * Quaternion(1.0 - kI * l1s), One};
    EXPECT_LE(norm(M * g1 - right_multiply(g1, Quaternion(kLambda1))), 1e-14);
    EXPECT_LE(norm(M * g2 - right_multiply(g2, Quaternion(kLambda2))), 1e-14);
}

TEST(RightSpectrum, DiagonalExamples) {
    const RightEigResult a = right_spectrum_quaternionic(QuatMatrix::diagonal({I, I}));
    ASSERT_EQ(a.reduced_spectrum.size(), 2u);
    for (const Complex& z : a.reduced_spectrum) EXPECT_LE(std::abs(z - kI), 1e-14);
    EXPECT_LE(parallel_defect({One, Quaternion()}, a.eigenvectors[0]), 1e-14);
    EXPECT_LE(parallel_defect({Quaternion(), One}, a.eigenvectors[1]), 1e-14);

    const RightEigResult b = right_spectrum_quaternionic(QuatMatrix::diagonal({Quaternion(3.0), Quaternion(2.0)}));
    EXPECT_LE(multiset_distance(b.reduced_spectrum, {2.0, 3.0}), 1e-14);
    EXPECT_TRUE(b.diagonalizable);
}

TEST(RightSpectrum, RealDegeneratePairUsesPsiAndPsiJ) {
    // 2 has multiplicity four in the complexified matrix; the reduced
    // spectrum lists it once per quaternionic dimension.
    const RightEigResult r = right_spectrum_quaternionic(QuatMatrix::diagonal({Quaternion(2.0), Quaternion(2.0)}));
    ASSERT_EQ(r.reduced_spectrum.size(), 2u);
    EXPECT_TRUE(r.diagonalizable);
    ASSERT_TRUE(r.diagonalizer.has_value());
}

TEST(RightSpectrum, ResidualsAndClosureOnRandomMatrices) {
    oracle::Random rng(53);
    for (int t = 0; t < 200; ++t) {
        const QuatMatrix M = rng.quat_matrix(static_cast<std::size_t>(rng.integer(1, 8)));
        const RightEigResult r = right_spectrum_quaternionic(M);
        ASSERT_EQ(r.reduced_spectrum.size(), M.rows());
        for (std::size_t l = 0; l < r.eigenvectors.size(); ++l) {
            const QuatVector& psi = r.eigenvectors[l];
            const Complex lam = r.reduced_spectrum[l];
            EXPECT_GE(lam.imag(), 0.0);
            EXPECT_LE(norm(M * psi - right_multiply(psi, Quaternion(lam))), 1e-9 * frobenius_norm(M) * norm(psi));
            // psi j carries the conjugate eigenvalue.
            const QuatVector pj = right_multiply(psi, J);
            EXPECT_LE(norm(M * pj - right_multiply(pj, Quaternion(std::conj(lam)))), 1e-9 * frobenius_norm(M) * norm(psi));
        }
    }
}

TEST(RightSpectrum, NegativeConventionConjugatesAndFlipsVectors) {
    oracle::Random rng(54);
    RightEigOptions neg;
    neg.convention = Convention::NegativeImag;
    for (int t = 0; t < 100; ++t) {
        const QuatMatrix M = rng.quat_matrix(static_cast<std::size_t>(rng.integer(1, 6)));
        const RightEigResult p = right_spectrum_quaternionic(M);
        const RightEigResult q = right_spectrum_quaternionic(M, neg);
        ASSERT_EQ(p.reduced_spectrum.size(), q.reduced_spectrum.size());
        for (std::size_t l = 0; l < p.reduced_spectrum.size(); ++l) {
            EXPECT_LE(std::abs(q.reduced_spectrum[l] - std::conj(p.reduced_spectrum[l])), 1e-12);
            EXPECT_LE(parallel_defect(right_multiply(p.eigenvectors[l], J), q.eigenvectors[l]), 1e-9);
        }
        EXPECT_LE(multiset_distance(p.full_spectrum, q.full_spectrum), 1e-12);
    }
}

TEST(RightSpectrum, DistinctEigenvaluesGiveIndependentVectors) {
    oracle::Random rng(55);
    for (int t = 0; t < 200; ++t) {
        const RightEigResult r = right_spectrum_quaternionic(rng.quat_matrix(2));
        const Complex a = r.reduced_spectrum[0], b = r.reduced_spectrum[1];
        if (std::abs(a - b) <= 1e-6 || std::abs(a - std::conj(b)) <= 1e-6) continue;
        const QuatMatrix V = QuatMatrix{{r.eigenvectors[0][0], r.eigenvectors[1][0]},
                                        {r.eigenvectors[0][1], r.eigenvectors[1][1]}};
        EXPECT_EQ(complex_rank(complexify_matrix(V), 1e-10), 4);
    }
}

TEST(Rephase, Examples) {
    const QuatVector psi{I, One};
    const auto [p1, l1] = rephase_eigenpair(psi, Quaternion(kI), UnitQuaternion(One));
    EXPECT_EQ(p1, psi);
    EXPECT_EQ(l1, I);
    const auto [p2, l2] = rephase_eigenpair(psi, Quaternion(kI), UnitQuaternion(J));
    EXPECT_EQ(p2, right_multiply(psi, J));
    EXPECT_EQ(l2, -I);
}

TEST(Rephase, PreservesResidual) {
    oracle::Random rng(56);
    for (int t = 0; t < 100; ++t) {
        const QuatMatrix M = rng.quat_matrix(3);
        const RightEigResult r = right_spectrum_quaternionic(M);
        const auto [psi, q] = rephase_eigenpair(r.eigenvectors[0], Quaternion(r.reduced_spectrum[0]),
                                                UnitQuaternion::normalized(rng.quaternion()));
        EXPECT_LE(norm(M * psi - right_multiply(psi, q)), 1e-9 * frobenius_norm(M));
    }
}

TEST(DiagonalizeQuaternionic, IjkiMatchesClosedForm) {
    const QuatMatrix M = ijki();
    const QuatDiagonalization d = diagonalize_quaternionic(M);
    EXPECT_LE(d.residual, 1e-9);
    EXPECT_LE(max_abs_diff(d.D, QuatMatrix::diagonal({Quaternion(kLambda1), Quaternion(kLambda2)})), 1e-10);

    const Complex l = kLambda1, ls = std::conj(kLambda1);
    const double m2 = std::norm(kLambda1);
    QuatMatrix S{{Quaternion(kI * ls), J * Quaternion(kI * l + m2)}, {K * Quaternion(ls), Quaternion(kI * l - m2)}};
    S = QuatMatrix::diagonal({Quaternion(-1.0 / (2 * m2)), Quaternion(-1.0 / (2 * m2))}) * S;
    // The closed form diagonalizes on its own...
    EXPECT_LE(frobenius_norm(S * M * inverse(S) - d.D), 1e-12);
    // ...and agrees with ours up to a complex factor per row.
    EXPECT_LE(oracle::off_diagonal_ratio(complexify_matrix(d.S), complexify_matrix(S)), 1e-10);
}

TEST(DiagonalizeQuaternionic, DiagonalInput) {
    const QuatDiagonalization d = diagonalize_quaternionic(QuatMatrix::diagonal({I, Quaternion(2.0)}));
    EXPECT_LE(max_abs_diff(d.D, QuatMatrix::diagonal({I, Quaternion(2.0)})), 1e-14);
    EXPECT_LE(oracle::off_diagonal_ratio(complexify_matrix(d.S), ComplexMatrix::Identity(4, 4)), 1e-14);
}

TEST(DiagonalizeQuaternionic, DefectiveRaises) {
    const QuatMatrix M{{I, One}, {Quaternion(), I}};
    try {
        (void)diagonalize_quaternionic(M);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotDiagonalizable);
    }
    // Both witnesses of defectiveness: a poorly conditioned eigenvector set and
    // a characteristic polynomial with a repeated root.
    EXPECT_TRUE(eig(complexify_matrix(M)).defective_flag);
    const auto c = charpoly(complexify_matrix(M));
    EXPECT_LE(multiset_distance(roots(c), {kI, kI, -kI, -kI}), 1e-6);
}

TEST(DiagonalizeQuaternionic, ConstructedInstances) {
    oracle::Random rng(57);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 6));
        std::vector<Quaternion> diag;
        for (std::size_t l = 0; l < n; ++l) diag.emplace_back(rng.complex());
        const QuatMatrix S = rng.quat_matrix(n);
        const QuatMatrix M = S * QuatMatrix::diagonal(diag) * inverse(S);
        const QuatDiagonalization d = diagonalize_quaternionic(M);
        EXPECT_LE(frobenius_norm(d.S * M * inverse(d.S) - d.D), 1e-8 * frobenius_norm(M));
        EXPECT_LT(right_spectrum_quaternionic(M).condition_estimate, 1.0 / kDefaultEigTol);
    }
}

TEST(ComplexLinear, GoldenSpectrumAndVectors) {
    const HlcrMatrix M = complex_linear_example();
    const ClinEigResult r = right_spectrum_complexlinear(M);
    ASSERT_EQ(r.spectrum.size(), 4u);
    const std::vector<Complex> expected{2.0, -2.0, 2.0 * kI, -2.0 * kI};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_LE(std::abs(r.spectrum[k] - expected[k]), 1e-10);

    const std::vector<QuatVector> golden{{One, -J}, {J, One}, {One + K, I + J}, {J - I, K - One}};
    for (const QuatVector& g : golden) {
        std::size_t hit = 4;
        for (std::size_t k = 0; k < 4; ++k)
            if (norm(apply(M, g) - right_multiply(g, Quaternion(r.spectrum[k]))) <= 1e-12) hit = k;
        ASSERT_LT(hit, 4u);
        EXPECT_LE(parallel_defect(g, r.eigenvectors[hit]), 1e-10);
    }
}

TEST(ComplexLinear, DiagonalizerAndDiagonal) {
    const HlcrMatrix M = complex_linear_example();
    const ClinDiagonalization d = diagonalize_complexlinear(M);
    EXPECT_LE(d.residual, 1e-9);
    const HlcrMatrix D{{HlcrElement(Quaternion(), -2.0 * I), HlcrElement()}, {HlcrElement(), HlcrElement(2.0 * I)}};
    EXPECT_LE(max_abs_diff(d.D, D), 1e-10);

    // The closed form diagonalizer; ours differs by a complex factor per
    // eigenvector.
    const HlcrMatrix S{{HlcrElement(0.5 * One), HlcrElement(0.5 * J)},
                       {HlcrElement((One - K) / 4.0), HlcrElement(-(I + J) / 4.0)}};
    EXPECT_LE(max_abs_diff(S * M * inverse(S), D), 1e-12);
    EXPECT_LE(oracle::off_diagonal_ratio(complexify_matrix(d.S), complexify_matrix(S)), 1e-10);
}

TEST(ComplexLinear, UnitaryRebasing) {
    const HlcrMatrix D{{HlcrElement(Quaternion(), -2.0 * I), HlcrElement()}, {HlcrElement(), HlcrElement(2.0 * I)}};
    const HlcrMatrix U = widen(QuatMatrix::diagonal({-J, (One + K) / std::sqrt(2.0)}));
    const HlcrMatrix rebased = U * D * adjoint(U);
    const HlcrMatrix expected{{HlcrElement(Quaternion(), 2.0 * I), HlcrElement()}, {HlcrElement(), HlcrElement(2.0 * J)}};
    EXPECT_LE(max_abs_diff(rebased, expected), 1e-14);
    EXPECT_LE(max_abs_diff(U * adjoint(U), widen(QuatMatrix::identity(2))), 1e-15);
    // The opposite conjugation order flips the sign of the second entry.
    const HlcrMatrix other{{HlcrElement(Quaternion(), 2.0 * I), HlcrElement()}, {HlcrElement(), HlcrElement(-2.0 * J)}};
    EXPECT_LE(max_abs_diff(adjoint(U) * D * U, other), 1e-14);
}

TEST(ComplexLinear, QuaternionicInputsAgreeWithReducedSpectrum) {
    oracle::Random rng(58);
    for (int t = 0; t < 50; ++t) {
        const QuatMatrix M = rng.quat_matrix(static_cast<std::size_t>(rng.integer(1, 5)));
        const ClinEigResult c = right_spectrum_complexlinear(widen(M));
        EXPECT_LE(multiset_distance(c.spectrum, right_spectrum_quaternionic(M).full_spectrum), 1e-9 * frobenius_norm(M));
    }
}

TEST(ComplexLinear, PureRightI) {
    const HlcrMatrix R{{HlcrElement::right_i()}};
    const ClinEigResult r = right_spectrum_complexlinear(R);
    ASSERT_EQ(r.spectrum.size(), 2u);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_LE(std::abs(r.spectrum[k] - kI), 1e-15);
        EXPECT_LE(r.residuals[k], 1e-15);
    }
    for (const Quaternion& x : {One, J}) EXPECT_EQ(apply(R, {x}), right_multiply({x}, I));
}

TEST(ComplexLinear, RandomDiagonalizerResidual) {
    oracle::Random rng(59);
    for (int t = 0; t < 50; ++t) {
        const HlcrMatrix M = rng.hlcr_matrix(static_cast<std::size_t>(rng.integer(1, 5)));
        const ClinDiagonalization d = diagonalize_complexlinear(M);
        EXPECT_LE(d.residual, 1e-8 * frobenius_norm(M));
        const ClinEigResult r = right_spectrum_complexlinear(M);
        for (std::size_t k = 0; k < r.spectrum.size(); ++k) EXPECT_LE(r.residuals[k], 1e-9 * frobenius_norm(M));
    }
}

TEST(ComplexLinear, IdentityDiagonalizesTrivially) {
    const ClinDiagonalization d = diagonalize_complexlinear(widen(QuatMatrix::identity(2)));
    EXPECT_LE(max_abs_diff(d.D, widen(QuatMatrix::identity(2))), 1e-15);
    EXPECT_LE(max_abs_diff(d.S, widen(QuatMatrix::identity(2))), 1e-15);
}

TEST(HermitianFromAntihermitian, Golden) {
    const QuatMatrix A{{-I, 3.0 * J}, {3.0 * J, I}};
    const RightEigResult r = right_spectrum_quaternionic(A);
    EXPECT_LE(multiset_distance(r.reduced_spectrum, {2.0 * kI, 4.0 * kI}), 1e-10);
    const double s = 1.0 / std::sqrt(2.0);
    bool found_a = false, found_b = false;
    for (const auto& v : r.eigenvectors) {
        found_a = found_a || parallel_defect({s * I, s * J}, v) <= 1e-10;
        found_b = found_b || parallel_defect({s * K, Quaternion(s)}, v) <= 1e-10;
    }
    EXPECT_TRUE(found_a && found_b);

    const QuatMatrix H = hermitian_from_antihermitian(A);
    EXPECT_LE(max_abs_diff(H, QuatMatrix{{Quaternion(3.0), K}, {-K, Quaternion(3.0)}}), 1e-9);
    EXPECT_TRUE(is_hermitian(H, 1e-9));
}

TEST(HermitianFromAntihermitian, DiagonalAndErrors) {
    EXPECT_LE(max_abs_diff(hermitian_from_antihermitian(QuatMatrix::diagonal({I, 2.0 * I})),
                           QuatMatrix::diagonal({One, Quaternion(2.0)})),
              1e-12);
    try {
        (void)hermitian_from_antihermitian(ijki());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAntiHermitian);
    }
}

TEST(HermitianFromAntihermitian, RandomIsPhaseIndependent) {
    oracle::Random rng(60);
    for (int t = 0; t < 50; ++t) {
        const QuatMatrix A = random_antihermitian(rng, 3);
        const QuatMatrix H = hermitian_from_antihermitian(A);
        EXPECT_TRUE(is_hermitian(H, 1e-9));
        const RightEigResult ra = right_spectrum_quaternionic(A);
        std::vector<Complex> mags;
        for (const Complex& z : ra.reduced_spectrum) mags.emplace_back(std::abs(z));
        EXPECT_LE(multiset_distance(right_spectrum_quaternionic(H).reduced_spectrum, mags), 1e-8 * frobenius_norm(A));

        // Rebuild with each eigenvector multiplied by a random unit quaternion.
        QuatMatrix G(3, 3);
        for (std::size_t l = 0; l < 3; ++l) {
            const QuatVector v = right_multiply(ra.eigenvectors[l], rng.unit());
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b) G(a, b) += std::abs(ra.reduced_spectrum[l]) * (v[a] * conjugate(v[b]));
        }
        EXPECT_LE(max_abs_diff(G, H), 1e-8);
    }
}

TEST(CoSpectrum, EnergyAndSpin) {
    const QuatMatrix M1 = QuatMatrix::diagonal({I, I});
    const QuatMatrix M2 = QuatMatrix::diagonal({0.5 * I, -0.5 * I});
    const CoSpectrumResult r = co_spectrum(M1, M2);
    ASSERT_EQ(r.pairs.size(), 2u);
    EXPECT_LE(std::abs(r.pairs[0].first - kI) + std::abs(r.pairs[0].second - 0.5 * kI), 1e-12);
    EXPECT_LE(std::abs(r.pairs[1].first - kI) + std::abs(r.pairs[1].second + 0.5 * kI), 1e-12);
    EXPECT_LE(parallel_defect({One, Quaternion()}, r.basis[0]), 1e-12);
    EXPECT_LE(parallel_defect({Quaternion(), One}, r.basis[1]), 1e-12);
}

TEST(CoSpectrum, EquivalentBasesGiveTheRemainingRows) {
    const QuatMatrix M1 = QuatMatrix::diagonal({I, I});
    const QuatMatrix M2 = QuatMatrix::diagonal({0.5 * I, -0.5 * I});
    const CoSpectrumResult base = co_spectrum_on_basis(M1, M2, {{One, Quaternion()}, {Quaternion(), One}});
    const std::vector<std::vector<std::pair<Complex, Complex>>> table{
        {{kI, 0.5 * kI}, {kI, -0.5 * kI}},
        {{kI, 0.5 * kI}, {-kI, 0.5 * kI}},
        {{-kI, -0.5 * kI}, {kI, -0.5 * kI}},
        {{-kI, -0.5 * kI}, {-kI, 0.5 * kI}},
    };
    for (int mask = 0; mask < 4; ++mask) {
        const std::vector<bool> flip{(mask & 2) != 0, (mask & 1) != 0};
        const CoSpectrumResult f = flip_basis(base, flip);
        const CoSpectrumResult direct = co_spectrum_on_basis(M1, M2, f.basis);
        for (std::size_t l = 0; l < 2; ++l) {
            EXPECT_LE(std::abs(f.pairs[l].first - table[static_cast<std::size_t>(mask)][l].first), 1e-15);
            EXPECT_LE(std::abs(f.pairs[l].second - table[static_cast<std::size_t>(mask)][l].second), 1e-15);
            EXPECT_LE(std::abs(direct.pairs[l].first - f.pairs[l].first), 1e-15);
            EXPECT_LE(std::abs(direct.pairs[l].second - f.pairs[l].second), 1e-15);
        }
    }
}

TEST(CoSpectrum, IdentitySecondOperator) {
    const CoSpectrumResult r = co_spectrum(ijki(), QuatMatrix::identity(2));
    ASSERT_EQ(r.pairs.size(), 2u);
    EXPECT_LE(std::abs(r.pairs[0].first - kLambda1), 1e-10);
    EXPECT_LE(std::abs(r.pairs[1].first - kLambda2), 1e-10);
    for (const auto& p : r.pairs) EXPECT_LE(std::abs(p.second - 1.0), 1e-12);
}

TEST(CoSpectrum, NonCommutingRaises) {
    try {
        (void)co_spectrum(ijki(), QuatMatrix::diagonal({I, J}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotCommuting);
    }
}
