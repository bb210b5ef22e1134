// Right and left spectra of a small quaternionic matrix.
#include <iostream>

#include "qeig/qeig.hpp"

int main() {
    using namespace qeig;
    const Quaternion i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
    const QuatMatrix M{{i, j}, {k, i}};

    const RightEigResult right = right_spectrum_quaternionic(M);
    std::cout << "right spectrum (positive imaginary parts):\n";
    for (std::size_t l = 0; l < right.reduced_spectrum.size(); ++l) {
        std::cout << "  lambda = " << right.reduced_spectrum[l] << "  psi = (";
        for (std::size_t r = 0; r < right.eigenvectors[l].size(); ++r)
            std::cout << (r ? ", " : "") << right.eigenvectors[l][r];
        std::cout << ")  residual " << right.residuals[l] << '\n';
    }

    const QuatDiagonalization d = diagonalize_quaternionic(M);
    std::cout << "|S M S^-1 - D| = " << d.residual << '\n';

    const LeftEigResult left = left_eig_2x2(M);
    std::cout << "left eigenvalues:\n";
    for (const auto& s : left.solutions)
        std::cout << "  q = " << s.q << "  psi2 = " << s.psi[1] << "  residual " << s.residual << '\n';
}
