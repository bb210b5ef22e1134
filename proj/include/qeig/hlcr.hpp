#pragma once

#include <Eigen/Core>

#include "qeig/quaternion.hpp"

namespace qeig {

using Block2 = Eigen::Matrix2cd;

/**
 * Element Q + P R_i of the algebra generated by left quaternion
 * multiplications and the right multiplication R_i by i.
 *
 * The general element a + b.L + c R_i + d.L R_i is stored as
 * Q = a + (i,j,k).b and P = c + (i,j,k).d, so apply/compose reduce to
 * quaternion products.
 */
struct HlcrElement {
    Quaternion Q;  // left-acting part
    Quaternion P;  // coefficient of R_i

    constexpr HlcrElement() = default;
    constexpr HlcrElement(const Quaternion& q, const Quaternion& p = {}) : Q(q), P(p) {}

    /// The pure right action of i.
    static constexpr HlcrElement right_i() { return {Quaternion{}, Quaternion{1.0}}; }

    bool is_left_only() const { return P == Quaternion{}; }

    HlcrElement& operator+=(const HlcrElement& o) {
        Q += o.Q;
        P += o.P;
        return *this;
    }
    HlcrElement& operator-=(const HlcrElement& o) {
        Q -= o.Q;
        P -= o.P;
        return *this;
    }

    friend bool operator==(const HlcrElement&, const HlcrElement&) = default;
};

inline HlcrElement operator+(HlcrElement x, const HlcrElement& y) { return x += y; }
inline HlcrElement operator-(HlcrElement x, const HlcrElement& y) { return x -= y; }
inline HlcrElement operator*(double s, const HlcrElement& e) { return {s * e.Q, s * e.P}; }

/// Q x + P x i.
inline Quaternion apply(const HlcrElement& e, const Quaternion& x) {
    return e.Q * x + e.P * x * Quaternion::i();
}

/// Operator product e1 after e2, using R_i^2 = -1 and [L, R_i] = 0.
inline HlcrElement compose(const HlcrElement& e1, const HlcrElement& e2) {
    return {e1.Q * e2.Q - e1.P * e2.P, e1.Q * e2.P + e1.P * e2.Q};
}

inline HlcrElement operator*(const HlcrElement& e1, const HlcrElement& e2) { return compose(e1, e2); }

inline double max_abs_diff(const HlcrElement& x, const HlcrElement& y) {
    return std::max(max_abs_diff(x.Q, y.Q), max_abs_diff(x.P, y.P));
}

inline double norm(const HlcrElement& e) { return std::sqrt(norm_squared(e.Q) + norm_squared(e.P)); }

/// 2x2 complex block acting on (x, y) for the state x + j y.
inline Block2 to_block(const HlcrElement& e) {
    const Complex I(0.0, 1.0);
    const auto [zq, wq] = symplectic_split(e.Q);
    const auto [zp, wp] = symplectic_split(e.P);
    Block2 b;
    b << zq + I * zp, -std::conj(wq) - I * std::conj(wp),
         wq + I * wp, std::conj(zq) + I * std::conj(zp);
    return b;
}

inline Block2 to_block(const Quaternion& q) { return to_block(HlcrElement(q)); }

/// Exact inverse of to_block; every 2x2 complex matrix has a preimage.
inline HlcrElement from_block(const Block2& b) {
    const Complex two_i(0.0, 2.0);
    const Complex alpha = b(0, 0), beta = b(0, 1), gamma = b(1, 0), delta = b(1, 1);
    const Complex zq = (alpha + std::conj(delta)) / 2.0;
    const Complex zp = (alpha - std::conj(delta)) / two_i;
    const Complex wq = (gamma - std::conj(beta)) / 2.0;
    const Complex wp = (gamma + std::conj(beta)) / two_i;
    return {from_symplectic(zq, wq), from_symplectic(zp, wp)};
}

inline std::ostream& operator<<(std::ostream& os, const HlcrElement& e) {
    return os << "{Q: " << e.Q << ", P: " << e.P << '}';
}

}  // namespace qeig
