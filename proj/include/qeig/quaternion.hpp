#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <ostream>
#include <utility>

#include "qeig/error.hpp"

namespace qeig {

using Complex = std::complex<double>;

/// Real quaternion a + ib + jc + kd.
struct Quaternion {
    double a = 0.0;  // scalar part
    double b = 0.0;  // coefficient of i
    double c = 0.0;  // coefficient of j
    double d = 0.0;  // coefficient of k

    constexpr Quaternion() = default;
    constexpr Quaternion(double a_, double b_ = 0.0, double c_ = 0.0, double d_ = 0.0)
        : a(a_), b(b_), c(c_), d(d_) {}
    // Implicit on purpose: complex scalars embed as a + ib.
    constexpr Quaternion(const Complex& z) : a(z.real()), b(z.imag()) {}

    static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
    static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
    static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

    constexpr double real() const { return a; }
    constexpr std::array<double, 3> imag() const { return {b, c, d}; }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        a += o.a; b += o.b; c += o.c; d += o.d;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        a -= o.a; b -= o.b; c -= o.c; d -= o.d;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        a *= s; b *= s; c *= s; d *= s;
        return *this;
    }
    constexpr Quaternion& operator/=(double s) {
        a /= s; b /= s; c /= s; d /= s;
        return *this;
    }

    friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
constexpr Quaternion operator-(const Quaternion& q) { return {-q.a, -q.b, -q.c, -q.d}; }
constexpr Quaternion operator*(Quaternion q, double s) { return q *= s; }
constexpr Quaternion operator*(double s, Quaternion q) { return q *= s; }
constexpr Quaternion operator/(Quaternion q, double s) { return q /= s; }

/// Hamilton product.
constexpr Quaternion mul(const Quaternion& p, const Quaternion& q) {
    return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
            p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
            p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
            p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) { return mul(p, q); }

constexpr Quaternion conjugate(const Quaternion& q) { return {q.a, -q.b, -q.c, -q.d}; }

constexpr double norm_squared(const Quaternion& q) {
    return q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d;
}

inline double norm(const Quaternion& q) { return std::sqrt(norm_squared(q)); }

inline double imag_norm(const Quaternion& q) { return std::sqrt(q.b * q.b + q.c * q.c + q.d * q.d); }

/// conj(q) / |q|^2; throws ZeroQuaternion for q = 0.
inline Quaternion inverse(const Quaternion& q) {
    const double n2 = norm_squared(q);
    if (n2 == 0.0) throw Error(ErrorCode::ZeroQuaternion, "inverse of the zero quaternion");
    return conjugate(q) / n2;
}

/// Largest absolute component difference.
inline double max_abs_diff(const Quaternion& p, const Quaternion& q) {
    return std::max({std::abs(p.a - q.a), std::abs(p.b - q.b), std::abs(p.c - q.c),
                     std::abs(p.d - q.d)});
}

/// q = z + j w with z = a + ib and w = c - id.
inline std::pair<Complex, Complex> symplectic_split(const Quaternion& q) {
    return {Complex(q.a, q.b), Complex(q.c, -q.d)};
}

/// Inverse of symplectic_split.
constexpr Quaternion from_symplectic(const Complex& z, const Complex& w) {
    return {z.real(), z.imag(), w.real(), -w.imag()};
}

/// Complex part z of the symplectic split, i.e. (q - i q i) / 2.
inline Complex complex_projection(const Quaternion& q) { return {q.a, q.b}; }

/// Quaternion of unit norm, checked at construction.
class UnitQuaternion {
public:
    static constexpr double kTolerance = 1e-12;

    explicit UnitQuaternion(const Quaternion& u) : u_(u) {
        if (std::abs(norm(u) - 1.0) > kTolerance)
            throw Error(ErrorCode::NotUnit, "quaternion does not have unit norm");
    }

    /// Scales a nonzero quaternion onto the unit sphere.
    static UnitQuaternion normalized(const Quaternion& q) {
        const double n = norm(q);
        if (n == 0.0) throw Error(ErrorCode::ZeroQuaternion, "cannot normalize the zero quaternion");
        return UnitQuaternion(q / n);
    }

    const Quaternion& value() const { return u_; }
    operator const Quaternion&() const { return u_; }

private:
    Quaternion u_;
};

inline constexpr double kDefaultEigenclassTol = 1e-9;

/// Same real part and same norm: q = conj(u) p u for some unit u.
inline bool same_eigenclass(const Quaternion& q, const Quaternion& p,
                            double tol = kDefaultEigenclassTol) {
    return std::abs(q.a - p.a) <= tol && std::abs(norm(q) - norm(p)) <= tol;
}

/**
 * Unit quaternion u with conj(u) * p * u = q.
 *
 * Uses the half-angle form u ~ 1 + cos(theta) + (q_vec x p_vec) on the unit
 * imaginary directions. When q_vec = p_vec the identity is returned. When
 * q_vec = -p_vec every unit imaginary u orthogonal to q_vec works; the axis is
 * the normalized projection of x (or y, when x is parallel to q_vec) onto the
 * plane orthogonal to q_vec. A zero imaginary part also yields the identity.
 */
inline UnitQuaternion conjugating_unit(const Quaternion& q, const Quaternion& p,
                                       double tol = kDefaultEigenclassTol) {
    if (!same_eigenclass(q, p, tol))
        throw Error(ErrorCode::NotSameEigenclass, "quaternions belong to different eigenclasses");

    const double qn = imag_norm(q);
    const double pn = imag_norm(p);
    if (qn <= tol || pn <= tol) return UnitQuaternion(Quaternion(1.0));

    const std::array<double, 3> qv{q.b / qn, q.c / qn, q.d / qn};
    const std::array<double, 3> pv{p.b / pn, p.c / pn, p.d / pn};
    const double cos_theta = qv[0] * pv[0] + qv[1] * pv[1] + qv[2] * pv[2];

    if (1.0 + cos_theta <= 1e-12) {
        std::array<double, 3> ref{1.0, 0.0, 0.0};
        if (std::hypot(qv[1], qv[2]) < 1e-3) ref = {0.0, 1.0, 0.0};
        const double along = ref[0] * qv[0] + ref[1] * qv[1] + ref[2] * qv[2];
        std::array<double, 3> axis{ref[0] - along * qv[0], ref[1] - along * qv[1],
                                   ref[2] - along * qv[2]};
        const double an = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
        return UnitQuaternion(Quaternion(0.0, axis[0] / an, axis[1] / an, axis[2] / an));
    }

    const Quaternion u(1.0 + cos_theta, qv[1] * pv[2] - qv[2] * pv[1],
                       qv[2] * pv[0] - qv[0] * pv[2], qv[0] * pv[1] - qv[1] * pv[0]);
    return UnitQuaternion::normalized(u);
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '[' << q.a << ", " << q.b << ", " << q.c << ", " << q.d << ']';
}

}  // namespace qeig
