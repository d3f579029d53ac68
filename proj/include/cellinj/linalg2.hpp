#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>

#include "cellinj/errors.hpp"

namespace cellinj {

/// Default absolute threshold on |det| below which a 2x2 matrix is treated as singular.
inline constexpr double kDefaultSingularEps = 1e-12;

/// Column vector [e1; e2]. The unit depends on the frame the value lives in.
struct Vec2 {
    double e1 = 0.0;
    double e2 = 0.0;

    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

/// Row-major 2x2 matrix [[a11, a12], [a21, a22]].
struct Mat2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a21 = 0.0;
    double a22 = 0.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 diagonal(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

    friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.e1 + b.e1, a.e2 + b.e2}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.e1 - b.e1, a.e2 - b.e2}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.e1, -a.e2}; }
constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.e1, s * v.e2}; }

constexpr Vec2 mat_vec_mul(const Mat2& m, Vec2 v) {
    return {m.a11 * v.e1 + m.a12 * v.e2, m.a21 * v.e1 + m.a22 * v.e2};
}

constexpr Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

constexpr Vec2 operator*(const Mat2& m, Vec2 v) { return mat_vec_mul(m, v); }
constexpr Mat2 operator*(const Mat2& a, const Mat2& b) { return mat_mul(a, b); }

constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}

constexpr double determinant(const Mat2& m) { return m.a11 * m.a22 - m.a12 * m.a21; }

/// Closed-form inverse adj(m)/det(m). Throws SingularError when |det(m)| < eps.
inline Mat2 inverse2(const Mat2& m, double eps = kDefaultSingularEps) {
    if (!(eps > 0.0)) throw DomainError("inverse2: eps must be positive");
    const double det = determinant(m);
    if (!(std::abs(det) >= eps)) throw SingularError(det);
    const double inv = 1.0 / det;
    return {m.a22 * inv, -m.a12 * inv, -m.a21 * inv, m.a11 * inv};
}

inline double norm_inf(Vec2 v) { return std::max(std::abs(v.e1), std::abs(v.e2)); }

/// Maximum absolute row sum.
inline double norm_inf(const Mat2& m) {
    return std::max(std::abs(m.a11) + std::abs(m.a12), std::abs(m.a21) + std::abs(m.a22));
}

/// Largest absolute entry; used for elementwise comparisons.
inline double max_abs(const Mat2& m) {
    return std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
}

inline bool is_finite(Vec2 v) { return std::isfinite(v.e1) && std::isfinite(v.e2); }
inline bool is_finite(const Mat2& m) {
    return std::isfinite(m.a11) && std::isfinite(m.a12) && std::isfinite(m.a21) && std::isfinite(m.a22);
}

inline std::ostream& operator<<(std::ostream& os, Vec2 v) {
    return os << '(' << v.e1 << ", " << v.e2 << ')';
}

inline std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << "[[" << m.a11 << ", " << m.a12 << "], [" << m.a21 << ", " << m.a22 << "]]";
}

}  // namespace cellinj
