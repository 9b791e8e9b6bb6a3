#pragma once

#include <algorithm>
#include <string>

#include "planekit/errors.hpp"
#include "planekit/scalar.hpp"

namespace planekit {

template <class S>
struct Vec2 {
    S x{};
    S y{};

    friend Vec2 operator+(const Vec2& u, const Vec2& v) { return {S(u.x + v.x), S(u.y + v.y)}; }
    friend Vec2 operator-(const Vec2& u, const Vec2& v) { return {S(u.x - v.x), S(u.y - v.y)}; }
    Vec2 operator-() const { return {S(-x), S(-y)}; }
    friend Vec2 operator*(const S& k, const Vec2& v) { return {S(k * v.x), S(k * v.y)}; }
    bool operator==(const Vec2&) const = default;
};

template <class S>
bool vec_near(const Vec2<S>& u, const Vec2<S>& v, const S& tol) {
    return near(u.x, v.x, tol) && near(u.y, v.y, tol);
}

template <class S>
bool lex_less(const Vec2<S>& u, const Vec2<S>& v) {
    if (u.x != v.x) return u.x < v.x;
    return u.y < v.y;
}

/// 2x2 matrix, row-major [[a, b], [c, d]].
template <class S>
struct Mat2 {
    S a{};
    S b{};
    S c{};
    S d{};

    static Mat2 identity() { return {S(1), S(0), S(0), S(1)}; }
    static Mat2 zero() { return {S(0), S(0), S(0), S(0)}; }
    static Mat2 diagonal(const S& p, const S& q) { return {p, S(0), S(0), q}; }

    Vec2<S> operator*(const Vec2<S>& v) const {
        return {S(a * v.x + b * v.y), S(c * v.x + d * v.y)};
    }

    Mat2 operator*(const Mat2& m) const {
        return {S(a * m.a + b * m.c), S(a * m.b + b * m.d),
                S(c * m.a + d * m.c), S(c * m.b + d * m.d)};
    }

    friend Mat2 operator+(const Mat2& m, const Mat2& n) {
        return {S(m.a + n.a), S(m.b + n.b), S(m.c + n.c), S(m.d + n.d)};
    }

    friend Mat2 operator-(const Mat2& m, const Mat2& n) {
        return {S(m.a - n.a), S(m.b - n.b), S(m.c - n.c), S(m.d - n.d)};
    }

    Mat2 operator-() const { return {S(-a), S(-b), S(-c), S(-d)}; }

    friend Mat2 operator*(const S& k, const Mat2& m) {
        return {S(k * m.a), S(k * m.b), S(k * m.c), S(k * m.d)};
    }

    Mat2 transposed() const { return {a, c, b, d}; }
    S trace() const { return S(a + d); }
    S det() const { return S(a * d - b * c); }

    Mat2 inverse() const {
        S dv = det();
        if (dv == S(0)) throw singular_matrix("matrix has zero determinant");
        S inv = S(S(1) / dv);
        return {S(d * inv), S(-b * inv), S(-c * inv), S(a * inv)};
    }

    Vec2<S> column(int i) const { return i == 0 ? Vec2<S>{a, c} : Vec2<S>{b, d}; }

    bool operator==(const Mat2&) const = default;
};

/// Row-major entry order; this is also the serialization order, so sorting
/// by it gives reproducible member enumeration.
template <class S>
bool lex_less(const Mat2<S>& m, const Mat2<S>& n) {
    if (m.a != n.a) return m.a < n.a;
    if (m.b != n.b) return m.b < n.b;
    if (m.c != n.c) return m.c < n.c;
    return m.d < n.d;
}

template <class S>
struct MatLexLess {
    bool operator()(const Mat2<S>& m, const Mat2<S>& n) const { return lex_less(m, n); }
};

template <class S>
S max_abs_entry(const Mat2<S>& m) {
    S r = scalar_abs(m.a);
    r = std::max(r, scalar_abs(m.b));
    r = std::max(r, scalar_abs(m.c));
    r = std::max(r, scalar_abs(m.d));
    return r;
}

template <class S>
S max_abs_diff(const Mat2<S>& m, const Mat2<S>& n) {
    return max_abs_entry(Mat2<S>(m - n));
}

template <class S>
bool mat_near(const Mat2<S>& m, const Mat2<S>& n, const S& tol) {
    return max_abs_diff(m, n) <= tol;
}

template <class S>
std::string to_string(const Vec2<S>& v) {
    return "(" + scalar_to_string(v.x) + ", " + scalar_to_string(v.y) + ")";
}

template <class S>
std::string to_string(const Mat2<S>& m) {
    return "[[" + scalar_to_string(m.a) + ", " + scalar_to_string(m.b) + "], [" +
           scalar_to_string(m.c) + ", " + scalar_to_string(m.d) + "]]";
}

/// Coefficients of x^2 - trace*x + det.
template <class S>
struct CharPoly {
    S trace{};
    S det{};
};

template <class S>
CharPoly<S> char_poly(const Mat2<S>& m) {
    return {m.trace(), m.det()};
}

/// m^2 - tr(m)*m + det(m)*I; the zero matrix for every 2x2 input.
template <class S>
Mat2<S> cayley_hamilton_residual(const Mat2<S>& m) {
    CharPoly<S> cp = char_poly(m);
    return m * m - cp.trace * m + cp.det * Mat2<S>::identity();
}

/// The (up to scale unique) antisymmetric bilinear form on the plane:
/// wedge(u, v) = c * (u.x * v.y - u.y * v.x).
template <class S>
class WedgeForm {
public:
    explicit WedgeForm(S c = S(1)) : c_(std::move(c)) {
        if (c_ == S(0)) throw invalid_value("wedge normalization constant must be nonzero");
    }

    const S& constant() const { return c_; }

    S operator()(const Vec2<S>& u, const Vec2<S>& v) const {
        return S(c_ * S(u.x * v.y - u.y * v.x));
    }

private:
    S c_;
};

/// m = tau*I + j with tr(j) = 0. By Cayley-Hamilton j*j = j_square * I with
/// j_square = tau^2 - det(m) = -det(j).
template <class S>
struct TracelessDecomposition {
    S tau{};
    Mat2<S> j{};
    S j_square{};

    /// j_square vanishes but j itself does not: the shear-like case a
    /// bounded group cannot contain (except as zero).
    bool is_nilpotent(const S& tol = scalar_traits<S>::entry_tolerance()) const {
        return near(j_square, S(0), tol) && max_abs_entry(j) > tol;
    }
};

template <class S>
TracelessDecomposition<S> traceless_decompose(const Mat2<S>& m) {
    S tau = S(m.trace() / S(2));
    Mat2<S> j = m - tau * Mat2<S>::identity();
    S j_square = S(tau * tau - m.det());
    // Certify j*j = j_square*I; exact rationally, rounding-level for floats.
    Mat2<S> residual = j * j - j_square * Mat2<S>::identity();
    if (max_abs_entry(residual) > scalar_traits<S>::entry_tolerance())
        throw error("traceless decomposition certificate failed for " + to_string(m));
    return {std::move(tau), std::move(j), std::move(j_square)};
}

/// Signature-(+, +, -) inner product (1/2)tr(a*b) on traceless operators.
template <class S>
S traceless_inner(const Mat2<S>& a, const Mat2<S>& b,
                  const S& tol = scalar_traits<S>::entry_tolerance()) {
    if (!near(a.trace(), S(0), tol))
        throw not_traceless("left operand has trace " + scalar_to_string(a.trace()));
    if (!near(b.trace(), S(0), tol))
        throw not_traceless("right operand has trace " + scalar_to_string(b.trace()));
    return S((a * b).trace() / S(2));
}

} // namespace planekit
