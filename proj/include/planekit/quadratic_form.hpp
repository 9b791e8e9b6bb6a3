#pragma once

#include <optional>

#include "planekit/linalg.hpp"

namespace planekit {

/// Positive or indefinite quadratic form on the plane, stored as the upper
/// triangle (p, q, r) of its Gram matrix [[p, q], [q, r]] so symmetry holds
/// by construction. Q(v) = v^T * gram * v.
template <class S>
class QuadraticForm {
public:
    QuadraticForm() : p_(S(1)), q_(S(0)), r_(S(1)) {}
    QuadraticForm(S p, S q, S r) : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)) {}

    static QuadraticForm standard() { return {S(1), S(0), S(1)}; }

    static QuadraticForm from_gram(const Mat2<S>& g,
                                   const S& tol = scalar_traits<S>::entry_tolerance()) {
        if (!near(g.b, g.c, tol))
            throw invalid_value("Gram matrix is not symmetric: " + to_string(g));
        return {g.a, S(S(g.b + g.c) / S(2)), g.d};
    }

    const S& p() const { return p_; }
    const S& q() const { return q_; }
    const S& r() const { return r_; }

    Mat2<S> gram() const { return {p_, q_, q_, r_}; }

    S evaluate(const Vec2<S>& v) const {
        return S(p_ * v.x * v.x + S(2) * q_ * v.x * v.y + r_ * v.y * v.y);
    }

    /// Symmetric bilinear companion <u, v> = u^T * gram * v.
    S bilinear(const Vec2<S>& u, const Vec2<S>& v) const {
        return S(p_ * u.x * v.x + q_ * S(u.x * v.y + u.y * v.x) + r_ * u.y * v.y);
    }

    /// The form v -> Q(m*v), whose Gram matrix is m^T * gram * m. Entries
    /// are evaluated column-wise so the result is symmetric bit for bit.
    QuadraticForm pulled_back(const Mat2<S>& m) const {
        Vec2<S> c0 = m.column(0);
        Vec2<S> c1 = m.column(1);
        return {evaluate(c0), bilinear(c0, c1), evaluate(c1)};
    }

    QuadraticForm negated() const { return {S(-p_), S(-q_), S(-r_)}; }

    QuadraticForm scaled(const S& k) const { return {S(k * p_), S(k * q_), S(k * r_)}; }

    bool operator==(const QuadraticForm&) const = default;

private:
    S p_, q_, r_;
};

/// Sylvester for 2x2: leading entry and determinant both positive.
template <class S>
bool is_positive_definite(const QuadraticForm<S>& q) {
    return q.p() > S(0) && S(q.p() * q.r() - q.q() * q.q()) > S(0);
}

/// Positive ratio k with rhs = k * lhs, if the two forms are proportional
/// within tol; nullopt otherwise (including nonpositive ratios).
template <class S>
std::optional<S> proportionality_ratio(const QuadraticForm<S>& lhs, const QuadraticForm<S>& rhs,
                                       const S& tol = scalar_traits<S>::entry_tolerance()) {
    const S* base = nullptr;
    const S* image = nullptr;
    if (scalar_abs(lhs.p()) > tol) {
        base = &lhs.p();
        image = &rhs.p();
    } else if (scalar_abs(lhs.q()) > tol) {
        base = &lhs.q();
        image = &rhs.q();
    } else if (scalar_abs(lhs.r()) > tol) {
        base = &lhs.r();
        image = &rhs.r();
    } else {
        return std::nullopt; // zero form
    }
    S k = S(*image / *base);
    if (k <= S(0)) return std::nullopt;
    QuadraticForm<S> scaled = lhs.scaled(k);
    if (!mat_near(scaled.gram(), rhs.gram(), tol)) return std::nullopt;
    return k;
}

} // namespace planekit
