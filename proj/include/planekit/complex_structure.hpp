#pragma once

#include <cmath>

#include "planekit/quadratic_form.hpp"

namespace planekit {

/// Operator j with j*j = -I, canonically attached to a positive-definite
/// form and a wedge orientation. Determined by them up to sign; the sign
/// recorded here follows the sign of the wedge constant.
template <class S>
struct ComplexStructure {
    Mat2<S> j{};
    int orientation = 1;
};

/// Solves <u, v> = (J0 u) /\ v for J0 (closed form J0 = E * gram / c with
/// E the unit antisymmetric matrix), then rescales by the square root of
/// det(gram)/c^2 so the result squares to -I. Rational inputs whose
/// normalizer is irrational raise rather than silently convert; callers
/// may switch to the float backend.
template <class S>
ComplexStructure<S> derive_j(const QuadraticForm<S>& q, const WedgeForm<S>& w) {
    if (!is_positive_definite(q))
        throw not_positive_definite("complex structure needs a positive-definite form");

    const S& c = w.constant();
    Mat2<S> gram = q.gram();
    Mat2<S> j0{S(gram.c / c), S(gram.d / c), S(-gram.a / c), S(-gram.b / c)};

    // j0^2 = -det(j0) * I with det(j0) = det(gram)/c^2 > 0.
    S det_j0 = j0.det();
    auto scale = scalar_sqrt(det_j0);
    if (!scale)
        throw irrational_normalizer("sqrt(det(gram))/|c| = sqrt(" + scalar_to_string(det_j0) +
                                    ") is not representable; use the float backend");

    ComplexStructure<S> cs;
    cs.j = S(S(1) / *scale) * j0;
    cs.orientation = c > S(0) ? 1 : -1;

    Mat2<S> certificate = cs.j * cs.j + Mat2<S>::identity();
    if (max_abs_entry(certificate) > scalar_traits<S>::entry_tolerance())
        throw error("complex structure certificate failed: j^2 != -1");
    return cs;
}

/// cos(theta)*v + sin(theta)*(j v): the rotation by theta of the plane the
/// pair (Q, j) turns into a complex line. Float backend only.
inline Vec2<double> rotate(const Vec2<double>& v, double theta,
                           const ComplexStructure<double>& cs) {
    Vec2<double> jv = cs.j * v;
    return {std::cos(theta) * v.x + std::sin(theta) * jv.x,
            std::cos(theta) * v.y + std::sin(theta) * jv.y};
}

} // namespace planekit
