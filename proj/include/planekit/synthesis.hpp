#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "planekit/group.hpp"
#include "planekit/quadratic_form.hpp"

namespace planekit {

enum class SynthMethod { averaging, contraction, algebraic };

inline const char* synth_method_name(SynthMethod m) {
    switch (m) {
        case SynthMethod::averaging: return "averaging";
        case SynthMethod::contraction: return "contraction";
        case SynthMethod::algebraic: return "algebraic";
    }
    return "unknown";
}

/// Certificate attached to every synthesized form: how it was produced,
/// how many update steps ran, the worst measured per-step orbit-diameter
/// ratio (contraction runs only), and the invariance residual of the
/// output.
template <class S>
struct SynthesisReport {
    SynthMethod method = SynthMethod::averaging;
    std::size_t iterations = 0;
    std::optional<double> contraction_ratio;
    S residual{};
};

/// max over members m of the max-abs entry norm of m^T*gram*m - gram.
/// Zero exactly when the form is invariant under every member.
template <class S>
S invariance_residual(const QuadraticForm<S>& q, const GroupClosure<S>& g) {
    S worst(0);
    Mat2<S> gram = q.gram();
    for (const auto& m : g.members) {
        worst = std::max(worst, max_abs_diff(q.pulled_back(m).gram(), gram));
    }
    return worst;
}

template <class S>
using SynthesisResult = std::pair<QuadraticForm<S>, SynthesisReport<S>>;

/// Uniform average of q0 over the whole group: the Haar integral of
/// v -> Q0(g v), which a finite closure realizes as a finite sum. The
/// output Gram is (1/|G|) * sum over members of m^T * gram0 * m.
template <class S>
SynthesisResult<S> synth_averaging(const GroupClosure<S>& g, const QuadraticForm<S>& q0) {
    if (!g.complete)
        throw incomplete_closure("averaging needs a complete closure; use contraction for "
                                 "sampled groups");
    if (!is_positive_definite(q0))
        throw not_positive_definite("averaging seed form is not positive-definite");

    S p(0), q(0), r(0);
    for (const auto& m : g.members) {
        QuadraticForm<S> moved = q0.pulled_back(m);
        p = S(p + moved.p());
        q = S(q + moved.q());
        r = S(r + moved.r());
    }
    S count(static_cast<long long>(g.members.size()));
    QuadraticForm<S> result{S(p / count), S(q / count), S(r / count)};

    SynthesisReport<S> report;
    report.method = SynthMethod::averaging;
    report.iterations = 1;
    report.residual = invariance_residual(result, g);
    return {result, report};
}

namespace detail {

template <class S>
std::vector<Mat2<S>> dedup_probes(const GroupSpec<S>& spec, const S& tol) {
    detail::MatSet<S> seen(tol);
    std::vector<Mat2<S>> probes;
    auto add = [&](const Mat2<S>& m) {
        if (!seen.contains(m)) {
            seen.insert(m);
            probes.push_back(m);
        }
    };
    for (const auto& m : spec.generators) {
        add(m);
        add(m.inverse());
    }
    for (const auto& m : spec.elements) {
        add(m);
        add(m.inverse());
    }
    return probes;
}

template <class S>
double orbit_diameter(const std::vector<QuadraticForm<S>>& orbit) {
    double diam = 0;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        for (std::size_t j = i + 1; j < orbit.size(); ++j) {
            diam = std::max(diam, to_double(max_abs_diff(orbit[i].gram(), orbit[j].gram())));
        }
    }
    return diam;
}

} // namespace detail

/// Nested-averaging route: repeatedly replace the form by the barycenter of
/// its orbit under a fixed working set of group elements, shrinking the
/// orbit's convex hull each step until the generators no longer move it.
///
/// When the spec's closure completes within its limit the working set is
/// the whole group, so a single step lands on the exact Haar average (and
/// tol = 0 is attainable in the rational backend). Sampled closures of
/// infinite groups iterate over generators and their inverses instead and
/// converge geometrically; the report carries the measured per-step
/// diameter ratio (worst case over steps), the empirical analogue of the
/// covering-number contraction factor.
template <class S>
SynthesisResult<S> synth_contraction(const GroupSpec<S>& spec, const QuadraticForm<S>& q0,
                                     const S& tol, std::size_t max_iter,
                                     const S& match_tol = scalar_traits<S>::match_tolerance()) {
    GroupClosure<S> closure = close_group(spec, match_tol);
    ScreenReport<S> screen = boundedness_screen(closure, match_tol);
    if (!screen.pass) throw screen_failed(screen_reason_name(screen.reason));
    if (!is_positive_definite(q0))
        throw not_positive_definite("contraction seed form is not positive-definite");

    std::vector<Mat2<S>> probes = detail::dedup_probes(spec, match_tol);
    std::vector<Mat2<S>> working;
    if (closure.complete) {
        working = closure.members;
    } else {
        working.push_back(Mat2<S>::identity());
        working.insert(working.end(), probes.begin(), probes.end());
    }

    auto residual_over_probes = [&](const QuadraticForm<S>& q) {
        S worst(0);
        Mat2<S> gram = q.gram();
        for (const auto& m : probes) {
            worst = std::max(worst, max_abs_diff(q.pulled_back(m).gram(), gram));
        }
        return worst;
    };

    auto make_orbit = [&](const QuadraticForm<S>& q) {
        std::vector<QuadraticForm<S>> orbit;
        orbit.reserve(working.size());
        for (const auto& m : working) orbit.push_back(q.pulled_back(m));
        return orbit;
    };
    auto barycenter = [](const std::vector<QuadraticForm<S>>& orbit) {
        S p(0), q(0), r(0);
        for (const auto& form : orbit) {
            p = S(p + form.p());
            q = S(q + form.q());
            r = S(r + form.r());
        }
        S count(static_cast<long long>(orbit.size()));
        return QuadraticForm<S>{S(p / count), S(q / count), S(r / count)};
    };

    QuadraticForm<S> current = q0;
    SynthesisReport<S> report;
    report.method = SynthMethod::contraction;

    std::vector<QuadraticForm<S>> orbit = make_orbit(current);
    double diameter = detail::orbit_diameter(orbit);
    for (std::size_t iter = 0;; ++iter) {
        S residual = residual_over_probes(current);
        if (residual <= tol) {
            report.iterations = iter;
            report.residual = residual;
            break;
        }
        if (iter >= max_iter) throw no_convergence(iter, to_double(residual));

        current = barycenter(orbit);
        orbit = make_orbit(current);
        double next_diameter = detail::orbit_diameter(orbit);
        if (diameter > 0) {
            report.contraction_ratio = std::max(report.contraction_ratio.value_or(0.0),
                                                next_diameter / diameter);
        }
        diameter = next_diameter;
    }

    if (!is_positive_definite(current))
        throw not_positive_definite("contraction output lost positive-definiteness");
    return {current, report};
}

namespace detail {

/// First nonzero of v + A*v (eigenvalue +1, sign = +1) or v - A*v
/// (eigenvalue -1, sign = -1) over the basis probes, scaled so the leading
/// coordinate is 1 for reproducibility.
template <class S>
Vec2<S> involution_eigenvector(const Mat2<S>& a, int sign, const S& tol) {
    for (const Vec2<S>& v : {Vec2<S>{S(1), S(0)}, Vec2<S>{S(0), S(1)}}) {
        Vec2<S> image = a * v;
        Vec2<S> candidate = sign > 0 ? v + image : v - image;
        if (scalar_abs(candidate.x) > tol || scalar_abs(candidate.y) > tol) {
            S lead = scalar_abs(candidate.x) > tol ? candidate.x : candidate.y;
            return {S(candidate.x / lead), S(candidate.y / lead)};
        }
    }
    throw error("involution eigenvector probe failed for " + to_string(a));
}

} // namespace detail

/// Purely algebraic route. Main path: pick the first (in sorted member
/// order) non-scalar member A of determinant 1, split off its traceless
/// part J (J^2 < 0 once the screen passed), and read the Gram matrix off
/// B(u, v) = (J u) /\ v, flipping the sign if that produced the negative-
/// definite companion. Degenerate path (every det-1 member scalar): an
/// involution of determinant -1, if present, contributes its eigenbasis and
/// the output is the form with identity Gram in that basis; otherwise the
/// group is {1} or {+/-1} and the standard form is returned.
template <class S>
SynthesisResult<S> synth_algebraic(const GroupClosure<S>& g, const WedgeForm<S>& w,
                                   const S& match_tol = scalar_traits<S>::match_tolerance()) {
    if (!g.complete) throw incomplete_closure("algebraic synthesis needs a complete closure");
    ScreenReport<S> screen = boundedness_screen(g, match_tol);
    if (!screen.pass) throw screen_failed(screen_reason_name(screen.reason));

    const S& wc = w.constant();
    QuadraticForm<S> result = QuadraticForm<S>::standard();

    const Mat2<S>* pivot = nullptr;
    for (const auto& m : g.members) {
        if (near(m.det(), S(1), match_tol) && !detail::is_scalar_member(m, match_tol)) {
            pivot = &m;
            break;
        }
    }

    if (pivot) {
        TracelessDecomposition<S> dec = traceless_decompose(*pivot);
        const Mat2<S>& j = dec.j;
        // Gram of B(u, v) = (J u) /\ v on the standard basis.
        result = QuadraticForm<S>{S(-wc * j.c), S(wc * j.a), S(wc * j.b)};
        if (!is_positive_definite(result)) {
            result = result.negated();
            if (!is_positive_definite(result))
                throw error("algebraic synthesis produced an indefinite form from member " +
                            to_string(*pivot));
        }
    } else {
        const Mat2<S>* reflector = nullptr;
        for (const auto& m : g.members) {
            if (near(m.det(), S(-1), match_tol)) {
                reflector = &m;
                break;
            }
        }
        if (reflector) {
            // det -1 plus the screen force A^2 = 1; identity Gram in A's
            // eigenbasis transported back to standard coordinates.
            Vec2<S> plus = detail::involution_eigenvector(*reflector, 1, match_tol);
            Vec2<S> minus = detail::involution_eigenvector(*reflector, -1, match_tol);
            Mat2<S> basis{plus.x, minus.x, plus.y, minus.y};
            Mat2<S> inv = basis.inverse();
            Mat2<S> gram = inv.transposed() * inv;
            result = QuadraticForm<S>::from_gram(gram);
        }
        // else: members are scalars only; the standard form already works.
    }

    SynthesisReport<S> report;
    report.method = SynthMethod::algebraic;
    report.iterations = 0;
    report.residual = invariance_residual(result, g);
    return {result, report};
}

} // namespace planekit
