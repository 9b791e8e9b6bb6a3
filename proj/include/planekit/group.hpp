#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "planekit/linalg.hpp"

namespace planekit {

/// Input description of a matrix group: explicit elements, generators to
/// close over, and a cap on the enumeration.
template <class S>
struct GroupSpec {
    std::vector<Mat2<S>> elements;
    std::vector<Mat2<S>> generators;
    std::size_t closure_limit = 4096;
};

namespace detail {

/// Set of matrices with tolerance-aware membership. Exact backends use
/// plain ordered lookup; the float backend scans the window of entries
/// whose leading coordinate lies within tol, which keeps near-duplicate
/// products of one group element collapsed.
template <class S>
class MatSet {
public:
    explicit MatSet(S tol) : tol_(std::move(tol)) {}

    bool contains(const Mat2<S>& m) const {
        if constexpr (scalar_traits<S>::is_exact) {
            return set_.count(m) > 0;
        } else {
            const double inf = std::numeric_limits<double>::infinity();
            Mat2<S> low{S(m.a - tol_), S(-inf), S(-inf), S(-inf)};
            for (auto it = set_.lower_bound(low); it != set_.end() && it->a <= m.a + tol_; ++it) {
                if (mat_near(*it, m, tol_)) return true;
            }
            return false;
        }
    }

    void insert(const Mat2<S>& m) { set_.insert(m); }

private:
    S tol_;
    std::set<Mat2<S>, MatLexLess<S>> set_;
};

} // namespace detail

/// Finite matrix set closed under product and inverse (complete = true), or
/// the breadth-first prefix of one that exceeded the enumeration cap
/// (complete = false). Always contains the identity; members are sorted in
/// row-major entry order.
template <class S>
struct GroupClosure {
    std::vector<Mat2<S>> members;
    bool complete = false;

    bool contains(const Mat2<S>& m, const S& tol = scalar_traits<S>::match_tolerance()) const {
        for (const auto& g : members) {
            if (mat_near(g, m, tol)) return true;
        }
        return false;
    }

    std::size_t size() const { return members.size(); }
};

/// Breadth-first closure of the spec's elements and generators under
/// product and inverse. Stops with complete = false once closure_limit
/// distinct members have been collected and more keep appearing.
template <class S>
GroupClosure<S> close_group(const GroupSpec<S>& spec,
                            const S& match_tol = scalar_traits<S>::match_tolerance()) {
    if (spec.elements.empty() && spec.generators.empty())
        throw parse_error("group spec: need at least one of 'elements' or 'generators'");

    std::vector<Mat2<S>> seeds;
    seeds.push_back(Mat2<S>::identity());
    seeds.insert(seeds.end(), spec.elements.begin(), spec.elements.end());
    seeds.insert(seeds.end(), spec.generators.begin(), spec.generators.end());
    for (const auto& m : seeds) {
        if (near(m.det(), S(0), match_tol))
            throw singular_generator("non-invertible group element " + to_string(m));
    }

    detail::MatSet<S> seen(match_tol);
    std::vector<Mat2<S>> members;
    bool overflow = false;

    auto try_insert = [&](const Mat2<S>& m) -> bool {
        if (seen.contains(m)) return false;
        if (members.size() >= spec.closure_limit) {
            overflow = true;
            return false;
        }
        seen.insert(m);
        members.push_back(m);
        return true;
    };

    for (const auto& m : seeds) {
        if (try_insert(m)) try_insert(m.inverse());
    }

    // Every ordered pair gets multiplied: when x is processed, both x*y and
    // y*x are formed against all members known so far, and later members
    // repeat the exchange from their side.
    for (std::size_t next = 0; next < members.size() && !overflow; ++next) {
        Mat2<S> m = members[next];
        for (std::size_t i = 0; i < members.size() && !overflow; ++i) {
            Mat2<S> left = m * members[i];
            if (try_insert(left)) try_insert(left.inverse());
            Mat2<S> right = members[i] * m;
            if (try_insert(right)) try_insert(right.inverse());
        }
    }

    GroupClosure<S> closure;
    closure.members = std::move(members);
    closure.complete = !overflow;
    std::sort(closure.members.begin(), closure.members.end(), MatLexLess<S>{});
    return closure;
}

enum class ScreenReason {
    none,
    det_not_unit,
    real_eigenvalue_not_unit,
    trace_bound_exceeded,
    nilpotent_traceless,
};

inline const char* screen_reason_name(ScreenReason r) {
    switch (r) {
        case ScreenReason::none: return "none";
        case ScreenReason::det_not_unit: return "determinant not in {+1, -1}";
        case ScreenReason::real_eigenvalue_not_unit: return "real eigenvalue not in {+1, -1}";
        case ScreenReason::trace_bound_exceeded: return "|trace| > 2 at determinant 1";
        case ScreenReason::nilpotent_traceless: return "nilpotent traceless part";
    }
    return "unknown";
}

template <class S>
struct ScreenReport {
    bool pass = true;
    ScreenReason reason = ScreenReason::none;
    Mat2<S> witness{};
    std::string detail;
};

/// Necessary conditions for membership in a bounded group, checked member
/// by member: determinant is a unit, real eigenvalues are units, det-1
/// members keep |trace| <= 2, and no det-1 member carries a nonzero
/// nilpotent traceless part (its powers 1 + n*j would grow linearly).
template <class S>
ScreenReport<S> boundedness_screen(const GroupClosure<S>& g,
                                   const S& tol = scalar_traits<S>::match_tolerance()) {
    auto reject = [](ScreenReason reason, const Mat2<S>& m, std::string detail) {
        return ScreenReport<S>{false, reason, m, std::move(detail)};
    };

    for (const auto& m : g.members) {
        S det = m.det();
        S tr = m.trace();
        bool det_one = near(det, S(1), tol);
        bool det_minus_one = near(det, S(-1), tol);
        if (!det_one && !det_minus_one)
            return reject(ScreenReason::det_not_unit, m,
                          "det = " + scalar_to_string(det) + " for member " + to_string(m));
        if (det_one) {
            S abs_tr = scalar_abs(tr);
            if (abs_tr > S(S(2) + tol)) {
                // Real eigenvalues exist; name one exactly when the
                // discriminant has a scalar square root.
                S disc = S(tr * tr - S(4) * det);
                if (auto root = scalar_sqrt(disc)) {
                    S lambda = S(S(tr + *root) / S(2));
                    return reject(ScreenReason::real_eigenvalue_not_unit, m,
                                  "eigenvalue " + scalar_to_string(lambda) + " of member " +
                                      to_string(m));
                }
                return reject(ScreenReason::trace_bound_exceeded, m,
                              "|tr| = " + scalar_to_string(abs_tr) + " for member " +
                                  to_string(m));
            }
            if (near(abs_tr, S(2), tol)) {
                TracelessDecomposition<S> dec = traceless_decompose(m);
                if (max_abs_entry(dec.j) > tol)
                    return reject(ScreenReason::nilpotent_traceless, m,
                                  "member " + to_string(m) + " is +/-(1 + j) with j nonzero, j^2 = 0");
            }
            // |tr| < 2: complex eigenvalue pair on the unit circle; fine.
        } else {
            // det = -1: eigenvalues are real with product -1, so both are
            // units exactly when the trace vanishes.
            if (!near(tr, S(0), tol)) {
                S disc = S(tr * tr + S(4));
                std::string detail;
                if (auto root = scalar_sqrt(disc)) {
                    detail = "eigenvalue " + scalar_to_string(S(S(tr + *root) / S(2))) +
                             " of member " + to_string(m);
                } else {
                    detail = "eigenvalues (tr +/- sqrt(tr^2 + 4))/2 ~ " +
                             scalar_to_string((to_double(tr) + std::sqrt(to_double(disc))) / 2) +
                             " of member " + to_string(m);
                }
                return reject(ScreenReason::real_eigenvalue_not_unit, m, std::move(detail));
            }
        }
    }
    return {};
}

/// Two vectors have the same length exactly when some member of the group
/// maps one to the other.
template <class S>
bool same_length(const Vec2<S>& u, const Vec2<S>& v, const GroupClosure<S>& g,
                 const S& tol = scalar_traits<S>::match_tolerance()) {
    if (!g.complete)
        throw incomplete_closure("same_length needs a complete closure");
    for (const auto& m : g.members) {
        if (vec_near(m * u, v, tol)) return true;
    }
    return false;
}

namespace detail {

template <class S>
bool is_scalar_member(const Mat2<S>& m, const S& tol) {
    return near(m.b, S(0), tol) && near(m.c, S(0), tol) && near(m.a, m.d, tol);
}

/// A kernel vector of (m - lambda*I), scaled so its first nonzero
/// coordinate is 1.
template <class S>
std::optional<Vec2<S>> eigen_direction(const Mat2<S>& m, const S& lambda, const S& tol) {
    Vec2<S> v{m.b, S(lambda - m.a)};
    if (scalar_abs(v.x) <= tol && scalar_abs(v.y) <= tol) v = {S(lambda - m.d), m.c};
    if (scalar_abs(v.x) <= tol && scalar_abs(v.y) <= tol) return std::nullopt;
    S lead = scalar_abs(v.x) > tol ? v.x : v.y;
    return Vec2<S>{S(v.x / lead), S(v.y / lead)};
}

} // namespace detail

/// True when the members share no real eigenvector. Intended for closures
/// that already passed the boundedness screen (real eigenvalues are then
/// +/-1, so candidate directions are representable in both backends).
template <class S>
bool is_irreducible(const GroupClosure<S>& g,
                    const S& tol = scalar_traits<S>::match_tolerance()) {
    const Mat2<S>* probe = nullptr;
    for (const auto& m : g.members) {
        if (detail::is_scalar_member(m, tol)) continue;
        S disc = S(m.trace() * m.trace() - S(4) * m.det());
        if (disc < S(-tol)) return true; // complex eigenvalues: no real eigenvector at all
        if (!probe) probe = &m;
    }
    if (!probe) return false; // every member scalar: any direction is common

    std::vector<Vec2<S>> candidates;
    for (const S& lambda : {S(1), S(-1)}) {
        if (auto dir = detail::eigen_direction(*probe, lambda, tol)) candidates.push_back(*dir);
    }
    WedgeForm<S> cross;
    for (const auto& dir : candidates) {
        bool common = true;
        for (const auto& m : g.members) {
            if (scalar_abs(cross(m * dir, dir)) > tol) {
                common = false;
                break;
            }
        }
        if (common) return false;
    }
    return true;
}

} // namespace planekit
