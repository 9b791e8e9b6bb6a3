#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "planekit/group.hpp"
#include "planekit/linalg.hpp"

namespace planekit {

template <class S>
struct Point {
    Vec2<S> coords{};
    bool operator==(const Point&) const = default;
};

template <class S>
bool point_near(const Point<S>& a, const Point<S>& b, const S& tol) {
    return vec_near(a.coords, b.coords, tol);
}

/// The coordinate maps x -> offset + sign*x. This family is exactly the
/// set of recoordinatizations the geometry is required to survive.
template <class S>
struct Chart {
    Vec2<S> offset{};
    int sign = 1;

    Point<S> apply(const Point<S>& p) const {
        Vec2<S> image = sign >= 0 ? offset + p.coords : offset - p.coords;
        return {image};
    }
};

template <class S>
Point<S> middle(const Point<S>& a, const Point<S>& b) {
    return {{S(S(a.coords.x + b.coords.x) / S(2)), S(S(a.coords.y + b.coords.y) / S(2))}};
}

/// Sequence of n+1 points in which every interior point is the middle of
/// its neighbors; equivalently, an arithmetic progression of points.
template <class S>
struct Ruler {
    std::vector<Point<S>> points;
};

/// The unique ruler (c_0 .. c_n) with c_k = a and c_l = b:
/// c_i = b + (i - l)/(k - l) * (a - b). Coincident endpoints give the
/// constant ruler, which satisfies the recurrence trivially.
template <class S>
Ruler<S> ruler_between(const Point<S>& a, const Point<S>& b, long long k, long long l,
                       long long n) {
    if (n < 2) throw bad_indices("ruler needs n >= 2, got n = " + std::to_string(n));
    if (!(n >= k && k > l && l >= 0))
        throw bad_indices("ruler indices need n >= k > l >= 0, got k = " + std::to_string(k) +
                          ", l = " + std::to_string(l) + ", n = " + std::to_string(n));
    Ruler<S> ruler;
    ruler.points.reserve(static_cast<std::size_t>(n) + 1);
    Vec2<S> span = a.coords - b.coords;
    for (long long i = 0; i <= n; ++i) {
        S t = fraction<S>(i - l, k - l);
        ruler.points.push_back({b.coords + t * span});
    }
    return ruler;
}

template <class S>
bool is_ruler(const std::vector<Point<S>>& seq,
              const S& tol = scalar_traits<S>::entry_tolerance()) {
    if (seq.size() < 3)
        throw too_short("ruler check needs at least 3 points, got " +
                        std::to_string(seq.size()));
    for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
        if (!point_near(seq[i], middle(seq[i - 1], seq[i + 1]), tol)) return false;
    }
    return true;
}

/// All points b + (p/d)(a - b) with |p| <= num_bound and 1 <= d <= den_bound,
/// duplicates removed. Each of these is reachable by finitely many ruler
/// constructions from a and b; the topological closure into the full line
/// is deliberately not computed.
template <class S>
std::vector<Point<S>> rational_line(const Point<S>& a, const Point<S>& b, long long num_bound,
                                    long long den_bound) {
    if (a == b) throw degenerate_line("rational line needs two distinct points");
    if (num_bound < 1 || den_bound < 1)
        throw bad_indices("rational line bounds must be >= 1");
    Vec2<S> span = a.coords - b.coords;
    std::vector<Point<S>> points;
    points.reserve(static_cast<std::size_t>((2 * num_bound + 1) * den_bound));
    for (long long p = -num_bound; p <= num_bound; ++p) {
        for (long long d = 1; d <= den_bound; ++d) {
            points.push_back({b.coords + fraction<S>(p, d) * span});
        }
    }
    std::sort(points.begin(), points.end(), [](const Point<S>& u, const Point<S>& v) {
        return lex_less(u.coords, v.coords);
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

/// Both characterizations are evaluated: equal middles of the diagonals,
/// and equal coordinate differences a - b = d - c. The two are
/// algebraically equivalent, so a disagreement is an internal fault, not
/// a result.
template <class S>
bool is_parallelogram(const Point<S>& a, const Point<S>& b, const Point<S>& c, const Point<S>& d,
                      const S& tol = scalar_traits<S>::entry_tolerance()) {
    bool by_middles = point_near(middle(a, c), middle(b, d), tol);
    bool by_differences = vec_near(a.coords - b.coords, d.coords - c.coords, tol);
    if (by_middles != by_differences)
        throw error("parallelogram characterizations disagree on " + to_string(a.coords) + ", " +
                    to_string(b.coords) + ", " + to_string(c.coords) + ", " + to_string(d.coords));
    return by_middles;
}

/// Vector as a difference of points: the equivalence class of the pair
/// (a, b) under the parallelogram relation, represented by b - a in chart
/// coordinates.
template <class S>
struct GeoVector {
    Vec2<S> rep{};
    bool operator==(const GeoVector&) const = default;
};

template <class S>
GeoVector<S> vector_between(const Point<S>& a, const Point<S>& b) {
    return {b.coords - a.coords};
}

template <class S>
GeoVector<S> add(const GeoVector<S>& v, const GeoVector<S>& w) {
    return {v.rep + w.rep};
}

template <class S>
GeoVector<S> scale(const S& k, const GeoVector<S>& v) {
    return {k * v.rep};
}

template <class S>
Point<S> translate(const Point<S>& p, const GeoVector<S>& v) {
    return {p.coords + v.rep};
}

template <class S>
struct ChartMapReport {
    bool middle_preserved = true;
    bool length_preserved = true;
    std::string counterexample;

    bool passed() const { return middle_preserved && length_preserved; }
};

/// For both maps x -> anchor + x and x -> anchor - x, verifies on the
/// samples that middles map to middles and that pair lengths (orbit
/// classes of the group) are preserved. The reflection branch needs -I in
/// the group, since it sends each difference vector to its negative.
template <class S>
ChartMapReport<S> check_chart_maps(const std::vector<Point<S>>& samples, const Vec2<S>& anchor,
                                   const GroupClosure<S>& group,
                                   const S& entry_tol = scalar_traits<S>::entry_tolerance(),
                                   const S& match_tol = scalar_traits<S>::match_tolerance()) {
    if (!group.contains(-Mat2<S>::identity(), match_tol))
        throw missing_negation("chart map check needs -1 in the group");

    ChartMapReport<S> report;
    for (int sign : {1, -1}) {
        Chart<S> chart{anchor, sign};
        for (std::size_t i = 0; i < samples.size() && report.middle_preserved; ++i) {
            for (std::size_t j = i; j < samples.size(); ++j) {
                Point<S> mapped_middle = chart.apply(middle(samples[i], samples[j]));
                Point<S> middle_of_images =
                    middle(chart.apply(samples[i]), chart.apply(samples[j]));
                if (!point_near(mapped_middle, middle_of_images, entry_tol)) {
                    report.middle_preserved = false;
                    report.counterexample = "middle of samples " + std::to_string(i) + ", " +
                                            std::to_string(j) + " under sign " +
                                            std::to_string(sign);
                    break;
                }
            }
        }
        for (std::size_t i = 0; i < samples.size() && report.length_preserved; ++i) {
            for (std::size_t j = 0; j < samples.size(); ++j) {
                Vec2<S> before = vector_between(samples[i], samples[j]).rep;
                Vec2<S> after =
                    vector_between(chart.apply(samples[i]), chart.apply(samples[j])).rep;
                if (!same_length(before, after, group, match_tol)) {
                    report.length_preserved = false;
                    report.counterexample = "length class of samples " + std::to_string(i) +
                                            ", " + std::to_string(j) + " under sign " +
                                            std::to_string(sign);
                    break;
                }
            }
        }
    }
    return report;
}

} // namespace planekit
