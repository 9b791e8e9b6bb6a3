#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "planekit/form_patch.hpp"
#include "planekit/geometry.hpp"
#include "planekit/group.hpp"
#include "planekit/quadratic_form.hpp"

namespace planekit {

// Wire conventions shared by every module: matrices as row-major arrays,
// rationals as "p/q" strings (plain integers accepted on input), floats as
// decimal literals. ordered_json keeps key order stable so identical runs
// serialize to identical bytes.
using json = nlohmann::ordered_json;

inline json scalar_to_json(const Rational& x) { return scalar_to_string(x); }
inline json scalar_to_json(double x) { return x; }

template <class S>
S scalar_from_json(const json& j, const std::string& field);

template <>
inline Rational scalar_from_json<Rational>(const json& j, const std::string& field) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) {
        try {
            return scalar_from_string<Rational>(j.get<std::string>());
        } catch (const parse_error& e) {
            throw parse_error(field + ": " + e.what());
        }
    }
    if (j.is_number_float())
        throw parse_error(field + ": rational scalars take integers or \"p/q\" strings, not "
                                  "float literals");
    throw parse_error(field + ": expected a scalar");
}

template <>
inline double scalar_from_json<double>(const json& j, const std::string& field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        try {
            return scalar_from_string<double>(j.get<std::string>());
        } catch (const parse_error& e) {
            throw parse_error(field + ": " + e.what());
        }
    }
    throw parse_error(field + ": expected a scalar");
}

template <class S>
json vec2_to_json(const Vec2<S>& v) {
    return json::array({scalar_to_json(v.x), scalar_to_json(v.y)});
}

template <class S>
Vec2<S> vec2_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2)
        throw parse_error(field + ": expected a 2-element array of scalars");
    return {scalar_from_json<S>(j[0], field + "[0]"), scalar_from_json<S>(j[1], field + "[1]")};
}

template <class S>
json mat2_to_json(const Mat2<S>& m) {
    return json::array({json::array({scalar_to_json(m.a), scalar_to_json(m.b)}),
                        json::array({scalar_to_json(m.c), scalar_to_json(m.d)})});
}

template <class S>
Mat2<S> mat2_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2)
        throw parse_error(field + ": expected a row-major 2x2 array");
    return {scalar_from_json<S>(j[0][0], field + "[0][0]"),
            scalar_from_json<S>(j[0][1], field + "[0][1]"),
            scalar_from_json<S>(j[1][0], field + "[1][0]"),
            scalar_from_json<S>(j[1][1], field + "[1][1]")};
}

template <class S>
json gram_to_json(const QuadraticForm<S>& q) {
    return mat2_to_json(q.gram());
}

template <class S>
QuadraticForm<S> form_from_json(const json& j, const std::string& field) {
    Mat2<S> gram = mat2_from_json<S>(j, field);
    if (gram.b != gram.c) throw parse_error(field + ": Gram matrix must be symmetric");
    return QuadraticForm<S>::from_gram(gram);
}

template <class S>
json gram_n_to_json(const GramN<S>& g) {
    json rows = json::array();
    for (std::size_t i = 0; i < g.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < g.size(); ++j) row.push_back(scalar_to_json(g.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class S>
GramN<S> gram_n_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw parse_error(field + ": expected an n x n array");
    const std::size_t n = j.size();
    GramN<S> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n)
            throw parse_error(field + ": row " + std::to_string(i) + " must have " +
                              std::to_string(n) + " entries");
        for (std::size_t k = 0; k < n; ++k) {
            S value = scalar_from_json<S>(j[i][k], field + "[" + std::to_string(i) + "][" +
                                                       std::to_string(k) + "]");
            if (k >= i) {
                g.set(i, k, value);
            } else if (!(g.at(i, k) == value)) {
                throw parse_error(field + ": matrix must be symmetric (entry " +
                                  std::to_string(i) + "," + std::to_string(k) + ")");
            }
        }
    }
    return g;
}

template <class S>
json vecn_to_json(const VecN<S>& v) {
    json out = json::array();
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v[i]));
    return out;
}

template <class S>
json point_to_json(const Point<S>& p) {
    return vec2_to_json(p.coords);
}

template <class S>
Point<S> point_from_json(const json& j, const std::string& field) {
    return {vec2_from_json<S>(j, field)};
}

template <class S>
std::vector<Mat2<S>> mat_list_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) throw parse_error(field + ": expected an array of 2x2 matrices");
    std::vector<Mat2<S>> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(mat2_from_json<S>(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

/// Group spec file body: { "scalar": ..., "generators": [...], "elements":
/// [...], "closure_limit": N }. The scalar tag itself is dispatched on by
/// the caller.
template <class S>
GroupSpec<S> group_spec_from_json(const json& j, const std::string& field = "group") {
    if (!j.is_object()) throw parse_error(field + ": expected an object");
    GroupSpec<S> spec;
    if (j.contains("generators"))
        spec.generators = mat_list_from_json<S>(j["generators"], field + ".generators");
    if (j.contains("elements"))
        spec.elements = mat_list_from_json<S>(j["elements"], field + ".elements");
    if (j.contains("closure_limit")) {
        if (!j["closure_limit"].is_number_unsigned() || j["closure_limit"].get<std::uint64_t>() == 0)
            throw parse_error(field + ".closure_limit: expected a positive integer");
        spec.closure_limit = j["closure_limit"].get<std::size_t>();
    }
    if (spec.generators.empty() && spec.elements.empty())
        throw parse_error(field + ": need at least one of 'generators' or 'elements'");
    return spec;
}

template <class S>
json group_spec_to_json(const GroupSpec<S>& spec) {
    json out;
    out["scalar"] = scalar_traits<S>::name();
    json gens = json::array();
    for (const auto& m : spec.generators) gens.push_back(mat2_to_json(m));
    out["generators"] = std::move(gens);
    json elems = json::array();
    for (const auto& m : spec.elements) elems.push_back(mat2_to_json(m));
    out["elements"] = std::move(elems);
    out["closure_limit"] = spec.closure_limit;
    return out;
}

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char byte : data) {
        hash ^= byte;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

inline std::string hash_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

/// Hash of the canonical spec serialization; certificates carry it so a
/// later check run can detect a (form, group) pair that was never matched.
template <class S>
std::string group_spec_hash(const GroupSpec<S>& spec) {
    return hash_hex(fnv1a64(group_spec_to_json(spec).dump()));
}

inline std::string scalar_kind_from_json(const json& j, const std::string& field = "scalar") {
    if (!j.contains(field)) return "rational";
    if (!j[field].is_string())
        throw parse_error(field + ": expected \"rational\" or \"float\"");
    std::string kind = j[field].get<std::string>();
    if (kind != "rational" && kind != "float")
        throw parse_error(field + ": expected \"rational\" or \"float\", got \"" + kind + "\"");
    return kind;
}

} // namespace planekit
