#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "planekit/errors.hpp"

namespace planekit {

/// Arbitrary-precision integer (expression templates off so values behave
/// like ordinary scalars in generic code shared with double).
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;

/// Exact scalar backend: arbitrary-precision rational. The backend keeps
/// values in lowest terms with a positive denominator.
using Rational =
    boost::multiprecision::number<boost::multiprecision::rational_adaptor<
                                      boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

/// Per-backend constants. Every correctness claim is exact for Rational
/// (tolerances are zero) and holds within the tolerances below for double
/// on desk-scale inputs.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool is_exact = true;
    static Rational entry_tolerance() { return Rational(0); }
    static Rational match_tolerance() { return Rational(0); }
    static const char* name() { return "rational"; }
};

template <>
struct scalar_traits<double> {
    static constexpr bool is_exact = false;
    static double entry_tolerance() { return 1e-12; }
    static double match_tolerance() { return 1e-9; }
    static const char* name() { return "float"; }
};

inline double scalar_abs(double x) { return std::fabs(x); }
inline Rational scalar_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.template convert_to<double>(); }

/// p/q as a scalar of the requested backend.
template <class S>
S fraction(long long num, long long den);

template <>
inline Rational fraction<Rational>(long long num, long long den) {
    if (den == 0) throw invalid_value("fraction with zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

template <>
inline double fraction<double>(long long num, long long den) {
    if (den == 0) throw invalid_value("fraction with zero denominator");
    return static_cast<double>(num) / static_cast<double>(den);
}

/// |a - b| <= tol. With the rational backend callers pass tol = 0, so this
/// is exact equality.
template <class S>
bool near(const S& a, const S& b, const S& tol) {
    return scalar_abs(S(a - b)) <= tol;
}

/// Square root when one exists in the backend: exact (perfect squares only)
/// for Rational, std::sqrt for double. nullopt for negative inputs or
/// non-square rationals.
inline std::optional<Rational> scalar_sqrt(const Rational& x) {
    if (x < 0) return std::nullopt;
    BigInt num = numerator(x);
    BigInt den = denominator(x);
    BigInt rn = boost::multiprecision::sqrt(num);
    BigInt rd = boost::multiprecision::sqrt(den);
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    return Rational(rn, rd);
}

inline std::optional<double> scalar_sqrt(const double& x) {
    if (x < 0) return std::nullopt;
    return std::sqrt(x);
}

/// Wire form: rationals as "p/q", floats as shortest round-trip decimals.
inline std::string scalar_to_string(const Rational& x) {
    return numerator(x).str() + "/" + denominator(x).str();
}

inline std::string scalar_to_string(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace detail {

inline BigInt parse_bigint(const std::string& text, const std::string& what) {
    if (text.empty()) throw parse_error(what + ": empty integer");
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (start == text.size()) throw parse_error(what + ": sign without digits");
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9')
            throw parse_error(what + ": invalid integer '" + text + "'");
    }
    return BigInt(text);
}

} // namespace detail

template <class S>
S scalar_from_string(const std::string& text);

/// Accepts "p", "p/q" (q > 0 after normalization is guaranteed by the
/// backend; q = 0 is rejected).
template <>
inline Rational scalar_from_string<Rational>(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        return Rational(detail::parse_bigint(text, "rational"));
    }
    BigInt num = detail::parse_bigint(text.substr(0, slash), "rational numerator");
    BigInt den = detail::parse_bigint(text.substr(slash + 1), "rational denominator");
    if (den == 0) throw parse_error("rational denominator is zero in '" + text + "'");
    return Rational(num, den);
}

template <>
inline double scalar_from_string<double>(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational r = scalar_from_string<Rational>(text);
        return to_double(r);
    }
    std::size_t used = 0;
    double value = 0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw parse_error("invalid float literal '" + text + "'");
    }
    if (used != text.size()) throw parse_error("invalid float literal '" + text + "'");
    return value;
}

} // namespace planekit
