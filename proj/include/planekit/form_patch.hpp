#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "planekit/errors.hpp"
#include "planekit/prng.hpp"
#include "planekit/scalar.hpp"

namespace planekit {

inline constexpr std::size_t kMinPatchDimension = 2;
inline constexpr std::size_t kMaxPatchDimension = 16;

template <class S>
class VecN {
public:
    VecN() = default;
    explicit VecN(std::vector<S> coords) : c_(std::move(coords)) {}
    static VecN zero(std::size_t n) { return VecN(std::vector<S>(n, S(0))); }
    static VecN basis(std::size_t n, std::size_t i) {
        VecN v = zero(n);
        v.c_[i] = S(1);
        return v;
    }

    std::size_t size() const { return c_.size(); }
    const S& operator[](std::size_t i) const { return c_[i]; }
    S& operator[](std::size_t i) { return c_[i]; }
    const std::vector<S>& coords() const { return c_; }

    friend VecN operator+(const VecN& u, const VecN& v) {
        VecN out = u;
        for (std::size_t i = 0; i < out.c_.size(); ++i) out.c_[i] = S(out.c_[i] + v.c_[i]);
        return out;
    }

    friend VecN operator-(const VecN& u, const VecN& v) {
        VecN out = u;
        for (std::size_t i = 0; i < out.c_.size(); ++i) out.c_[i] = S(out.c_[i] - v.c_[i]);
        return out;
    }

    friend VecN operator*(const S& k, const VecN& v) {
        VecN out = v;
        for (auto& x : out.c_) x = S(k * x);
        return out;
    }

    bool operator==(const VecN&) const = default;

private:
    std::vector<S> c_;
};

/// Black-box function claimed to restrict to a quadratic form on every
/// plane. Must be deterministic.
template <class S>
struct FormEvaluator {
    std::size_t dimension = 0;
    std::function<S(const VecN<S>&)> eval;

    S operator()(const VecN<S>& v) const {
        if (v.size() != dimension)
            throw dimension_mismatch("evaluator expects dimension " +
                                     std::to_string(dimension) + ", got " +
                                     std::to_string(v.size()));
        return eval(v);
    }
};

/// Symmetric n x n Gram matrix with exact-symmetry storage (upper triangle
/// mirrored on write).
template <class S>
class GramN {
public:
    GramN() = default;
    explicit GramN(std::size_t n) : n_(n), e_(n * n, S(0)) {}

    static GramN identity(std::size_t n) {
        GramN g(n);
        for (std::size_t i = 0; i < n; ++i) g.set(i, i, S(1));
        return g;
    }

    std::size_t size() const { return n_; }
    const S& at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }

    void set(std::size_t i, std::size_t j, const S& value) {
        e_[i * n_ + j] = value;
        e_[j * n_ + i] = value;
    }

    S quadratic(const VecN<S>& v) const {
        S total(0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                total = S(total + at(i, j) * v[i] * v[j]);
            }
        }
        return total;
    }

    /// Sylvester: every leading principal minor positive.
    bool is_positive_definite() const {
        for (std::size_t k = 1; k <= n_; ++k) {
            if (!(leading_minor(k) > S(0))) return false;
        }
        return true;
    }

    /// Determinant of the top-left k x k block by Gaussian elimination
    /// (exact over rationals; partial pivoting for floats).
    S leading_minor(std::size_t k) const {
        std::vector<S> m(k * k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) m[i * k + j] = at(i, j);

        S det(1);
        for (std::size_t col = 0; col < k; ++col) {
            std::size_t pivot = col;
            for (std::size_t row = col; row < k; ++row) {
                if (scalar_abs(m[row * k + col]) > scalar_abs(m[pivot * k + col])) pivot = row;
            }
            if (m[pivot * k + col] == S(0)) return S(0);
            if (pivot != col) {
                for (std::size_t j = col; j < k; ++j) std::swap(m[pivot * k + j], m[col * k + j]);
                det = S(-det);
            }
            det = S(det * m[col * k + col]);
            for (std::size_t row = col + 1; row < k; ++row) {
                S factor = S(m[row * k + col] / m[col * k + col]);
                for (std::size_t j = col; j < k; ++j) {
                    m[row * k + j] = S(m[row * k + j] - factor * m[col * k + j]);
                }
            }
        }
        return det;
    }

    bool operator==(const GramN&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<S> e_;
};

/// <u, v> = (Q(u+v) - Q(u) - Q(v)) / 2; agrees with Q on the diagonal
/// whenever Q(0) = 0.
template <class S>
S polarize_eval(const FormEvaluator<S>& q, const VecN<S>& u, const VecN<S>& v) {
    if (u.size() != v.size() || u.size() != q.dimension)
        throw dimension_mismatch("polarization operands must match the evaluator dimension");
    return S(S(q(u + v) - q(u) - q(v)) / S(2));
}

/// 2Q(a) + 2Q(b) - Q(a+b) - Q(a-b); identically zero for genuine quadratic
/// forms.
template <class S>
S parallelogram_residual(const FormEvaluator<S>& q, const VecN<S>& a, const VecN<S>& b) {
    if (a.size() != b.size() || a.size() != q.dimension)
        throw dimension_mismatch("parallelogram operands must match the evaluator dimension");
    return S(S(2) * q(a) + S(2) * q(b) - q(a + b) - q(a - b));
}

enum class PatchFailure { zero_value, homogeneity, parallelogram, roundtrip };

inline const char* patch_failure_name(PatchFailure f) {
    switch (f) {
        case PatchFailure::zero_value: return "zero_value";
        case PatchFailure::homogeneity: return "homogeneity";
        case PatchFailure::parallelogram: return "parallelogram";
        case PatchFailure::roundtrip: return "roundtrip";
    }
    return "unknown";
}

/// Everything needed to replay a rejection against the original evaluator.
template <class S>
struct PatchWitness {
    PatchFailure kind = PatchFailure::parallelogram;
    VecN<S> a;
    VecN<S> b;
    S lambda{};
    S violation{};
};

template <class S>
struct PatchResult {
    enum class Status { ok, not_quadratic, not_positive_definite };
    Status status = Status::ok;
    std::optional<GramN<S>> gram;
    std::optional<PatchWitness<S>> witness;
};

/// Re-evaluates the violation a witness records, using only the evaluator.
template <class S>
S replay_witness(const FormEvaluator<S>& q, const PatchWitness<S>& w) {
    switch (w.kind) {
        case PatchFailure::zero_value:
            return scalar_abs(q(VecN<S>::zero(q.dimension)));
        case PatchFailure::homogeneity: {
            S lhs = q(w.lambda * w.a);
            S rhs = S(w.lambda * w.lambda * q(w.a));
            return scalar_abs(S(lhs - rhs));
        }
        case PatchFailure::parallelogram:
            return scalar_abs(parallelogram_residual(q, w.a, w.b));
        case PatchFailure::roundtrip: {
            // Reassemble the polarization expansion of Q at w.a from basis
            // evaluations and compare with the direct value.
            const std::size_t n = q.dimension;
            S total(0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    S pij = polarize_eval(q, VecN<S>::basis(n, i), VecN<S>::basis(n, j));
                    total = S(total + pij * w.a[i] * w.a[j]);
                }
            }
            return scalar_abs(S(total - q(w.a)));
        }
    }
    return S(0);
}

/// Verifies the quadratic-form laws on a deterministic probe sweep plus
/// seeded random samples, then assembles the global Gram matrix by
/// polarization and cross-checks it on fresh vectors. Failures return a
/// replayable witness instead of a matrix; an assembled matrix that is not
/// positive-definite is reported as such (the input was quadratic but
/// indefinite).
template <class S>
PatchResult<S> patch_form(const FormEvaluator<S>& q, std::size_t trials, const S& tol,
                          std::uint64_t seed = 0) {
    const std::size_t n = q.dimension;
    if (n < kMinPatchDimension || n > kMaxPatchDimension)
        throw dimension_mismatch("patch dimension must lie in [2, 16], got " +
                                 std::to_string(n));
    if (trials < 1) throw invalid_value("patch needs at least one trial");

    PatchResult<S> result;
    auto fail = [&](PatchFailure kind, VecN<S> a, VecN<S> b, S lambda, S violation) {
        result.status = PatchResult<S>::Status::not_quadratic;
        result.witness = PatchWitness<S>{kind, std::move(a), std::move(b), std::move(lambda),
                                         std::move(violation)};
        return result;
    };

    // Q(0) = 0: polarization silently assumes it.
    S at_zero = q(VecN<S>::zero(n));
    if (scalar_abs(at_zero) > tol)
        return fail(PatchFailure::zero_value, VecN<S>::zero(n), VecN<S>::zero(n), S(0),
                    scalar_abs(at_zero));

    // Deterministic parallelogram sweep: basis pairs, then the mixed pairs
    // (e_i, e_i + e_j) that separate quartic-like impostors vanishing on
    // orthogonal pairs.
    std::vector<std::pair<VecN<S>, VecN<S>>> sweep;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            sweep.emplace_back(VecN<S>::basis(n, i), VecN<S>::basis(n, j));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                sweep.emplace_back(VecN<S>::basis(n, i),
                                   VecN<S>::basis(n, i) + VecN<S>::basis(n, j));
    for (const auto& [a, b] : sweep) {
        S residual = parallelogram_residual(q, a, b);
        if (scalar_abs(residual) > tol)
            return fail(PatchFailure::parallelogram, a, b, S(0), scalar_abs(residual));
    }

    Prng rng(seed);
    auto random_vector = [&]() {
        VecN<S> v = VecN<S>::zero(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = rng.small_scalar<S>();
        return v;
    };

    // Homogeneity Q(lambda v) = lambda^2 Q(v) on sampled pairs.
    for (std::size_t t = 0; t < trials; ++t) {
        VecN<S> v = random_vector();
        S lambda = rng.scaling_factor<S>();
        S violation = scalar_abs(S(q(lambda * v) - S(lambda * lambda) * q(v)));
        if (violation > tol)
            return fail(PatchFailure::homogeneity, v, VecN<S>::zero(n), lambda, violation);
    }

    // Random parallelogram pairs.
    for (std::size_t t = 0; t < trials; ++t) {
        VecN<S> a = random_vector();
        VecN<S> b = random_vector();
        S residual = parallelogram_residual(q, a, b);
        if (scalar_abs(residual) > tol)
            return fail(PatchFailure::parallelogram, a, b, S(0), scalar_abs(residual));
    }

    GramN<S> gram(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            gram.set(i, j, polarize_eval(q, VecN<S>::basis(n, i), VecN<S>::basis(n, j)));
        }
    }

    // The assembled matrix must reproduce Q away from the probe set.
    for (std::size_t t = 0; t < trials; ++t) {
        VecN<S> v = random_vector();
        S violation = scalar_abs(S(gram.quadratic(v) - q(v)));
        if (violation > tol)
            return fail(PatchFailure::roundtrip, v, VecN<S>::zero(n), S(0), violation);
    }

    if (!gram.is_positive_definite()) {
        result.status = PatchResult<S>::Status::not_positive_definite;
        result.gram = std::move(gram);
        return result;
    }

    result.status = PatchResult<S>::Status::ok;
    result.gram = std::move(gram);
    return result;
}

} // namespace planekit
