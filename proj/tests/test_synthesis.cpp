#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "planekit/synthesis.hpp"

#include "catalog.hpp"
#include "oracle.hpp"

using namespace planekit;
using R = Rational;

namespace {

QuadraticForm<R> seed_form() { return {R(1), R(0), R(2)}; } // diag(1, 2)

GroupClosure<R> closure_of(const GroupSpec<R>& spec) { return close_group(spec); }

GroupSpec<R> c4_spec() {
    GroupSpec<R> spec;
    spec.generators.push_back(catalog::rotation90());
    return spec;
}

Mat2<double> rotation(double theta) {
    return {std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)};
}

} // namespace

TEST_CASE("positive definiteness certificate") {
    CHECK(is_positive_definite(QuadraticForm<R>::standard()));
    CHECK_FALSE(is_positive_definite(QuadraticForm<R>{R(1), R(0), R(-1)}));
    CHECK(is_positive_definite(QuadraticForm<R>{R(1), R(-1), R(2)}));
    CHECK_FALSE(is_positive_definite(QuadraticForm<R>{R(0), R(0), R(1)}));
}

TEST_CASE("invariance residual") {
    auto c4 = closure_of(c4_spec());
    CHECK(invariance_residual(QuadraticForm<R>::standard(), c4) == R(0));
    CHECK(invariance_residual(seed_form(), c4) == R(1));
}

TEST_CASE("averaging over C4 matches the hand value and the oracle") {
    auto c4 = closure_of(c4_spec());
    auto [form, report] = synth_averaging(c4, seed_form());
    CHECK(form.gram() == Mat2<R>::diagonal(fraction<R>(3, 2), fraction<R>(3, 2)));
    CHECK(report.residual == R(0));
    CHECK(report.iterations == 1);

    Mat2<R> oracle_gram = oracle::average_gram_by_evaluation(c4.members, seed_form());
    CHECK(oracle_gram == form.gram());
}

TEST_CASE("averaging fixes an already invariant form") {
    GroupSpec<R> d8;
    d8.generators.push_back(catalog::rotation90());
    d8.generators.push_back(catalog::reflection_diag());
    auto closure = closure_of(d8);
    auto [form, report] = synth_averaging(closure, QuadraticForm<R>::standard());
    CHECK(form == QuadraticForm<R>::standard());
    CHECK(report.residual == R(0));
}

TEST_CASE("averaging over shear-conjugated C4") {
    auto spec = catalog::conjugated(c4_spec(), catalog::unit_shear());
    auto closure = closure_of(spec);
    auto [form, report] = synth_averaging(closure, QuadraticForm<R>::standard());
    // (3/2) * [[1, -1], [-1, 2]], checked against the evaluation oracle.
    Mat2<R> expected{fraction<R>(3, 2), fraction<R>(-3, 2), fraction<R>(-3, 2), R(3)};
    CHECK(form.gram() == expected);
    CHECK(report.residual == R(0));
    CHECK(oracle::average_gram_by_evaluation(closure.members, QuadraticForm<R>::standard()) ==
          expected);
    auto ratio = proportionality_ratio(QuadraticForm<R>{R(1), R(-1), R(2)}, form);
    REQUIRE(ratio.has_value());
    CHECK(*ratio == fraction<R>(3, 2));
}

TEST_CASE("averaging requires a complete closure and a definite seed") {
    GroupSpec<R> shear;
    shear.generators.push_back(catalog::unit_shear());
    shear.closure_limit = 16;
    auto sampled = closure_of(shear);
    CHECK_THROWS_AS(synth_averaging(sampled, seed_form()), incomplete_closure);

    auto c4 = closure_of(c4_spec());
    CHECK_THROWS_AS(synth_averaging(c4, QuadraticForm<R>{R(1), R(0), R(-1)}),
                    not_positive_definite);
}

TEST_CASE("algebraic synthesis on C4 gives the standard form") {
    auto c4 = closure_of(c4_spec());
    auto [form, report] = synth_algebraic(c4, WedgeForm<R>{});
    CHECK(form == QuadraticForm<R>::standard());
    CHECK(report.residual == R(0));
    CHECK(report.iterations == 0);
}

TEST_CASE("algebraic synthesis on the shear-conjugated C4") {
    auto spec = catalog::conjugated(c4_spec(), catalog::unit_shear());
    auto [form, report] = synth_algebraic(closure_of(spec), WedgeForm<R>{});
    CHECK(form.gram() == Mat2<R>{R(1), R(-1), R(-1), R(2)});
    CHECK(report.residual == R(0));
}

TEST_CASE("algebraic synthesis on D6 (non-orthogonal order-3 realization)") {
    GroupSpec<R> d6;
    d6.generators.push_back(catalog::order3());
    d6.generators.push_back(catalog::reflection_swap());
    auto [form, report] = synth_algebraic(closure_of(d6), WedgeForm<R>{});
    CHECK(form.gram() ==
          Mat2<R>{R(1), fraction<R>(-1, 2), fraction<R>(-1, 2), R(1)});
    CHECK(report.residual == R(0));
}

TEST_CASE("algebraic synthesis degenerate cases") {
    // Klein group {+-I, +-diag(1,-1)}: identity Gram in the eigenbasis.
    GroupSpec<R> klein;
    klein.generators.push_back(catalog::reflection_diag());
    klein.generators.push_back(-Mat2<R>::identity());
    auto [kform, kreport] = synth_algebraic(closure_of(klein), WedgeForm<R>{});
    CHECK(kform == QuadraticForm<R>::standard());
    CHECK(kreport.residual == R(0));

    // Scalars only.
    GroupSpec<R> c2;
    c2.generators.push_back(-Mat2<R>::identity());
    auto [cform, creport] = synth_algebraic(closure_of(c2), WedgeForm<R>{});
    CHECK(cform == QuadraticForm<R>::standard());
    CHECK(creport.residual == R(0));

    // Swap reflection only: eigenbasis (1,1), (1,-1) gives half the
    // standard form; still exactly invariant.
    GroupSpec<R> swap;
    swap.generators.push_back(catalog::reflection_swap());
    auto [sform, sreport] = synth_algebraic(closure_of(swap), WedgeForm<R>{});
    CHECK(sform.gram() == Mat2<R>::diagonal(fraction<R>(1, 2), fraction<R>(1, 2)));
    CHECK(sreport.residual == R(0));
}

TEST_CASE("algebraic synthesis refuses screened-out groups") {
    GroupSpec<R> shear;
    shear.generators.push_back(catalog::unit_shear());
    shear.closure_limit = 16;
    auto sampled = closure_of(shear);
    CHECK_THROWS_AS(synth_algebraic(sampled, WedgeForm<R>{}), incomplete_closure);

    GroupClosure<R> bad{{Mat2<R>::identity(), Mat2<R>::diagonal(R(2), fraction<R>(1, 2))}, true};
    CHECK_THROWS_AS(synth_algebraic(bad, WedgeForm<R>{}), screen_failed);
}

TEST_CASE("exactness across the catalog") {
    for (const auto& entry : catalog::entries()) {
        CAPTURE(entry.name);
        auto closure = closure_of(entry.spec);
        REQUIRE(boundedness_screen(closure).pass);

        auto [avg, avg_report] = synth_averaging(closure, seed_form());
        CHECK(avg_report.residual == R(0));
        CHECK(is_positive_definite(avg));

        auto [alg, alg_report] = synth_algebraic(closure, WedgeForm<R>{});
        CHECK(alg_report.residual == R(0));
        CHECK(is_positive_definite(alg));
    }
}

TEST_CASE("proof-3 lemma: non-scalar det-1 members have negative j_square") {
    for (const auto& entry : catalog::entries()) {
        CAPTURE(entry.name);
        for (const auto& m : closure_of(entry.spec).members) {
            if (m.det() != R(1)) continue;
            auto dec = traceless_decompose(m);
            if (max_abs_entry(dec.j) == R(0)) continue; // scalar member
            CHECK(dec.j_square < R(0));
            CHECK(scalar_abs(m.trace()) < R(2));
        }
    }
}

TEST_CASE("the synthesized bilinear form is invariant member by member") {
    // B(gu, gv) = B(u, v) on a basis, evaluated through the wedge route
    // rather than the Gram congruence.
    auto spec = catalog::conjugated(c4_spec(), catalog::unit_shear());
    auto closure = closure_of(spec);
    auto [form, report] = synth_algebraic(closure, WedgeForm<R>{});
    Vec2<R> e1{R(1), R(0)}, e2{R(0), R(1)};
    for (const auto& g : closure.members) {
        for (const auto& u : {e1, e2}) {
            for (const auto& v : {e1, e2}) {
                CHECK(form.bilinear(g * u, g * v) == form.bilinear(u, v));
            }
        }
    }
}

TEST_CASE("cross-method agreement on irreducible entries") {
    for (const auto& entry : catalog::entries()) {
        if (!entry.irreducible) continue;
        CAPTURE(entry.name);
        auto closure = closure_of(entry.spec);
        auto [avg, r1] = synth_averaging(closure, seed_form());
        auto [alg, r2] = synth_algebraic(closure, WedgeForm<R>{});
        auto [con, r3] = synth_contraction(entry.spec, seed_form(), R(0), 50);
        auto k_alg = proportionality_ratio(avg, alg);
        auto k_con = proportionality_ratio(avg, con);
        REQUIRE(k_alg.has_value());
        REQUIRE(k_con.has_value());
        CHECK(*k_alg > R(0));
        CHECK(*k_con > R(0));
    }
}

TEST_CASE("conjugation covariance of the algebraic output") {
    Prng rng(41);
    for (const auto& entry : catalog::base_entries()) {
        if (!entry.irreducible) continue;
        CAPTURE(entry.name);
        Mat2<R> basis = catalog::seeded_conjugator(rng);
        auto base_closure = closure_of(entry.spec);
        auto conj_closure = closure_of(catalog::conjugated(entry.spec, basis));
        auto [base_form, br] = synth_algebraic(base_closure, WedgeForm<R>{});
        auto [conj_form, cr] = synth_algebraic(conj_closure, WedgeForm<R>{});
        Mat2<R> inv = basis.inverse();
        QuadraticForm<R> transported =
            QuadraticForm<R>::from_gram(inv.transposed() * base_form.gram() * inv);
        auto ratio = proportionality_ratio(transported, conj_form);
        REQUIRE(ratio.has_value());
        CHECK(*ratio > R(0));
    }
}

TEST_CASE("contraction on a finite rational group is exact at tol 0") {
    auto [form, report] = synth_contraction(c4_spec(), seed_form(), R(0), 50);
    CHECK(report.residual == R(0));
    CHECK(report.iterations <= 3);
    // Full-orbit averaging collapses the orbit in one step.
    REQUIRE(report.contraction_ratio.has_value());
    CHECK(*report.contraction_ratio == 0.0);
    auto [avg, avg_report] = synth_averaging(closure_of(c4_spec()), seed_form());
    auto ratio = proportionality_ratio(avg, form);
    REQUIRE(ratio.has_value());
    CHECK(*ratio > R(0));
}

TEST_CASE("contraction converges for a sampled rotation group") {
    GroupSpec<double> spec;
    spec.generators.push_back(rotation(1.0));
    spec.closure_limit = 256;
    auto [form, report] =
        synth_contraction(spec, QuadraticForm<double>{1.0, 0.0, 2.0}, 1e-10, 200);
    CHECK(report.iterations <= 200);
    REQUIRE(report.contraction_ratio.has_value());
    CHECK(*report.contraction_ratio < 1.0);
    CHECK(std::abs(form.q()) / std::max(form.p(), form.r()) < 1e-9);
    CHECK(std::abs(form.p() - form.r()) / form.p() < 1e-9);
    CHECK(is_positive_definite(form));
}

TEST_CASE("contraction measures a sub-unit diameter ratio across the catalog") {
    for (const auto& entry : catalog::entries()) {
        CAPTURE(entry.name);
        auto [form, report] = synth_contraction(entry.spec, seed_form(), R(0), 50);
        CHECK(report.residual == R(0));
        if (report.contraction_ratio) CHECK(*report.contraction_ratio < 1.0);
    }
}

TEST_CASE("contraction error paths") {
    GroupSpec<R> shear;
    shear.generators.push_back(catalog::unit_shear());
    shear.closure_limit = 16;
    CHECK_THROWS_AS(synth_contraction(shear, seed_form(), R(0), 50), screen_failed);

    CHECK_THROWS_AS(synth_contraction(c4_spec(), QuadraticForm<R>{R(-1), R(0), R(1)}, R(0), 50),
                    not_positive_definite);

    CHECK_THROWS_AS(synth_contraction(c4_spec(), seed_form(), R(0), 0), no_convergence);
}
