#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hlw/constants.hpp"

using namespace hlw;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
GroupCtx ctx_of(uint32_t n, uint32_t q) { return GroupCtx::make(n, field_from_q(q)); }
}

TEST_CASE("region classification") {
    CHECK(region_classify(Exponent(3, 2), Exponent(3, 2)).cls == RegionClass::boundary);
    CHECK(region_classify(Exponent::infinity(), Exponent(1, 1)).cls == RegionClass::boundary);
    CHECK(region_classify(Exponent(1, 1), Exponent::infinity()).cls == RegionClass::boundary);
    CHECK(region_classify(Exponent(1, 1), Exponent(1, 1)).cls == RegionClass::outside);
    CHECK(region_classify(Exponent(2, 1), Exponent(2, 1)).cls == RegionClass::inside);
    CHECK(region_classify(Exponent::infinity(), Exponent::infinity()).cls == RegionClass::inside);
    CHECK(region_classify(Exponent(2, 1), Exponent(4, 3)).cls == RegionClass::boundary);
}

TEST_CASE("family ratios match their closed forms") {
    // boundary point: both families sit at ratio exactly 1
    for (uint32_t q : {3u, 5u, 7u, 11u}) {
        FieldCtx F = field_from_q(q);
        CHECK_THAT(paper_family_ratio(F, Exponent(3, 2), Exponent(3, 2), TestFamily::A).value,
                   WithinAbs(1.0, 1e-12));
        CHECK_THAT(paper_family_ratio(F, Exponent(3, 2), Exponent(3, 2), TestFamily::B).value,
                   WithinAbs(1.0, 1e-12));
    }
    // exponent 1/1 + 2/1 - 2 = 1
    CHECK_THAT(paper_family_ratio(field_from_q(5), Exponent(1, 1), Exponent(1, 1), TestFamily::A)
                   .value,
               WithinRel(5.0, 1e-12));
    // endpoints of the region boundary
    FieldCtx F7 = field_from_q(7);
    CHECK_THAT(paper_family_ratio(F7, Exponent::infinity(), Exponent(1, 1), TestFamily::A).value,
               WithinAbs(1.0, 1e-12));
    CHECK_THAT(paper_family_ratio(F7, Exponent(1, 1), Exponent::infinity(), TestFamily::B).value,
               WithinAbs(1.0, 1e-12));
}

TEST_CASE("family growth separates the region from its complement") {
    // the family-A ratio stays <= 1 across q exactly when 1/u1 + 2/u2 <= 2,
    // family B when 2/u1 + 1/u2 <= 2; checked on an 11x11 grid
    for (uint32_t i = 0; i <= 10; ++i) {
        for (uint32_t k = 0; k <= 10; ++k) {
            Exponent u1 = i == 0 ? Exponent::infinity() : Exponent(Rat(10, i));
            Exponent u2 = k == 0 ? Exponent::infinity() : Exponent(Rat(10, k));
            bool okA = u1.reciprocal() + Rat(2) * u2.reciprocal() <= Rat(2);
            bool okB = Rat(2) * u1.reciprocal() + u2.reciprocal() <= Rat(2);
            for (uint32_t q : {3u, 5u, 7u, 11u, 13u}) {
                FieldCtx F = field_from_q(q);
                double a = paper_family_ratio(F, u1, u2, TestFamily::A).value;
                double b = paper_family_ratio(F, u1, u2, TestFamily::B).value;
                CHECK((a <= 1 + 1e-9) == okA);
                CHECK((b <= 1 + 1e-9) == okB);
            }
            // outside the region at least one family blows up with q
            if (region_classify(u1, u2).cls == RegionClass::outside) {
                FieldCtx F3 = field_from_q(3), F13 = field_from_q(13);
                double growth3 = std::max(paper_family_ratio(F3, u1, u2, TestFamily::A).value,
                                          paper_family_ratio(F3, u1, u2, TestFamily::B).value);
                double growth13 = std::max(paper_family_ratio(F13, u1, u2, TestFamily::A).value,
                                           paper_family_ratio(F13, u1, u2, TestFamily::B).value);
                CHECK(growth13 > growth3);
            }
        }
    }
}

TEST_CASE("exhaustive indicator search at q = 3") {
    FieldCtx F3 = field_from_q(3);

    // regression baseline: the indicator supremum at the boundary point is 1,
    // attained by the full-grid pair
    RatioReport rep = exhaustive_indicator_constant(F3, Exponent(3, 2), Exponent(3, 2));
    CHECK(rep.value >= 1.0 - 1e-12);
    CHECK_THAT(rep.value, WithinAbs(1.0, 1e-12));
    CHECK_THAT(reevaluate(rep), WithinRel(rep.value, 1e-9));
    CHECK(rep.method == RatioMethod::exhaustive);
    CHECK(rep.iterations == 511ull * 511ull);

    // at (1,1) the best pair reaches q, the family-A value
    RatioReport rep11 = exhaustive_indicator_constant(F3, Exponent(1, 1), Exponent(1, 1));
    CHECK_THAT(rep11.value, WithinRel(3.0, 1e-12));

    CHECK_THROWS_MATCHES(
        exhaustive_indicator_constant(field_from_q(5), Exponent(3, 2), Exponent(3, 2)), Error,
        Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.code() == errc::too_large; }));
}

TEST_CASE("alternating maximization") {
    GroupCtx ctx = ctx_of(1, 3);
    std::vector<Exponent> us{Exponent(3, 2), Exponent(3, 2)};

    // constants are a fixed point: the all-ones restart alone returns 1
    AscentOptions one_restart;
    one_restart.restarts = 1;
    one_restart.record_trace = true;
    RatioReport fixed = extremize_ratio(ctx, us, one_restart);
    CHECK_THAT(fixed.trace.front(), WithinAbs(1.0, 1e-12));
    CHECK(fixed.value >= 1.0 - 1e-12);

    // seeded restarts: monotone iterates, value certified by the witness
    AscentOptions opts;
    opts.restarts = 16;
    opts.max_iter = 200;
    opts.record_trace = true;
    RatioReport rep = extremize_ratio(ctx, us, opts);
    CHECK(rep.value >= 1.0 - 1e-12);
    CHECK(rep.value <= 2.0);  // recorded regression ceiling
    for (size_t i = 1; i < rep.trace.size(); ++i)
        CHECK(rep.trace[i] >= rep.trace[i - 1] - 1e-12);
    CHECK_THAT(reevaluate(rep), WithinRel(rep.value, 1e-9));

    // scaling invariance of the ratio
    auto [r0, d0] = lw_ratio(ctx, rep.witness, us);
    std::vector<GridFn> scaled = rep.witness;
    for (auto& f : scaled) {
        GridFn g = f;
        for (uint64_t c = 0; c < g.size(); ++c) g.set(c, 7.25 * g.at(c));
        f = g;
    }
    auto [r1, d1] = lw_ratio(ctx, scaled, us);
    CHECK_THAT(r1, WithinRel(r0, 1e-12));

    // endpoint exponents are refused (closed forms exist for them)
    CHECK_THROWS_MATCHES(extremize_ratio(ctx, {Exponent(1, 1), Exponent(3, 2)}, one_restart),
                         Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == errc::bad_exponent;
                         }));
    CHECK_THROWS_AS(extremize_ratio(ctx, {Exponent::infinity(), Exponent(3, 2)}, one_restart),
                    Error);

    // the ascent matches the operator-norm bound it is dual to
    AscentOptions dual_opts;
    dual_opts.restarts = 8;
    dual_opts.max_iter = 100;
    RatioReport by_ascent = extremize_ratio(ctx, us, dual_opts);
    RatioReport by_power = opnorm_lower_bound(field_from_q(3), Exponent(3, 2), Exponent(3, 1),
                                              dual_opts);
    CHECK_THAT(by_ascent.value, WithinRel(by_power.value, 1e-6));
}

TEST_CASE("endpoint operator norms are exactly one") {
    for (uint32_t q : {3u, 5u, 7u, 9u, 11u, 13u, 17u, 19u, 23u, 25u, 27u, 29u, 31u}) {
        EndpointNorms ep = endpoint_opnorms(field_from_q(q));
        CHECK_THAT(ep.a_1to1, WithinAbs(1.0, 1e-12));
        CHECK_THAT(ep.a_inf_to_inf, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("operator norm lower bounds") {
    AscentOptions opts;
    opts.restarts = 8;
    opts.max_iter = 60;
    for (uint32_t q : {3u, 5u, 9u, 13u, 31u}) {
        RatioReport rep = opnorm_lower_bound(field_from_q(q), Exponent(3, 2), Exponent(3, 1), opts);
        CHECK(rep.value >= 1.0 - 1e-12);  // the all-ones restart pins 1
        CHECK(rep.value <= 2.0);          // recorded regression ceiling
    }
    CHECK_THROWS_AS(
        opnorm_lower_bound(field_from_q(3), Exponent(1, 1), Exponent(3, 1), opts), Error);
}

TEST_CASE("mixed exponent tuples") {
    auto uniform = mixed_exponents(2, 0);
    REQUIRE(uniform.size() == 4);
    for (auto& u : uniform) CHECK(u == Exponent(10, 3));  // n(2n+1)/(n+1) at n = 2

    auto mixed = mixed_exponents(2, 1);
    CHECK(mixed[0] == Exponent(5, 2));
    CHECK(mixed[2] == Exponent(5, 2));
    CHECK(mixed[1] == Exponent(5, 1));
    CHECK(mixed[3] == Exponent(5, 1));

    CHECK(mixed_exponents(1, 0)[0] == Exponent(3, 2));
    CHECK_THROWS_AS(mixed_exponents(2, 3), Error);
}

TEST_CASE("mixed exponent corpus") {
    for (auto [n, q] : {std::pair{1u, 3u}, {1u, 5u}, {2u, 3u}}) {
        GroupCtx ctx = ctx_of(n, q);
        for (uint32_t k = 0; k <= n; ++k) {
            MixedCheckPlan plan;
            plan.random_tuples = 60;
            plan.indicator_tuples = 20;
            plan.seed = 7;
            MixedCheckReport rep = mixed_exponent_check(ctx, k, plan);
            CHECK(rep.families_exact);  // flat (and line) sit at ratio 1 exactly
            CHECK(std::isfinite(rep.max_ratio));
            CHECK(rep.max_ratio >= 1.0 - 1e-12);  // the families are part of the corpus
            for (double v : rep.family_ratios) CHECK_THAT(v, WithinAbs(1.0, 1e-12));
        }
    }
}

TEST_CASE("degenerate tuples flag instead of failing") {
    GroupCtx ctx = ctx_of(1, 3);
    std::vector<GridFn> zeros{GridFn::zero(ctx), GridFn::constant(ctx, 1.0)};
    auto [value, degenerate] = lw_ratio(ctx, zeros, {Exponent(3, 2), Exponent(3, 2)});
    CHECK(value == 0.0);
    CHECK(degenerate);
}
