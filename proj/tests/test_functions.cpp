#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hlw/constants.hpp"
#include "hlw/grid_fn.hpp"
#include "hlw/rng.hpp"

using namespace hlw;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

namespace {

GroupCtx ctx_of(uint32_t n, uint32_t q) { return GroupCtx::make(n, field_from_q(q)); }

GridFn random_fn(const GroupCtx& ctx, Rng& rng) {
    GridFn f = GridFn::zero(ctx);
    for (uint64_t c = 0; c < ctx.plane_count(); ++c) f.set(c, rng.uniform());
    return f;
}

// Quadruple-loop reference for the bilinear form over a prime field,
// using plain % arithmetic only.
double L_reference(uint32_t q, const GridFn& f1, const GridFn& f2) {
    double acc = 0;
    for (uint32_t x1 = 0; x1 < q; ++x1)
        for (uint32_t x2 = 0; x2 < q; ++x2)
            for (uint32_t y1 = 0; y1 < q; ++y1)
                for (uint32_t y2 = 0; y2 < q; ++y2)
                    if ((x1 * y1 + y2) % q == x2) acc += f1.at2(x1, x2) * f2.at2(y1, y2);
    return acc / (static_cast<double>(q) * q * q);
}

}  // namespace

TEST_CASE("normalized norms") {
    GroupCtx ctx = ctx_of(1, 3);
    GridFn ones = GridFn::constant(ctx, 1.0);
    for (auto u : {Exponent(1, 1), Exponent(3, 2), Exponent(2, 1), Exponent::infinity()})
        CHECK_THAT(lp_norm(ones, u), WithinRel(1.0, 1e-15));

    GridFn point = GridFn::indicator(ctx, {4});
    CHECK_THAT(lp_norm(point, Exponent(3, 2)), WithinRel(std::pow(9.0, -2.0 / 3.0), 1e-12));
    CHECK_THAT(lp_norm(point, Exponent::infinity()), WithinRel(1.0, 1e-15));

    // the diagonal-line family has norm q^{-1/u}
    for (uint32_t q : {3u, 5u, 7u}) {
        GroupCtx c = ctx_of(1, q);
        GridFn f1 = family_functions(c, TestFamily::A)[0];
        for (auto u : {Exponent(1, 1), Exponent(3, 2), Exponent(7, 3)})
            CHECK_THAT(lp_norm(f1, u),
                       WithinRel(std::pow(static_cast<double>(q), -u.reciprocal().value()), 1e-12));
    }
}

TEST_CASE("norm nesting on the normalized space") {
    GroupCtx ctx = ctx_of(1, 5);
    Rng rng(11);
    for (int i = 0; i < 30; ++i) {
        GridFn f = random_fn(ctx, rng);
        double n1 = lp_norm(f, Exponent(1, 1));
        double n32 = lp_norm(f, Exponent(3, 2));
        double n2 = lp_norm(f, Exponent(2, 1));
        double n7 = lp_norm(f, Exponent(7, 1));
        double ninf = lp_norm(f, Exponent::infinity());
        CHECK(n1 <= n32 * (1 + 1e-12));
        CHECK(n32 <= n2 * (1 + 1e-12));
        CHECK(n2 <= n7 * (1 + 1e-12));
        CHECK(n7 <= ninf * (1 + 1e-12));
    }
}

TEST_CASE("the multilinear form on constants and point masses") {
    for (auto [n, q] : {std::pair{1u, 5u}, {2u, 3u}}) {
        GroupCtx ctx = ctx_of(n, q);
        std::vector<GridFn> ones(2 * n, GridFn::constant(ctx, 1.0));
        CHECK_THAT(lw_form(ctx, ones), WithinRel(1.0, 1e-12));
    }

    // point mass against the constant: the fiber carries q points
    GroupCtx ctx = ctx_of(1, 5);
    std::vector<GridFn> fs{GridFn::indicator(ctx, {7}), GridFn::constant(ctx, 1.0)};
    CHECK_THAT(lw_form(ctx, fs), WithinRel(1.0 / 25.0, 1e-12));

    CHECK_THROWS_AS(lw_form(ctx, std::vector<GridFn>{fs[0]}), Error);
}

TEST_CASE("paper family values") {
    GroupCtx ctx = ctx_of(1, 5);
    auto fam = family_functions(ctx, TestFamily::A);
    CHECK_THAT(bilinear_L(fam[0], fam[1]), WithinRel(1.0 / 25.0, 1e-12));
    CHECK_THAT(lw_form(ctx, fam), WithinRel(1.0 / 25.0, 1e-12));

    // second family: every line y = b1 x + (1 - b1) passes through (1, 1)
    auto famB = family_functions(ctx, TestFamily::B);
    CHECK_THAT(bilinear_L(famB[0], famB[1]), WithinRel(1.0 / 25.0, 1e-12));
}

TEST_CASE("bilinear form equals its quadruple-loop reference") {
    for (uint32_t q : {3u, 5u, 7u}) {
        GroupCtx ctx = ctx_of(1, q);
        Rng rng(q);
        for (int i = 0; i < 20; ++i) {
            GridFn f1 = random_fn(ctx, rng), f2 = random_fn(ctx, rng);
            CHECK_THAT(bilinear_L(f1, f2), WithinRel(L_reference(q, f1, f2), 1e-11));
        }
    }
    GridFn ones = GridFn::constant(ctx_of(1, 7), 1.0);
    CHECK_THAT(bilinear_L(ones, ones), WithinRel(1.0, 1e-12));
}

TEST_CASE("the form, the bilinear form, and the operator agree") {
    // lw = L = <f1, A f2> = <A^T f1, f2> on random pairs
    for (uint32_t q : {3u, 5u, 7u, 11u}) {
        GroupCtx ctx = ctx_of(1, q);
        Rng rng(100 + q);
        for (int i = 0; i < 100; ++i) {
            GridFn f1 = random_fn(ctx, rng), f2 = random_fn(ctx, rng);
            double lw = lw_form(ctx, std::vector<GridFn>{f1, f2});
            double L = bilinear_L(f1, f2);
            double dual = inner(f1, apply_A(f2));
            double dualT = inner(apply_A(f1, true), f2);
            CHECK_THAT(L, WithinRel(lw, 1e-9));
            CHECK_THAT(dual, WithinRel(lw, 1e-9));
            CHECK_THAT(dualT, WithinRel(lw, 1e-9));
        }
    }
}

TEST_CASE("change of variables identity") {
    // lw = (1/q^3) sum f1(x2, t + x1 x2) f2(x1, t), plain % arithmetic
    for (uint32_t q : {3u, 5u, 7u}) {
        GroupCtx ctx = ctx_of(1, q);
        Rng rng(200 + q);
        for (int i = 0; i < 20; ++i) {
            GridFn f1 = random_fn(ctx, rng), f2 = random_fn(ctx, rng);
            double acc = 0;
            for (uint32_t x1 = 0; x1 < q; ++x1)
                for (uint32_t x2 = 0; x2 < q; ++x2)
                    for (uint32_t t = 0; t < q; ++t)
                        acc += f1.at2(x2, (t + x1 * x2) % q) * f2.at2(x1, t);
            acc /= static_cast<double>(q) * q * q;
            CHECK_THAT(lw_form(ctx, std::vector<GridFn>{f1, f2}), WithinRel(acc, 1e-11));
        }
    }
}

TEST_CASE("the form is monotone in each argument") {
    GroupCtx ctx = ctx_of(1, 5);
    Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        GridFn f1 = random_fn(ctx, rng), f2 = random_fn(ctx, rng);
        double before = lw_form(ctx, std::vector<GridFn>{f1, f2});
        GridFn bigger = f1;
        uint64_t cell = rng.below(ctx.plane_count());
        bigger.set(cell, bigger.at(cell) + 1.0);
        CHECK(lw_form(ctx, std::vector<GridFn>{bigger, f2}) >= before - 1e-15);
        GridFn bigger2 = f2;
        bigger2.set(cell, bigger2.at(cell) + 0.5);
        CHECK(lw_form(ctx, std::vector<GridFn>{f1, bigger2}) >= before - 1e-15);
    }
}

TEST_CASE("the averaging operator") {
    GroupCtx ctx = ctx_of(1, 5);
    GridFn ones = GridFn::constant(ctx, 1.0);
    GridFn a1 = apply_A(ones);
    for (uint64_t c = 0; c < ctx.plane_count(); ++c) CHECK_THAT(a1.at(c), WithinRel(1.0, 1e-13));

    // point mass at (b1, b2) maps to (1/q) times the line x2 = b1 x1 + b2
    uint32_t b1 = 2, b2 = 3, q = 5;
    GridFn delta = GridFn::indicator(ctx, {static_cast<uint64_t>(b1) * q + b2});
    GridFn img = apply_A(delta);
    for (uint32_t x1 = 0; x1 < q; ++x1)
        for (uint32_t x2 = 0; x2 < q; ++x2) {
            double expect = ((b1 * x1 + b2) % q == x2) ? 1.0 / q : 0.0;
            CHECK_THAT(img.at2(x1, x2), WithinAbs(expect, 1e-15));
        }

    // mass preservation on nonnegative functions
    Rng rng(23);
    for (int i = 0; i < 50; ++i) {
        GridFn f = random_fn(ctx, rng);
        CHECK_THAT(lp_norm(apply_A(f), Exponent(1, 1)),
                   WithinRel(lp_norm(f, Exponent(1, 1)), 1e-12));
    }

    GroupCtx bad = ctx_of(2, 3);
    CHECK_THROWS_AS(apply_A(GridFn::constant(bad, 1.0)), Error);
    CHECK_THROWS_AS(bilinear_L(GridFn::constant(bad, 1.0), GridFn::constant(bad, 1.0)), Error);
}

TEST_CASE("grid functions validate their values") {
    GroupCtx ctx = ctx_of(1, 3);
    CHECK_THROWS_AS(GridFn::constant(ctx, -1.0), Error);
    std::vector<double> vals(9, 0.0);
    vals[3] = -0.5;
    CHECK_THROWS_AS(GridFn::from_values(ctx, vals), Error);
    vals[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(GridFn::from_values(ctx, vals), Error);
    vals[3] = 1.0;
    CHECK(GridFn::from_values(ctx, vals).at(3) == 1.0);
}

TEST_CASE("exponent arithmetic") {
    CHECK(Exponent(3, 2).conjugate() == Exponent(3, 1));
    CHECK(Exponent(1, 1).conjugate().is_infinite());
    CHECK(Exponent::infinity().conjugate() == Exponent(1, 1));
    CHECK(Exponent::parse("3/2") == Exponent(3, 2));
    CHECK(Exponent::parse("inf").is_infinite());
    CHECK(Exponent(3, 2).reciprocal() == Rat(2, 3));
    CHECK(Exponent::infinity().reciprocal() == Rat(0));
    CHECK_THROWS_AS(Exponent(1, 2), Error);
    CHECK_THROWS_AS(Exponent::parse("x"), Error);
}
