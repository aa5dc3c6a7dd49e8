#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"
#include "grid_fn.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "sets.hpp"

namespace hlw {

// ---------------------------------------------------------------------------
// The boundedness region in the (1/u1, 1/u2) square
// ---------------------------------------------------------------------------

enum class RegionClass { inside, boundary, outside };

inline const char* region_class_name(RegionClass c) {
    switch (c) {
        case RegionClass::inside: return "inside";
        case RegionClass::boundary: return "boundary";
        case RegionClass::outside: return "outside";
    }
    return "?";
}

struct RegionPoint {
    Exponent u1, u2;
    RegionClass cls;
};

/// Classifies (u1, u2) against 1/u1 + 2/u2 <= 2 and 2/u1 + 1/u2 <= 2,
/// in exact rational arithmetic.
inline RegionPoint region_classify(const Exponent& u1, const Exponent& u2) {
    Rat a = u1.reciprocal(), b = u2.reciprocal();
    Rat c1 = a + Rat(2) * b;
    Rat c2 = Rat(2) * a + b;
    RegionClass cls;
    if (c1 > Rat(2) || c2 > Rat(2))
        cls = RegionClass::outside;
    else if (c1 == Rat(2) || c2 == Rat(2))
        cls = RegionClass::boundary;
    else
        cls = RegionClass::inside;
    return {u1, u2, cls};
}

// ---------------------------------------------------------------------------
// Ratio reports
// ---------------------------------------------------------------------------

enum class RatioMethod { exhaustive, ascent, family };

inline const char* ratio_method_name(RatioMethod m) {
    switch (m) {
        case RatioMethod::exhaustive: return "exhaustive";
        case RatioMethod::ascent: return "ascent";
        case RatioMethod::family: return "family";
    }
    return "?";
}

/// Which functional a report's value measures: the multilinear form ratio
/// against the product of norms, or the operator norm ||A f||_r / ||f||_s.
enum class RatioKind { form_ratio, operator_norm };

/// Outcome of a sharp-constant search: a certified lower bound `value`
/// together with the witness tuple attaining it.
struct RatioReport {
    uint32_t q = 0;
    uint32_t n = 1;
    std::vector<Exponent> exponents;
    double value = 0;
    double closed_form = 0;  // family method only
    std::vector<GridFn> witness;
    uint64_t iterations = 0;
    bool converged = false;
    bool degenerate = false;
    RatioMethod method = RatioMethod::family;
    RatioKind kind = RatioKind::form_ratio;
    std::vector<double> trace;  // ascent iterate ratios, one per half-step
};

/// lw_form(fs) / prod ||f_j||_{u_j}; degenerate (all-zero factor) gives 0.
inline std::pair<double, bool> lw_ratio(const GroupCtx& ctx, const std::vector<GridFn>& fs,
                                        const std::vector<Exponent>& us,
                                        const std::vector<std::vector<uint32_t>>* tables = nullptr) {
    require(fs.size() == us.size(), errc::arity_mismatch, "one exponent per function");
    double denom = 1.0;
    for (size_t j = 0; j < fs.size(); ++j) {
        double nj = lp_norm(fs[j], us[j]);
        if (nj == 0.0) return {0.0, true};
        denom *= nj;
    }
    return {lw_form(ctx, fs, tables) / denom, false};
}

/// Re-evaluates a report's value from its stored witness.
inline double reevaluate(const RatioReport& rep) {
    require(!rep.witness.empty(), errc::bad_range, "report carries no witness");
    const GroupCtx& ctx = rep.witness.front().ctx();
    if (rep.kind == RatioKind::operator_norm) {
        require(rep.witness.size() == 1 && rep.exponents.size() == 2, errc::bad_range,
                "operator norm report carries one function and (s, r)");
        const GridFn& f = rep.witness.front();
        double denom = lp_norm(f, rep.exponents[0]);
        if (denom == 0.0) return 0.0;
        return lp_norm(apply_A(f, false), rep.exponents[1]) / denom;
    }
    return lw_ratio(ctx, rep.witness, rep.exponents).first;
}

// ---------------------------------------------------------------------------
// The planar test families
// ---------------------------------------------------------------------------

/// Family A: f1 the indicator of the line {x2 = x1 + 1}, f2 the point mass
/// at (1, 1). Family B: g1 the point mass at (1, 1), g2 the indicator of
/// {x2 = 1 - x1}. Their ratios have the closed forms q^{1/u1 + 2/u2 - 2}
/// and q^{2/u1 + 1/u2 - 2}.
enum class TestFamily { A, B };

inline std::vector<GridFn> family_functions(const GroupCtx& ctx, TestFamily fam) {
    require(ctx.n == 1, errc::wrong_dimension, "test families live in n = 1");
    const FieldCtx& F = ctx.field;
    uint32_t q = F.q;
    std::vector<uint64_t> diag, point;
    point.push_back(static_cast<uint64_t>(1) * q + 1);
    for (uint32_t x1 = 0; x1 < q; ++x1) {
        uint32_t x2 = fam == TestFamily::A ? F.add({x1}, F.one()).code
                                           : F.sub(F.one(), {x1}).code;
        diag.push_back(static_cast<uint64_t>(x1) * q + x2);
    }
    if (fam == TestFamily::A)
        return {GridFn::indicator(ctx, diag), GridFn::indicator(ctx, point)};
    return {GridFn::indicator(ctx, point), GridFn::indicator(ctx, diag)};
}

inline Rat family_closed_form_exponent(TestFamily fam, const Exponent& u1, const Exponent& u2) {
    Rat a = u1.reciprocal(), b = u2.reciprocal();
    return fam == TestFamily::A ? a + Rat(2) * b - Rat(2) : Rat(2) * a + b - Rat(2);
}

inline RatioReport paper_family_ratio(const FieldCtx& F, const Exponent& u1, const Exponent& u2,
                                      TestFamily fam) {
    GroupCtx ctx = GroupCtx::make(1, F);
    RatioReport rep;
    rep.q = F.q;
    rep.n = 1;
    rep.exponents = {u1, u2};
    rep.method = RatioMethod::family;
    rep.witness = family_functions(ctx, fam);
    auto [value, degenerate] = lw_ratio(ctx, rep.witness, rep.exponents);
    rep.value = value;
    rep.degenerate = degenerate;
    rep.converged = true;
    rep.closed_form = std::pow(static_cast<double>(F.q),
                               family_closed_form_exponent(fam, u1, u2).value());
    require(std::abs(rep.value - rep.closed_form) <= 1e-9 * std::max(1.0, rep.closed_form),
            errc::bad_range, "family ratio does not match its closed form");
    return rep;
}

// ---------------------------------------------------------------------------
// Exhaustive indicator search (the brute-force oracle), q = 3
// ---------------------------------------------------------------------------

/// Max over all pairs of nonempty E, F of L(1_E, 1_F) / (||1_E|| ||1_F||),
/// scanning all (2^9 - 1)^2 indicator pairs. Deterministic witness: the
/// lowest (E mask, F mask) attaining the maximum.
inline RatioReport exhaustive_indicator_constant(const FieldCtx& F, const Exponent& u1,
                                                 const Exponent& u2) {
    require(F.q <= 3, errc::too_large, "exhaustive indicator search is gated to q = 3");
    GroupCtx ctx = GroupCtx::make(1, F);
    const uint32_t q = F.q;
    const uint32_t cells = q * q;
    const uint32_t subsets = (1u << cells) - 1;

    // incidence masks: for grid point x (by rank), the set of y incident to it
    std::vector<uint32_t> line_mask(cells, 0);
    for (uint32_t x1 = 0; x1 < q; ++x1)
        for (uint32_t x2 = 0; x2 < q; ++x2) {
            uint32_t mask = 0;
            for (uint32_t y1 = 0; y1 < q; ++y1) {
                uint32_t y2 = F.sub({x2}, F.mul({x1}, {y1})).code;
                mask |= 1u << (y1 * q + y2);
            }
            line_mask[x1 * q + x2] = mask;
        }

    auto norm_of = [&](uint32_t size, const Exponent& u) {
        if (u.is_infinite()) return 1.0;
        return std::pow(static_cast<double>(size) / cells, u.reciprocal().value());
    };
    // |E| and |F| range over 1..9; precompute the norm factors
    std::vector<double> norm1(cells + 1), norm2(cells + 1);
    for (uint32_t s = 1; s <= cells; ++s) {
        norm1[s] = norm_of(s, u1);
        norm2[s] = norm_of(s, u2);
    }

    double best = -1.0;
    uint32_t best_e = 0, best_f = 0;
    const double inv_q3 = 1.0 / (static_cast<double>(q) * q * q);
    for (uint32_t e = 1; e <= subsets; ++e) {
        int esz = __builtin_popcount(e);
        for (uint32_t f = 1; f <= subsets; ++f) {
            uint64_t count = 0;
            uint32_t rest = e;
            while (rest) {
                uint32_t x = __builtin_ctz(rest);
                rest &= rest - 1;
                count += __builtin_popcount(line_mask[x] & f);
            }
            double ratio = (static_cast<double>(count) * inv_q3) /
                           (norm1[esz] * norm2[__builtin_popcount(f)]);
            if (ratio > best) {
                best = ratio;
                best_e = e;
                best_f = f;
            }
        }
    }

    auto mask_to_fn = [&](uint32_t mask) {
        std::vector<uint64_t> ranks;
        for (uint32_t c = 0; c < cells; ++c)
            if (mask & (1u << c)) ranks.push_back(c);
        return GridFn::indicator(ctx, ranks);
    };
    RatioReport rep;
    rep.q = q;
    rep.n = 1;
    rep.exponents = {u1, u2};
    rep.value = best;
    rep.witness = {mask_to_fn(best_e), mask_to_fn(best_f)};
    rep.iterations = static_cast<uint64_t>(subsets) * subsets;
    rep.converged = true;
    rep.method = RatioMethod::exhaustive;
    return rep;
}

// ---------------------------------------------------------------------------
// Alternating maximization over nonnegative tuples
// ---------------------------------------------------------------------------

struct AscentOptions {
    uint32_t restarts = 32;
    uint32_t max_iter = 100;  // full sweeps over the 2n slots
    double tol = 1e-10;
    uint64_t seed = 0;
    bool record_trace = false;
};

/// Lower-bounds the best constant of the 2n-linear form by cyclic exact
/// maximization: with all other factors fixed, the optimal f_k is the
/// Holder-equality profile g^{u_k' - 1}, where g is the partial form summed
/// along the fibers of pi_k. Each half-step can only raise the ratio, so
/// the iterate sequence is nondecreasing.
inline RatioReport extremize_ratio(const GroupCtx& ctx, const std::vector<Exponent>& us,
                                   const AscentOptions& opts = {}) {
    require(us.size() == 2 * ctx.n, errc::arity_mismatch, "need exactly 2n exponents");
    for (const auto& u : us)
        require(!u.is_one() && !u.is_infinite(), errc::bad_exponent,
                "endpoint exponents have closed forms; ascent needs 1 < u < inf");

    auto tables = all_projection_tables(ctx);
    const uint64_t points = ctx.point_count();
    const uint64_t cells = ctx.plane_count();
    const double q = static_cast<double>(ctx.q());

    RatioReport best;
    best.q = ctx.q();
    best.n = ctx.n;
    best.exponents = us;
    best.method = RatioMethod::ascent;
    best.value = -1.0;

    for (uint32_t restart = 0; restart < opts.restarts; ++restart) {
        Rng rng = Rng::for_item(opts.seed, restart);
        std::vector<GridFn> fs;
        for (uint32_t j = 0; j < 2 * ctx.n; ++j) {
            GridFn f = GridFn::constant(ctx, 1.0);
            if (restart > 0) {
                for (uint64_t c = 0; c < cells; ++c) f.set(c, rng.uniform_pos());
            }
            double nj = lp_norm(f, us[j]);
            for (uint64_t c = 0; c < cells; ++c) f.set(c, f.at(c) / nj);
            fs.push_back(std::move(f));
        }

        double ratio = 0.0, prev = -1.0;
        bool degenerate = false, converged = false;
        std::vector<double> trace;
        uint64_t sweeps = 0;
        std::vector<double> g(cells);

        for (; sweeps < opts.max_iter && !converged && !degenerate; ++sweeps) {
            for (uint32_t k = 0; k < 2 * ctx.n; ++k) {
                std::fill(g.begin(), g.end(), 0.0);
                for (uint64_t r = 0; r < points; ++r) {
                    double prod = 1.0;
                    for (uint32_t j = 0; j < 2 * ctx.n; ++j) {
                        if (j == k) continue;
                        prod *= fs[j].at(tables[j][r]);
                        if (prod == 0.0) break;
                    }
                    if (prod != 0.0) g[tables[k][r]] += prod;
                }
                for (auto& v : g) v /= q;

                Exponent conj = us[k].conjugate();
                GridFn gf = GridFn::from_values(ctx, g);
                ratio = lp_norm(gf, conj);  // all other factors are unit norm
                if (opts.record_trace) trace.push_back(ratio);
                if (ratio == 0.0) {
                    degenerate = true;
                    break;
                }
                double expo = conj.value() - 1.0;
                for (uint64_t c = 0; c < cells; ++c) gf.set(c, std::pow(g[c], expo));
                double nk = lp_norm(gf, us[k]);
                for (uint64_t c = 0; c < cells; ++c) fs[k].set(c, gf.at(c) / nk);
            }
            if (prev >= 0 && std::abs(ratio - prev) <= opts.tol * std::max(1.0, ratio))
                converged = true;
            prev = ratio;
        }

        if (ratio > best.value) {
            best.value = ratio;
            best.witness = fs;
            best.iterations = sweeps;
            best.converged = converged;
            best.degenerate = degenerate;
            best.trace = std::move(trace);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Operator norm endpoints and lower bounds
// ---------------------------------------------------------------------------

struct EndpointNorms {
    double a_1to1 = 0;
    double a_inf_to_inf = 0;
};

/// A(1 -> 1) as the max ratio over point masses (the extreme rays of the
/// positive L^1 ball) and A(inf -> inf) = ||A 1||_inf. Both are exactly 1
/// for this kernel: A preserves the mass of nonnegative functions and
/// fixes constants.
inline EndpointNorms endpoint_opnorms(const FieldCtx& F) {
    GroupCtx ctx = GroupCtx::make(1, F);
    uint32_t q = F.q;
    Exponent one(Rat(1));
    EndpointNorms out;
    for (uint64_t cell = 0; cell < static_cast<uint64_t>(q) * q; ++cell) {
        GridFn delta = GridFn::indicator(ctx, {cell});
        double ratio = lp_norm(apply_A(delta), one) / lp_norm(delta, one);
        out.a_1to1 = std::max(out.a_1to1, ratio);
    }
    GridFn ones = GridFn::constant(ctx, 1.0);
    out.a_inf_to_inf = lp_norm(apply_A(ones), Exponent::infinity());
    return out;
}

/// Nonlinear power-iteration lower bound for A(s -> r): alternate
/// f <- (A^T (A f)^{r-1})^{1/(s-1)} from seeded restarts and keep the best
/// ratio ||A f||_r with ||f||_s = 1. Restart 0 is the all-ones function,
/// whose ratio is exactly 1.
inline RatioReport opnorm_lower_bound(const FieldCtx& F, const Exponent& s, const Exponent& r,
                                      const AscentOptions& opts = {}) {
    require(!s.is_one() && !s.is_infinite() && !r.is_one() && !r.is_infinite(),
            errc::bad_exponent, "power iteration needs 1 < s, r < inf");
    GroupCtx ctx = GroupCtx::make(1, F);
    uint64_t cells = ctx.plane_count();

    RatioReport best;
    best.q = F.q;
    best.n = 1;
    best.exponents = {s, r};
    best.method = RatioMethod::ascent;
    best.value = -1.0;

    for (uint32_t restart = 0; restart < opts.restarts; ++restart) {
        Rng rng = Rng::for_item(opts.seed, restart);
        GridFn f = GridFn::constant(ctx, 1.0);
        if (restart > 0)
            for (uint64_t c = 0; c < cells; ++c) f.set(c, rng.uniform_pos());
        double ns = lp_norm(f, s);
        for (uint64_t c = 0; c < cells; ++c) f.set(c, f.at(c) / ns);

        double prev = -1.0, ratio = 0.0;
        bool converged = false;
        uint64_t iters = 0;
        GridFn best_f = f;
        double best_ratio = -1.0;
        for (; iters < opts.max_iter && !converged; ++iters) {
            GridFn h = apply_A(f);
            ratio = lp_norm(h, r);
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best_f = f;
            }
            if (ratio == 0.0) break;
            GridFn u = h;
            double rr = r.value();
            for (uint64_t c = 0; c < cells; ++c) u.set(c, std::pow(h.at(c), rr - 1.0));
            GridFn w = apply_A(u, /*adjoint=*/true);
            double se = 1.0 / (s.value() - 1.0);
            for (uint64_t c = 0; c < cells; ++c) f.set(c, std::pow(w.at(c), se));
            ns = lp_norm(f, s);
            if (ns == 0.0) break;
            for (uint64_t c = 0; c < cells; ++c) f.set(c, f.at(c) / ns);
            if (prev >= 0 && std::abs(ratio - prev) <= opts.tol * std::max(1.0, ratio))
                converged = true;
            prev = ratio;
        }
        if (best_ratio > best.value) {
            best.value = best_ratio;
            best.witness = {best_f};
            best.iterations = iters;
            best.converged = converged;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Mixed-exponent ratio corpus
// ---------------------------------------------------------------------------

struct MixedCheckPlan {
    uint64_t random_tuples = 200;
    uint64_t indicator_tuples = 50;
    uint64_t seed = 0;
};

struct MixedCheckReport {
    uint32_t k = 0;  // 0 means the uniform-exponent variant
    std::vector<Exponent> exponents;
    double max_ratio = 0;
    std::string max_source;
    bool families_exact = true;       // sharp families hit ratio 1 exactly
    std::vector<double> family_ratios;
    uint64_t tuples = 0;
};

/// Exponent tuple of the mixed inequality: (2n+1)/2 at slots k and n+k,
/// 2n+1 elsewhere; k = 0 selects the uniform exponent n(2n+1)/(n+1).
inline std::vector<Exponent> mixed_exponents(uint32_t n, uint32_t k) {
    require(k <= n, errc::bad_axis, "k must lie in 0..n");
    if (k == 0)
        return std::vector<Exponent>(2 * n,
                                     Exponent(Rat(static_cast<long long>(n) * (2 * n + 1), n + 1)));
    std::vector<Exponent> us(2 * n, Exponent(Rat(2 * n + 1)));
    us[k - 1] = Exponent(Rat(2 * n + 1, 2));
    us[n + k - 1] = Exponent(Rat(2 * n + 1, 2));
    return us;
}

/// Ratio corpus for the mixed and uniform exponent inequalities: random
/// tuples, random indicator tuples, and the sharp families, whose ratios
/// must equal 1 in exact power-of-q arithmetic.
inline MixedCheckReport mixed_exponent_check(const GroupCtx& ctx, uint32_t k,
                                             const MixedCheckPlan& plan = {}) {
    MixedCheckReport rep;
    rep.k = k;
    rep.exponents = mixed_exponents(ctx.n, k);
    auto tables = all_projection_tables(ctx);
    const uint64_t cells = ctx.plane_count();

    auto consider = [&](double value, const std::string& tag) {
        if (value > rep.max_ratio) {
            rep.max_ratio = value;
            rep.max_source = tag;
        }
    };

    // sharp families: indicators of the projections of the extremal sets
    std::vector<std::pair<std::string, HSubset>> families;
    families.emplace_back("flat", sharp_example(ctx, SharpKind::flat, SharpParams{}));
    if (ctx.n == 1) {
        SharpParams line_params;
        line_params.t0 = ctx.field.from_int(1);
        families.emplace_back("line", sharp_example(ctx, SharpKind::line_t0, line_params));
    }
    for (auto& [tag, K] : families) {
        std::vector<GridFn> fs;
        std::vector<uint64_t> proj_sizes;
        for (uint32_t j = 1; j <= 2 * ctx.n; ++j) {
            auto image = projection_image(K, j);
            proj_sizes.push_back(image.size());
            fs.push_back(GridFn::indicator(ctx, image));
        }
        // integer numerator: the tuple is 0/1-valued
        uint64_t count = 0;
        for (uint64_t r = 0; r < ctx.point_count(); ++r) {
            bool all = true;
            for (uint32_t j = 0; j < 2 * ctx.n && all; ++j)
                all = fs[j].at(tables[j][r]) != 0.0;
            count += all;
        }
        // exact power-of-q exponent comparison
        bool exact = true;
        auto ce = exact_power_of(count, ctx.q());
        Rat lhs_exp = ce ? Rat(*ce) - Rat(2 * ctx.n + 1) : Rat(0);
        Rat rhs_exp(0);
        if (!ce) exact = false;
        for (uint32_t j = 0; j < 2 * ctx.n && exact; ++j) {
            auto pe = exact_power_of(proj_sizes[j], ctx.q());
            if (!pe) {
                exact = false;
                break;
            }
            rhs_exp = rhs_exp + rep.exponents[j].reciprocal() * (Rat(*pe) - Rat(2 * ctx.n));
        }
        bool family_exact = exact && lhs_exp == rhs_exp;
        rep.families_exact = rep.families_exact && family_exact;
        auto [value, degenerate] = lw_ratio(ctx, fs, rep.exponents, &tables);
        (void)degenerate;
        rep.family_ratios.push_back(family_exact ? 1.0 : value);
        consider(value, tag);
        ++rep.tuples;
    }

    // random nonnegative tuples
    for (uint64_t i = 0; i < plan.random_tuples; ++i) {
        Rng rng = Rng::for_item(plan.seed, i);
        std::vector<GridFn> fs;
        for (uint32_t j = 0; j < 2 * ctx.n; ++j) {
            GridFn f = GridFn::zero(ctx);
            for (uint64_t c = 0; c < cells; ++c) f.set(c, rng.uniform());
            fs.push_back(std::move(f));
        }
        auto [value, degenerate] = lw_ratio(ctx, fs, rep.exponents, &tables);
        if (!degenerate) consider(value, "random:" + std::to_string(i));
        ++rep.tuples;
    }

    // random indicator tuples
    for (uint64_t i = 0; i < plan.indicator_tuples; ++i) {
        Rng rng = Rng::for_item(plan.seed ^ 0x5eedf00dULL, i);
        std::vector<GridFn> fs;
        for (uint32_t j = 0; j < 2 * ctx.n; ++j) {
            GridFn f = GridFn::zero(ctx);
            for (uint64_t c = 0; c < cells; ++c)
                if (rng.bernoulli(0.5)) f.set(c, 1.0);
            fs.push_back(std::move(f));
        }
        auto [value, degenerate] = lw_ratio(ctx, fs, rep.exponents, &tables);
        if (!degenerate) consider(value, "indicator:" + std::to_string(i));
        ++rep.tuples;
    }
    return rep;
}

}  // namespace hlw
