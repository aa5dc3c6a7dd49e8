#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "error.hpp"
#include "group.hpp"
#include "rational.hpp"

namespace hlw {

/// Compensated (Kahan) accumulator. Ratio checks run at 1e-9 relative
/// tolerance, so every form below sums through this in a fixed order.
class KahanSum {
public:
    void add(double v) {
        double y = v - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

/// A nonnegative real-valued function on F_q^{2n}, stored densely by plane
/// rank (y_1, ..., y_{2n-1}, t). Values are validated as finite and >= 0 at
/// construction; treat instances as immutable once handed to a form.
class GridFn {
public:
    GridFn() = default;

    static GridFn constant(const GroupCtx& ctx, double v) {
        require(v >= 0 && std::isfinite(v), errc::bad_range, "grid values must be nonnegative");
        GridFn f;
        f.ctx_ = ctx;
        f.v_.assign(ctx.plane_count(), v);
        return f;
    }

    static GridFn zero(const GroupCtx& ctx) { return constant(ctx, 0.0); }

    static GridFn from_values(const GroupCtx& ctx, std::vector<double> values) {
        require(values.size() == ctx.plane_count(), errc::wrong_dimension,
                "value table has wrong length");
        for (double v : values)
            require(v >= 0 && std::isfinite(v), errc::bad_range,
                    "grid values must be nonnegative and finite");
        GridFn f;
        f.ctx_ = ctx;
        f.v_ = std::move(values);
        return f;
    }

    /// Indicator of a plane-rank set.
    static GridFn indicator(const GroupCtx& ctx, const std::vector<uint64_t>& ranks) {
        GridFn f = zero(ctx);
        for (uint64_t r : ranks) f.v_.at(r) = 1.0;
        return f;
    }

    const GroupCtx& ctx() const { return ctx_; }
    uint64_t size() const { return v_.size(); }
    double at(uint64_t rank) const { return v_[rank]; }
    void set(uint64_t rank, double v) {
        require(v >= 0 && std::isfinite(v), errc::bad_range, "grid values must be nonnegative");
        v_[rank] = v;
    }
    const std::vector<double>& values() const { return v_; }

    /// Value at the plane point (a, b) of F_q^2; only for n = 1.
    double at2(uint32_t a, uint32_t b) const { return v_[static_cast<uint64_t>(a) * ctx_.q() + b]; }

private:
    GroupCtx ctx_;
    std::vector<double> v_;
};

/// Normalized L^u norm: ((1/q^{2n}) sum f^u)^(1/u), max for u = inf.
inline double lp_norm(const GridFn& f, const Exponent& u) {
    if (u.is_infinite()) {
        double m = 0;
        for (double v : f.values()) m = std::max(m, v);
        return m;
    }
    double uu = u.value();
    KahanSum acc;
    if (u.is_one()) {
        for (double v : f.values()) acc.add(v);
    } else {
        for (double v : f.values()) acc.add(std::pow(v, uu));
    }
    double mean = acc.value() / static_cast<double>(f.size());
    return u.is_one() ? mean : std::pow(mean, 1.0 / uu);
}

/// Normalized inner product (1/q^{2n}) sum f g.
inline double inner(const GridFn& f, const GridFn& g) {
    require(f.ctx() == g.ctx(), errc::context_mismatch, "inner product across contexts");
    KahanSum acc;
    for (uint64_t i = 0; i < f.size(); ++i) acc.add(f.at(i) * g.at(i));
    return acc.value() / static_cast<double>(f.size());
}

/// Rank table of pi_j: entry [rank of point] = plane rank of its projection.
/// The forms below walk these tables instead of re-projecting point objects.
inline std::vector<uint32_t> projection_rank_table(const GroupCtx& ctx, uint32_t j) {
    uint64_t total = ctx.point_count();
    require(total <= std::numeric_limits<uint32_t>::max(), errc::too_large,
            "projection table over too many points");
    std::vector<uint32_t> table(total);
    for (uint64_t r = 0; r < total; ++r)
        table[r] = static_cast<uint32_t>(plane_rank(ctx, project(ctx, j, point_unrank(ctx, r))));
    return table;
}

inline std::vector<std::vector<uint32_t>> all_projection_tables(const GroupCtx& ctx) {
    std::vector<std::vector<uint32_t>> tabs;
    tabs.reserve(2 * ctx.n);
    for (uint32_t j = 1; j <= 2 * ctx.n; ++j) tabs.push_back(projection_rank_table(ctx, j));
    return tabs;
}

/// The multilinear Loomis-Whitney form
///   (1/q^{2n+1}) sum_{(x,t)} prod_j f_j(pi_j(x,t)).
inline double lw_form(const GroupCtx& ctx, std::span<const GridFn> fs,
                      const std::vector<std::vector<uint32_t>>* tables = nullptr) {
    require(fs.size() == 2 * ctx.n, errc::arity_mismatch,
            "the form takes exactly 2n functions");
    for (const GridFn& f : fs)
        require(f.ctx() == ctx, errc::context_mismatch, "function on a different context");
    std::vector<std::vector<uint32_t>> own;
    if (!tables) {
        own = all_projection_tables(ctx);
        tables = &own;
    }
    uint64_t total = ctx.point_count();
    KahanSum acc;
    for (uint64_t r = 0; r < total; ++r) {
        double prod = 1.0;
        for (uint32_t j = 0; j < 2 * ctx.n; ++j) {
            prod *= fs[j].at((*tables)[j][r]);
            if (prod == 0.0) break;
        }
        acc.add(prod);
    }
    return acc.value() / static_cast<double>(total);
}

inline double lw_form(const GroupCtx& ctx, const std::vector<GridFn>& fs,
                      const std::vector<std::vector<uint32_t>>* tables = nullptr) {
    return lw_form(ctx, std::span<const GridFn>(fs.data(), fs.size()), tables);
}

/// The planar bilinear form
///   L(f1, f2) = (1/q^3) sum_{x1 y1 + y2 = x2} f1(x) f2(y),
/// summed as (1/q^3) sum_{x1, y1, y2} f1(x1, x1 y1 + y2) f2(y1, y2).
inline double bilinear_L(const GridFn& f1, const GridFn& f2) {
    const GroupCtx& ctx = f1.ctx();
    require(ctx.n == 1, errc::wrong_dimension, "the bilinear form lives on n = 1");
    require(f2.ctx() == ctx, errc::context_mismatch, "mismatched contexts");
    const FieldCtx& F = ctx.field;
    uint32_t q = F.q;
    KahanSum acc;
    for (uint32_t x1 = 0; x1 < q; ++x1) {
        for (uint32_t y1 = 0; y1 < q; ++y1) {
            FieldElem x1y1 = F.mul({x1}, {y1});
            for (uint32_t y2 = 0; y2 < q; ++y2) {
                uint32_t x2 = F.add(x1y1, {y2}).code;
                acc.add(f1.at2(x1, x2) * f2.at2(y1, y2));
            }
        }
    }
    return acc.value() / (static_cast<double>(q) * q * q);
}

/// The averaging endomorphism (A f)(x) = (1/q) sum_{x1 y1 + y2 = x2} f(y),
/// and its adjoint under the normalized inner product.
inline GridFn apply_A(const GridFn& f, bool adjoint = false) {
    const GroupCtx& ctx = f.ctx();
    require(ctx.n == 1, errc::wrong_dimension, "the operator A lives on n = 1");
    const FieldCtx& F = ctx.field;
    uint32_t q = F.q;
    GridFn out = GridFn::zero(ctx);
    for (uint32_t a = 0; a < q; ++a) {
        for (uint32_t b = 0; b < q; ++b) {
            KahanSum acc;
            if (!adjoint) {
                // (A f)(a, b) sums f over the incident line y2 = b - a y1
                for (uint32_t y1 = 0; y1 < q; ++y1) {
                    uint32_t y2 = F.sub({b}, F.mul({a}, {y1})).code;
                    acc.add(f.at2(y1, y2));
                }
            } else {
                // (A^T f)(a, b) sums f over the point set x2 = x1 a + b
                for (uint32_t x1 = 0; x1 < q; ++x1) {
                    uint32_t x2 = F.add(F.mul({x1}, {a}), {b}).code;
                    acc.add(f.at2(x1, x2));
                }
            }
            out.set(static_cast<uint64_t>(a) * q + b, acc.value() / q);
        }
    }
    return out;
}

}  // namespace hlw
