#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

#include "error.hpp"
#include "field.hpp"

namespace hlw {

/// The n-th Heisenberg group over F_q: points (x, t) with x in F_q^{2n}
/// and t in F_q, multiplied by
///   (x, t) (x', t') = (x + x', t + t' + (1/2) sum_j (x_j x'_{n+j} - x_{n+j} x'_j)).
struct GroupCtx {
    FieldCtx field;
    uint32_t n = 1;

    static GroupCtx make(uint32_t n, FieldCtx field) {
        require(n >= 1, errc::bad_range, "n must be positive");
        // rank arithmetic stays inside uint64
        long double size = 1.0L;
        for (uint32_t i = 0; i < 2 * n + 1; ++i) size *= field.q;
        require(size < 9.2e18L, errc::too_large, "point count exceeds 64-bit range");
        return GroupCtx{std::move(field), n};
    }

    uint32_t dim() const { return 2 * n + 1; }
    uint32_t q() const { return field.q; }

    uint64_t point_count() const {
        uint64_t c = 1;
        for (uint32_t i = 0; i < dim(); ++i) c *= field.q;
        return c;
    }
    uint64_t plane_count() const { return point_count() / field.q; }

    friend bool operator==(const GroupCtx& a, const GroupCtx& b) {
        return a.n == b.n && a.field == b.field;
    }
    friend bool operator!=(const GroupCtx& a, const GroupCtx& b) { return !(a == b); }
};

/// A group point (x, t); x has length 2n for the owning context.
struct HPoint {
    std::vector<FieldElem> x;
    FieldElem t;

    friend bool operator==(const HPoint& a, const HPoint& b) { return a.x == b.x && a.t == b.t; }
    friend bool operator!=(const HPoint& a, const HPoint& b) { return !(a == b); }
};

/// A point of the identified vertical hyperplane W_j = F_q^{2n}: the
/// coordinate dropped by the projection is removed, so y has length 2n - 1.
/// Keeping this type distinct from HPoint guards the identification step,
/// which is where off-by-one-coordinate bugs like to hide.
struct PlanePoint {
    std::vector<FieldElem> y;
    FieldElem t;

    friend bool operator==(const PlanePoint& a, const PlanePoint& b) {
        return a.y == b.y && a.t == b.t;
    }
    friend bool operator!=(const PlanePoint& a, const PlanePoint& b) { return !(a == b); }
};

namespace detail {
inline void check_point(const GroupCtx& ctx, const HPoint& a) {
    require(a.x.size() == 2 * ctx.n, errc::context_mismatch, "point has wrong x-length");
    assert(a.t.code < ctx.field.q);
}
inline void check_axis(const GroupCtx& ctx, uint32_t j) {
    require(j >= 1 && j <= 2 * ctx.n, errc::bad_axis, "axis out of range");
}
}  // namespace detail

/// Sign convention shared by project / fiber / straighten: the t-shift for
/// axis j is sign * (1/2) x_lo x_hi with {lo, hi} = {j, partner}. The +/-
/// split between the first and second block of axes makes the decomposition
/// (x, t) = pi_j(x, t) (x_j e_j, 0) hold for every j.
struct AxisRule {
    uint32_t j;        // 1-based axis
    uint32_t partner;  // the symplectically paired axis, 1-based
    bool positive;     // + for j <= n, - for j > n
};

inline AxisRule axis_rule(const GroupCtx& ctx, uint32_t j) {
    detail::check_axis(ctx, j);
    if (j <= ctx.n) return {j, j + ctx.n, true};
    return {j, j - ctx.n, false};
}

inline HPoint identity(const GroupCtx& ctx) {
    return HPoint{std::vector<FieldElem>(2 * ctx.n, FieldElem{0}), FieldElem{0}};
}

/// The symplectic form w(x, x') = sum_i (x_i x'_{n+i} - x'_i x_{n+i}).
inline FieldElem symplectic(const GroupCtx& ctx, const std::vector<FieldElem>& x,
                            const std::vector<FieldElem>& y) {
    require(x.size() == 2 * ctx.n && y.size() == 2 * ctx.n, errc::context_mismatch,
            "symplectic form needs two 2n-vectors");
    const FieldCtx& F = ctx.field;
    FieldElem acc = F.zero();
    for (uint32_t i = 0; i < ctx.n; ++i) {
        acc = F.add(acc, F.mul(x[i], y[ctx.n + i]));
        acc = F.sub(acc, F.mul(y[i], x[ctx.n + i]));
    }
    return acc;
}

inline HPoint mul(const GroupCtx& ctx, const HPoint& a, const HPoint& b) {
    detail::check_point(ctx, a);
    detail::check_point(ctx, b);
    const FieldCtx& F = ctx.field;
    HPoint out;
    out.x.resize(2 * ctx.n);
    for (uint32_t i = 0; i < 2 * ctx.n; ++i) out.x[i] = F.add(a.x[i], b.x[i]);
    FieldElem twist = F.half(symplectic(ctx, a.x, b.x));
    out.t = F.add(F.add(a.t, b.t), twist);
    return out;
}

/// (-x, -t); the symplectic form vanishes on (x, -x), so no twist appears.
inline HPoint inverse(const GroupCtx& ctx, const HPoint& a) {
    detail::check_point(ctx, a);
    const FieldCtx& F = ctx.field;
    HPoint out;
    out.x.resize(2 * ctx.n);
    for (uint32_t i = 0; i < 2 * ctx.n; ++i) out.x[i] = F.neg(a.x[i]);
    out.t = F.neg(a.t);
    return out;
}

/// Lexicographic rank of (x_1, ..., x_2n, t) in [0, q^{2n+1}).
inline uint64_t point_rank(const GroupCtx& ctx, const HPoint& a) {
    detail::check_point(ctx, a);
    uint64_t rank = 0;
    for (auto e : a.x) rank = rank * ctx.field.q + e.code;
    return rank * ctx.field.q + a.t.code;
}

inline HPoint point_unrank(const GroupCtx& ctx, uint64_t rank) {
    HPoint a;
    a.x.resize(2 * ctx.n);
    a.t = {static_cast<uint32_t>(rank % ctx.field.q)};
    rank /= ctx.field.q;
    for (uint32_t i = 2 * ctx.n; i-- > 0;) {
        a.x[i] = {static_cast<uint32_t>(rank % ctx.field.q)};
        rank /= ctx.field.q;
    }
    return a;
}

/// Lexicographic rank of (y_1, ..., y_{2n-1}, t) in [0, q^{2n}).
inline uint64_t plane_rank(const GroupCtx& ctx, const PlanePoint& w) {
    require(w.y.size() == 2 * ctx.n - 1, errc::context_mismatch, "plane point has wrong length");
    uint64_t rank = 0;
    for (auto e : w.y) rank = rank * ctx.field.q + e.code;
    return rank * ctx.field.q + w.t.code;
}

inline PlanePoint plane_unrank(const GroupCtx& ctx, uint64_t rank) {
    PlanePoint w;
    w.y.resize(2 * ctx.n - 1);
    w.t = {static_cast<uint32_t>(rank % ctx.field.q)};
    rank /= ctx.field.q;
    for (uint32_t i = 2 * ctx.n - 1; i-- > 0;) {
        w.y[i] = {static_cast<uint32_t>(rank % ctx.field.q)};
        rank /= ctx.field.q;
    }
    return w;
}

namespace detail {
/// sign * (1/2) x_j x_partner for the axis rule.
inline FieldElem axis_shift(const GroupCtx& ctx, const AxisRule& rule,
                            const std::vector<FieldElem>& x) {
    const FieldCtx& F = ctx.field;
    FieldElem s = F.half(F.mul(x[rule.j - 1], x[rule.partner - 1]));
    return rule.positive ? s : F.neg(s);
}
}  // namespace detail

/// pi_j in identified coordinates: drop x_j, shift t by +-(1/2) x_j x_partner.
inline PlanePoint project(const GroupCtx& ctx, uint32_t j, const HPoint& a) {
    detail::check_point(ctx, a);
    AxisRule rule = axis_rule(ctx, j);
    PlanePoint w;
    w.y.reserve(2 * ctx.n - 1);
    for (uint32_t i = 0; i < 2 * ctx.n; ++i)
        if (i != j - 1) w.y.push_back(a.x[i]);
    w.t = ctx.field.add(a.t, detail::axis_shift(ctx, rule, a.x));
    return w;
}

/// The horizontal and vertical projections (pi_h, pi_v) = (x, t).
inline std::pair<std::vector<FieldElem>, FieldElem> hv_project(const GroupCtx& ctx,
                                                               const HPoint& a) {
    detail::check_point(ctx, a);
    return {a.x, a.t};
}

/// Reinserts the dropped coordinate as 0: the W_j representative of a plane
/// point, as a group element.
inline HPoint unidentify(const GroupCtx& ctx, uint32_t j, const PlanePoint& w) {
    detail::check_axis(ctx, j);
    require(w.y.size() == 2 * ctx.n - 1, errc::context_mismatch, "plane point has wrong length");
    HPoint u;
    u.x.reserve(2 * ctx.n);
    for (uint32_t i = 0; i < 2 * ctx.n - 1; ++i) {
        if (i == j - 1) u.x.push_back(ctx.field.zero());
        u.x.push_back(w.y[i]);
    }
    if (j == 2 * ctx.n) u.x.push_back(ctx.field.zero());
    u.t = w.t;
    return u;
}

/// The fiber of pi_j over a plane point: q points forming the left coset
/// (u, tau) L_j of the coordinate line L_j.
inline std::vector<HPoint> fiber(const GroupCtx& ctx, uint32_t j, const PlanePoint& base) {
    AxisRule rule = axis_rule(ctx, j);
    HPoint u = unidentify(ctx, j, base);
    const FieldCtx& F = ctx.field;
    std::vector<HPoint> out;
    out.reserve(F.q);
    for (uint32_t s = 0; s < F.q; ++s) {
        HPoint pt = u;
        pt.x[j - 1] = {s};
        FieldElem shift = F.half(F.mul(u.x[rule.partner - 1], FieldElem{s}));
        pt.t = rule.positive ? F.sub(u.t, shift) : F.add(u.t, shift);
        out.push_back(std::move(pt));
    }
    return out;
}

/// Splits a as base * shift with base in W_j (the unidentified projection)
/// and shift = (x_j e_j, 0) in L_j.
inline std::pair<HPoint, HPoint> decompose(const GroupCtx& ctx, uint32_t j, const HPoint& a) {
    PlanePoint w = project(ctx, j, a);
    HPoint base = unidentify(ctx, j, w);
    HPoint shift = identity(ctx);
    shift.x[j - 1] = a.x[j - 1];
    return {std::move(base), std::move(shift)};
}

/// The straightening bijection T_j: fixes x, shifts t so that each pi_j
/// fiber becomes an additive translate of L_j.
inline HPoint straighten(const GroupCtx& ctx, uint32_t j, const HPoint& a) {
    detail::check_point(ctx, a);
    AxisRule rule = axis_rule(ctx, j);
    HPoint out = a;
    out.t = ctx.field.add(a.t, detail::axis_shift(ctx, rule, a.x));
    return out;
}

/// The dilation s . (x, t) = (s x, s^2 t) for s in F_q^*.
inline HPoint dilate(const GroupCtx& ctx, FieldElem s, const HPoint& a) {
    detail::check_point(ctx, a);
    require(s.code != 0, errc::zero_scalar, "dilation by zero");
    const FieldCtx& F = ctx.field;
    HPoint out;
    out.x.resize(2 * ctx.n);
    for (uint32_t i = 0; i < 2 * ctx.n; ++i) out.x[i] = F.mul(s, a.x[i]);
    out.t = F.mul(F.mul(s, s), a.t);
    return out;
}

/// Dilation orbit of a point, deduplicated, in rank order.
inline std::vector<HPoint> orbit(const GroupCtx& ctx, const HPoint& a) {
    std::vector<uint64_t> ranks;
    for (uint32_t s = 1; s < ctx.field.q; ++s)
        ranks.push_back(point_rank(ctx, dilate(ctx, FieldElem{s}, a)));
    std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    std::vector<HPoint> out;
    out.reserve(ranks.size());
    for (uint64_t r : ranks) out.push_back(point_unrank(ctx, r));
    return out;
}

/// Membership structure over the q^{2n+1} points of the group.
class HSubset {
public:
    HSubset() = default;
    explicit HSubset(GroupCtx ctx)
        : ctx_(std::move(ctx)), bits_((ctx_.point_count() + 63) / 64, 0), size_(0) {}

    const GroupCtx& ctx() const { return ctx_; }
    uint64_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool contains(uint64_t rank) const { return (bits_[rank >> 6] >> (rank & 63)) & 1; }
    bool contains(const HPoint& a) const { return contains(point_rank(ctx_, a)); }

    void insert(uint64_t rank) {
        uint64_t mask = 1ull << (rank & 63);
        if (!(bits_[rank >> 6] & mask)) {
            bits_[rank >> 6] |= mask;
            ++size_;
        }
    }
    void insert(const HPoint& a) { insert(point_rank(ctx_, a)); }

    /// Sorted rank list; the canonical serialized form.
    std::vector<uint64_t> ranks() const {
        std::vector<uint64_t> out;
        out.reserve(size_);
        uint64_t total = ctx_.point_count();
        for (uint64_t r = 0; r < total; ++r)
            if (contains(r)) out.push_back(r);
        return out;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        uint64_t total = ctx_.point_count();
        for (uint64_t r = 0; r < total; ++r)
            if (contains(r)) fn(r);
    }

    friend bool operator==(const HSubset& a, const HSubset& b) {
        return a.ctx_ == b.ctx_ && a.bits_ == b.bits_;
    }

private:
    GroupCtx ctx_;
    std::vector<uint64_t> bits_;
    uint64_t size_ = 0;
};

/// The coordinate subgroups: the vertical hyperplane W_j = {x_j = 0} of
/// size q^{2n} and the horizontal line L_j = {(s e_j, 0)} of size q.
enum class CoordSubgroup { vertical_W, horizontal_L };

inline HSubset coordinate_subgroup(const GroupCtx& ctx, uint32_t j, CoordSubgroup kind) {
    detail::check_axis(ctx, j);
    HSubset out(ctx);
    if (kind == CoordSubgroup::horizontal_L) {
        HPoint pt = identity(ctx);
        for (uint32_t s = 0; s < ctx.field.q; ++s) {
            pt.x[j - 1] = {s};
            out.insert(pt);
        }
        return out;
    }
    uint64_t total = ctx.point_count();
    for (uint64_t r = 0; r < total; ++r) {
        HPoint a = point_unrank(ctx, r);
        if (a.x[j - 1].code == 0) out.insert(r);
    }
    return out;
}

/// Dense multiplication table by point rank; guarded so the q^{4n+2}
/// entries stay desk-sized. Used by exhaustive axiom scans and the
/// subgroup machinery.
inline std::vector<uint32_t> multiplication_table(const GroupCtx& ctx, uint64_t max_points = 1024) {
    uint64_t total = ctx.point_count();
    require(total <= max_points, errc::too_large,
            "multiplication table over " + std::to_string(total) + " points refused");
    std::vector<HPoint> pts(total);
    for (uint64_t r = 0; r < total; ++r) pts[r] = point_unrank(ctx, r);
    std::vector<uint32_t> table(total * total);
    for (uint64_t a = 0; a < total; ++a)
        for (uint64_t b = 0; b < total; ++b)
            table[a * total + b] = static_cast<uint32_t>(point_rank(ctx, mul(ctx, pts[a], pts[b])));
    return table;
}

}  // namespace hlw
