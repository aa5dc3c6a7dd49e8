#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "error.hpp"
#include "group.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "subgroups.hpp"

namespace hlw {

/// Distinct plane ranks of {pi_j(a) : a in K}, sorted.
inline std::vector<uint64_t> projection_image(const HSubset& K, uint32_t j) {
    const GroupCtx& ctx = K.ctx();
    detail::check_axis(ctx, j);
    std::vector<bool> hit(ctx.plane_count(), false);
    K.for_each([&](uint64_t r) {
        hit[plane_rank(ctx, project(ctx, j, point_unrank(ctx, r)))] = true;
    });
    std::vector<uint64_t> out;
    for (uint64_t w = 0; w < hit.size(); ++w)
        if (hit[w]) out.push_back(w);
    return out;
}

// ---------------------------------------------------------------------------
// Sharp examples
// ---------------------------------------------------------------------------

enum class SharpKind {
    line_t0,  // {(x_1, 0, t_0)}, n = 1
    flat,     // {(x, t_0) : x_{n+1} = ... = x_{2n} = 0}
    box,      // A x B x F_q, n = 1
};

struct SharpParams {
    FieldElem t0{0};
    std::vector<FieldElem> A, B;  // box only
};

/// The extremal sets: a horizontal line at height t_0, its flat
/// generalization of size q^n, and the product box A x B x F_q.
inline HSubset sharp_example(const GroupCtx& ctx, SharpKind kind, const SharpParams& params) {
    HSubset out(ctx);
    const FieldCtx& F = ctx.field;
    switch (kind) {
        case SharpKind::line_t0: {
            require(ctx.n == 1, errc::wrong_dimension, "the line example lives in n = 1");
            HPoint pt{{F.zero(), F.zero()}, params.t0};
            for (uint32_t s = 0; s < F.q; ++s) {
                pt.x[0] = {s};
                out.insert(pt);
            }
            return out;
        }
        case SharpKind::flat: {
            HPoint pt{std::vector<FieldElem>(2 * ctx.n, F.zero()), params.t0};
            uint64_t count = 1;
            for (uint32_t i = 0; i < ctx.n; ++i) count *= F.q;
            for (uint64_t idx = 0; idx < count; ++idx) {
                uint64_t t = idx;
                for (uint32_t i = 0; i < ctx.n; ++i) {
                    pt.x[i] = {static_cast<uint32_t>(t % F.q)};
                    t /= F.q;
                }
                out.insert(pt);
            }
            return out;
        }
        case SharpKind::box: {
            require(ctx.n == 1, errc::wrong_dimension, "the box example lives in n = 1");
            HPoint pt{{F.zero(), F.zero()}, F.zero()};
            for (auto a : params.A)
                for (auto b : params.B)
                    for (uint32_t t = 0; t < F.q; ++t) {
                        pt.x[0] = a;
                        pt.x[1] = b;
                        pt.t = {t};
                        out.insert(pt);
                    }
            return out;
        }
    }
    raise(errc::bad_range, "unknown sharp example kind");
}

// ---------------------------------------------------------------------------
// The set-level Loomis-Whitney check
// ---------------------------------------------------------------------------

inline std::optional<uint32_t> exact_power_of(uint64_t value, uint64_t q) {
    uint32_t e = 0;
    uint64_t acc = 1;
    while (acc < value) {
        acc *= q;
        ++e;
    }
    if (acc == value) return e;
    return std::nullopt;
}

/// |K| against q^{1/(2n+1)} prod_j |pi_j(K)|^{(n+1)/(n(2n+1))}. When every
/// cardinality is a pure power of q the comparison is exact rational
/// exponent arithmetic; otherwise logarithms.
struct SetLWReport {
    uint64_t size = 0;
    std::vector<uint64_t> proj_sizes;
    double rhs = 0;
    double ratio = 0;           // |K| / rhs
    bool exact = false;         // exponent arithmetic was exact
    bool exact_equal = false;   // |K| == rhs as powers of q
    uint64_t max_proj = 0;
    double max_proj_reference = 0;  // |K|^{(2n+1)/(2(n+1))} q^{-1/(2(n+1))}
};

inline SetLWReport lw_set_check(const HSubset& K) {
    require(!K.empty(), errc::empty_set, "the set inequality asks for a nonempty set");
    const GroupCtx& ctx = K.ctx();
    uint32_t n = ctx.n;
    double q = static_cast<double>(ctx.q());

    SetLWReport rep;
    rep.size = K.size();
    for (uint32_t j = 1; j <= 2 * n; ++j) rep.proj_sizes.push_back(projection_image(K, j).size());
    rep.max_proj = *std::max_element(rep.proj_sizes.begin(), rep.proj_sizes.end());

    Rat w(n + 1, static_cast<long long>(n) * (2 * n + 1));
    // exact path: all cardinalities pure powers of q
    auto ek = exact_power_of(rep.size, ctx.q());
    bool exact = ek.has_value();
    Rat rhs_exp(1, 2 * n + 1);
    for (uint64_t s : rep.proj_sizes) {
        auto e = exact_power_of(s, ctx.q());
        if (!e) {
            exact = false;
            break;
        }
        rhs_exp = rhs_exp + Rat(*e) * w;
    }
    if (exact) {
        rep.exact = true;
        rep.exact_equal = (Rat(*ek) == rhs_exp);
        rep.rhs = std::pow(q, rhs_exp.value());
        rep.ratio = rep.exact_equal ? 1.0 : std::pow(q, Rat(*ek).value() - rhs_exp.value());
    } else {
        double log_rhs = std::log(q) / (2 * n + 1);
        for (uint64_t s : rep.proj_sizes) log_rhs += w.value() * std::log(static_cast<double>(s));
        rep.rhs = std::exp(log_rhs);
        rep.ratio = std::exp(std::log(static_cast<double>(rep.size)) - log_rhs);
    }
    rep.max_proj_reference =
        std::pow(static_cast<double>(rep.size), (2.0 * n + 1) / (2.0 * (n + 1))) *
        std::pow(q, -1.0 / (2.0 * (n + 1)));
    return rep;
}

// ---------------------------------------------------------------------------
// Point-line incidences and the Vinh bound
// ---------------------------------------------------------------------------

/// A line in F_q^2: y = a x + b, or the vertical line x = a.
struct IncLine {
    bool vertical = false;
    uint32_t a = 0;
    uint32_t b = 0;

    friend bool operator==(const IncLine& l, const IncLine& m) {
        return l.vertical == m.vertical && l.a == m.a && (l.vertical || l.b == m.b);
    }
};

/// A point set and line set over F_q^2, duplicates removed on insert.
struct IncidenceInstance {
    FieldCtx field;
    std::vector<std::pair<uint32_t, uint32_t>> points;
    std::vector<IncLine> lines;

    explicit IncidenceInstance(FieldCtx f) : field(std::move(f)) {}

    void add_point(uint32_t a1, uint32_t a2) {
        uint64_t key = (static_cast<uint64_t>(a1) << 32) | a2;
        if (point_keys_.insert(key).second) points.emplace_back(a1, a2);
    }
    void add_line(IncLine l) {
        if (l.vertical) l.b = 0;
        uint64_t key = (static_cast<uint64_t>(l.vertical) << 40) |
                       (static_cast<uint64_t>(l.a) << 20) | l.b;
        if (line_keys_.insert(key).second) lines.push_back(l);
    }

private:
    std::unordered_set<uint64_t> point_keys_;
    std::unordered_set<uint64_t> line_keys_;
};

/// Exact count of incident (point, line) pairs.
inline uint64_t incidence_count(const IncidenceInstance& inst) {
    const FieldCtx& F = inst.field;
    std::unordered_set<uint64_t> pts;
    for (auto [a1, a2] : inst.points) pts.insert((static_cast<uint64_t>(a1) << 32) | a2);
    uint64_t count = 0;
    for (const IncLine& l : inst.lines) {
        if (l.vertical) {
            for (uint32_t y = 0; y < F.q; ++y)
                count += pts.count((static_cast<uint64_t>(l.a) << 32) | y);
        } else {
            for (uint32_t x = 0; x < F.q; ++x) {
                uint32_t y = F.add(F.mul({l.a}, {x}), {l.b}).code;
                count += pts.count((static_cast<uint64_t>(x) << 32) | y);
            }
        }
    }
    return count;
}

/// |P||L|/q + 2 sqrt(q) sqrt(|P||L|).
inline double vinh_bound(const IncidenceInstance& inst) {
    double P = static_cast<double>(inst.points.size());
    double L = static_cast<double>(inst.lines.size());
    double q = static_cast<double>(inst.field.q);
    return P * L / q + 2.0 * std::sqrt(q) * std::sqrt(P * L);
}

/// The incidence chain for K in H^1: points pi_1(K), lines pi_2(K) via
/// (b1, b2) -> {y = b1 x + b2}, and |K| <= I(P, L) <= Vinh.
struct IncidenceChainReport {
    uint64_t size = 0;
    uint64_t points = 0;
    uint64_t lines = 0;
    uint64_t incidences = 0;
    double bound = 0;
    bool left_ok = false;   // |K| <= I, exact integers
    bool right_ok = false;  // I <= bound, 1e-9 relative slack
};

inline IncidenceChainReport incidence_set_check(const HSubset& K) {
    const GroupCtx& ctx = K.ctx();
    require(ctx.n == 1, errc::wrong_dimension, "the incidence chain lives in n = 1");
    require(!K.empty(), errc::empty_set, "empty set");
    uint32_t q = ctx.q();

    IncidenceInstance inst(ctx.field);
    for (uint64_t w : projection_image(K, 1)) {
        PlanePoint pp = plane_unrank(ctx, w);
        inst.add_point(pp.y[0].code, pp.t.code);
    }
    for (uint64_t w : projection_image(K, 2)) {
        PlanePoint pp = plane_unrank(ctx, w);
        inst.add_line(IncLine{false, pp.y[0].code, pp.t.code});
    }

    IncidenceChainReport rep;
    rep.size = K.size();
    rep.points = inst.points.size();
    rep.lines = inst.lines.size();
    rep.incidences = incidence_count(inst);
    double PL = static_cast<double>(rep.points) * static_cast<double>(rep.lines);
    rep.bound = PL / q + 2.0 * std::sqrt(static_cast<double>(q) * PL);
    rep.left_ok = rep.size <= rep.incidences;
    rep.right_ok = static_cast<double>(rep.incidences) <= rep.bound * (1.0 + 1e-9);
    return rep;
}

// ---------------------------------------------------------------------------
// Covering numbers by additive cosets
// ---------------------------------------------------------------------------

/// Number of distinct additive cosets of the F_q-line through `direction`
/// that meet S. Cosets are labeled by the canonical representative with the
/// leading nonzero direction coordinate cleared.
inline uint64_t additive_covering(const HSubset& S, const std::vector<FieldElem>& direction) {
    const GroupCtx& ctx = S.ctx();
    const FieldCtx& F = ctx.field;
    require(direction.size() == 2 * ctx.n + 1, errc::dimension_mismatch,
            "direction must have 2n+1 coordinates");
    uint32_t lead = 0;
    while (lead < direction.size() && direction[lead].code == 0) ++lead;
    require(lead < direction.size(), errc::zero_scalar, "zero direction");
    FieldElem lead_inv = F.inv(direction[lead]);

    std::unordered_set<uint64_t> reps;
    S.for_each([&](uint64_t r) {
        HPoint a = point_unrank(ctx, r);
        std::vector<FieldElem> v = a.x;
        v.push_back(a.t);
        FieldElem c = F.mul(v[lead], lead_inv);
        for (uint32_t i = 0; i < v.size(); ++i) v[i] = F.sub(v[i], F.mul(c, direction[i]));
        HPoint rep;
        rep.x.assign(v.begin(), v.end() - 1);
        rep.t = v.back();
        reps.insert(point_rank(ctx, rep));
    });
    return reps.size();
}

/// Minimal number of translates of L_j covering T_j(K); equals the number
/// of additive L_j-cosets that the straightened set meets.
inline uint64_t covering_number(const HSubset& K, uint32_t j) {
    const GroupCtx& ctx = K.ctx();
    detail::check_axis(ctx, j);
    HSubset straightened(ctx);
    K.for_each([&](uint64_t r) {
        straightened.insert(straighten(ctx, j, point_unrank(ctx, r)));
    });
    std::vector<FieldElem> direction(2 * ctx.n + 1, ctx.field.zero());
    direction[j - 1] = ctx.field.one();
    return additive_covering(straightened, direction);
}

// ---------------------------------------------------------------------------
// Chen's family E_r
// ---------------------------------------------------------------------------

/// The hyperplanes W (dim 2n) such that K is covered by at most r additive
/// translates of the line W^perp.
struct ChenFamily {
    uint64_t size = 0;
    std::vector<Subspace> members;
};

/// Covering number of K for every hyperplane, in enumeration order.
inline std::vector<std::pair<Subspace, uint64_t>> chen_coverings(const HSubset& K) {
    require(!K.empty(), errc::empty_set, "empty set");
    const GroupCtx& ctx = K.ctx();
    std::vector<std::pair<Subspace, uint64_t>> out;
    for (auto& W : enumerate_subspaces(2 * ctx.n + 1, 2 * ctx.n, ctx.field)) {
        Subspace perp = orth_complement(W);
        out.emplace_back(std::move(W), additive_covering(K, perp.basis.at(0)));
    }
    return out;
}

inline ChenFamily chen_family(const HSubset& K, uint64_t r) {
    const GroupCtx& ctx = K.ctx();
    require(r >= 1 && r < ctx.plane_count(), errc::bad_range, "r must satisfy 1 <= r < q^{2n}");
    ChenFamily fam;
    for (auto& [W, cov] : chen_coverings(K)) {
        if (cov <= r) {
            fam.members.push_back(W);
            ++fam.size;
        }
    }
    return fam;
}

/// The two bounds on |E_r|, each with its applicability range:
/// q^{2n-1} r for r <= |K|/2, and r q^{4n} / ((q^{2n} - r)|K|) for r < q^{2n}.
struct ChenBounds {
    bool translate_applies = false;
    double translate_bound = 0;
    bool energy_applies = false;
    double energy_bound = 0;
};

inline ChenBounds chen_bounds(const HSubset& K, uint64_t r) {
    require(!K.empty(), errc::empty_set, "empty set");
    const GroupCtx& ctx = K.ctx();
    double q = static_cast<double>(ctx.q());
    uint32_t n = ctx.n;
    ChenBounds out;
    if (2 * r <= K.size()) {
        out.translate_applies = true;
        out.translate_bound = std::pow(q, 2.0 * n - 1) * static_cast<double>(r);
    }
    double q2n = std::pow(q, 2.0 * n);
    if (r >= 1 && static_cast<double>(r) < q2n) {
        out.energy_applies = true;
        out.energy_bound = static_cast<double>(r) * std::pow(q, 4.0 * n) /
                           ((q2n - static_cast<double>(r)) * static_cast<double>(K.size()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Seeded random subset sampler
// ---------------------------------------------------------------------------

/// Random K generator over three regimes: uniform density (0.1 / 0.5 / 0.9),
/// unions of random projection fibers, and random left cosets of enumerated
/// subgroups. Fibers and subgroup cosets carry the adversarial structure
/// that uniform noise misses.
class SubsetSampler {
public:
    explicit SubsetSampler(GroupCtx ctx) : ctx_(std::move(ctx)) {
        if (ctx_.point_count() <= 1000) {
            for (auto& rec : enumerate_subgroups(ctx_)) subgroups_.push_back(rec.elements);
        } else {
            // fall back on the coordinate subgroups and the center
            for (uint32_t j = 1; j <= 2 * ctx_.n; ++j) {
                for (auto kind : {CoordSubgroup::vertical_W, CoordSubgroup::horizontal_L}) {
                    auto ranks = coordinate_subgroup(ctx_, j, kind).ranks();
                    subgroups_.emplace_back(ranks.begin(), ranks.end());
                }
            }
            std::vector<uint32_t> center;
            HPoint pt = identity(ctx_);
            for (uint32_t t = 0; t < ctx_.field.q; ++t) {
                pt.t = {t};
                center.push_back(static_cast<uint32_t>(point_rank(ctx_, pt)));
            }
            subgroups_.push_back(std::move(center));
        }
    }

    HSubset sample(Rng& rng) const {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            HSubset K = sample_once(rng);
            if (!K.empty()) return K;
        }
        raise(errc::bad_range, "sampler failed to produce a nonempty set");
    }

private:
    GroupCtx ctx_;
    std::vector<std::vector<uint32_t>> subgroups_;

    HSubset sample_once(Rng& rng) const {
        uint64_t regime = rng.below(5);
        HSubset K(ctx_);
        uint64_t total = ctx_.point_count();
        switch (regime) {
            case 0:
            case 1:
            case 2: {
                double density = regime == 0 ? 0.1 : regime == 1 ? 0.5 : 0.9;
                for (uint64_t r = 0; r < total; ++r)
                    if (rng.bernoulli(density)) K.insert(r);
                return K;
            }
            case 3: {
                uint32_t j = 1 + static_cast<uint32_t>(rng.below(2 * ctx_.n));
                uint64_t count = 1 + rng.below(ctx_.field.q);
                for (uint64_t i = 0; i < count; ++i) {
                    PlanePoint base = plane_unrank(ctx_, rng.below(ctx_.plane_count()));
                    for (const HPoint& pt : fiber(ctx_, j, base)) K.insert(pt);
                }
                return K;
            }
            default: {
                const auto& H = subgroups_[rng.below(subgroups_.size())];
                HPoint a = point_unrank(ctx_, rng.below(total));
                for (uint32_t h : H) K.insert(mul(ctx_, a, point_unrank(ctx_, h)));
                return K;
            }
        }
    }
};

}  // namespace hlw
