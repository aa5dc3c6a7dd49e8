#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "group.hpp"

namespace hlw {

// ---------------------------------------------------------------------------
// Subspaces in reduced row echelon form
// ---------------------------------------------------------------------------

/// An F-subspace held as a reduced row-echelon basis. Echelon form is the
/// canonical representative: two subspaces are equal iff their bases match
/// entry for entry. The field member records whether the subspace lives
/// over F_q or over the prime subfield F_p (digit coordinates).
struct Subspace {
    FieldCtx field;
    uint32_t ambient_dim = 0;
    std::vector<std::vector<FieldElem>> basis;

    uint32_t dim() const { return static_cast<uint32_t>(basis.size()); }

    uint64_t cardinality() const {
        uint64_t c = 1;
        for (uint32_t i = 0; i < dim(); ++i) c *= field.q;
        return c;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.field == b.field && a.ambient_dim == b.ambient_dim && a.basis == b.basis;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }
};

/// Reduced row echelon form of the row space of `rows`.
inline Subspace rref(const FieldCtx& F, uint32_t ambient_dim,
                     std::vector<std::vector<FieldElem>> rows) {
    for (const auto& row : rows)
        require(row.size() == ambient_dim, errc::dimension_mismatch, "row has wrong length");
    uint32_t pivot_row = 0;
    for (uint32_t col = 0; col < ambient_dim && pivot_row < rows.size(); ++col) {
        uint32_t sel = pivot_row;
        while (sel < rows.size() && rows[sel][col].code == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[pivot_row], rows[sel]);
        FieldElem scale = F.inv(rows[pivot_row][col]);
        for (auto& e : rows[pivot_row]) e = F.mul(e, scale);
        for (uint32_t i = 0; i < rows.size(); ++i) {
            if (i == pivot_row || rows[i][col].code == 0) continue;
            FieldElem factor = rows[i][col];
            for (uint32_t c = 0; c < ambient_dim; ++c)
                rows[i][c] = F.sub(rows[i][c], F.mul(factor, rows[pivot_row][c]));
        }
        ++pivot_row;
    }
    rows.resize(pivot_row);
    Subspace s;
    s.field = F;
    s.ambient_dim = ambient_dim;
    s.basis = std::move(rows);
    return s;
}

inline bool subspace_contains(const Subspace& S, std::vector<FieldElem> v) {
    const FieldCtx& F = S.field;
    require(v.size() == S.ambient_dim, errc::dimension_mismatch, "vector has wrong length");
    for (const auto& row : S.basis) {
        uint32_t pivot = 0;
        while (row[pivot].code == 0) ++pivot;
        if (v[pivot].code == 0) continue;
        FieldElem factor = v[pivot];
        for (uint32_t c = 0; c < S.ambient_dim; ++c) v[c] = F.sub(v[c], F.mul(factor, row[c]));
    }
    for (auto e : v)
        if (e.code != 0) return false;
    return true;
}

/// All q^dim vectors of the span, in coefficient-tuple order.
inline std::vector<std::vector<FieldElem>> span_vectors(const Subspace& S,
                                                        uint64_t max_count = 1u << 20) {
    require(S.cardinality() <= max_count, errc::too_large, "span too large to enumerate");
    const FieldCtx& F = S.field;
    std::vector<std::vector<FieldElem>> out;
    out.reserve(S.cardinality());
    std::vector<uint32_t> coeff(S.dim(), 0);
    while (true) {
        std::vector<FieldElem> v(S.ambient_dim, F.zero());
        for (uint32_t i = 0; i < S.dim(); ++i) {
            if (coeff[i] == 0) continue;
            for (uint32_t c = 0; c < S.ambient_dim; ++c)
                v[c] = F.add(v[c], F.mul({coeff[i]}, S.basis[i][c]));
        }
        out.push_back(std::move(v));
        uint32_t i = 0;
        for (; i < S.dim(); ++i) {
            if (++coeff[i] < F.q) break;
            coeff[i] = 0;
        }
        if (i == S.dim()) break;
        if (S.dim() == 0) break;
    }
    return out;
}

/// Orthogonal complement w.r.t. the standard inner product, in echelon form.
inline Subspace orth_complement(const Subspace& S) {
    const FieldCtx& F = S.field;
    std::vector<uint32_t> pivots;
    std::vector<bool> is_pivot(S.ambient_dim, false);
    for (const auto& row : S.basis) {
        uint32_t pivot = 0;
        while (row[pivot].code == 0) ++pivot;
        pivots.push_back(pivot);
        is_pivot[pivot] = true;
    }
    std::vector<std::vector<FieldElem>> rows;
    for (uint32_t f = 0; f < S.ambient_dim; ++f) {
        if (is_pivot[f]) continue;
        // w_f = 1, w_{pivot_i} = -basis[i][f] solves <row_i, w> = 0
        std::vector<FieldElem> w(S.ambient_dim, F.zero());
        w[f] = F.one();
        for (uint32_t i = 0; i < S.dim(); ++i) w[pivots[i]] = F.neg(S.basis[i][f]);
        rows.push_back(std::move(w));
    }
    return rref(F, S.ambient_dim, std::move(rows));
}

/// Isotropy of a subspace of F_q^{2n} w.r.t. the symplectic form.
inline bool is_isotropic(const Subspace& S, uint32_t n) {
    require(S.ambient_dim == 2 * n, errc::dimension_mismatch,
            "isotropy asks for ambient dimension 2n");
    const FieldCtx& F = S.field;
    auto omega = [&](const std::vector<FieldElem>& a, const std::vector<FieldElem>& b) {
        FieldElem acc = F.zero();
        for (uint32_t i = 0; i < n; ++i) {
            acc = F.add(acc, F.mul(a[i], b[n + i]));
            acc = F.sub(acc, F.mul(b[i], a[n + i]));
        }
        return acc;
    };
    for (uint32_t i = 0; i < S.dim(); ++i)
        for (uint32_t j = i + 1; j < S.dim(); ++j)
            if (omega(S.basis[i], S.basis[j]).code != 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Grassmannian and isotropic Grassmannian counting
// ---------------------------------------------------------------------------

namespace detail {
using uint128 = unsigned __int128;

inline uint64_t narrow_count(uint128 v, const char* what) {
    require(v <= std::numeric_limits<uint64_t>::max(), errc::bad_range,
            std::string(what) + " exceeds 64-bit range");
    return static_cast<uint64_t>(v);
}

inline uint128 checked_mul(uint128 a, uint128 b) {
    if (a != 0 && b > static_cast<uint128>(-1) / a)
        raise(errc::bad_range, "count overflow");
    return a * b;
}
}  // namespace detail

/// Gaussian bracket [m]_q = 1 + q + ... + q^{m-1}.
inline uint64_t gaussian_bracket(uint32_t m, uint64_t q) {
    detail::uint128 acc = 0, pw = 1;
    for (uint32_t i = 0; i < m; ++i) {
        acc += pw;
        pw = detail::checked_mul(pw, q);
    }
    return detail::narrow_count(acc, "gaussian bracket");
}

/// Gaussian binomial [m choose k]_q by the Pascal recurrence
/// B(m, k) = B(m-1, k-1) + q^k B(m-1, k).
inline uint64_t q_binomial(uint32_t m, uint32_t k, uint64_t q) {
    require(k <= m, errc::bad_range, "binomial with k > m");
    std::vector<detail::uint128> row(k + 1, 0);
    row[0] = 1;
    for (uint32_t i = 1; i <= m; ++i) {
        for (uint32_t j = std::min(i, k); j >= 1; --j) {
            detail::uint128 qj = 1;
            for (uint32_t e = 0; e < j; ++e) qj = detail::checked_mul(qj, q);
            row[j] = row[j - 1] + detail::checked_mul(qj, row[j]);
        }
    }
    return detail::narrow_count(row[k], "gaussian binomial");
}

/// |Gr(k, 2n)|: k-dimensional subspaces of F_q^{2n}.
inline uint64_t gr_count(uint32_t k, uint32_t two_n, uint64_t q) {
    require(k <= two_n, errc::bad_range, "gr_count needs 0 <= k <= 2n");
    return q_binomial(two_n, k, q);
}

/// |IG(k, 2n)|: k-dimensional isotropic subspaces of (F_q^{2n}, omega),
/// [n choose k]_q * prod_{i=n-k+1..n} (q^i + 1).
inline uint64_t ig_count(uint32_t k, uint32_t two_n, uint64_t q) {
    require(two_n % 2 == 0, errc::bad_range, "ambient dimension must be even");
    uint32_t n = two_n / 2;
    require(k <= n, errc::bad_range, "ig_count needs 0 <= k <= n");
    detail::uint128 acc = q_binomial(n, k, q);
    for (uint32_t i = n - k + 1; i <= n; ++i) {
        detail::uint128 pw = 1;
        for (uint32_t e = 0; e < i; ++e) pw = detail::checked_mul(pw, q);
        acc = detail::checked_mul(acc, pw + 1);
    }
    return detail::narrow_count(acc, "isotropic grassmannian count");
}

/// Subgroup count of H^n(F_p) indexed by the horizontal image: one product
/// subgroup per subspace plus p^k graph subgroups per k-dimensional
/// isotropic subspace (the p^k reading; the number of linear maps S -> F_p
/// from a k-dimensional S is p^k, and enumeration at p = 3 agrees with 19).
inline uint64_t subgroup_count_formula(uint32_t n, uint64_t p) {
    require(p >= 3 && FieldCtx::is_prime(p), errc::bad_field, "p must be an odd prime");
    detail::uint128 acc = 0;
    for (uint32_t k = 0; k <= 2 * n; ++k) acc += gr_count(k, 2 * n, p);
    detail::uint128 pw = 1;
    for (uint32_t k = 0; k <= n; ++k) {
        acc += detail::checked_mul(pw, ig_count(k, 2 * n, p));
        pw = detail::checked_mul(pw, p);
    }
    return detail::narrow_count(acc, "subgroup count");
}

/// The literal "k p graph subgroups" reading of the same count. Kept so the
/// discrepancy with enumeration stays visible in reports; it undercounts
/// (18 vs 19 at n = 1, p = 3).
inline uint64_t subgroup_count_formula_kp_reading(uint32_t n, uint64_t p) {
    require(p >= 3 && FieldCtx::is_prime(p), errc::bad_field, "p must be an odd prime");
    detail::uint128 acc = 0;
    for (uint32_t k = 0; k <= 2 * n; ++k) acc += gr_count(k, 2 * n, p);
    for (uint32_t k = 0; k <= n; ++k)
        acc += detail::checked_mul(static_cast<detail::uint128>(k) * p, ig_count(k, 2 * n, p));
    return detail::narrow_count(acc, "subgroup count (kp reading)");
}

/// Homogeneous subgroup count of H^n(F_q): one vertical product per
/// subspace plus one flat copy per isotropic subspace.
inline uint64_t homogeneous_count_formula(uint32_t n, uint64_t q) {
    detail::uint128 acc = 0;
    for (uint32_t k = 0; k <= 2 * n; ++k) acc += gr_count(k, 2 * n, q);
    for (uint32_t k = 0; k <= n; ++k) acc += ig_count(k, 2 * n, q);
    return detail::narrow_count(acc, "homogeneous subgroup count");
}

// ---------------------------------------------------------------------------
// Subspace enumeration
// ---------------------------------------------------------------------------

/// All k-dimensional subspaces of F^m in canonical echelon form, exactly
/// once each: choose pivot columns, then fill the free entries.
inline std::vector<Subspace> enumerate_subspaces(uint32_t ambient_dim, uint32_t k,
                                                 const FieldCtx& F,
                                                 uint64_t max_count = 2'000'000) {
    require(k <= ambient_dim, errc::bad_range, "k exceeds ambient dimension");
    require(gr_count(k, ambient_dim, F.q) <= max_count, errc::too_large,
            "subspace enumeration too large");
    std::vector<Subspace> out;
    if (k == 0) {
        out.push_back(Subspace{F, ambient_dim, {}});
        return out;
    }
    std::vector<uint32_t> pivots(k);
    for (uint32_t i = 0; i < k; ++i) pivots[i] = i;
    while (true) {
        // free slots: entries right of a pivot, in non-pivot columns
        std::vector<bool> is_pivot(ambient_dim, false);
        for (uint32_t p : pivots) is_pivot[p] = true;
        std::vector<std::pair<uint32_t, uint32_t>> free_slots;
        for (uint32_t i = 0; i < k; ++i)
            for (uint32_t c = pivots[i] + 1; c < ambient_dim; ++c)
                if (!is_pivot[c]) free_slots.emplace_back(i, c);

        uint64_t fills = 1;
        for (size_t i = 0; i < free_slots.size(); ++i) fills *= F.q;
        for (uint64_t idx = 0; idx < fills; ++idx) {
            Subspace s;
            s.field = F;
            s.ambient_dim = ambient_dim;
            s.basis.assign(k, std::vector<FieldElem>(ambient_dim, F.zero()));
            for (uint32_t i = 0; i < k; ++i) s.basis[i][pivots[i]] = F.one();
            uint64_t t = idx;
            for (auto [row, col] : free_slots) {
                s.basis[row][col] = {static_cast<uint32_t>(t % F.q)};
                t /= F.q;
            }
            out.push_back(std::move(s));
        }

        // next pivot combination in lexicographic order
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && pivots[i] == ambient_dim - k + i) --i;
        if (i < 0) break;
        ++pivots[i];
        for (uint32_t j = i + 1; j < k; ++j) pivots[j] = pivots[j - 1] + 1;
    }
    return out;
}

/// The isotropic members of Gr(k, 2n).
inline std::vector<Subspace> enumerate_isotropic(uint32_t n, uint32_t k, const FieldCtx& F,
                                                 uint64_t max_count = 2'000'000) {
    require(k <= n, errc::bad_range, "isotropic dimension exceeds n");
    std::vector<Subspace> out;
    for (auto& s : enumerate_subspaces(2 * n, k, F, max_count))
        if (is_isotropic(s, n)) out.push_back(std::move(s));
    return out;
}

// ---------------------------------------------------------------------------
// Subgroups of the Heisenberg group
// ---------------------------------------------------------------------------

enum class SubgroupKind { product, graph, other };

inline const char* subgroup_kind_name(SubgroupKind k) {
    switch (k) {
        case SubgroupKind::product: return "product";
        case SubgroupKind::graph: return "graph";
        case SubgroupKind::other: return "other";
    }
    return "?";
}

/// An enumerated subgroup: element ranks (sorted), the horizontal image S,
/// the recovered linear map rho for graph subgroups, and classification
/// tags. `S` lives over F_q when the classification applied (prime field or
/// homogeneous); otherwise over F_p in digit coordinates.
struct SubgroupRec {
    GroupCtx ctx;
    std::vector<uint32_t> elements;
    uint64_t order = 0;
    SubgroupKind kind = SubgroupKind::other;
    Subspace horizontal;               // pi_h(G)
    std::vector<uint32_t> rho;         // rho(basis_i) codes; empty unless kind == graph
    bool homogeneous = false;
};

inline bool is_subgroup(const GroupCtx& ctx, const HSubset& S) {
    if (S.empty()) return false;
    std::vector<uint64_t> members = S.ranks();
    for (uint64_t a : members) {
        HPoint pa = point_unrank(ctx, a);
        for (uint64_t b : members) {
            if (!S.contains(point_rank(ctx, mul(ctx, pa, point_unrank(ctx, b))))) return false;
        }
    }
    return true;
}

namespace detail {

/// Saturates H U {seeds} under the multiplication table. `members` starts
/// as the element list of a known subgroup (or just the identity).
inline std::vector<uint32_t> closure_from(const std::vector<uint32_t>& table, uint64_t total,
                                          std::vector<uint32_t> members,
                                          std::vector<uint32_t> seeds) {
    std::vector<bool> in(total, false);
    for (uint32_t m : members) in[m] = true;
    std::vector<uint32_t> work;
    for (uint32_t s : seeds)
        if (!in[s]) {
            in[s] = true;
            members.push_back(s);
            work.push_back(s);
        }
    while (!work.empty()) {
        uint32_t a = work.back();
        work.pop_back();
        for (size_t i = 0; i < members.size(); ++i) {
            uint32_t b = members[i];
            for (uint32_t prod : {table[static_cast<uint64_t>(a) * total + b],
                                  table[static_cast<uint64_t>(b) * total + a]}) {
                if (!in[prod]) {
                    in[prod] = true;
                    members.push_back(prod);
                    work.push_back(prod);
                }
            }
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

struct RankVectorHash {
    size_t operator()(const std::vector<uint32_t>& v) const {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (uint32_t x : v) {
            h ^= x;
            h *= 0x100000001b3ULL;
        }
        return static_cast<size_t>(h);
    }
};

}  // namespace detail

/// Smallest subgroup containing the generators, by product saturation.
inline std::vector<uint32_t> closure_ranks(const GroupCtx& ctx, const std::vector<HPoint>& gens) {
    uint64_t total = ctx.point_count();
    require(total <= 1024, errc::too_large, "closure over more than 1024 points refused");
    auto table = multiplication_table(ctx);
    std::vector<uint32_t> seeds;
    for (const auto& g : gens) seeds.push_back(static_cast<uint32_t>(point_rank(ctx, g)));
    return detail::closure_from(table, total, {0u}, std::move(seeds));
}

inline HSubset subset_from_ranks(const GroupCtx& ctx, const std::vector<uint32_t>& ranks) {
    HSubset out(ctx);
    for (uint32_t r : ranks) out.insert(r);
    return out;
}

inline bool is_homogeneous_set(const GroupCtx& ctx, const HSubset& S) {
    bool ok = true;
    S.for_each([&](uint64_t r) {
        if (!ok) return;
        HPoint a = point_unrank(ctx, r);
        for (uint32_t s = 1; s < ctx.field.q && ok; ++s)
            if (!S.contains(dilate(ctx, {s}, a))) ok = false;
    });
    return ok;
}

/// Expands a vector over F_q into digit coordinates over F_p.
inline std::vector<FieldElem> digit_expand(const FieldCtx& F, const std::vector<FieldElem>& v) {
    std::vector<FieldElem> out;
    out.reserve(v.size() * F.r);
    for (auto e : v) {
        uint32_t c = e.code;
        for (uint32_t i = 0; i < F.r; ++i) {
            out.push_back({c % F.p});
            c /= F.p;
        }
    }
    return out;
}

/// Classifies a subgroup by its horizontal image: a vertical product
/// S x F_q, the graph of a linear map rho on an isotropic S, or (over
/// extension fields without homogeneity) an unclassified record.
inline void classify_subgroup(SubgroupRec& rec) {
    const GroupCtx& ctx = rec.ctx;
    const FieldCtx& F = ctx.field;
    rec.rho.clear();

    std::vector<std::vector<FieldElem>> xs;
    xs.reserve(rec.elements.size());
    for (uint32_t r : rec.elements) xs.push_back(point_unrank(ctx, r).x);

    bool classify_over_q = (F.r == 1) || rec.homogeneous;
    if (!classify_over_q) {
        FieldCtx Fp = FieldCtx::make(F.p, 1);
        std::vector<std::vector<FieldElem>> rows;
        rows.reserve(xs.size());
        for (const auto& x : xs) rows.push_back(digit_expand(F, x));
        rec.horizontal = rref(Fp, 2 * ctx.n * F.r, std::move(rows));
        rec.kind = SubgroupKind::other;
        return;
    }

    Subspace S = rref(F, 2 * ctx.n, xs);
    rec.horizontal = S;
    HSubset members = subset_from_ranks(ctx, rec.elements);

    if (rec.order == S.cardinality() * F.q) {
        // expected shape S x F_q; verify membership over the whole span
        for (const auto& x : span_vectors(S)) {
            HPoint pt{x, F.zero()};
            for (uint32_t t = 0; t < F.q; ++t) {
                pt.t = {t};
                if (!members.contains(pt))
                    raise(errc::unclassifiable, "order q |S| but not the product S x F_q");
            }
        }
        rec.kind = SubgroupKind::product;
        return;
    }

    if (rec.order == S.cardinality()) {
        // graph of a linear map; read rho off the echelon basis
        require(is_isotropic(S, ctx.n), errc::unclassifiable,
                "graph subgroup over a non-isotropic image");
        std::vector<FieldElem> rho_basis;
        for (const auto& b : S.basis) {
            bool found = false;
            for (uint32_t t = 0; t < F.q && !found; ++t) {
                if (members.contains(HPoint{b, {t}})) {
                    rho_basis.push_back({t});
                    found = true;
                }
            }
            require(found, errc::unclassifiable, "horizontal image misses a basis vector");
        }
        // verify t = rho(x) linearly across the span
        std::vector<uint32_t> coeff(S.dim(), 0);
        auto vectors = span_vectors(S);
        size_t idx = 0;
        do {
            FieldElem t = F.zero();
            for (uint32_t i = 0; i < S.dim(); ++i)
                t = F.add(t, F.mul({coeff[i]}, rho_basis[i]));
            if (!members.contains(HPoint{vectors[idx], t}))
                raise(errc::unclassifiable, "graph relation t = rho(x) fails on the span");
            ++idx;
            uint32_t i = 0;
            for (; i < S.dim(); ++i) {
                if (++coeff[i] < F.q) break;
                coeff[i] = 0;
            }
            if (i == S.dim()) break;
        } while (S.dim() > 0);
        rec.kind = SubgroupKind::graph;
        for (auto e : rho_basis) rec.rho.push_back(e.code);
        return;
    }

    raise(errc::unclassifiable,
          "subgroup order " + std::to_string(rec.order) + " matches neither |S| nor q |S|");
}

inline SubgroupRec make_subgroup_record(const GroupCtx& ctx, std::vector<uint32_t> elements) {
    SubgroupRec rec;
    rec.ctx = ctx;
    rec.elements = std::move(elements);
    rec.order = rec.elements.size();
    rec.homogeneous = is_homogeneous_set(ctx, subset_from_ranks(ctx, rec.elements));
    classify_subgroup(rec);
    return rec;
}

inline SubgroupRec closure(const GroupCtx& ctx, const std::vector<HPoint>& gens) {
    return make_subgroup_record(ctx, closure_ranks(ctx, gens));
}

/// All subgroups, found by breadth-first single-generator extension from
/// the trivial subgroup. Every subgroup of a p-group is reached this way
/// because each step of a composition series is generated by one extra
/// element over its predecessor. Extensions that grow a subgroup by the
/// minimal factor p mark the whole difference as exhausted, which keeps the
/// scan near-linear in the number of (subgroup, extension) pairs.
inline std::vector<SubgroupRec> enumerate_subgroups(const GroupCtx& ctx) {
    uint64_t total = ctx.point_count();
    require(total <= 1000, errc::too_large,
            "subgroup enumeration refused beyond 1000 points (got " + std::to_string(total) + ")");
    auto table = multiplication_table(ctx);

    std::unordered_set<std::vector<uint32_t>, detail::RankVectorHash> seen;
    std::vector<std::vector<uint32_t>> all;
    std::vector<std::vector<uint32_t>> frontier;

    std::vector<uint32_t> trivial{0u};
    seen.insert(trivial);
    all.push_back(trivial);
    frontier.push_back(trivial);

    while (!frontier.empty()) {
        std::vector<std::vector<uint32_t>> next;
        for (const auto& H : frontier) {
            std::vector<bool> done(total, false);
            for (uint32_t m : H) done[m] = true;
            for (uint32_t g = 0; g < total; ++g) {
                if (done[g]) continue;
                auto K = detail::closure_from(table, total, H, {g});
                if (K.size() == H.size() * ctx.field.p) {
                    for (uint32_t m : K) done[m] = true;  // same closure for all of K \ H
                } else {
                    done[g] = true;
                }
                if (seen.insert(K).second) {
                    all.push_back(K);
                    next.push_back(K);
                }
            }
        }
        frontier = std::move(next);
    }

    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::vector<SubgroupRec> out;
    out.reserve(all.size());
    for (auto& elements : all) out.push_back(make_subgroup_record(ctx, std::move(elements)));
    return out;
}

inline bool is_homogeneous(const SubgroupRec& rec) { return rec.homogeneous; }

/// Orthogonal complement of a homogeneous subgroup inside F_q^{2n+1},
/// with subgroup / homogeneity flags for the resulting point set.
struct HeisComplement {
    Subspace complement;
    HSubset points;
    bool subgroup = false;
    bool homogeneous = false;
};

inline HeisComplement heis_complement(const SubgroupRec& rec) {
    require(rec.homogeneous, errc::bad_range,
            "orthogonal complement asks for a homogeneous subgroup");
    const GroupCtx& ctx = rec.ctx;
    const FieldCtx& F = ctx.field;
    std::vector<std::vector<FieldElem>> rows;
    rows.reserve(rec.elements.size());
    for (uint32_t r : rec.elements) {
        HPoint a = point_unrank(ctx, r);
        std::vector<FieldElem> v = a.x;
        v.push_back(a.t);
        rows.push_back(std::move(v));
    }
    Subspace G = rref(F, 2 * ctx.n + 1, std::move(rows));
    HeisComplement out;
    out.complement = orth_complement(G);
    out.points = HSubset(ctx);
    for (const auto& v : span_vectors(out.complement)) {
        HPoint pt;
        pt.x.assign(v.begin(), v.end() - 1);
        pt.t = v.back();
        out.points.insert(pt);
    }
    out.subgroup = is_subgroup(ctx, out.points);
    out.homogeneous = is_homogeneous_set(ctx, out.points);
    return out;
}

}  // namespace hlw
