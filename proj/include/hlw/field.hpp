#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

#include "error.hpp"

namespace hlw {

/// An element of F_q identified by its canonical code in [0, q).
/// For q = p^r with r > 1 the base-p digits of the code are the polynomial
/// coefficients of the element, constant term first. Elements carry no
/// context; every operation takes the owning FieldCtx explicitly.
struct FieldElem {
    uint32_t code = 0;

    friend bool operator==(FieldElem a, FieldElem b) { return a.code == b.code; }
    friend bool operator!=(FieldElem a, FieldElem b) { return a.code != b.code; }
    friend bool operator<(FieldElem a, FieldElem b) { return a.code < b.code; }
};

/// Arithmetic context for F_q, q = p^r with odd prime p. Immutable after
/// construction and safe to share between threads; all operations are pure.
///
/// The group law divides by 2, so characteristic 2 is rejected outright.
/// Multiplication and inversion go through discrete-log tables built at
/// construction from plain polynomial arithmetic mod (p, modulus).
class FieldCtx {
public:
    static constexpr uint32_t kMaxQ = 1u << 16;

    uint32_t p = 0;
    uint32_t r = 0;
    uint32_t q = 0;
    /// Coefficients of the monic irreducible modulus, constant term first,
    /// length r + 1 with leading coefficient 1. Empty when r = 1.
    std::vector<uint32_t> modulus;

    /// Builds a context. When r > 1 and no modulus is supplied, the
    /// lexicographically smallest irreducible monic polynomial of degree r
    /// is selected, so defaults are reproducible across runs and machines.
    static FieldCtx make(uint32_t p, uint32_t r,
                         std::optional<std::vector<uint32_t>> modulus = std::nullopt) {
        require(p != 2, errc::even_characteristic, "characteristic 2 is not supported");
        require(p >= 3 && is_prime(p), errc::not_prime, "p must be an odd prime");
        require(r >= 1, errc::bad_range, "extension degree must be at least 1");

        FieldCtx ctx;
        ctx.p = p;
        ctx.r = r;
        uint64_t q = 1;
        for (uint32_t i = 0; i < r; ++i) {
            q *= p;
            require(q <= kMaxQ, errc::too_large, "q exceeds the 2^16 cap");
        }
        ctx.q = static_cast<uint32_t>(q);

        if (r > 1) {
            if (modulus) {
                ctx.modulus = *modulus;
                require(ctx.modulus.size() == r + 1 && ctx.modulus.back() == 1,
                        errc::reducible_modulus, "modulus must be monic of degree r");
                for (auto c : ctx.modulus)
                    require(c < p, errc::reducible_modulus, "modulus coefficient out of range");
                require(ctx.is_irreducible(ctx.modulus), errc::reducible_modulus,
                        "modulus is reducible over F_p");
            } else {
                ctx.modulus = ctx.default_modulus();
            }
        } else {
            require(!modulus || modulus->empty(), errc::reducible_modulus,
                    "prime fields take no modulus");
        }

        ctx.build_log_tables();
        return ctx;
    }

    friend bool operator==(const FieldCtx& a, const FieldCtx& b) {
        return a.p == b.p && a.r == b.r && a.modulus == b.modulus;
    }
    friend bool operator!=(const FieldCtx& a, const FieldCtx& b) { return !(a == b); }

    FieldElem zero() const { return {0}; }
    FieldElem one() const { return {1}; }
    FieldElem element(uint32_t code) const {
        require(code < q, errc::bad_range, "element code out of range");
        return {code};
    }
    /// The image of an integer under Z -> F_q (lands in the prime subfield).
    FieldElem from_int(long long v) const {
        long long m = v % static_cast<long long>(p);
        if (m < 0) m += p;
        return {static_cast<uint32_t>(m)};
    }

    FieldElem add(FieldElem a, FieldElem b) const {
        check(a), check(b);
        if (r == 1) {
            uint32_t s = a.code + b.code;
            return {s >= q ? s - q : s};
        }
        uint32_t out = 0, mul = 1, x = a.code, y = b.code;
        for (uint32_t i = 0; i < r; ++i) {
            uint32_t s = x % p + y % p;
            if (s >= p) s -= p;
            out += s * mul;
            mul *= p;
            x /= p;
            y /= p;
        }
        return {out};
    }

    FieldElem neg(FieldElem a) const {
        check(a);
        if (r == 1) return {a.code == 0 ? 0 : q - a.code};
        uint32_t out = 0, mul = 1, x = a.code;
        for (uint32_t i = 0; i < r; ++i) {
            uint32_t d = x % p;
            out += (d == 0 ? 0 : p - d) * mul;
            mul *= p;
            x /= p;
        }
        return {out};
    }

    FieldElem sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }

    FieldElem mul(FieldElem a, FieldElem b) const {
        check(a), check(b);
        if (a.code == 0 || b.code == 0) return {0};
        uint64_t e = static_cast<uint64_t>(log_[a.code]) + log_[b.code];
        if (e >= q - 1) e -= q - 1;
        return {exp_[e]};
    }

    FieldElem inv(FieldElem a) const {
        check(a);
        require(a.code != 0, errc::division_by_zero, "inverse of zero");
        uint32_t e = log_[a.code];
        return {exp_[e == 0 ? 0 : q - 1 - e]};
    }

    /// a / 2; the constant that realizes the 1/2 in the group law.
    FieldElem half(FieldElem a) const { return mul(a, half_); }

    FieldElem pow(FieldElem a, uint64_t e) const {
        FieldElem acc = one();
        FieldElem base = a;
        while (e) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

    /// All q elements in code order; index 0 is the zero element.
    std::vector<FieldElem> enumerate_elements() const {
        std::vector<FieldElem> out(q);
        for (uint32_t c = 0; c < q; ++c) out[c] = {c};
        return out;
    }

    static bool is_prime(uint64_t v) {
        if (v < 2) return false;
        for (uint64_t d = 2; d * d <= v; ++d)
            if (v % d == 0) return false;
        return true;
    }

private:
    std::vector<uint32_t> exp_;  // exp_[i] = g^i, i in [0, q-1)
    std::vector<uint32_t> log_;  // log_[exp_[i]] = i
    FieldElem half_{0};

    void check(FieldElem a) const { assert(a.code < q); (void)a; }

    // Plain polynomial multiplication mod (p, modulus); the reference path
    // that the log tables are built from.
    uint32_t poly_mul(uint32_t a, uint32_t b) const {
        if (r == 1) return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p);
        uint32_t da[32], db[32];
        uint64_t prod[64] = {0};
        for (uint32_t i = 0; i < r; ++i, a /= p) da[i] = a % p;
        for (uint32_t i = 0; i < r; ++i, b /= p) db[i] = b % p;
        for (uint32_t i = 0; i < r; ++i)
            for (uint32_t j = 0; j < r; ++j) prod[i + j] += static_cast<uint64_t>(da[i]) * db[j];
        // reduce by the monic modulus, top down
        for (int k = 2 * static_cast<int>(r) - 2; k >= static_cast<int>(r); --k) {
            uint64_t c = prod[k] % p;
            if (c == 0) continue;
            // x^k = x^(k-r) * (p - modulus_low) since modulus is monic
            for (uint32_t i = 0; i < r; ++i)
                prod[k - r + i] += c * (p - modulus[i] % p);
            prod[k] = 0;
        }
        uint32_t out = 0, mul = 1;
        for (uint32_t i = 0; i < r; ++i) {
            out += static_cast<uint32_t>(prod[i] % p) * mul;
            mul *= p;
        }
        return out;
    }

    bool is_irreducible(const std::vector<uint32_t>& mod) const {
        // Trial division by every monic divisor of degree 1..r/2. Desk-scale
        // degrees keep this cheap, and it needs no field structure.
        std::vector<uint32_t> m(mod.begin(), mod.end());
        if (m[0] == 0) return false;  // x divides
        for (uint32_t d = 1; 2 * d <= r; ++d) {
            uint64_t count = 1;
            for (uint32_t i = 0; i < d; ++i) count *= p;
            for (uint64_t tail = 0; tail < count; ++tail) {
                std::vector<uint32_t> div(d + 1);
                uint64_t t = tail;
                for (uint32_t i = 0; i < d; ++i, t /= p) div[i] = static_cast<uint32_t>(t % p);
                div[d] = 1;
                if (poly_divides(div, m)) return false;
            }
        }
        return true;
    }

    bool poly_divides(const std::vector<uint32_t>& div, std::vector<uint32_t> rem) const {
        // long division over F_p; div is monic
        int dd = static_cast<int>(div.size()) - 1;
        for (int k = static_cast<int>(rem.size()) - 1; k >= dd; --k) {
            uint64_t c = rem[k];
            if (c == 0) continue;
            for (int i = 0; i <= dd; ++i)
                rem[k - dd + i] =
                    static_cast<uint32_t>((rem[k - dd + i] + c * (p - div[i])) % p);
        }
        for (int i = 0; i < dd; ++i)
            if (rem[i] % p != 0) return false;
        return true;
    }

    std::vector<uint32_t> default_modulus() const {
        // Smallest coefficient list [c0, c1, ..., 1] in lexicographic order.
        uint64_t count = 1;
        for (uint32_t i = 0; i < r; ++i) count *= p;
        for (uint64_t idx = 0; idx < count; ++idx) {
            std::vector<uint32_t> cand(r + 1);
            uint64_t t = idx;
            // idx digits with c0 most significant gives lexicographic order
            for (uint32_t i = 0; i < r; ++i) {
                cand[r - 1 - i] = static_cast<uint32_t>(t % p);
                t /= p;
            }
            cand[r] = 1;
            if (is_irreducible(cand)) return cand;
        }
        raise(errc::reducible_modulus, "no irreducible polynomial found");  // unreachable
    }

    void build_log_tables() {
        exp_.assign(q - 1, 0);
        log_.assign(q, 0);
        uint32_t g = find_generator();
        uint32_t acc = 1;
        for (uint32_t i = 0; i < q - 1; ++i) {
            exp_[i] = acc;
            log_[acc] = i;
            acc = poly_mul(acc, g);
        }
        // half = inverse of 2 = inverse of the prime-subfield element 2
        uint32_t two = 2 % p;
        uint32_t e = log_[two];
        half_ = {exp_[e == 0 ? 0 : q - 1 - e]};
    }

    uint32_t find_generator() const {
        std::vector<uint32_t> prime_factors;
        uint32_t m = q - 1;
        for (uint32_t d = 2; d * d <= m; ++d) {
            if (m % d == 0) {
                prime_factors.push_back(d);
                while (m % d == 0) m /= d;
            }
        }
        if (m > 1) prime_factors.push_back(m);
        for (uint32_t c = 2; c < q; ++c) {
            bool ok = true;
            for (uint32_t f : prime_factors) {
                if (poly_pow(c, (q - 1) / f) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) return c;
        }
        raise(errc::bad_field, "no multiplicative generator found");  // unreachable
    }

    uint32_t poly_pow(uint32_t base, uint32_t e) const {
        uint32_t acc = 1;
        while (e) {
            if (e & 1) acc = poly_mul(acc, base);
            base = poly_mul(base, base);
            e >>= 1;
        }
        return acc;
    }
};

/// Resolves q = p^r from a prime power and builds the default context.
inline FieldCtx field_from_q(uint32_t q) {
    require(q >= 3, errc::bad_field, "q must be an odd prime power >= 3");
    uint32_t p = 0;
    for (uint32_t d = 2; d * d <= q; ++d) {
        if (q % d == 0) {
            p = d;
            break;
        }
    }
    if (p == 0) p = q;  // q itself prime
    uint32_t r = 0;
    uint32_t rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++r;
    }
    require(rest == 1, errc::bad_field, std::to_string(q) + " is not a prime power");
    return FieldCtx::make(p, r);
}

}  // namespace hlw
