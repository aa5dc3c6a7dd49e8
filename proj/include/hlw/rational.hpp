#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "error.hpp"

namespace hlw {

/// Exact rational with a small fixed-width representation. Used for
/// Lebesgue exponents and for power-of-q exponent arithmetic, where
/// comparisons must be exact rather than floating point.
struct Rat {
    long long num = 0;
    long long den = 1;

    constexpr Rat() = default;
    Rat(long long n, long long d = 1) : num(n), den(d) {
        require(d != 0, errc::bad_range, "rational with zero denominator");
        normalize();
    }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
    friend Rat operator/(Rat a, Rat b) {
        require(b.num != 0, errc::division_by_zero, "rational division by zero");
        return Rat(a.num * b.den, a.den * b.num);
    }
    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

/// A Lebesgue exponent u in [1, inf]. Stored exactly; the conjugate obeys
/// 1/u + 1/u' = 1 with the usual convention that 1 and inf are conjugate.
class Exponent {
public:
    Exponent() : u_(1, 1), infinite_(false) {}
    explicit Exponent(Rat u) : u_(u), infinite_(false) {
        require(u >= Rat(1), errc::bad_exponent, "exponent below 1: " + u.str());
    }
    Exponent(long long num, long long den) : Exponent(Rat(num, den)) {}

    static Exponent infinity() {
        Exponent e;
        e.infinite_ = true;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    bool is_one() const { return !infinite_ && u_ == Rat(1); }

    /// The exponent as a rational; only valid when finite.
    Rat rat() const {
        require(!infinite_, errc::bad_exponent, "infinite exponent has no rational value");
        return u_;
    }

    double value() const { return infinite_ ? std::numeric_limits<double>::infinity() : u_.value(); }

    /// 1/u, exactly (0 when u = inf).
    Rat reciprocal() const { return infinite_ ? Rat(0) : Rat(u_.den, u_.num); }

    Exponent conjugate() const {
        if (infinite_) return Exponent(Rat(1));
        if (u_ == Rat(1)) return infinity();
        // u' = u / (u - 1)
        return Exponent(u_ / (u_ - Rat(1)));
    }

    friend bool operator==(const Exponent& a, const Exponent& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ && b.infinite_;
        return a.u_ == b.u_;
    }
    friend bool operator!=(const Exponent& a, const Exponent& b) { return !(a == b); }
    friend bool operator<(const Exponent& a, const Exponent& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.u_ < b.u_;
    }
    friend bool operator<=(const Exponent& a, const Exponent& b) { return a == b || a < b; }

    std::string str() const { return infinite_ ? "inf" : u_.str(); }

    /// Parses "inf", "3", or "3/2".
    static Exponent parse(const std::string& s) {
        if (s == "inf" || s == "Inf" || s == "INF") return infinity();
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Exponent(Rat(std::stoll(s)));
            return Exponent(Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))));
        } catch (const std::logic_error&) {
            raise(errc::bad_exponent, "cannot parse exponent '" + s + "'");
        }
    }

private:
    Rat u_;
    bool infinite_;
};

}  // namespace hlw
