#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "error.hpp"

namespace nsreg {

/// Exact rational with 64-bit parts, always normalised (den > 0).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rational() = default;
    constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
        if (den == 0) throw ValidationError("zero denominator");
        if (den < 0) num = -num, den = -den;
        auto g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) num /= g, den /= g;
    }
    double value() const { return double(num) / double(den); }
    friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
    friend Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
    friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
    friend auto operator<=>(Rational a, Rational b) { return a.num * b.den <=> b.num * a.den; }
    std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
};

/// Lebesgue exponent in [1, inf], stored through its exact reciprocal in [0, 1].
class Exponent {
public:
    constexpr Exponent() : inv_(1, 1) {}
    /// From the reciprocal 1/p.
    static Exponent from_reciprocal(Rational inv) {
        if (inv < Rational(0) || inv > Rational(1))
            throw ValidationError("exponent outside [1, inf]: reciprocal " + inv.str());
        Exponent e;
        e.inv_ = inv;
        return e;
    }
    static Exponent infinity() { return from_reciprocal(Rational(0)); }
    static Exponent of(std::int64_t num, std::int64_t den = 1) {
        if (num <= 0) throw ValidationError("exponent must be positive");
        return from_reciprocal(Rational(den, num));
    }
    /// Accepts "inf", integers, fractions "a/b" and finite decimals "1.5".
    static Exponent parse(const std::string& text) {
        std::string s = text;
        if (s == "inf" || s == "infinity" || s == "Inf" || s == "oo") return infinity();
        try {
            auto slash = s.find('/');
            if (slash != std::string::npos)
                return of(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
            auto dot = s.find('.');
            if (dot == std::string::npos) return of(std::stoll(s));
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::int64_t den = 1;
            for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
            return of(std::stoll(digits), den);
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception&) {
            throw ValidationError("cannot parse exponent '" + text + "'");
        }
    }

    Rational reciprocal() const { return inv_; }
    bool is_infinite() const { return inv_.num == 0; }
    double value() const { return is_infinite() ? std::numeric_limits<double>::infinity() : 1.0 / inv_.value(); }
    /// Hoelder conjugate p' with 1/p + 1/p' = 1.
    Exponent conjugate() const { return from_reciprocal(Rational(1) - inv_); }
    std::string str() const { return is_infinite() ? "inf" : (Rational(1) / inv_).str(); }
    friend bool operator==(const Exponent& a, const Exponent& b) { return a.inv_ == b.inv_; }

private:
    Rational inv_;
};

/// The exponent e with 1/e = a + b/p, e.g. 2p/(p+2) is (1/2, 1).
inline Exponent affine_reciprocal(const Exponent& p, Rational a, Rational b) {
    return Exponent::from_reciprocal(a + b * p.reciprocal());
}

struct ExponentPair {
    Exponent p;
    Exponent q;

    /// kappa = 3/p + 2/q, exact.
    Rational kappa() const { return Rational(3) * p.reciprocal() + Rational(2) * q.reciprocal(); }
    ExponentPair conjugate() const { return {p.conjugate(), q.conjugate()}; }
    std::string str() const { return "(" + p.str() + "," + q.str() + ")"; }
    friend bool operator==(const ExponentPair&, const ExponentPair&) = default;
};

} // namespace nsreg
