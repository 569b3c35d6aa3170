#pragma once

#include <string>
#include <utility>

#include "refla/int.hpp"

namespace refla {

// Exact rational with a canonical representation: reduced, denominator
// positive. Used for reporting solutions and as a test oracle; the
// computation path itself never carries rationals.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(Int n) : num_(std::move(n)), den_(1) {}
    Rational(Int n, Int d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_.is_zero()) throw DivisionByZero();
        canonicalize();
    }
    Rational(long n, long d = 1) : Rational(Int(n), Int(d)) {}

    const Int& num() const { return num_; }
    const Int& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_.is_one(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw DivisionByZero();
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    std::string str() const { return num_.str() + "/" + den_.str(); }

    // Parses "p", "p/q", or a plain decimal like "-0.25".
    static Rational parse(const std::string& tok) {
        auto slash = tok.find('/');
        if (slash != std::string::npos) {
            return Rational(Int(tok.substr(0, slash)), Int(tok.substr(slash + 1)));
        }
        auto dot = tok.find('.');
        if (dot != std::string::npos) {
            std::string digits = tok.substr(0, dot) + tok.substr(dot + 1);
            std::size_t frac = tok.size() - dot - 1;
            if (frac == 0 || digits.empty()) throw ParseError("bad decimal '" + tok + "'");
            Int den(1);
            for (std::size_t i = 0; i < frac; ++i) den *= Int(10);
            return Rational(Int(digits), den);
        }
        return Rational(Int(tok));
    }

    // Exact decimal expansion to `digits` fractional digits, rounded
    // half-to-even at the last digit.
    std::string decimal(std::size_t digits) const {
        Int n = num_.abs();
        Int scale(1);
        for (std::size_t i = 0; i < digits; ++i) scale *= Int(10);
        // round(n*scale / den) with ties to even
        Int prod = n * scale;
        Int q, r;
        mpz_tdiv_qr(q.raw(), r.raw(), prod.raw(), den_.raw());
        Int twice_r = r + r;
        int c = cmp(twice_r, den_);
        if (c > 0 || (c == 0 && mpz_odd_p(q.raw()))) q += Int(1);
        std::string s = q.str();
        if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
        std::string out = s.substr(0, s.size() - digits);
        if (digits > 0) out += "." + s.substr(s.size() - digits);
        if (num_.sgn() < 0 && !(q.is_zero())) out.insert(0, 1, '-');
        return out;
    }

private:
    void canonicalize() {
        if (den_.sgn() < 0) {
            num_.negate();
            den_.negate();
        }
        Int g = gcd(num_, den_);
        if (!g.is_one() && !g.is_zero()) {
            mpz_divexact(num_.raw(), num_.raw(), g.raw());
            mpz_divexact(den_.raw(), den_.raw(), g.raw());
        }
        if (num_.is_zero()) den_ = Int(1);
    }

    Int num_;
    Int den_;
};

}  // namespace refla
