#pragma once

#include <gmp.h>

#include <cstdint>
#include <iostream>
#include <string>
#include <utility>

#include "refla/errors.hpp"

namespace refla {

// Tallies of big-integer operations. Each addition, subtraction,
// multiplication, or division of two entries counts as one operation;
// negation, copies and comparisons are free.
struct OpCounts {
    std::uint64_t add = 0;
    std::uint64_t sub = 0;
    std::uint64_t mul = 0;
    std::uint64_t div = 0;

    std::uint64_t total() const { return add + sub + mul + div; }

    OpCounts operator-(const OpCounts& o) const {
        return {add - o.add, sub - o.sub, mul - o.mul, div - o.div};
    }
    OpCounts& operator+=(const OpCounts& o) {
        add += o.add;
        sub += o.sub;
        mul += o.mul;
        div += o.div;
        return *this;
    }
    bool operator==(const OpCounts& o) const = default;
};

namespace detail {

struct OpState {
    OpCounts counts;
    int paused = 0;
};

inline OpState& op_state() {
    thread_local OpState s;
    return s;
}

inline void tally_add(std::uint64_t k = 1) {
    auto& s = op_state();
    if (s.paused == 0) s.counts.add += k;
}
inline void tally_sub(std::uint64_t k = 1) {
    auto& s = op_state();
    if (s.paused == 0) s.counts.sub += k;
}
inline void tally_mul(std::uint64_t k = 1) {
    auto& s = op_state();
    if (s.paused == 0) s.counts.mul += k;
}
inline void tally_div(std::uint64_t k = 1) {
    auto& s = op_state();
    if (s.paused == 0) s.counts.div += k;
}

}  // namespace detail

inline OpCounts op_counts() { return detail::op_state().counts; }
inline void reset_op_counts() { detail::op_state().counts = OpCounts{}; }

// Suspends op tallying on this thread for the lifetime of the guard.
// Used around bookkeeping that is not part of an algorithm's accounting.
class OpCountPause {
public:
    OpCountPause() { ++detail::op_state().paused; }
    ~OpCountPause() { --detail::op_state().paused; }
    OpCountPause(const OpCountPause&) = delete;
    OpCountPause& operator=(const OpCountPause&) = delete;
};

// Unbounded-precision signed integer, a value-semantics wrapper over GMP.
// All library arithmetic is exact; there is no rounding anywhere.
class Int {
public:
    Int() { mpz_init(v_); }
    Int(int x) { mpz_init_set_si(v_, x); }
    Int(long x) { mpz_init_set_si(v_, x); }
    explicit Int(const std::string& s) {
        if (mpz_init_set_str(v_, s.c_str(), 10) != 0) {
            mpz_clear(v_);
            throw ParseError("bad integer literal '" + s + "'");
        }
    }

    Int(const Int& o) { mpz_init_set(v_, o.v_); }
    Int(Int&& o) noexcept {
        mpz_init(v_);
        mpz_swap(v_, o.v_);
    }
    Int& operator=(const Int& o) {
        if (this != &o) mpz_set(v_, o.v_);
        return *this;
    }
    Int& operator=(Int&& o) noexcept {
        mpz_swap(v_, o.v_);
        return *this;
    }
    ~Int() { mpz_clear(v_); }

    int sgn() const { return mpz_sgn(v_); }
    bool is_zero() const { return mpz_sgn(v_) == 0; }
    bool is_one() const { return mpz_cmp_ui(v_, 1) == 0; }

    // Encoding size in bits; zero reports length 0.
    std::size_t bit_length() const {
        return is_zero() ? 0 : mpz_sizeinbase(v_, 2);
    }

    bool fits_long() const { return mpz_fits_slong_p(v_) != 0; }
    long to_long() const {
        if (!fits_long()) throw OutOfRange("integer does not fit in long");
        return mpz_get_si(v_);
    }
    double to_double() const { return mpz_get_d(v_); }

    std::string str() const {
        char* c = mpz_get_str(nullptr, 10, v_);
        std::string s(c);
        void (*freefn)(void*, std::size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefn);
        freefn(c, s.size() + 1);
        return s;
    }

    void negate() { mpz_neg(v_, v_); }
    Int negated() const {
        Int r(*this);
        r.negate();
        return r;
    }
    Int abs() const {
        Int r;
        mpz_abs(r.v_, v_);
        return r;
    }

    friend int cmp(const Int& a, const Int& b) { return mpz_cmp(a.v_, b.v_); }
    friend bool operator==(const Int& a, const Int& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const Int& a, const Int& b) { return cmp(a, b) != 0; }
    friend bool operator<(const Int& a, const Int& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Int& a, const Int& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Int& a, const Int& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Int& a, const Int& b) { return cmp(a, b) >= 0; }
    friend bool operator==(const Int& a, long b) { return mpz_cmp_si(a.v_, b) == 0; }
    friend bool operator!=(const Int& a, long b) { return mpz_cmp_si(a.v_, b) != 0; }

    friend Int operator+(const Int& a, const Int& b) {
        Int r;
        mpz_add(r.v_, a.v_, b.v_);
        detail::tally_add();
        return r;
    }
    friend Int operator-(const Int& a, const Int& b) {
        Int r;
        mpz_sub(r.v_, a.v_, b.v_);
        detail::tally_sub();
        return r;
    }
    friend Int operator*(const Int& a, const Int& b) {
        Int r;
        mpz_mul(r.v_, a.v_, b.v_);
        detail::tally_mul();
        return r;
    }
    friend Int operator-(const Int& a) { return a.negated(); }

    Int& operator+=(const Int& o) {
        mpz_add(v_, v_, o.v_);
        detail::tally_add();
        return *this;
    }
    Int& operator-=(const Int& o) {
        mpz_sub(v_, v_, o.v_);
        detail::tally_sub();
        return *this;
    }
    Int& operator*=(const Int& o) {
        mpz_mul(v_, v_, o.v_);
        detail::tally_mul();
        return *this;
    }

    friend std::ostream& operator<<(std::ostream& os, const Int& x) { return os << x.str(); }

    mpz_srcptr raw() const { return v_; }
    mpz_ptr raw() { return v_; }

    friend void swap(Int& a, Int& b) noexcept { mpz_swap(a.v_, b.v_); }

private:
    mpz_t v_;
};

namespace detail {

// Reusable per-thread temporaries for the fused kernels below.
struct Scratch {
    mpz_t t, r;
    Scratch() {
        mpz_init(t);
        mpz_init(r);
    }
    ~Scratch() {
        mpz_clear(t);
        mpz_clear(r);
    }
};

inline Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

inline void exact_div_raw(mpz_ptr out, mpz_srcptr num, mpz_srcptr den, const char* where) {
    if (mpz_sgn(den) == 0) throw DivisionByZero();
    auto& s = scratch();
    mpz_tdiv_qr(out, s.r, num, den);
    if (mpz_sgn(s.r) != 0) throw NonExactDivision(where);
    tally_div();
}

}  // namespace detail

// Division with a zero-remainder guarantee. A nonzero remainder means an
// internal invariant was violated and aborts with NonExactDivision.
inline Int exact_div(const Int& num, const Int& den) {
    Int q;
    detail::exact_div_raw(q.raw(), num.raw(), den.raw(), "exact_div");
    return q;
}

// a*b - c*d, the divisor-free forward-substitution step (2 mul, 1 sub).
inline Int mul_sub(const Int& a, const Int& b, const Int& c, const Int& d) {
    Int r;
    auto& s = detail::scratch();
    mpz_mul(s.t, a.raw(), b.raw());
    mpz_submul(s.t, c.raw(), d.raw());
    mpz_set(r.raw(), s.t);
    detail::tally_mul(2);
    detail::tally_sub(1);
    return r;
}

// (a*b - c*d) / divisor with exactness check (2 mul, 1 sub, 1 div).
// This is the single workhorse of every pivoting-style recurrence.
inline Int fused_div(const Int& a, const Int& b, const Int& c, const Int& d,
                     const Int& divisor, const char* where = "fused_div") {
    auto& s = detail::scratch();
    mpz_mul(s.t, a.raw(), b.raw());
    mpz_submul(s.t, c.raw(), d.raw());
    detail::tally_mul(2);
    detail::tally_sub(1);
    Int q;
    detail::exact_div_raw(q.raw(), s.t, divisor.raw(), where);
    return q;
}

// (a*b + c*d) / divisor, the inverse of one pivoting step (2 mul, 1 add, 1 div).
inline Int fused_div_add(const Int& a, const Int& b, const Int& c, const Int& d,
                         const Int& divisor, const char* where = "fused_div_add") {
    auto& s = detail::scratch();
    mpz_mul(s.t, a.raw(), b.raw());
    mpz_addmul(s.t, c.raw(), d.raw());
    detail::tally_mul(2);
    detail::tally_add(1);
    Int q;
    detail::exact_div_raw(q.raw(), s.t, divisor.raw(), where);
    return q;
}

// In-place form of fused_div for hot loops; `out` may alias any input.
inline void fused_div_into(Int& out, const Int& a, const Int& b, const Int& c,
                           const Int& d, const Int& divisor,
                           const char* where = "fused_div") {
    auto& s = detail::scratch();
    mpz_mul(s.t, a.raw(), b.raw());
    mpz_submul(s.t, c.raw(), d.raw());
    detail::tally_mul(2);
    detail::tally_sub(1);
    detail::exact_div_raw(out.raw(), s.t, divisor.raw(), where);
}

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.raw(), a.raw(), b.raw());
    return r;
}

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.raw(), a.raw(), b.raw());
    return r;
}

}  // namespace refla
