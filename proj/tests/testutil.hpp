#pragma once

#include <random>
#include <vector>

#include "refla/refla.hpp"

namespace testutil {

using namespace refla;

// The running 4x4 example used throughout the suite.
inline IntMatrix walkthrough_a() {
    return IntMatrix{{3, 8, 7, 1}, {5, 3, 5, 4}, {6, -2, 1, 7}, {7, -2, -6, 11}};
}

inline IntVector walkthrough_v() { return {Int(1), Int(5), Int(7), Int(2)}; }
inline IntVector walkthrough_w() { return {Int(2), Int(6), Int(3), Int(4)}; }

inline IntMatrix walkthrough_merged() {
    return IntMatrix{{3, 8, 7, 1}, {5, -31, -20, 7}, {6, -54, 43, -29}, {7, -62, 279, -89}};
}

inline IntMatrix walkthrough_updated_merged() {
    return IntMatrix{{5, 14, 10, 5}, {15, -45, -50, 45}, {20, -80, 10, 45}, {11, -104, -50, -178}};
}

inline IntVector iv(std::initializer_list<long> xs) {
    IntVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

inline IntMatrix random_nonsingular(std::mt19937_64& rng, std::size_t n, long lo = -9,
                                    long hi = 9) {
    std::uniform_int_distribution<long> dist(lo, hi);
    for (;;) {
        IntMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = Int(dist(rng));
        try {
            ref_lu_factorize(a);
            return a;
        } catch (const SingularMatrix&) {
        }
    }
}

inline IntMatrix random_symmetric_nonsingular(std::mt19937_64& rng, std::size_t n,
                                              long lo = -9, long hi = 9) {
    std::uniform_int_distribution<long> dist(lo, hi);
    for (;;) {
        IntMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                a(i, j) = Int(dist(rng));
                a(j, i) = a(i, j);
            }
        try {
            ref_cholesky_factorize(a);
            return a;
        } catch (const Error&) {
        }
    }
}

inline IntVector random_vector(std::mt19937_64& rng, std::size_t n, long lo = -9, long hi = 9) {
    std::uniform_int_distribution<long> dist(lo, hi);
    IntVector v(n);
    for (auto& e : v) e = Int(dist(rng));
    return v;
}

inline IntVector random_nonzero_vector(std::mt19937_64& rng, std::size_t n, long lo = -9,
                                       long hi = 9) {
    for (;;) {
        IntVector v = random_vector(rng, n, lo, hi);
        if (!is_zero_vector(v)) return v;
    }
}

// Brute-force adjugate: adj(A)(i,j) = (-1)^{i+j} * minor(A with row j, col i removed).
inline IntMatrix adjugate_bruteforce(const IntMatrix& a) {
    const std::size_t n = a.rows();
    IntMatrix adj(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::size_t> rows, cols;
            for (std::size_t r = 0; r < n; ++r)
                if (r != j) rows.push_back(r);
            for (std::size_t c = 0; c < n; ++c)
                if (c != i) cols.push_back(c);
            Int m = brute_minor(a, rows, cols);
            if ((i + j) % 2 == 1) m.negate();
            adj(i, j) = std::move(m);
        }
    }
    return adj;
}

}  // namespace testutil
