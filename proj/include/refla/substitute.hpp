#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "refla/factorize.hpp"

namespace refla {

// Iterate k of the forward-substitution recursion. Entries 0..k-1 are final;
// the rest sit at stage k.
struct FSVector {
    std::size_t k = 0;
    IntVector entries;

    friend bool operator==(const FSVector& a, const FSVector& b) {
        return a.k == b.k && a.entries == b.entries;
    }
};

// One recursive step: consumes the iterate k-1 vector, column k of the
// lower-triangular factor (col[i] = l(i, k-1) zero-based for i >= k-1), and
// the previous pivot l_{k-1,k-1}; returns iterate k. The k = 1 step carries
// no division since rho^0 = 1.
inline FSVector ref_fs_step(const FSVector& y_prev, const IntVector& col,
                            const Int& pivot_prev, std::size_t k) {
    const std::size_t n = y_prev.entries.size();
    if (col.size() != n) throw DimensionMismatch("ref_fs_step column");
    if (k < 1 || k > n) throw OutOfRange("ref_fs_step iteration index");
    FSVector y{k, y_prev.entries};
    const Int& diag = col[k - 1];
    for (std::size_t i = k; i < n; ++i) {
        if (k == 1)
            y.entries[i] = mul_sub(diag, y_prev.entries[i], col[i], y_prev.entries[k - 1]);
        else
            y.entries[i] = fused_div(diag, y_prev.entries[i], col[i], y_prev.entries[k - 1],
                                     pivot_prev, "ref_fs_step");
    }
    return y;
}

// Full forward substitution on b, returning the iterates y^(0)..y^(n-1).
// With use_transpose the recursion runs on U^T, i.e. column k is row k of U.
inline std::vector<FSVector> ref_forward_substitute(const REFFactorization& f,
                                                    const IntVector& b,
                                                    bool use_transpose = false) {
    const std::size_t n = f.n();
    if (b.size() != n) throw DimensionMismatch("ref_forward_substitute rhs");
    std::vector<FSVector> iters;
    iters.reserve(n);
    iters.push_back(FSVector{0, b});
    for (std::size_t k = 1; k < n; ++k) {
        IntVector col = use_transpose ? f.merged().row(k - 1) : f.merged().col(k - 1);
        const Int& prev = f.pivot(k - 1);
        iters.push_back(ref_fs_step(iters.back(), col, prev, k));
    }
    return iters;
}

// Backward substitution on the scaled vector y' = rho^n * y; every division
// is exact and the result is the integer vector x' = det(base) * x.
inline IntVector ref_backward_substitute(const REFFactorization& f, const IntVector& y_scaled) {
    const std::size_t n = f.n();
    if (y_scaled.size() != n) throw DimensionMismatch("ref_backward_substitute rhs");
    IntVector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        Int acc = y_scaled[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= f.u(ii, j) * x[j];
        x[ii] = exact_div(acc, f.u(ii, ii));
    }
    return x;
}

// Integer numerators plus the common determinant denominator; the solution
// itself is x_i = scaled_x[i] / det, reported to any precision on demand.
struct ExactSolution {
    IntVector scaled_x;
    Int det;

    Rational value(std::size_t i) const { return Rational(scaled_x[i], det); }
    std::size_t size() const { return scaled_x.size(); }
};

// Solves A x = b exactly for the caller's matrix A (permutations are applied
// on entry and undone on exit). Postcondition: A * scaled_x == det * b.
inline ExactSolution solve(const REFFactorization& f, const IntVector& b) {
    const std::size_t n = f.n();
    if (b.size() != n) throw DimensionMismatch("solve rhs");
    IntVector b_int = f.row_perm().apply(b);
    auto iters = ref_forward_substitute(f, b_int, false);
    IntVector y_scaled = scaled(iters.back().entries, f.pivot(n));
    IntVector x_int = ref_backward_substitute(f, y_scaled);
    IntVector x_user = f.col_perm().apply_inverse(x_int);
    const int sign = f.row_perm().parity() * f.col_perm().parity();
    Int det = f.pivot(n);
    if (sign < 0) {
        det.negate();
        for (auto& e : x_user) e.negate();
    }
    return ExactSolution{std::move(x_user), std::move(det)};
}

}  // namespace refla
