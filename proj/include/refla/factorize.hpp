#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "refla/matrix.hpp"
#include "refla/permutation.hpp"
#include "refla/rational.hpp"

namespace refla {

// Fraction-free LU factorization in merged form: L is stored below and on
// the diagonal, U above it; the two diagonals coincide. Together with the
// pivot sequence rho^0..rho^n this represents A = L * D^-1 * U where
// D = diag(rho^{k-1} * rho^k) is regenerated on demand and never stored.
//
// The factorization always describes `base()`, i.e. the input matrix with
// the recorded row/column permutations already applied. base() is retained
// because the update algorithms read original entries and permute them.
class REFFactorization {
public:
    REFFactorization() = default;
    REFFactorization(IntMatrix merged, std::vector<Int> pivots, IntMatrix base,
                     Permutation row_perm, Permutation col_perm, bool symmetric)
        : n_(merged.rows()),
          merged_(std::move(merged)),
          pivots_(std::move(pivots)),
          base_(std::move(base)),
          row_perm_(std::move(row_perm)),
          col_perm_(std::move(col_perm)),
          symmetric_(symmetric) {}

    std::size_t n() const { return n_; }
    const IntMatrix& merged() const { return merged_; }
    const IntMatrix& base() const { return base_; }
    const Permutation& row_perm() const { return row_perm_; }
    const Permutation& col_perm() const { return col_perm_; }
    bool symmetric() const { return symmetric_; }

    // l(i,j) valid for i >= j, u(i,j) for i <= j; both share the diagonal.
    const Int& l(std::size_t i, std::size_t j) const { return merged_(i, j); }
    const Int& u(std::size_t i, std::size_t j) const { return merged_(i, j); }

    // rho^k for k = 0..n, rho^0 = 1; rho^k equals the k-th leading
    // principal minor of base().
    const Int& pivot(std::size_t k) const { return pivots_[k]; }
    const std::vector<Int>& pivots() const { return pivots_; }

    // Determinant of the caller's matrix: parity-adjusted rho^n.
    Int det() const {
        Int d = pivots_[n_];
        if (row_perm_.parity() * col_perm_.parity() < 0) d.negate();
        return d;
    }

    // Entry (i,j) of the caller's (unpermuted) matrix.
    Int user_entry(std::size_t i, std::size_t j) const {
        return base_(inverse_index(row_perm_, i), inverse_index(col_perm_, j));
    }

    Diagnostics diagnostics() const {
        Diagnostics d;
        d.sigma = base_.max_abs_entry();
        d.beta_max = merged_.max_bit_length();
        d.bound_log2 = bit_bound_log2(n_, d.sigma);
        d.bound_ln = bit_bound_ln(n_, d.sigma);
        return d;
    }

private:
    static std::size_t inverse_index(const Permutation& p, std::size_t user) {
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] == user) return i;
        throw OutOfRange("permutation index");
    }

    friend struct FactorizationAccess;

    std::size_t n_ = 0;
    IntMatrix merged_;
    std::vector<Int> pivots_;
    IntMatrix base_;
    Permutation row_perm_;
    Permutation col_perm_;
    bool symmetric_ = false;
};

namespace detail {

// One integer-preserving elimination step on rows/cols strictly past the
// pivot. Entries in the pivot column below the diagonal are left at their
// pre-elimination values, which is exactly what the merged form stores.
inline void ipge_step_inplace(IntMatrix& m, std::size_t k, const Int& prev_pivot) {
    const std::size_t n = m.rows();
    const Int pivot = m(k, k);
    if (pivot.is_zero()) throw ZeroPivot(k + 1);
    for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j)
            fused_div_into(m(i, j), pivot, m(i, j), m(k, j), m(i, k), prev_pivot,
                           "ipge_step");
}

}  // namespace detail

// Iteration k (1-based) of integer-preserving Gaussian elimination applied
// to a working matrix whose first k-1 steps are already done. prev_pivot is
// rho^{k-1} (1 when k = 1).
inline IntMatrix ipge_step(const IntMatrix& work, std::size_t k, const Int& prev_pivot) {
    if (!work.square()) throw DimensionMismatch("ipge_step needs a square matrix");
    if (k < 1 || k > work.rows()) throw OutOfRange("ipge_step iteration index");
    IntMatrix m = work;
    detail::ipge_step_inplace(m, k - 1, prev_pivot);
    return m;
}

// Builds the merged REF-LU factorization. When a zero pivot is met, the
// first row below it with a nonzero candidate is swapped in and recorded;
// magnitude-based pivoting is unnecessary for exactness.
inline REFFactorization ref_lu_factorize(const IntMatrix& a) {
    if (!a.square() || a.rows() == 0) throw DimensionMismatch("ref_lu_factorize needs a square matrix");
    const std::size_t n = a.rows();
    IntMatrix m = a;
    IntMatrix base = a;
    Permutation row_perm(n), col_perm(n);
    std::vector<Int> pivots(n + 1);
    pivots[0] = Int(1);

    for (std::size_t k = 0; k < n; ++k) {
        if (m(k, k).is_zero()) {
            std::size_t r = k + 1;
            while (r < n && m(r, k).is_zero()) ++r;
            if (r == n) throw SingularMatrix();
            m.swap_rows(k, r);
            base.swap_rows(k, r);
            row_perm.swap_positions(k, r);
        }
        pivots[k + 1] = m(k, k);
        if (k + 1 < n) detail::ipge_step_inplace(m, k, pivots[k]);
    }
    return REFFactorization(std::move(m), std::move(pivots), std::move(base),
                            std::move(row_perm), std::move(col_perm), false);
}

// Symmetric specialization: U = L^T, no square roots taken. Pivoting is not
// attempted because row-only swaps would break symmetry; a zero leading
// principal minor is reported instead.
inline REFFactorization ref_cholesky_factorize(const IntMatrix& a) {
    if (!a.square() || a.rows() == 0) throw DimensionMismatch("ref_cholesky_factorize needs a square matrix");
    if (!a.is_symmetric()) throw NotSymmetric();
    const std::size_t n = a.rows();
    IntMatrix m = a;
    std::vector<Int> pivots(n + 1);
    pivots[0] = Int(1);

    for (std::size_t k = 0; k < n; ++k) {
        if (m(k, k).is_zero())
            throw SingularMatrix("zero leading principal minor at order " + std::to_string(k + 1));
        pivots[k + 1] = m(k, k);
        const Int pivot = m(k, k);
        // Symmetry: compute the lower part and mirror it.
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j <= i; ++j)
                fused_div_into(m(i, j), pivot, m(i, j), m(k, j), m(i, k), pivots[k],
                               "ref_cholesky_factorize");
            for (std::size_t j = k + 1; j < i; ++j) m(j, i) = m(i, j);
        }
    }
    return REFFactorization(std::move(m), std::move(pivots), IntMatrix(a),
                            Permutation(n), Permutation(n), true);
}

inline Int determinant(const REFFactorization& f) { return f.det(); }

namespace detail {

// Exact determinant by cofactor expansion over an index view. Exponential;
// strictly a test/verification oracle for small orders.
inline Int det_recursive(const IntMatrix& a, std::vector<std::size_t>& rows,
                         const std::vector<std::size_t>& cols, std::size_t depth) {
    const std::size_t m = cols.size() - depth;
    if (m == 1) return a(rows.back(), cols[depth]);
    Int acc(0);
    int sign = 1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Int& lead = a(rows[r], cols[depth]);
        if (!lead.is_zero()) {
            std::vector<std::size_t> rest;
            rest.reserve(rows.size() - 1);
            for (std::size_t q = 0; q < rows.size(); ++q)
                if (q != r) rest.push_back(rows[q]);
            Int sub = det_recursive(a, rest, cols, depth + 1);
            if (sign < 0)
                acc -= lead * sub;
            else
                acc += lead * sub;
        }
        sign = -sign;
    }
    return acc;
}

}  // namespace detail

// det of the submatrix of `a` picked by explicit row/column index lists
// (duplicates allowed and yield zero), expanded by brute force.
inline Int brute_minor(const IntMatrix& a, std::vector<std::size_t> rows,
                       std::vector<std::size_t> cols) {
    if (rows.size() != cols.size()) throw DimensionMismatch("brute_minor");
    if (rows.empty()) return Int(1);
    for (std::size_t i = 0; i < cols.size(); ++i)
        for (std::size_t j = i + 1; j < cols.size(); ++j)
            if (cols[i] == cols[j] || rows[i] == rows[j]) return Int(0);
    return detail::det_recursive(a, rows, cols, 0);
}

inline Int brute_determinant(const IntMatrix& a) {
    std::vector<std::size_t> idx(a.rows());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return brute_minor(a, idx, idx);
}

// Stage-k IPGE value of entry (i,j) (0-based), computed as the signed
// subdeterminant it provably equals, by brute-force expansion. Valid for
// 0 <= k <= n and i,j >= k-1; test oracle only, exponential cost.
inline Int subdeterminant_oracle(const IntMatrix& a, std::size_t k, std::size_t i,
                                 std::size_t j) {
    const std::size_t n = a.rows();
    if (k > n || i >= n || j >= n) throw OutOfRange("subdeterminant_oracle");
    if (i + 1 < k || j + 1 < k) throw OutOfRange("subdeterminant_oracle: entry above stage row");
    std::vector<std::size_t> rows, cols;
    if (i + 1 == k) {
        // Pivot-row entry: rows 0..k-1, columns 0..k-2 plus j.
        for (std::size_t r = 0; r < k; ++r) rows.push_back(r);
        for (std::size_t c = 0; c + 1 < k; ++c) cols.push_back(c);
        cols.push_back(j);
    } else {
        for (std::size_t r = 0; r < k; ++r) rows.push_back(r);
        rows.push_back(i);
        for (std::size_t c = 0; c < k; ++c) cols.push_back(c);
        cols.push_back(j);
    }
    return brute_minor(a, std::move(rows), std::move(cols));
}

// Exact check that L * D^-1 * U reproduces base() entry for entry, done in
// rational arithmetic. Intended for moderate orders.
inline bool reconstruction_identity_holds(const REFFactorization& f) {
    const std::size_t n = f.n();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Rational acc(Int(0));
            const std::size_t top = std::min(i, j);
            for (std::size_t m = 0; m <= top; ++m) {
                Rational d(f.pivot(m) * f.pivot(m + 1));
                acc = acc + Rational(f.l(i, m) * f.u(m, j)) / d;
            }
            if (acc != Rational(f.base()(i, j))) return false;
        }
    }
    return true;
}

}  // namespace refla
