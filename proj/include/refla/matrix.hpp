#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "refla/int.hpp"
#include "refla/rational.hpp"

namespace refla {

using IntVector = std::vector<Int>;

inline bool is_zero_vector(const IntVector& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

// Dense row-major matrix of unbounded-precision integers.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionMismatch("ragged initializer");
            for (long x : r) data_.emplace_back(x);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Int(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Int& at(std::size_t i, std::size_t j) {
        if (i >= rows_ || j >= cols_) throw OutOfRange("matrix entry");
        return (*this)(i, j);
    }
    const Int& at(std::size_t i, std::size_t j) const {
        if (i >= rows_ || j >= cols_) throw OutOfRange("matrix entry");
        return (*this)(i, j);
    }

    IntVector row(std::size_t i) const {
        IntVector r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }
    IntVector col(std::size_t j) const {
        IntVector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) swap((*this)(i, a), (*this)(i, b));
    }

    IntMatrix transposed() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    // Leading principal block of order k.
    IntMatrix leading_block(std::size_t k) const {
        IntMatrix b(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) b(i, j) = (*this)(i, j);
        return b;
    }

    bool is_symmetric() const {
        if (!square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    // Largest absolute entry (the sigma of the bit-length bound).
    Int max_abs_entry() const {
        Int m(0);
        for (const auto& x : data_) {
            Int a = x.abs();
            if (a > m) m = a;
        }
        return m;
    }

    std::size_t max_bit_length() const {
        std::size_t b = 0;
        for (const auto& x : data_) b = std::max(b, x.bit_length());
        return b;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const IntMatrix& a, const IntMatrix& b) { return !(a == b); }

private:
    std::size_t rows_, cols_;
    std::vector<Int> data_;
};

inline IntVector mat_vec(const IntMatrix& a, const IntVector& x) {
    if (a.cols() != x.size()) throw DimensionMismatch("mat_vec");
    IntVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Int acc(0);
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        y[i] = std::move(acc);
    }
    return y;
}

inline IntVector vec_mat(const IntVector& x, const IntMatrix& a) {
    if (a.rows() != x.size()) throw DimensionMismatch("vec_mat");
    IntVector y(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        Int acc(0);
        for (std::size_t i = 0; i < a.rows(); ++i) acc += x[i] * a(i, j);
        y[j] = std::move(acc);
    }
    return y;
}

inline IntVector scaled(const IntVector& v, const Int& s) {
    IntVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * s;
    return r;
}

// A + gamma * v * w^T, entry-exact. gamma = 0 is rejected: the caller asked
// for an update that changes nothing.
inline IntMatrix apply_rank_one(const IntMatrix& a, const Int& gamma, const IntVector& v,
                                const IntVector& w) {
    if (!a.square() || v.size() != a.rows() || w.size() != a.cols())
        throw DimensionMismatch("apply_rank_one");
    if (gamma.is_zero()) throw NoOpUpdate();
    if (is_zero_vector(v) || is_zero_vector(w)) throw ZeroUpdateVector();
    IntMatrix b(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Int gv = gamma * v[i];
        for (std::size_t j = 0; j < a.cols(); ++j) b(i, j) = a(i, j) + gv * w[j];
    }
    return b;
}

struct IntegerizeResult {
    IntMatrix matrix;
    Int scale;
};

// Clears denominators: returns scale * M with integer entries, where scale is
// the least common multiple of the (reduced) denominators.
inline IntegerizeResult integerize(const std::vector<std::vector<Rational>>& m) {
    std::size_t rows = m.size();
    std::size_t cols = rows ? m[0].size() : 0;
    Int scale(1);
    for (const auto& r : m) {
        if (r.size() != cols) throw DimensionMismatch("ragged rational matrix");
        for (const auto& q : r) scale = lcm(scale, q.den());
    }
    IntMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            out(i, j) = m[i][j].num() * exact_div(scale, m[i][j].den());
    return {std::move(out), std::move(scale)};
}

// Ceil(n * log2(sigma * sqrt(n))), the dense bit-length bound. The log base
// is read as 2 since the bound is a bit count; bit_bound_ln records the
// natural-log reading alongside it.
inline std::size_t bit_bound_log2(std::size_t n, const Int& sigma) {
    if (n == 0 || sigma.is_zero()) return 0;
    long exp2 = 0;
    double d = mpz_get_d_2exp(&exp2, sigma.raw());
    double log2sigma = std::log2(d) + static_cast<double>(exp2);
    double bound = static_cast<double>(n) * (log2sigma + 0.5 * std::log2(static_cast<double>(n)));
    return static_cast<std::size_t>(std::ceil(bound - 1e-9));
}

inline std::size_t bit_bound_ln(std::size_t n, const Int& sigma) {
    if (n == 0 || sigma.is_zero()) return 0;
    long exp2 = 0;
    double d = mpz_get_d_2exp(&exp2, sigma.raw());
    double lnsigma = std::log(d) + static_cast<double>(exp2) * std::log(2.0);
    double bound = static_cast<double>(n) * (lnsigma + 0.5 * std::log(static_cast<double>(n)));
    return static_cast<std::size_t>(std::ceil(bound - 1e-9));
}

// Size and growth statistics gathered from a finished computation.
struct Diagnostics {
    Int sigma;                  // max |input entry|
    std::size_t beta_max = 0;   // max bit-length over stored entries
    std::size_t bound_log2 = 0; // ceil(n log2(sigma sqrt n))
    std::size_t bound_ln = 0;   // same bound under the natural-log reading
    OpCounts ops;

    bool within_bound() const { return beta_max <= bound_log2; }
};

}  // namespace refla
