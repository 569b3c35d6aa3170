#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "refla/factorize.hpp"

namespace refla {

// Plain whitespace text formats. Big integers have unbounded digit counts,
// so decimal text is the portable bit-exact encoding; parse-then-print
// round-trips exactly.

namespace detail {

inline std::string next_token(std::istream& in, const char* what) {
    std::string tok;
    if (!(in >> tok)) throw ParseError(std::string("unexpected end of input, wanted ") + what);
    return tok;
}

inline std::size_t next_size(std::istream& in, const char* what) {
    std::string tok = next_token(in, what);
    try {
        long long v = std::stoll(tok);
        if (v < 0) throw ParseError(std::string(what) + " must be nonnegative");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ParseError("bad count '" + tok + "' for " + what);
    }
}

}  // namespace detail

// Header "n m" (or "n" for a square matrix), then row-major entries.
// rational mode accepts p/q and decimal tokens and clears denominators.
struct MatrixFileResult {
    IntMatrix matrix;
    Int scale{1};  // 1 unless rational entries were integerized
};

inline MatrixFileResult read_matrix(std::istream& in, bool rational = false) {
    // The header line is "n m", or just "n" for a square matrix.
    std::string header;
    while (std::getline(in, header)) {
        if (header.find_first_not_of(" \t\r") != std::string::npos) break;
        header.clear();
    }
    if (header.empty()) throw ParseError("missing matrix header");
    std::istringstream hs(header);
    std::size_t rows = detail::next_size(hs, "row count");
    std::size_t cols = rows;
    std::string extra;
    if (hs >> extra) {
        std::istringstream es(extra);
        cols = detail::next_size(es, "column count");
        if (hs >> extra) throw ParseError("matrix header has trailing tokens");
    }
    if (rows == 0 || cols == 0) throw ParseError("empty matrix");

    std::vector<std::string> tokens;
    tokens.reserve(rows * cols);
    std::string t;
    while (tokens.size() < rows * cols && (in >> t)) tokens.push_back(t);
    if (tokens.size() != rows * cols)
        throw ParseError("expected " + std::to_string(rows * cols) + " entries");

    MatrixFileResult out;
    if (rational) {
        std::vector<std::vector<Rational>> q(rows, std::vector<Rational>(cols));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) q[i][j] = Rational::parse(tokens[i * cols + j]);
        auto res = integerize(q);
        out.matrix = std::move(res.matrix);
        out.scale = std::move(res.scale);
    } else {
        out.matrix = IntMatrix(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) out.matrix(i, j) = Int(tokens[i * cols + j]);
    }
    return out;
}

inline void write_matrix(std::ostream& os, const IntMatrix& m) {
    os << m.rows() << " " << m.cols() << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
        os << "\n";
    }
}

inline IntVector read_vector(std::istream& in, bool rational = false) {
    std::size_t n = detail::next_size(in, "vector length");
    IntVector v(n);
    if (rational) {
        std::vector<std::vector<Rational>> q(1, std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i) q[0][i] = Rational::parse(detail::next_token(in, "entry"));
        auto res = integerize(q);
        for (std::size_t i = 0; i < n; ++i) v[i] = res.matrix(0, i);
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = Int(detail::next_token(in, "entry"));
    return v;
}

inline void write_vector(std::ostream& os, const IntVector& v) {
    os << v.size() << "\n";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << "\n";
}

// Factorization files carry everything a later update or solve needs: the
// merged factors, pivots, permutations, and the factorized matrix itself.
inline void write_factorization(std::ostream& os, const REFFactorization& f) {
    const std::size_t n = f.n();
    os << "REFLU 1\n" << "n " << n << "\n";
    os << "symmetric " << (f.symmetric() ? 1 : 0) << "\n";
    os << "rowperm";
    for (std::size_t i = 0; i < n; ++i) os << " " << f.row_perm()[i];
    os << "\ncolperm";
    for (std::size_t i = 0; i < n; ++i) os << " " << f.col_perm()[i];
    os << "\npivots";
    for (std::size_t k = 0; k <= n; ++k) os << " " << f.pivot(k);
    os << "\nmerged\n";
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) os << (j ? " " : "") << f.merged()(i, j);
        os << "\n";
    }
    os << "base\n";
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) os << (j ? " " : "") << f.base()(i, j);
        os << "\n";
    }
    os << "det " << f.det() << "\n";
}

inline REFFactorization read_factorization(std::istream& in) {
    auto expect = [&](const char* kw) {
        std::string tok = detail::next_token(in, kw);
        if (tok != kw) throw ParseError("expected '" + std::string(kw) + "', got '" + tok + "'");
    };
    expect("REFLU");
    if (detail::next_token(in, "version") != "1") throw ParseError("unsupported version");
    expect("n");
    std::size_t n = detail::next_size(in, "order");
    expect("symmetric");
    bool symmetric = detail::next_size(in, "symmetric flag") != 0;
    expect("rowperm");
    std::vector<std::size_t> rp(n), cp(n);
    for (auto& x : rp) x = detail::next_size(in, "row index");
    expect("colperm");
    for (auto& x : cp) x = detail::next_size(in, "column index");
    expect("pivots");
    std::vector<Int> pivots(n + 1);
    for (auto& p : pivots) p = Int(detail::next_token(in, "pivot"));
    expect("merged");
    IntMatrix merged(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) merged(i, j) = Int(detail::next_token(in, "entry"));
    expect("base");
    IntMatrix base(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) base(i, j) = Int(detail::next_token(in, "entry"));
    expect("det");
    Int det(detail::next_token(in, "determinant"));

    REFFactorization f(std::move(merged), std::move(pivots), std::move(base),
                       Permutation::from_map(std::move(rp)), Permutation::from_map(std::move(cp)),
                       symmetric);
    if (f.det() != det) throw ParseError("determinant record does not match pivots");
    return f;
}

}  // namespace refla
