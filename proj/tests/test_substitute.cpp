#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

using namespace refla;
using testutil::iv;

TEST_CASE("ref_fs_step reproduces the worked iterates") {
    REFFactorization f = ref_lu_factorize(testutil::walkthrough_a());
    FSVector y0{0, testutil::walkthrough_v()};
    FSVector y1 = ref_fs_step(y0, f.merged().col(0), f.pivot(0), 1);
    CHECK(y1.entries == iv({1, 10, 15, -1}));
    FSVector y2 = ref_fs_step(y1, f.merged().col(1), f.pivot(1), 2);
    CHECK(y2.entries == iv({1, 10, 25, 217}));

    // identity factor leaves the vector alone
    REFFactorization eye = ref_lu_factorize(IntMatrix::identity(4));
    FSVector b{0, iv({4, -1, 7, 2})};
    CHECK(ref_fs_step(b, eye.merged().col(0), eye.pivot(0), 1).entries == b.entries);
}

TEST_CASE("forward substitution on the transpose side") {
    REFFactorization f = ref_lu_factorize(testutil::walkthrough_a());
    auto iters = ref_forward_substitute(f, testutil::walkthrough_w(), true);
    REQUIRE(iters.size() == 4);
    CHECK(iters[1].entries == iv({2, 2, -5, 10}));
    CHECK(iters[2].entries == iv({2, 2, 65, -108}));
    CHECK(iters[3].entries == iv({2, 2, 65, 89}));
}

TEST_CASE("forward substitution simple cases") {
    REFFactorization eye = ref_lu_factorize(IntMatrix::identity(3));
    IntVector b = iv({5, 6, 7});
    auto iters = ref_forward_substitute(eye, b);
    for (const auto& it : iters) CHECK(it.entries == b);

    REFFactorization f = ref_lu_factorize(IntMatrix{{3, 1}, {1, 1}});
    auto y = ref_forward_substitute(f, iv({4, 2}));
    CHECK(y[1].entries == iv({4, 2}));  // 3*2 - 1*4 = 2
}

TEST_CASE("backward substitution") {
    REFFactorization f = ref_lu_factorize(IntMatrix{{3, 1}, {1, 1}});
    CHECK(ref_backward_substitute(f, iv({8, 4})) == iv({2, 2}));

    REFFactorization eye = ref_lu_factorize(IntMatrix::identity(4));
    IntVector b = iv({9, -3, 0, 5});
    CHECK(ref_backward_substitute(eye, b) == b);
}

TEST_CASE("solve on small systems") {
    REFFactorization f = ref_lu_factorize(IntMatrix{{3, 1}, {1, 1}});
    ExactSolution s = solve(f, iv({4, 2}));
    CHECK(s.scaled_x == iv({2, 2}));
    CHECK(s.det == Int(2));
    CHECK(s.value(0) == Rational(1));
    CHECK(s.value(1) == Rational(1));

    REFFactorization eye = ref_lu_factorize(IntMatrix::identity(3));
    ExactSolution se = solve(eye, iv({7, -2, 9}));
    CHECK(se.scaled_x == iv({7, -2, 9}));
    CHECK(se.det == Int(1));
}

TEST_CASE("solve with a constructed right-hand side") {
    IntMatrix a = testutil::walkthrough_a();
    IntVector b = mat_vec(a, iv({1, 1, 1, 1}));
    CHECK(b == iv({19, 17, 12, 10}));
    ExactSolution s = solve(ref_lu_factorize(a), b);
    for (std::size_t i = 0; i < 4; ++i) CHECK(s.value(i) == Rational(1));
}

TEST_CASE("residual after the scaled e1 solve") {
    IntMatrix a = testutil::walkthrough_a();
    ExactSolution s = solve(ref_lu_factorize(a), iv({1, 0, 0, 0}));
    CHECK(s.det == Int(-89));
    CHECK(mat_vec(a, s.scaled_x) == iv({-89, 0, 0, 0}));
}

TEST_CASE("residual identity A x' = det b") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 40; ++rep) {
        std::size_t n = 1 + rep % 12;
        IntMatrix a = testutil::random_nonsingular(rng, n);
        IntVector b = testutil::random_vector(rng, n);
        REFFactorization f = ref_lu_factorize(a);
        ExactSolution s = solve(f, b);
        CHECK(mat_vec(a, s.scaled_x) == scaled(b, s.det));
    }
}

TEST_CASE("residual identity holds with pivoted rows") {
    IntMatrix a{{0, 2, 1}, {3, 0, 1}, {1, 1, 0}};
    REFFactorization f = ref_lu_factorize(a);
    CHECK_FALSE(f.row_perm().is_identity());
    IntVector b = iv({5, -1, 2});
    ExactSolution s = solve(f, b);
    CHECK(mat_vec(a, s.scaled_x) == scaled(b, s.det));
    CHECK(s.det == brute_determinant(a));
}

TEST_CASE("scaled solve equals adjugate action and is update-invariant") {
    std::mt19937_64 rng(555);
    for (int rep = 0; rep < 12; ++rep) {
        std::size_t n = 2 + rep % 6;
        IntMatrix a = testutil::random_nonsingular(rng, n);
        IntVector v = testutil::random_nonzero_vector(rng, n);
        IntVector w = testutil::random_nonzero_vector(rng, n);
        IntMatrix ahat;
        try {
            ahat = apply_rank_one(a, Int(1), v, w);
            ref_lu_factorize(ahat);
        } catch (const Error&) {
            continue;
        }
        // adj(A) v = adj(A + v w^T) v, and the solver's scaled output is that vector
        IntVector adj_v = mat_vec(testutil::adjugate_bruteforce(a), v);
        CHECK(solve(ref_lu_factorize(a), v).scaled_x == adj_v);
        CHECK(solve(ref_lu_factorize(ahat), v).scaled_x == adj_v);
        // transpose identity: w^T adj(A) = w^T adj(A_hat)
        IntVector wadj = vec_mat(w, testutil::adjugate_bruteforce(a));
        CHECK(vec_mat(w, testutil::adjugate_bruteforce(ahat)) == wadj);
    }
}

TEST_CASE("forward-substitution iterates agree between A and its update") {
    std::mt19937_64 rng(909);
    for (int rep = 0; rep < 15; ++rep) {
        std::size_t n = 2 + rep % 8;
        IntMatrix a = testutil::random_nonsingular(rng, n);
        IntVector v = testutil::random_nonzero_vector(rng, n);
        IntVector w = testutil::random_nonzero_vector(rng, n);
        IntMatrix ahat;
        REFFactorization f, g;
        try {
            ahat = apply_rank_one(a, Int(1), v, w);
            f = ref_lu_factorize(a);
            g = ref_lu_factorize(ahat);
        } catch (const Error&) {
            continue;
        }
        if (!f.row_perm().is_identity() || !g.row_perm().is_identity()) continue;
        auto ya = ref_forward_substitute(f, v);
        auto yb = ref_forward_substitute(g, v);
        auto za = ref_forward_substitute(f, w, true);
        auto zb = ref_forward_substitute(g, w, true);
        for (std::size_t k = 1; k < n; ++k) {
            CHECK(ya[k].entries == yb[k].entries);
            CHECK(za[k].entries == zb[k].entries);
        }
        // full-solve agreement of (L D^-1)^-1 v through both factorizations
        CHECK(scaled(ya.back().entries, Int(1)) == yb.back().entries);
    }
}
