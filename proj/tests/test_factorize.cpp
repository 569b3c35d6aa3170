#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

using namespace refla;
using testutil::iv;

TEST_CASE("ipge_step") {
    IntMatrix a = testutil::walkthrough_a();
    IntMatrix step1 = ipge_step(a, 1, Int(1));
    CHECK(step1(1, 1) == Int(-31));  // (3*3 - 8*5)/1

    IntMatrix eye = IntMatrix::identity(4);
    CHECK(ipge_step(eye, 1, Int(1)) == eye);
    CHECK(ipge_step(eye, 3, Int(1)) == eye);

    IntMatrix d{{2, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    IntMatrix d1 = ipge_step(d, 1, Int(1));
    CHECK(d1(1, 1) == Int(2));
    CHECK(d1(2, 2) == Int(2));

    IntMatrix z{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(ipge_step(z, 1, Int(1)), ZeroPivot);
}

TEST_CASE("ref_lu_factorize reproduces the worked 4x4 example") {
    REFFactorization f = ref_lu_factorize(testutil::walkthrough_a());
    CHECK(f.merged() == testutil::walkthrough_merged());
    CHECK(f.det() == Int(-89));
    CHECK(f.pivot(0) == Int(1));
    CHECK(f.pivot(1) == Int(3));
    CHECK(f.pivot(2) == Int(-31));
    CHECK(f.pivot(3) == Int(43));
    CHECK(f.pivot(4) == Int(-89));
    CHECK(f.row_perm().is_identity());
}

TEST_CASE("ref_lu_factorize simple cases") {
    REFFactorization eye = ref_lu_factorize(IntMatrix::identity(5));
    CHECK(eye.merged() == IntMatrix::identity(5));
    CHECK(eye.det() == Int(1));

    REFFactorization f = ref_lu_factorize(IntMatrix{{3, 1}, {1, 1}});
    CHECK(f.merged() == IntMatrix{{3, 1}, {1, 2}});
    CHECK(f.det() == Int(2));

    CHECK_THROWS_AS(ref_lu_factorize(IntMatrix{{1, 1}, {1, 1}}), SingularMatrix);
    CHECK_THROWS_AS(ref_lu_factorize(IntMatrix{{1, 2}, {2, 4}}), SingularMatrix);
}

TEST_CASE("zero pivots are handled by row exchange") {
    IntMatrix a{{0, 1}, {1, 0}};
    REFFactorization f = ref_lu_factorize(a);
    CHECK(f.det() == Int(-1));
    CHECK(f.row_perm().parity() == -1);
    CHECK(f.base() == IntMatrix{{1, 0}, {0, 1}});
    CHECK(f.user_entry(0, 0) == Int(0));
    CHECK(f.user_entry(0, 1) == Int(1));

    // A singular once permutation options run out.
    IntMatrix s{{0, 1, 2}, {0, 2, 4}, {0, 3, 5}};
    CHECK_THROWS_AS(ref_lu_factorize(s), SingularMatrix);
}

TEST_CASE("ref_cholesky_factorize") {
    REFFactorization d = ref_cholesky_factorize(IntMatrix{{4, 0}, {0, 9}});
    CHECK(d.merged() == IntMatrix{{4, 0}, {0, 36}});
    CHECK(d.pivot(1) == Int(4));
    CHECK(d.pivot(2) == Int(36));
    CHECK(d.symmetric());

    CHECK(ref_cholesky_factorize(IntMatrix::identity(4)).merged() == IntMatrix::identity(4));

    REFFactorization f = ref_cholesky_factorize(IntMatrix{{2, 1}, {1, 2}});
    CHECK(f.merged() == IntMatrix{{2, 1}, {1, 3}});

    CHECK_THROWS_AS(ref_cholesky_factorize(IntMatrix{{1, 2}, {3, 4}}), NotSymmetric);
    CHECK_THROWS_AS(ref_cholesky_factorize(IntMatrix{{0, 1}, {1, 0}}), SingularMatrix);
}

TEST_CASE("subdeterminant oracle matches stated values") {
    IntMatrix a = testutil::walkthrough_a();
    CHECK(subdeterminant_oracle(a, 1, 1, 1) == Int(-31));
    CHECK(subdeterminant_oracle(a, 0, 0, 0) == a(0, 0));
    CHECK(subdeterminant_oracle(a, 4, 3, 3) == Int(-89));  // full determinant
    CHECK(subdeterminant_oracle(a, 3, 3, 3) == Int(-89));
    CHECK_THROWS_AS(subdeterminant_oracle(a, 3, 1, 3), OutOfRange);
}

TEST_CASE("every merged entry equals its subdeterminant") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 12; ++rep) {
        std::size_t n = 2 + rep % 6;  // up to 7
        IntMatrix a = testutil::random_nonsingular(rng, n);
        REFFactorization f;
        try {
            f = ref_lu_factorize(a);
        } catch (const SingularMatrix&) {
            continue;
        }
        if (!f.row_perm().is_identity()) continue;  // oracle compares the unpermuted matrix
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                std::size_t stage = std::min(i, j);  // l: stage j, u: stage i (0-based)
                CAPTURE(n, i, j);
                CHECK(f.merged()(i, j) == subdeterminant_oracle(a, stage, i, j));
            }
    }
}

TEST_CASE("pivot sequence equals leading principal minors") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        std::size_t n = 2 + rep % 5;
        IntMatrix a = testutil::random_nonsingular(rng, n);
        REFFactorization f = ref_lu_factorize(a);
        for (std::size_t k = 1; k <= n; ++k)
            CHECK(f.pivot(k) == brute_determinant(f.base().leading_block(k)));
        CHECK(f.det() == brute_determinant(a));
    }
}

TEST_CASE("reconstruction identity L D^-1 U = base") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 8; ++rep) {
        std::size_t n = 2 + rep * 2 % 15;  // up to 16
        IntMatrix a = testutil::random_nonsingular(rng, n);
        REFFactorization f = ref_lu_factorize(a);
        CHECK(reconstruction_identity_holds(f));
    }
}

TEST_CASE("leading blocks nest") {
    std::mt19937_64 rng(1234);
    for (int rep = 0; rep < 8; ++rep) {
        std::size_t n = 3 + rep % 10;  // up to 12
        IntMatrix a = testutil::random_nonsingular(rng, n);
        REFFactorization f;
        try {
            f = ref_lu_factorize(a);
        } catch (const SingularMatrix&) {
            continue;
        }
        if (!f.row_perm().is_identity()) continue;
        for (std::size_t k = 1; k <= n; ++k) {
            IntMatrix block = a.leading_block(k);
            REFFactorization g;
            try {
                g = ref_lu_factorize(block);
            } catch (const SingularMatrix&) {
                break;  // a leading minor of the block's own sub-block vanished
            }
            if (!g.row_perm().is_identity()) break;
            CHECK(g.merged() == f.merged().leading_block(k));
        }
    }
}

TEST_CASE("symmetric input yields U equal to L transpose") {
    std::mt19937_64 rng(5150);
    for (int rep = 0; rep < 10; ++rep) {
        std::size_t n = 2 + rep % 7;
        IntMatrix a = testutil::random_symmetric_nonsingular(rng, n);
        REFFactorization f = ref_cholesky_factorize(a);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) CHECK(f.merged()(i, j) == f.merged()(j, i));
        // plain LU on the same matrix gives the identical factorization
        REFFactorization g = ref_lu_factorize(a);
        CHECK(g.merged() == f.merged());
    }
}

TEST_CASE("entry growth stays within the dense bit-length bound") {
    std::mt19937_64 rng(31337);
    for (int rep = 0; rep < 6; ++rep) {
        std::size_t n = 4 + rep * 2;
        IntMatrix a = testutil::random_nonsingular(rng, n, -100, 100);
        REFFactorization f = ref_lu_factorize(a);
        Diagnostics d = f.diagnostics();
        CHECK(d.beta_max <= d.bound_log2);
    }
}
