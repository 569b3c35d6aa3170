#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "refla/substitute.hpp"

namespace refla {

// Mutable access for the update machinery; everything else sees
// REFFactorization as immutable.
struct FactorizationAccess {
    static IntMatrix& merged(REFFactorization& f) { return f.merged_; }
    static std::vector<Int>& pivots(REFFactorization& f) { return f.pivots_; }
    static IntMatrix& base(REFFactorization& f) { return f.base_; }
    static Permutation& row_perm(REFFactorization& f) { return f.row_perm_; }
    static Permutation& col_perm(REFFactorization& f) { return f.col_perm_; }
};

// Describes A_hat = A + gamma * v * w^T. gamma is folded into v before the
// update runs; gamma = 0 is rejected as a no-op.
struct UpdateSpec {
    Int gamma{1};
    IntVector v;
    IntVector w;
};

enum class AdjacentMode { Columns, Rows, Diagonal };

namespace detail {

// Swap columns k, k+1 of the factorized matrix and rebuild the merged
// factorization in O(n) operations: the new column k of L is the previous
// stage of the old column k+1 (backtracking), the new row k+1 of U switches
// its originating pivot, and trailing minors flip sign.
inline void apcp_inplace(REFFactorization& f, std::size_t k) {
    auto& m = FactorizationAccess::merged(f);
    auto& piv = FactorizationAccess::pivots(f);
    const std::size_t n = f.n();
    if (k + 1 >= n) throw OutOfRange("adjacent column permutation");
    if (m(k, k + 1).is_zero())
        throw PermutationNotApplicable("u(k,k+1) = 0 blocks a column swap");

    const Int rho_prev = piv[k];
    const Int rho_old = piv[k + 1];
    const Int rho_new = m(k, k + 1);
    const Int diag_next_old = m(k + 1, k + 1);

    IntVector old_col(n);
    for (std::size_t i = k + 1; i < n; ++i) old_col[i] = m(i, k);

    for (std::size_t i = k + 1; i < n; ++i)
        m(i, k) = fused_div_add(rho_prev, m(i, k + 1), rho_new, old_col[i], rho_old,
                                "apcp backtrack");
    for (std::size_t i = k + 2; i < n; ++i)
        m(k + 1, i) = fused_div(rho_new, m(k + 1, i), m(k, i), diag_next_old, rho_old,
                                "apcp pivot switch");
    m(k, k + 1) = rho_old;
    m(k, k) = rho_new;
    for (std::size_t r = 0; r < k; ++r) swap(m(r, k), m(r, k + 1));
    for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j) {
            if (i == k + 1 && j > k + 1) continue;  // freshly rebuilt row
            m(i, j).negate();
        }
    piv[k + 1] = rho_new;
    for (std::size_t s = k + 2; s <= n; ++s) piv[s].negate();
    FactorizationAccess::base(f).swap_cols(k, k + 1);
    FactorizationAccess::col_perm(f).swap_positions(k, k + 1);
}

// Transpose twin of apcp_inplace: swap rows k, k+1.
inline void aprp_inplace(REFFactorization& f, std::size_t k) {
    auto& m = FactorizationAccess::merged(f);
    auto& piv = FactorizationAccess::pivots(f);
    const std::size_t n = f.n();
    if (k + 1 >= n) throw OutOfRange("adjacent row permutation");
    if (m(k + 1, k).is_zero())
        throw PermutationNotApplicable("l(k+1,k) = 0 blocks a row swap");

    const Int rho_prev = piv[k];
    const Int rho_old = piv[k + 1];
    const Int rho_new = m(k + 1, k);
    const Int diag_next_old = m(k + 1, k + 1);

    IntVector old_row(n);
    for (std::size_t i = k + 1; i < n; ++i) old_row[i] = m(k, i);

    for (std::size_t i = k + 1; i < n; ++i)
        m(k, i) = fused_div_add(rho_prev, m(k + 1, i), rho_new, old_row[i], rho_old,
                                "aprp backtrack");
    for (std::size_t i = k + 2; i < n; ++i)
        m(i, k + 1) = fused_div(rho_new, m(i, k + 1), m(i, k), diag_next_old, rho_old,
                                "aprp pivot switch");
    m(k + 1, k) = rho_old;
    m(k, k) = rho_new;
    for (std::size_t c = 0; c < k; ++c) swap(m(k, c), m(k + 1, c));
    for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j) {
            if (j == k + 1 && i > k + 1) continue;  // freshly rebuilt column
            m(i, j).negate();
        }
    piv[k + 1] = rho_new;
    for (std::size_t s = k + 2; s <= n; ++s) piv[s].negate();
    FactorizationAccess::base(f).swap_rows(k, k + 1);
    FactorizationAccess::row_perm(f).swap_positions(k, k + 1);
}

// Swap rows and columns k, k+1 together. Trailing minors contain both
// swapped indices twice and are untouched; only rows/cols k, k+1 move.
inline void apdp_inplace(REFFactorization& f, std::size_t k) {
    auto& m = FactorizationAccess::merged(f);
    auto& piv = FactorizationAccess::pivots(f);
    const std::size_t n = f.n();
    if (k + 1 >= n) throw OutOfRange("adjacent diagonal permutation");

    const Int rho_prev = piv[k];
    const Int rho_old = piv[k + 1];
    const Int u_cross = m(k, k + 1);
    const Int l_cross = m(k + 1, k);
    const Int rho_new = fused_div_add(rho_prev, m(k + 1, k + 1), u_cross, l_cross, rho_old,
                                      "apdp pivot");
    if (rho_new.is_zero())
        throw PermutationNotApplicable("diagonal swap would produce a zero pivot");

    IntVector old_col_k(n), old_row_k(n);
    for (std::size_t i = k + 1; i < n; ++i) {
        old_col_k[i] = m(i, k);
        old_row_k[i] = m(k, i);
    }

    for (std::size_t i = k + 2; i < n; ++i)
        m(i, k) = fused_div_add(rho_prev, m(i, k + 1), u_cross, old_col_k[i], rho_old,
                                "apdp col backtrack");
    for (std::size_t i = k + 2; i < n; ++i)
        m(k, i) = fused_div_add(rho_prev, m(k + 1, i), l_cross, old_row_k[i], rho_old,
                                "apdp row backtrack");
    for (std::size_t i = k + 2; i < n; ++i)
        m(i, k + 1) = fused_div(rho_new, old_col_k[i], l_cross, m(i, k), rho_prev,
                                "apdp col advance");
    for (std::size_t i = k + 2; i < n; ++i)
        m(k + 1, i) = fused_div(rho_new, old_row_k[i], u_cross, m(k, i), rho_prev,
                                "apdp row advance");
    m(k + 1, k) = u_cross;
    m(k, k + 1) = l_cross;
    m(k, k) = rho_new;
    for (std::size_t r = 0; r < k; ++r) swap(m(r, k), m(r, k + 1));
    for (std::size_t c = 0; c < k; ++c) swap(m(k, c), m(k + 1, c));
    piv[k + 1] = rho_new;
    FactorizationAccess::base(f).swap_rows(k, k + 1);
    FactorizationAccess::base(f).swap_cols(k, k + 1);
    FactorizationAccess::row_perm(f).swap_positions(k, k + 1);
    FactorizationAccess::col_perm(f).swap_positions(k, k + 1);
}

}  // namespace detail

// Returns the factorization of the input with adjacent columns, rows, or
// both k, k+1 exchanged, bit-identical to refactorizing the permuted matrix.
inline REFFactorization adjacent_permute(const REFFactorization& f, std::size_t k,
                                         AdjacentMode mode) {
    REFFactorization g = f;
    switch (mode) {
        case AdjacentMode::Columns: detail::apcp_inplace(g, k); break;
        case AdjacentMode::Rows: detail::aprp_inplace(g, k); break;
        case AdjacentMode::Diagonal: detail::apdp_inplace(g, k); break;
    }
    return g;
}

struct ROUStats {
    std::size_t theta_v = 0;
    std::size_t theta_w = 0;
    std::size_t sc2_calls = 0;
    std::size_t sc2_col_permutes = 0;
    std::size_t sc2_row_permutes = 0;
    std::size_t sc2_diag_permutes = 0;
    std::size_t subcase_calls = 0;
    std::size_t scratch_rebuilds = 0;
    std::size_t beta_max = 0;
    OpCounts ops;
};

// Optional capture of intermediates for verification: the forward
// substitution iterates actually consumed and, on request, a snapshot of the
// working factorization after each outer iteration.
struct ROUTrace {
    bool capture_working = false;
    std::vector<FSVector> y_iters;
    std::vector<FSVector> z_iters;
    std::vector<std::pair<std::size_t, IntMatrix>> working;
};

namespace detail {

class RankOneUpdater {
public:
    RankOneUpdater(const REFFactorization& f, const UpdateSpec& spec, ROUStats* stats,
                   ROUTrace* trace)
        : src_(&f), n_(f.n()), spec_(spec), stats_(stats), trace_(trace) {}

    REFFactorization run() {
        prepare();
        const OpCounts before = op_counts();
        init_phase();
        for (std::size_t t = 1; t < n_; ++t) iterate(t);
        final_pivot();
        if (stats_) {
            stats_->ops += op_counts() - before;
            stats_->theta_v = theta_v_;
            stats_->theta_w = theta_w_;
            stats_->beta_max = w_mat_.max_bit_length();
        }
        return assemble();
    }

private:
    const REFFactorization* src_;
    std::optional<REFFactorization> owned_;
    std::size_t n_;
    const UpdateSpec& spec_;
    ROUStats* stats_;
    ROUTrace* trace_;

    IntVector v_, w_;
    std::size_t theta_v_ = 0, theta_w_ = 0, big_theta_ = 0;
    std::size_t y_checks_from_ = 1, z_checks_from_ = 1;
    IntMatrix w_mat_;  // working merged factorization of A_hat
    IntMatrix bhat_;   // A_hat itself, kept aligned with every permutation
    IntVector y_prev_, y_cur_, z_prev_, z_cur_;
    bool have_y_ = false, have_z_ = false;
    Permutation rperm_, cperm_;
    bool symmetric_mode_ = false;
    bool symmetric_out_ = false;

    std::size_t pending_u_row_iter_ = 0;  // iteration whose U-hat row uses the detour
    std::size_t pending_l_col_iter_ = 0;
    std::size_t forced_row_iter_ = 0;     // iterations forced onto the scratch route
    std::size_t forced_col_iter_ = 0;
    IntVector saved_z_, saved_y_;

    ROUStats local_stats_;
    ROUStats& st() { return stats_ ? *stats_ : local_stats_; }

    const Int& rho_hat(std::size_t s) const {
        static const Int kOne(1);
        return s == 0 ? kOne : w_mat_(s - 1, s - 1);
    }

    static std::size_t leading_zeros(const IntVector& x) {
        std::size_t t = 0;
        while (t < x.size() && x[t].is_zero()) ++t;
        return t;
    }

    void prepare() {
        const REFFactorization& f = *src_;
        if (spec_.v.size() != n_ || spec_.w.size() != n_)
            throw DimensionMismatch("rank_one_update vectors");
        if (spec_.gamma.is_zero()) throw NoOpUpdate();
        if (is_zero_vector(spec_.v) || is_zero_vector(spec_.w)) throw ZeroUpdateVector();

        symmetric_mode_ = f.symmetric() && spec_.v == spec_.w &&
                          f.row_perm() == f.col_perm();
        symmetric_out_ = symmetric_mode_;

        rperm_ = f.row_perm();
        cperm_ = f.col_perm();
        v_ = rperm_.apply(spec_.v);
        w_ = cperm_.apply(spec_.w);
        if (spec_.gamma == Int(-1)) {
            for (auto& e : v_) e.negate();
        } else if (!spec_.gamma.is_one()) {
            for (auto& e : v_) e *= spec_.gamma;
        }

        theta_v_ = leading_zeros(v_);
        theta_w_ = leading_zeros(w_);
        big_theta_ = std::max(theta_v_, theta_w_);
        y_checks_from_ = (theta_v_ == big_theta_) ? big_theta_ + 1
                                                  : std::max<std::size_t>(big_theta_, 1);
        z_checks_from_ = (theta_w_ == big_theta_) ? big_theta_ + 1
                                                  : std::max<std::size_t>(big_theta_, 1);

        {
            OpCountPause pause;  // result bookkeeping, not algorithm work
            bhat_ = apply_rank_one(f.base(), Int(1), v_, w_);
        }
        w_mat_ = IntMatrix(n_, n_);
    }

    void ensure_owned() {
        if (!owned_) {
            owned_ = *src_;
            src_ = &*owned_;
        }
    }

    void init_phase() {
        const REFFactorization& s = *src_;
        for (std::size_t r = 0; r < theta_v_; ++r)
            for (std::size_t j = 0; j < n_; ++j) w_mat_(r, j) = s.merged()(r, j);
        for (std::size_t c = 0; c < theta_w_; ++c)
            for (std::size_t i = 0; i < n_; ++i) w_mat_(i, c) = s.merged()(i, c);
        if (theta_v_ == 0)
            for (std::size_t j = std::max<std::size_t>(1, theta_w_); j < n_; ++j)
                w_mat_(0, j) = s.u(0, j) + v_[0] * w_[j];
        if (theta_w_ == 0)
            for (std::size_t i = std::max<std::size_t>(1, theta_v_); i < n_; ++i)
                w_mat_(i, 0) = s.l(i, 0) + v_[i] * w_[0];
        for (std::size_t i = big_theta_; i < n_; ++i)
            w_mat_(i, i) = s.base()(i, i) + v_[i] * w_[i];

        if (theta_v_ == 0) {
            y_prev_ = v_;
            have_y_ = true;
        }
        if (theta_w_ == 0) {
            z_prev_ = w_;
            have_z_ = true;
        }
    }

    // --- SC2 look-aheads -------------------------------------------------
    // Before the iterate-t substitution step, test whether the entry that
    // becomes the next iteration's divisor would be zero, and permute the
    // source factorization while the current iterates are still valid.

    bool y_look_zero(std::size_t t) const {
        const auto& m = src_->merged();
        return mul_sub(m(t - 1, t - 1), y_prev_[t], m(t, t - 1), y_prev_[t - 1]).is_zero();
    }
    bool z_look_zero(std::size_t t) const {
        const auto& m = src_->merged();
        return mul_sub(m(t - 1, t - 1), z_prev_[t], m(t - 1, t), z_prev_[t - 1]).is_zero();
    }

    void run_checkpoints(std::size_t t) {
        if (t >= n_) return;
        if (symmetric_mode_) {
            if (t >= y_checks_from_ && y_look_zero(t)) symmetric_adjust(t);
            return;
        }
        bool pending_set = false;
        if (t >= y_checks_from_ && y_look_zero(t)) pending_set = adjust_y(t);
        if (!pending_set && t >= z_checks_from_ && z_look_zero(t)) adjust_z(t);
    }

    bool adjust_y(std::size_t t) {
        ++st().sc2_calls;
        if (t == theta_w_) {
            // The pair (t-1, t) would reach into the copied columns; leave
            // the factorization alone and rebuild the affected column.
            if (t + 1 < n_) forced_col_iter_ = t + 1;
            return false;
        }
        ensure_owned();
        auto& s = *owned_;
        const std::size_t p = t - 1;
        if (!s.u(p, p + 1).is_zero()) {
            apcp_inplace(s, p);
            post_swap_fixups(t, true, false);
            ++st().sc2_col_permutes;
            return false;
        }
        apdp_inplace(s, p);
        post_swap_fixups(t, true, true);
        ++st().sc2_diag_permutes;
        if (t + 1 <= n_ - 1 && z_look_zero(t)) {
            pending_u_row_iter_ = t + 1;
            saved_z_ = z_prev_;
            ++st().subcase_calls;
            return true;
        }
        return false;
    }

    void adjust_z(std::size_t t) {
        ++st().sc2_calls;
        if (t == theta_v_) {
            if (t + 1 < n_) forced_row_iter_ = t + 1;
            return;
        }
        ensure_owned();
        auto& s = *owned_;
        const std::size_t p = t - 1;
        if (!s.l(p + 1, p).is_zero()) {
            aprp_inplace(s, p);
            post_swap_fixups(t, false, true);
            ++st().sc2_row_permutes;
            return;
        }
        apdp_inplace(s, p);
        post_swap_fixups(t, true, true);
        ++st().sc2_diag_permutes;
        if (t + 1 <= n_ - 1 && y_look_zero(t)) {
            pending_l_col_iter_ = t + 1;
            saved_y_ = y_prev_;
            ++st().subcase_calls;
        }
    }

    void symmetric_adjust(std::size_t t) {
        ensure_owned();
        auto& s = *owned_;
        const std::size_t p = t - 1;
        try {
            apdp_inplace(s, p);
        } catch (const PermutationNotApplicable&) {
            // Keep correctness over the symmetric layout.
            symmetric_mode_ = false;
            symmetric_out_ = false;
            if (y_look_zero(t)) adjust_y(t);
            if (pending_u_row_iter_ != t + 1 && z_look_zero(t)) adjust_z(t);
            return;
        }
        ++st().sc2_calls;
        ++st().sc2_diag_permutes;
        post_swap_fixups(t, true, true);
    }

    // Realigns the working state after the source factorization was permuted
    // at pair (t-1, t): the update vectors and iterates, A_hat, the copied
    // regions, finalized bystander entries, and the two staged diagonals.
    void post_swap_fixups(std::size_t t, bool cols, bool rows) {
        const std::size_t p = t - 1, q = t;
        const REFFactorization& s = *src_;
        if (cols) {
            bhat_.swap_cols(p, q);
            swap(w_[p], w_[q]);
            if (have_z_) swap(z_prev_[p], z_prev_[q]);
            cperm_.swap_positions(p, q);
        }
        if (rows) {
            bhat_.swap_rows(p, q);
            swap(v_[p], v_[q]);
            if (have_y_) swap(y_prev_[p], y_prev_[q]);
            rperm_.swap_positions(p, q);
        }
        if (pending_u_row_iter_ == t || pending_l_col_iter_ == t) {
            // A second permutation at the detour iteration invalidates the
            // saved iterates; the scratch rebuild takes over.
            pending_u_row_iter_ = pending_l_col_iter_ = 0;
        }

        if (t == 1) {
            if (theta_v_ == 0) {
                for (std::size_t j = std::max<std::size_t>(1, theta_w_); j < n_; ++j)
                    w_mat_(0, j) = s.u(0, j) + v_[0] * w_[j];
            } else {
                for (std::size_t j = 0; j < n_; ++j) w_mat_(0, j) = s.merged()(0, j);
            }
            if (theta_w_ == 0) {
                for (std::size_t i = std::max<std::size_t>(1, theta_v_); i < n_; ++i)
                    w_mat_(i, 0) = s.l(i, 0) + v_[i] * w_[0];
            } else {
                for (std::size_t i = 0; i < n_; ++i) w_mat_(i, 0) = s.merged()(i, 0);
            }
            w_mat_(0, 0) = (big_theta_ == 0) ? s.base()(0, 0) + v_[0] * w_[0]
                                             : Int(s.merged()(0, 0));
            if (n_ > 1)
                w_mat_(1, 1) = (big_theta_ <= 1) ? s.base()(1, 1) + v_[1] * w_[1]
                                                 : Int(s.merged()(1, 1));
            return;
        }

        if (cols) {
            for (std::size_t r = 0; r + 1 < t; ++r) {
                if (r < theta_v_) {
                    w_mat_(r, p) = s.merged()(r, p);
                    w_mat_(r, q) = s.merged()(r, q);
                } else {
                    swap(w_mat_(r, p), w_mat_(r, q));
                }
            }
        }
        if (rows) {
            for (std::size_t c = 0; c + 1 < t; ++c) {
                if (c < theta_w_) {
                    w_mat_(p, c) = s.merged()(p, c);
                    w_mat_(q, c) = s.merged()(q, c);
                } else {
                    swap(w_mat_(p, c), w_mat_(q, c));
                }
            }
        }
        for (std::size_t d : {p, q}) {
            if (d < big_theta_) continue;  // final value, refreshed above
            w_mat_(d, d) = bhat_(d, d);
            for (std::size_t stage = 1; stage + 1 < t; ++stage)
                fused_div_into(w_mat_(d, d), rho_hat(stage), w_mat_(d, d),
                               w_mat_(stage - 1, d), w_mat_(d, stage - 1),
                               rho_hat(stage - 1), "sc2 diag rebuild");
        }
    }

    // --- main loop --------------------------------------------------------

    void iterate(std::size_t t) {
        run_checkpoints(t);
        if (t == 1 && w_mat_(0, 0).is_zero())
            throw SingularUpdate("updated matrix has a zero first pivot");
        compute_iterates(t);
        if (t >= 2) {
            advance_diagonal(t);
            compute_column(t);
            compute_row(t);
        }
        if (trace_) {
            if (have_y_ && t >= theta_v_) trace_->y_iters.push_back(FSVector{t, y_cur_});
            if (have_z_ && t >= theta_w_) trace_->z_iters.push_back(FSVector{t, z_cur_});
        }
        rotate_iterates(t);
        if (trace_ && trace_->capture_working && t >= 2)
            trace_->working.emplace_back(t, w_mat_);
    }

    void compute_iterates(std::size_t t) {
        const REFFactorization& s = *src_;
        if (t > theta_v_) {
            y_cur_ = y_prev_;
            const Int diag = s.merged()(t - 1, t - 1);
            for (std::size_t i = t; i < n_; ++i) {
                if (t == 1)
                    y_cur_[i] = mul_sub(diag, y_prev_[i], s.merged()(i, t - 1), y_prev_[t - 1]);
                else
                    y_cur_[i] = fused_div(diag, y_prev_[i], s.merged()(i, t - 1),
                                          y_prev_[t - 1], s.pivot(t - 1), "rou y step");
            }
            have_y_ = true;
        } else if (t == theta_v_) {
            // Scaled seed: the true iterate after the skipped leading steps.
            y_cur_.assign(n_, Int(0));
            for (std::size_t i = t; i < n_; ++i) y_cur_[i] = s.pivot(t) * v_[i];
            have_y_ = true;
        }
        if (t > theta_w_) {
            z_cur_ = z_prev_;
            const Int diag = s.merged()(t - 1, t - 1);
            for (std::size_t i = t; i < n_; ++i) {
                if (t == 1)
                    z_cur_[i] = mul_sub(diag, z_prev_[i], s.merged()(t - 1, i), z_prev_[t - 1]);
                else
                    z_cur_[i] = fused_div(diag, z_prev_[i], s.merged()(t - 1, i),
                                          z_prev_[t - 1], s.pivot(t - 1), "rou z step");
            }
            have_z_ = true;
        } else if (t == theta_w_) {
            z_cur_.assign(n_, Int(0));
            for (std::size_t i = t; i < n_; ++i) z_cur_[i] = s.pivot(t) * w_[i];
            have_z_ = true;
        }
    }

    void advance_diagonal(std::size_t t) {
        const Int& rh1 = rho_hat(t - 1);
        const Int& rh2 = rho_hat(t - 2);
        for (std::size_t i = std::max(t - 1, big_theta_); i < n_; ++i)
            fused_div_into(w_mat_(i, i), rh1, w_mat_(i, i), w_mat_(t - 2, i),
                           w_mat_(i, t - 2), rh2, "rou diag");
        if (w_mat_(t - 1, t - 1).is_zero())
            throw SingularUpdate("updated matrix has a zero pivot at stage " +
                                 std::to_string(t));
    }

    void compute_column(std::size_t t) {
        const std::size_t c = t - 1;
        if (c < theta_w_) return;  // copied column
        if (c < theta_v_) {
            // Leading zeros of v pin these rows of A_hat to A; the column
            // differs from the source by a rank-one correction driven by z.
            const REFFactorization& s = *src_;
            for (std::size_t i = std::max(t, theta_v_); i < n_; ++i)
                w_mat_(i, c) = s.l(i, c) + v_[i] * z_prev_[c];
            return;
        }
        if (forced_col_iter_ == t) {
            forced_col_iter_ = 0;
            scratch_rebuild_column(t);
            return;
        }
        if (pending_l_col_iter_ == t) {
            pending_l_col_iter_ = 0;
            column_detour(t);
            return;
        }
        if (y_prev_[c].is_zero()) {
            scratch_rebuild_column(t);
            return;
        }
        const Int& lkk = w_mat_(t - 1, t - 1);
        const Int& lprev = rho_hat(t - 1);
        for (std::size_t i = t; i < n_; ++i)
            w_mat_(i, c) = fused_div(lkk, y_prev_[i], lprev, y_cur_[i], y_prev_[c],
                                     "rou column");
    }

    void compute_row(std::size_t t) {
        const std::size_t r = t - 1;
        if (r < theta_v_) return;  // copied row
        if (r < theta_w_) {
            const REFFactorization& s = *src_;
            for (std::size_t i = std::max(t, theta_w_); i < n_; ++i)
                w_mat_(r, i) = s.u(r, i) + w_[i] * y_prev_[r];
            return;
        }
        if (forced_row_iter_ == t) {
            forced_row_iter_ = 0;
            scratch_rebuild_row(t);
            return;
        }
        if (pending_u_row_iter_ == t) {
            pending_u_row_iter_ = 0;
            row_detour(t);
            return;
        }
        if (z_prev_[r].is_zero()) {
            scratch_rebuild_row(t);
            return;
        }
        const Int& ukk = w_mat_(t - 1, t - 1);
        const Int& uprev = rho_hat(t - 1);
        for (std::size_t i = t; i < n_; ++i)
            w_mat_(r, i) = fused_div(ukk, z_prev_[i], uprev, z_cur_[i], z_prev_[r],
                                     "rou row");
    }

    void rotate_iterates(std::size_t t) {
        if (t >= theta_v_ && have_y_) y_prev_ = std::move(y_cur_);
        if (t >= theta_w_ && have_z_) z_prev_ = std::move(z_cur_);
    }

    // Row t-1 of U-hat when its divisor z^(t-1)[t-1] is zero after a
    // diagonal permutation. The entries are recovered at the previous stage
    // through the row-swapped system and advanced once: backtrack the source
    // row, run one substitution step against it, read the stage-(t-2) row
    // off the swapped-system formula, and advance with column t-2 of L-hat
    // as the pivot column.
    void row_detour(std::size_t t) {
        const std::size_t r = t - 1;
        const REFFactorization& s = *src_;
        if (saved_z_[r - 1].is_zero()) {
            scratch_rebuild_row(t);
            return;
        }
        for (std::size_t i = t; i < n_; ++i) {
            Int back = fused_div_add(s.pivot(r - 1), s.u(r, i), s.u(r - 1, i),
                                     s.l(r, r - 1), s.pivot(r), "rou row detour backtrack");
            Int zpp = fused_div(s.l(r, r - 1), saved_z_[i], back, saved_z_[r - 1],
                                s.pivot(r - 1), "rou row detour step");
            Int stage = fused_div(w_mat_(r, r - 1), saved_z_[i], rho_hat(r - 1), zpp,
                                  saved_z_[r - 1], "rou row detour stage");
            w_mat_(r, i) = fused_div(w_mat_(r - 1, r - 1), stage, w_mat_(r - 1, i),
                                     w_mat_(r, r - 1), rho_hat(r - 1), "rou row detour advance");
        }
    }

    void column_detour(std::size_t t) {
        const std::size_t r = t - 1;
        const REFFactorization& s = *src_;
        if (saved_y_[r - 1].is_zero()) {
            scratch_rebuild_column(t);
            return;
        }
        for (std::size_t i = t; i < n_; ++i) {
            Int back = fused_div_add(s.pivot(r - 1), s.l(i, r), s.l(i, r - 1),
                                     s.u(r - 1, r), s.pivot(r), "rou col detour backtrack");
            Int ypp = fused_div(s.u(r - 1, r), saved_y_[i], back, saved_y_[r - 1],
                                s.pivot(r - 1), "rou col detour step");
            Int stage = fused_div(w_mat_(r - 1, r), saved_y_[i], rho_hat(r - 1), ypp,
                                  saved_y_[r - 1], "rou col detour stage");
            w_mat_(i, r) = fused_div(w_mat_(r - 1, r - 1), stage, w_mat_(i, r - 1),
                                     w_mat_(r - 1, r), rho_hat(r - 1), "rou col detour advance");
        }
    }

    // Last-resort recovery: eliminate the A_hat row/column directly against
    // the finalized part of the working factorization. O(n t) operations,
    // used only when nested degeneracies invalidate every O(n) route.
    void scratch_rebuild_row(std::size_t t) {
        const std::size_t r = t - 1;
        ++st().scratch_rebuilds;
        IntVector row(n_);
        for (std::size_t j = 0; j < n_; ++j) row[j] = bhat_(r, j);
        for (std::size_t stage = 1; stage <= r; ++stage) {
            const Int lead = row[stage - 1];
            for (std::size_t j = stage; j < n_; ++j)
                fused_div_into(row[j], rho_hat(stage), row[j], w_mat_(stage - 1, j), lead,
                               rho_hat(stage - 1), "rou row rebuild");
        }
        for (std::size_t j = t; j < n_; ++j) w_mat_(r, j) = std::move(row[j]);
    }

    void scratch_rebuild_column(std::size_t t) {
        const std::size_t c = t - 1;
        ++st().scratch_rebuilds;
        IntVector col(n_);
        for (std::size_t i = 0; i < n_; ++i) col[i] = bhat_(i, c);
        for (std::size_t stage = 1; stage <= c; ++stage) {
            const Int lead = col[stage - 1];
            for (std::size_t i = stage; i < n_; ++i)
                fused_div_into(col[i], rho_hat(stage), col[i], w_mat_(i, stage - 1), lead,
                               rho_hat(stage - 1), "rou col rebuild");
        }
        for (std::size_t i = t; i < n_; ++i) w_mat_(i, c) = std::move(col[i]);
    }

    void final_pivot() {
        if (n_ >= 2)
            fused_div_into(w_mat_(n_ - 1, n_ - 1), rho_hat(n_ - 1), w_mat_(n_ - 1, n_ - 1),
                           w_mat_(n_ - 2, n_ - 1), w_mat_(n_ - 1, n_ - 2), rho_hat(n_ - 2),
                           "rou final pivot");
        if (w_mat_(n_ - 1, n_ - 1).is_zero())
            throw SingularUpdate("updated matrix is singular");
    }

    REFFactorization assemble() {
        std::vector<Int> pivots(n_ + 1);
        pivots[0] = Int(1);
        for (std::size_t s = 1; s <= n_; ++s) pivots[s] = w_mat_(s - 1, s - 1);
        return REFFactorization(std::move(w_mat_), std::move(pivots), std::move(bhat_),
                                std::move(rperm_), std::move(cperm_), symmetric_out_);
    }
};

}  // namespace detail

// Rebuilds REF-LU(A + gamma v w^T) from REF-LU(A) in O(n^2) operations,
// bit-identical to refactorizing the updated matrix under the same
// permutation choices. Leading zeros of the update vectors shortcut whole
// rows/columns; zero divisors in the substitution iterates are averted by
// permuting the source factorization one adjacent pair at a time.
inline REFFactorization rank_one_update(const REFFactorization& f, const UpdateSpec& spec,
                                        ROUStats* stats = nullptr,
                                        ROUTrace* trace = nullptr) {
    return detail::RankOneUpdater(f, spec, stats, trace).run();
}

// Column replacement as a rank-one update: v = new column minus old column,
// w = e_k. The leading-zero shortcut then copies columns 0..k-1 verbatim.
inline REFFactorization column_replace(const REFFactorization& f, std::size_t k,
                                       const IntVector& new_col, ROUStats* stats = nullptr) {
    const std::size_t n = f.n();
    if (k >= n) throw OutOfRange("column_replace index");
    if (new_col.size() != n) throw DimensionMismatch("column_replace column");
    std::vector<std::size_t> rinv(n), cinv(n);
    for (std::size_t i = 0; i < n; ++i) {
        rinv[f.row_perm()[i]] = i;
        cinv[f.col_perm()[i]] = i;
    }
    UpdateSpec spec;
    spec.gamma = Int(1);
    spec.v.resize(n);
    spec.w.assign(n, Int(0));
    spec.w[k] = Int(1);
    bool all_zero = true;
    for (std::size_t i = 0; i < n; ++i) {
        spec.v[i] = new_col[i] - f.base()(rinv[i], cinv[k]);
        if (!spec.v[i].is_zero()) all_zero = false;
    }
    if (all_zero) throw NoOpUpdate();
    return rank_one_update(f, spec, stats);
}

// Builds the update pair for the symmetric-rank-one formula
// B + (u - Bs)(u - Bs)^T / ((u - Bs)^T s). The scale must divide the update
// vector entry-wise to stay in integer arithmetic.
inline UpdateSpec sr1_vectors(const IntMatrix& b, const IntVector& u, const IntVector& s) {
    const std::size_t n = b.rows();
    if (!b.square() || u.size() != n || s.size() != n)
        throw DimensionMismatch("sr1_vectors");
    if (!b.is_symmetric()) throw NotSymmetric();
    IntVector bs = mat_vec(b, s);
    IntVector vp(n);
    bool zero = true;
    for (std::size_t i = 0; i < n; ++i) {
        vp[i] = u[i] - bs[i];
        if (!vp[i].is_zero()) zero = false;
    }
    if (zero) throw ZeroUpdateVector();
    Int d(0);
    for (std::size_t i = 0; i < n; ++i) d += vp[i] * s[i];
    if (d.is_zero()) throw DegenerateDenominator();
    UpdateSpec spec;
    spec.gamma = Int(1);
    spec.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (mpz_divisible_p(vp[i].raw(), d.raw()) == 0) throw NonIntegerGamma();
        mpz_divexact(spec.v[i].raw(), vp[i].raw(), d.raw());
    }
    spec.w = std::move(vp);
    return spec;
}

// Cost model for turning general sparsity of w into a leading-zero prefix:
// shifting a nonzero one place right costs 8(n-k) operations, skipping
// column k of the update saves 12(n-k). The plan lists the adjacent column
// swaps worth performing, or nothing when the trade never pays off.
struct SparsityPlan {
    bool permute = false;
    std::size_t p = 1;
    std::uint64_t cost = 0;
    std::uint64_t savings = 0;
    std::vector<std::size_t> col_swaps;  // 0-based left index of each adjacent swap
};

inline SparsityPlan sparsity_policy(const IntVector& w) {
    const std::size_t n = w.size();
    std::vector<std::size_t> nz;
    for (std::size_t i = 0; i < n; ++i)
        if (!w[i].is_zero()) nz.push_back(i);
    SparsityPlan plan;
    if (nz.empty()) return plan;

    if (nz.size() == 1) {
        std::size_t last_zero = n;
        for (std::size_t i = n; i-- > 0;)
            if (w[i].is_zero()) {
                last_zero = i;
                break;
            }
        if (last_zero == n || last_zero < nz[0]) return plan;
        plan.permute = true;
        plan.p = 1;
        for (std::size_t k = nz[0]; k < last_zero; ++k) {
            plan.cost += 8 * static_cast<std::uint64_t>(n - (k + 1));
            plan.savings += 12 * static_cast<std::uint64_t>(n - (k + 1));
            plan.col_swaps.push_back(k);
        }
        return plan;
    }

    for (std::size_t p = 2; p <= nz.size(); ++p) {
        std::vector<std::size_t> tail_zeros;  // first p-1 zeros among the last n-p slots
        for (std::size_t i = p; i < n && tail_zeros.size() + 1 < p; ++i)
            if (w[i].is_zero()) tail_zeros.push_back(i);
        if (tail_zeros.size() + 1 < p) break;

        std::uint64_t cost = 0, savings = 0;
        std::vector<std::size_t> swaps;
        for (std::size_t j = 0; j + 1 < p; ++j) {
            const std::size_t theta = nz[j] + 1;       // 1-based
            const std::size_t zeta = tail_zeros[j] + 1;
            for (std::size_t k = theta; k < zeta; ++k) {
                cost += 8 * static_cast<std::uint64_t>(n - k);
                swaps.push_back(k - 1);
            }
        }
        for (std::size_t k = nz[0] + 1; k < nz[p - 1] + 1; ++k)
            savings += 12 * static_cast<std::uint64_t>(n - k);

        if (cost < savings) {
            plan.permute = true;
            plan.p = p;
            plan.cost = cost;
            plan.savings = savings;
            plan.col_swaps = std::move(swaps);
        } else {
            break;
        }
    }
    return plan;
}

// Applies a sparsity plan by permuting the factorization's columns. The
// update spec is unchanged: the factorization's column permutation now maps
// the caller's w into its sparser internal layout.
inline REFFactorization apply_sparsity_plan(const REFFactorization& f,
                                            const SparsityPlan& plan) {
    REFFactorization g = f;
    for (std::size_t k : plan.col_swaps) detail::apcp_inplace(g, k);
    return g;
}

}  // namespace refla
