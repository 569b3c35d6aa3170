#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "refla/update.hpp"

namespace refla {

// Experiment 1: dense random update vectors. Experiment 2: a leading segment
// of v copied from a column of A, forcing zero-divisor adjustments.
// Experiment 3: replacement of the first column.
struct ExperimentConfig {
    std::vector<std::size_t> sizes;
    std::size_t trials = 30;
    std::uint64_t seed = 1;
    int experiment = 1;
    long entry_min = -100;
    long entry_max = 100;
};

struct TrialReport {
    int experiment = 1;
    std::size_t n = 0;
    std::size_t trial = 0;
    double refactor_seconds = 0.0;
    double rou_seconds = 0.0;
    std::size_t sc2_calls = 0;
    std::size_t forced_r = 0;  // experiment 2 bookkeeping: r and c of the copied prefix
    std::size_t forced_c = 0;
    std::uint64_t rou_ops = 0;
    std::size_t beta_max = 0;
    bool oracle_pass = false;
    std::size_t redraws = 0;

    std::string json() const {
        std::ostringstream os;
        os << "{\"type\":\"trial\",\"experiment\":" << experiment << ",\"n\":" << n
           << ",\"trial\":" << trial << ",\"refactor_s\":" << refactor_seconds
           << ",\"rou_s\":" << rou_seconds << ",\"sc2_calls\":" << sc2_calls;
        if (experiment == 2) os << ",\"r\":" << forced_r << ",\"c\":" << forced_c;
        os << ",\"rou_ops\":" << rou_ops << ",\"beta_max\":" << beta_max
           << ",\"oracle_pass\":" << (oracle_pass ? "true" : "false")
           << ",\"redraws\":" << redraws << "}";
        return os.str();
    }
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
    // splitmix64 over the tuple; gives independent per-instance streams
    std::uint64_t x = seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xbf58476d1ce4e5b9ULL) ^
                      (c * 0x94d049bb133111ebULL);
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Int draw_nonzero(std::mt19937_64& rng, long lo, long hi) {
    std::uniform_int_distribution<long> dist(lo, hi);
    long x = 0;
    do {
        x = dist(rng);
    } while (x == 0);
    return Int(x);
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t n, long lo, long hi) {
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = draw_nonzero(rng, lo, hi);
    return a;
}

inline IntVector random_vector(std::mt19937_64& rng, std::size_t n, long lo, long hi) {
    IntVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = draw_nonzero(rng, lo, hi);
    return v;
}

}  // namespace detail

struct RandomInstance {
    IntMatrix a;
    IntVector v, w;
    REFFactorization fact;  // factorization of a, built while validating nonsingularity
    std::size_t redraws = 0;
};

// Entries drawn uniformly from the nonzero integers in [entry_min, entry_max];
// deterministic for a given (n, seed). Singular draws are discarded and
// redrawn with an advanced stream.
inline RandomInstance gen_random_instance(std::size_t n, std::uint64_t seed,
                                          long lo = -100, long hi = 100) {
    if (n < 1) throw OutOfRange("instance order");
    for (std::size_t attempt = 0;; ++attempt) {
        std::mt19937_64 rng(detail::mix_seed(seed, n, attempt, 0));
        IntMatrix a = detail::random_matrix(rng, n, lo, hi);
        IntVector v = detail::random_vector(rng, n, lo, hi);
        IntVector w = detail::random_vector(rng, n, lo, hi);
        try {
            REFFactorization f = ref_lu_factorize(a);
            return RandomInstance{std::move(a), std::move(v), std::move(w), std::move(f),
                                  attempt};
        } catch (const SingularMatrix&) {
            continue;
        }
    }
}

struct SC2Instance {
    IntMatrix a;
    IntVector v, w;
    REFFactorization fact;
    std::size_t r = 0, c = 0;  // 1-based; the construction forces >= r-c adjustments
    std::size_t redraws = 0;
};

// v copies column c of A on its leading r entries and is random past them;
// this construction is guaranteed to trigger at least (r - c) zero-divisor
// adjustments during the update.
inline SC2Instance gen_sc2_instance(std::size_t n, std::uint64_t seed, long lo = -100,
                                    long hi = 100) {
    if (n < 2) throw OutOfRange("instance order");
    for (std::size_t attempt = 0;; ++attempt) {
        std::mt19937_64 rng(detail::mix_seed(seed, n, attempt, 2));
        IntMatrix a = detail::random_matrix(rng, n, lo, hi);
        std::uniform_int_distribution<std::size_t> cdist(1, n);
        std::size_t c = cdist(rng);
        std::uniform_int_distribution<std::size_t> rdist(c, n);
        std::size_t r = rdist(rng);
        IntVector v(n);
        for (std::size_t i = 0; i < r; ++i) v[i] = a(i, c - 1);
        for (std::size_t i = r; i < n; ++i) v[i] = detail::draw_nonzero(rng, lo, hi);
        IntVector w = detail::random_vector(rng, n, lo, hi);
        try {
            REFFactorization f = ref_lu_factorize(a);
            return SC2Instance{std::move(a), std::move(v), std::move(w), std::move(f),
                               r, c, attempt};
        } catch (const SingularMatrix&) {
            continue;
        }
    }
}

// Compares the update output with a from-scratch factorization of the same
// (possibly permuted) updated matrix, bit for bit.
inline bool update_matches_refactorization(const REFFactorization& updated) {
    REFFactorization oracle = ref_lu_factorize(updated.base());
    if (!oracle.row_perm().is_identity() || !oracle.col_perm().is_identity()) return false;
    return oracle.merged() == updated.merged() && oracle.pivots() == updated.pivots();
}

inline std::string experiment_header(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "{\"type\":\"header\",\"experiment\":" << cfg.experiment << ",\"seed\":" << cfg.seed
       << ",\"trials\":" << cfg.trials << ",\"entry_range\":[" << cfg.entry_min << ","
       << cfg.entry_max << "],\"rng\":\"mt19937_64 (splitmix64-derived per-instance streams)\""
       << ",\"singular_draws\":\"discarded and redrawn with an advanced stream\""
       << ",\"timing\":\"steady_clock around the arithmetic call only\"}";
    return os.str();
}

inline void print_summary(const std::vector<TrialReport>& reports, std::ostream& os);

// Runs the configured experiment; every timed trial is also a correctness
// trial, and a mismatch aborts the run.
inline std::vector<TrialReport> run_experiment(const ExperimentConfig& cfg,
                                               std::ostream* jsonl = nullptr,
                                               std::ostream* table = nullptr) {
    using clock = std::chrono::steady_clock;
    std::vector<TrialReport> reports;
    if (jsonl) *jsonl << experiment_header(cfg) << "\n";

    for (std::size_t n : cfg.sizes) {
        for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
            const std::uint64_t tseed = detail::mix_seed(cfg.seed, n, trial, 77);
            TrialReport rep;
            rep.experiment = cfg.experiment;
            rep.n = n;
            rep.trial = trial;

            for (std::size_t attempt = 0;; ++attempt) {
                UpdateSpec spec;
                REFFactorization fact;
                std::size_t redraws = 0;
                if (cfg.experiment == 2) {
                    SC2Instance inst = gen_sc2_instance(n, tseed + attempt, cfg.entry_min,
                                                        cfg.entry_max);
                    spec.v = std::move(inst.v);
                    spec.w = std::move(inst.w);
                    fact = std::move(inst.fact);
                    rep.forced_r = inst.r;
                    rep.forced_c = inst.c;
                    redraws = inst.redraws;
                } else {
                    RandomInstance inst = gen_random_instance(n, tseed + attempt,
                                                              cfg.entry_min, cfg.entry_max);
                    if (cfg.experiment == 3) {
                        // Replace the first column: v = a' - A e_1, w = e_1.
                        std::mt19937_64 rng(detail::mix_seed(tseed + attempt, n, 3, 3));
                        IntVector newcol = detail::random_vector(rng, n, cfg.entry_min,
                                                                 cfg.entry_max);
                        spec.w.assign(n, Int(0));
                        spec.w[0] = Int(1);
                        spec.v.resize(n);
                        bool all_zero = true;
                        for (std::size_t i = 0; i < n; ++i) {
                            spec.v[i] = newcol[i] - inst.a(i, 0);
                            if (!spec.v[i].is_zero()) all_zero = false;
                        }
                        if (all_zero) continue;
                    } else {
                        spec.v = std::move(inst.v);
                        spec.w = std::move(inst.w);
                    }
                    fact = std::move(inst.fact);
                    redraws = inst.redraws;
                }
                rep.redraws = redraws + attempt;

                IntMatrix ahat;
                try {
                    ahat = apply_rank_one(fact.base(), Int(1), fact.row_perm().apply(spec.v),
                                          fact.col_perm().apply(spec.w));
                } catch (const Error&) {
                    continue;
                }

                // Timed refactorization of the updated matrix.
                REFFactorization refact;
                const auto t0 = clock::now();
                try {
                    refact = ref_lu_factorize(ahat);
                } catch (const SingularMatrix&) {
                    continue;  // updated matrix singular: redraw the instance
                }
                const auto t1 = clock::now();

                // Timed rank-one update.
                ROUStats stats;
                REFFactorization updated;
                const auto t2 = clock::now();
                try {
                    updated = rank_one_update(fact, spec, &stats);
                } catch (const SingularUpdate&) {
                    continue;
                }
                const auto t3 = clock::now();

                rep.refactor_seconds = std::chrono::duration<double>(t1 - t0).count();
                rep.rou_seconds = std::chrono::duration<double>(t3 - t2).count();
                rep.sc2_calls = stats.sc2_calls;
                rep.rou_ops = stats.ops.total();
                rep.beta_max = stats.beta_max;
                rep.oracle_pass = update_matches_refactorization(updated);
                if (!rep.oracle_pass)
                    throw OracleMismatch("update disagrees with refactorization at n=" +
                                         std::to_string(n) + " trial " + std::to_string(trial));
                break;
            }
            if (jsonl) *jsonl << rep.json() << "\n";
            reports.push_back(std::move(rep));
        }
    }

    if (table) print_summary(reports, *table);
    return reports;
}

inline void print_summary(const std::vector<TrialReport>& reports, std::ostream& os) {
    os << "   n |   refactor avg (s)    sd |        rou avg (s)    sd |  sc2 avg | ratio\n";
    std::vector<std::size_t> sizes;
    for (const auto& r : reports)
        if (sizes.empty() || sizes.back() != r.n) sizes.push_back(r.n);
    for (std::size_t n : sizes) {
        double sum_f = 0, sum_u = 0, sum_sc2 = 0;
        std::size_t count = 0;
        for (const auto& r : reports)
            if (r.n == n) {
                sum_f += r.refactor_seconds;
                sum_u += r.rou_seconds;
                sum_sc2 += static_cast<double>(r.sc2_calls);
                ++count;
            }
        const double mean_f = sum_f / count, mean_u = sum_u / count;
        double var_f = 0, var_u = 0;
        for (const auto& r : reports)
            if (r.n == n) {
                var_f += (r.refactor_seconds - mean_f) * (r.refactor_seconds - mean_f);
                var_u += (r.rou_seconds - mean_u) * (r.rou_seconds - mean_u);
            }
        var_f /= count;
        var_u /= count;
        char line[160];
        std::snprintf(line, sizeof line, "%4zu | %16.6f %8.6f | %16.6f %8.6f | %8.1f | %6.2f\n",
                      n, mean_f, std::sqrt(var_f), mean_u, std::sqrt(var_u), sum_sc2 / count,
                      mean_u > 0 ? mean_f / mean_u : 0.0);
        os << line;
    }
}

}  // namespace refla
