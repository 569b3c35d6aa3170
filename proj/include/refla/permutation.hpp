#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include "refla/errors.hpp"

namespace refla {

// Index permutation with tracked parity. map()[i] is the source index that
// position i draws from, so applying to a vector b yields b[map[i]].
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::size_t n) : map_(n) {
        std::iota(map_.begin(), map_.end(), 0);
    }

    std::size_t size() const { return map_.size(); }
    bool is_identity() const {
        for (std::size_t i = 0; i < map_.size(); ++i)
            if (map_[i] != i) return false;
        return true;
    }
    std::size_t operator[](std::size_t i) const { return map_[i]; }
    const std::vector<std::size_t>& map() const { return map_; }
    int parity() const { return parity_; }

    // Record that positions a and b of the permuted object were swapped.
    void swap_positions(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap(map_[a], map_[b]);
        parity_ = -parity_;
    }

    template <typename V>
    V apply(const V& src) const {
        if (src.size() != map_.size()) throw DimensionMismatch("permutation apply");
        V out(src.size());
        for (std::size_t i = 0; i < map_.size(); ++i) out[i] = src[map_[i]];
        return out;
    }

    // Inverse action: out[map[i]] = src[i].
    template <typename V>
    V apply_inverse(const V& src) const {
        if (src.size() != map_.size()) throw DimensionMismatch("permutation apply");
        V out(src.size());
        for (std::size_t i = 0; i < map_.size(); ++i) out[map_[i]] = src[i];
        return out;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.map_ == b.map_;
    }

    static Permutation from_map(std::vector<std::size_t> map) {
        Permutation p;
        p.map_ = std::move(map);
        p.parity_ = computed_parity(p.map_);
        return p;
    }

private:
    static int computed_parity(const std::vector<std::size_t>& m) {
        std::vector<bool> seen(m.size(), false);
        int par = 1;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (seen[i]) continue;
            std::size_t len = 0, j = i;
            while (!seen[j]) {
                seen[j] = true;
                j = m[j];
                ++len;
            }
            if (len % 2 == 0) par = -par;
        }
        return par;
    }

    std::vector<std::size_t> map_;
    int parity_ = 1;
};

}  // namespace refla
