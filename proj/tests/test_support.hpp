#pragma once

#include "orbispace/rng.hpp"
#include "orbispace/weightset.hpp"

#include <numeric>
#include <vector>

namespace testsup {

using orbi::Int;
using orbi::Rat;
using orbi::ws::WeightMultiset;

// ---- independent oracles, kept free of the implementation paths they check ----

// Removal oracle for q-stability: enumerate every subset of size <= q of ALL
// items (zeros included) and compare spans directly.
inline bool q_stable_oracle(const WeightMultiset& p, std::size_t q) {
    std::size_t n = p.items.size();
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::size_t full = orbi::lin::rank(p.column_matrix());

    bool stable = true;
    std::vector<std::size_t> pick;
    auto recurse = [&](auto&& self, std::size_t start) -> void {
        if (!stable) return;
        if (pick.size() <= q && !pick.empty()) {
            std::vector<bool> removed(n, false);
            for (std::size_t i : pick) removed[i] = true;
            std::vector<std::size_t> rest;
            for (std::size_t i = 0; i < n; ++i)
                if (!removed[i]) rest.push_back(i);
            if (orbi::lin::rank(p.column_matrix(rest)) != full) {
                stable = false;
                return;
            }
        }
        if (pick.size() == q) return;
        for (std::size_t i = start; i < n; ++i) {
            pick.push_back(i);
            self(self, i + 1);
            pick.pop_back();
        }
    };
    recurse(recurse, 0);
    return stable;
}

// Bipartition-refinement oracle for indecomposable components: split a block
// whenever some proper bipartition has independent spans, recursively.
inline std::vector<std::vector<std::size_t>> components_oracle(const WeightMultiset& p) {
    std::vector<std::size_t> nz = p.nonzero_indices();

    auto rank_of = [&](const std::vector<std::size_t>& idx) {
        return orbi::lin::rank(p.column_matrix(idx));
    };

    std::vector<std::vector<std::size_t>> result;
    auto refine = [&](auto&& self, std::vector<std::size_t> block) -> void {
        std::size_t k = block.size();
        if (k <= 1) {
            if (k == 1) result.push_back(block);
            return;
        }
        std::size_t whole = rank_of(block);
        for (std::size_t mask = 1; mask + 1 < (1u << k); ++mask) {
            std::vector<std::size_t> left, right;
            for (std::size_t i = 0; i < k; ++i)
                ((mask >> i) & 1u ? left : right).push_back(block[i]);
            if (rank_of(left) + rank_of(right) == whole) {
                self(self, left);
                self(self, right);
                return;
            }
        }
        result.push_back(block);
    };
    refine(refine, nz);
    std::sort(result.begin(), result.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return result;
}

// ---- random data ----

inline WeightMultiset random_multiset(std::uint64_t seed, std::uint64_t index,
                                      std::size_t max_items = 8, std::size_t max_m = 4,
                                      std::int64_t lo = -3, std::int64_t hi = 3) {
    orbi::CounterRng rng(seed, index);
    std::size_t m = 1 + rng.next_below(max_m);
    std::size_t n = rng.next_below(max_items + 1);
    std::vector<std::vector<Int>> items(n, std::vector<Int>(m));
    for (auto& item : items)
        for (auto& x : item) x = Int(rng.next_range(lo, hi));
    return WeightMultiset::of(m, std::move(items));
}

inline orbi::lin::RatMatrix random_rat_matrix(std::uint64_t seed, std::uint64_t index,
                                              std::size_t rows, std::size_t cols) {
    orbi::CounterRng rng(seed, index);
    orbi::lin::RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m.at(i, j) = Rat(Int(rng.next_range(-9, 9)), Int(rng.next_range(1, 5)));
    return m;
}

}  // namespace testsup
