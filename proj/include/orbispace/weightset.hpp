#pragma once

#include "orbispace/lattice.hpp"

#include <vector>

namespace orbi::ws {

// Finite multiset of integer vectors in Z^m. Items are identified by their
// list index, so duplicates stay distinguishable; every partition produced by
// this module is a partition of indices.
struct WeightMultiset {
    std::size_t m = 0;
    std::vector<std::vector<Int>> items;

    static WeightMultiset of(std::size_t m, std::vector<std::vector<Int>> items);
    bool item_is_zero(std::size_t i) const;
    std::vector<std::size_t> nonzero_indices() const;
    // Columns are the items listed in `which` (all items if empty selection flag).
    lin::RatMatrix column_matrix(const std::vector<std::size_t>& which) const;
    lin::RatMatrix column_matrix() const;
};

inline constexpr std::size_t kMaxNonzeroItems = 24;

// Span survives removal of any <= q items. Only nonzero items are enumerated;
// refuses multisets with more than kMaxNonzeroItems nonzero items.
bool is_q_stable(const WeightMultiset& p, std::size_t q);

struct Decomposition {
    std::vector<std::vector<std::size_t>> blocks;  // partition of nonzero indices
    std::vector<std::size_t> zero_bucket;
};

// Unique finest partition of the nonzero items into blocks with linearly
// independent spans, via union-find over the supports of the pivot-normalized
// kernel basis. The span-sum identity is asserted before returning.
Decomposition indecomposable_components(const WeightMultiset& p);

// Indices i, j fall in one class iff every kernel vector of the item-column
// matrix vanishes at i and j simultaneously; zero items are singletons.
std::vector<std::vector<std::size_t>> equivalence_classes(const WeightMultiset& p);

// All classes singleton; requires 1-stability and agrees with is_q_stable(p, 2).
bool two_stable_via_crit(const WeightMultiset& p);

// The unique (up to sign) relation supported on a class N: after flipping the
// recorded signs all coefficients are positive coprime integers, and
// sum_j a_j * (flip_j * item_j) lies in the span of the other items.
struct ClassRelation {
    std::vector<std::size_t> class_indices;  // sorted
    std::vector<int> sign_flips;             // +1 / -1, parallel to class_indices
    std::vector<Int> coefficients;           // positive, gcd 1
    std::vector<Int> combination;            // sum a_j * flip_j * item_j, in Z^m
};

ClassRelation class_relation(const WeightMultiset& p, const std::vector<std::size_t>& n);

}  // namespace orbi::ws
