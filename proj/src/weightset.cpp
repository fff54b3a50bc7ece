#include "orbispace/weightset.hpp"

#include <algorithm>
#include <numeric>

namespace orbi::ws {

WeightMultiset WeightMultiset::of(std::size_t m, std::vector<std::vector<Int>> items) {
    for (const auto& v : items)
        if (v.size() != m) throw Error(ErrorCode::InvalidInput, "weight vector of wrong length");
    return WeightMultiset{m, std::move(items)};
}

bool WeightMultiset::item_is_zero(std::size_t i) const {
    return std::all_of(items[i].begin(), items[i].end(), [](const Int& x) { return x == 0; });
}

std::vector<std::size_t> WeightMultiset::nonzero_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (!item_is_zero(i)) idx.push_back(i);
    return idx;
}

lin::RatMatrix WeightMultiset::column_matrix(const std::vector<std::size_t>& which) const {
    lin::RatMatrix mat(m, which.size());
    for (std::size_t j = 0; j < which.size(); ++j)
        for (std::size_t i = 0; i < m; ++i) mat.at(i, j) = Rat(items[which[j]][i]);
    return mat;
}

lin::RatMatrix WeightMultiset::column_matrix() const {
    std::vector<std::size_t> all(items.size());
    std::iota(all.begin(), all.end(), 0);
    return column_matrix(all);
}

namespace {

std::size_t rank_of(const WeightMultiset& p, const std::vector<std::size_t>& which) {
    return lin::rank(p.column_matrix(which));
}

// Visits all size-k index subsets of `pool`.
template <typename F>
void for_each_subset(const std::vector<std::size_t>& pool, std::size_t k, F&& f) {
    if (k > pool.size()) return;
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        f(pick);
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == pool.size() - (k - i) - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

}  // namespace

bool is_q_stable(const WeightMultiset& p, std::size_t q) {
    if (q == 0) return true;
    std::vector<std::size_t> nz = p.nonzero_indices();
    if (nz.size() > kMaxNonzeroItems)
        throw Error(ErrorCode::CapExceeded, "too many nonzero items for stability check");
    if (nz.size() <= q) return nz.empty();

    std::size_t full = rank_of(p, nz);
    bool stable = true;
    for_each_subset(nz, q, [&](const std::vector<std::size_t>& pick) {
        if (!stable) return;
        std::vector<bool> removed(p.items.size(), false);
        for (std::size_t t : pick) removed[nz[t]] = true;
        std::vector<std::size_t> rest;
        for (std::size_t i : nz)
            if (!removed[i]) rest.push_back(i);
        if (rank_of(p, rest) != full) stable = false;
    });
    return stable;
}

Decomposition indecomposable_components(const WeightMultiset& p) {
    Decomposition out;
    std::vector<std::size_t> nz = p.nonzero_indices();
    for (std::size_t i = 0; i < p.items.size(); ++i)
        if (p.item_is_zero(i)) out.zero_bucket.push_back(i);
    if (nz.empty()) return out;

    auto kernel = lin::kernel_basis(p.column_matrix(nz));

    std::vector<std::size_t> parent(nz.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& vec : kernel) {
        std::size_t first = nz.size();
        for (std::size_t j = 0; j < nz.size(); ++j) {
            if (vec[j] == 0) continue;
            if (first == nz.size())
                first = j;
            else
                parent[find(j)] = find(first);
        }
    }

    std::vector<std::vector<std::size_t>> by_root(nz.size());
    for (std::size_t j = 0; j < nz.size(); ++j) by_root[find(j)].push_back(nz[j]);
    for (auto& blk : by_root)
        if (!blk.empty()) out.blocks.push_back(std::move(blk));
    std::sort(out.blocks.begin(), out.blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    std::size_t span_sum = 0;
    for (const auto& blk : out.blocks) span_sum += rank_of(p, blk);
    if (span_sum != rank_of(p, nz))
        throw Error(ErrorCode::InternalContradiction, "component span sum check failed");
    return out;
}

std::vector<std::vector<std::size_t>> equivalence_classes(const WeightMultiset& p) {
    std::size_t n = p.items.size();
    auto kernel = lin::kernel_basis(p.column_matrix());
    std::size_t k = kernel.size();

    // Row of kernel coordinates seen by item i. Two items are equivalent iff
    // both rows vanish or the rows are proportional without vanishing; that is
    // exactly the simultaneous-zero condition on every kernel vector.
    auto row = [&](std::size_t i) {
        std::vector<Rat> r(k);
        for (std::size_t t = 0; t < k; ++t) r[t] = kernel[t][i];
        return r;
    };
    auto is_zero_row = [&](const std::vector<Rat>& r) {
        return std::all_of(r.begin(), r.end(), [](const Rat& x) { return x == 0; });
    };
    auto proportional = [&](const std::vector<Rat>& a, const std::vector<Rat>& b) {
        std::size_t lead = k;
        for (std::size_t t = 0; t < k; ++t)
            if (a[t] != 0) {
                lead = t;
                break;
            }
        if (lead == k) return false;
        if (b[lead] == 0) return false;
        Rat c = b[lead] / a[lead];
        for (std::size_t t = 0; t < k; ++t)
            if (b[t] != c * a[t]) return false;
        return true;
    };

    std::vector<std::vector<Rat>> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) rows.push_back(row(i));

    std::vector<std::vector<std::size_t>> classes;
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> cls{i};
        used[i] = true;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (used[j]) continue;
            bool eq = is_zero_row(rows[i]) ? is_zero_row(rows[j])
                                           : (!is_zero_row(rows[j]) && proportional(rows[i], rows[j]));
            if (eq) {
                cls.push_back(j);
                used[j] = true;
            }
        }
        classes.push_back(std::move(cls));
    }
    return classes;
}

bool two_stable_via_crit(const WeightMultiset& p) {
    if (!is_q_stable(p, 1)) throw Error(ErrorCode::Not1Stable, "multiset is not 1-stable");
    for (const auto& cls : equivalence_classes(p))
        if (cls.size() > 1) return false;
    return true;
}

ClassRelation class_relation(const WeightMultiset& p, const std::vector<std::size_t>& n_in) {
    std::vector<std::size_t> n = n_in;
    std::sort(n.begin(), n.end());
    if (n.size() < 2) throw Error(ErrorCode::NotAClass, "class must have at least two items");
    bool found = false;
    for (const auto& cls : equivalence_classes(p)) {
        auto sorted = cls;
        std::sort(sorted.begin(), sorted.end());
        if (sorted == n) {
            found = true;
            break;
        }
    }
    if (!found) throw Error(ErrorCode::NotAClass, "index set is not an equivalence class");

    auto kernel = lin::kernel_basis(p.column_matrix());
    lin::RatMatrix proj(kernel.size(), n.size());
    for (std::size_t t = 0; t < kernel.size(); ++t)
        for (std::size_t j = 0; j < n.size(); ++j) proj.at(t, j) = kernel[t][n[j]];
    if (lin::rank(proj) != 1)
        throw Error(ErrorCode::InternalContradiction, "class projection is not one-dimensional");

    std::vector<Rat> c;
    for (std::size_t t = 0; t < kernel.size(); ++t) {
        bool nonzero = false;
        for (std::size_t j = 0; j < n.size(); ++j)
            if (proj.at(t, j) != 0) nonzero = true;
        if (nonzero) {
            c.resize(n.size());
            for (std::size_t j = 0; j < n.size(); ++j) c[j] = proj.at(t, j);
            break;
        }
    }
    for (const Rat& x : c)
        if (x == 0)
            throw Error(ErrorCode::InternalContradiction, "class relation with a zero coefficient");

    Int lcm = 1;
    for (const Rat& x : c) lcm = int_lcm(lcm, rat_den(x));
    std::vector<Int> ints(n.size());
    Int gcd = 0;
    for (std::size_t j = 0; j < n.size(); ++j) {
        Rat scaled = c[j] * Rat(lcm);
        ints[j] = rat_num(scaled);
        gcd = int_gcd(gcd, ints[j]);
    }
    for (auto& v : ints) v /= gcd;

    std::vector<Int> combination(p.m, 0);
    for (std::size_t j = 0; j < n.size(); ++j)
        for (std::size_t i = 0; i < p.m; ++i) combination[i] += ints[j] * p.items[n[j]][i];

    // Global sign: make the combination lexicographically positive; when it
    // vanishes, make the smallest coefficient (earliest on ties) positive.
    bool flip_all = false;
    bool comb_zero =
        std::all_of(combination.begin(), combination.end(), [](const Int& x) { return x == 0; });
    if (!comb_zero) {
        for (const Int& x : combination) {
            if (x == 0) continue;
            flip_all = x < 0;
            break;
        }
    } else {
        std::size_t best = 0;
        for (std::size_t j = 1; j < n.size(); ++j)
            if (abs(ints[j]) < abs(ints[best])) best = j;
        flip_all = ints[best] < 0;
    }
    if (flip_all) {
        for (auto& v : ints) v = -v;
        for (auto& v : combination) v = -v;
    }

    ClassRelation rel;
    rel.class_indices = n;
    rel.combination = combination;
    rel.sign_flips.resize(n.size());
    rel.coefficients.resize(n.size());
    for (std::size_t j = 0; j < n.size(); ++j) {
        rel.sign_flips[j] = ints[j] > 0 ? 1 : -1;
        rel.coefficients[j] = abs(ints[j]);
    }

    // The combination must lie in the span of the remaining items.
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < p.items.size(); ++i)
        if (!std::binary_search(n.begin(), n.end(), i)) rest.push_back(i);
    lin::RatMatrix with(p.m, rest.size() + 1);
    for (std::size_t j = 0; j < rest.size(); ++j)
        for (std::size_t i = 0; i < p.m; ++i) with.at(i, j) = Rat(p.items[rest[j]][i]);
    for (std::size_t i = 0; i < p.m; ++i) with.at(i, rest.size()) = Rat(combination[i]);
    if (lin::rank(with) != rank_of(p, rest))
        throw Error(ErrorCode::InternalContradiction, "relation leaves the complement span");
    return rel;
}

}  // namespace orbi::ws
