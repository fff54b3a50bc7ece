#include "orbispace/repmodel.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace orbi::rep {

namespace {

std::vector<std::vector<std::size_t>> perm_cycles(const std::vector<std::size_t>& perm) {
    std::vector<std::vector<std::size_t>> cycles;
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t start = 0; start < perm.size(); ++start) {
        if (seen[start]) continue;
        std::vector<std::size_t> cyc;
        std::size_t j = start;
        while (!seen[j]) {
            seen[j] = true;
            cyc.push_back(j);
            j = perm[j];
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

// Loop data of one permutation cycle: the composite map back to the starting
// line is z -> e^{2 pi i phase} z, conjugated when the conjugation count is
// odd; a torus translate delta shifts the phase by sum_j coeff[j] * delta[j].
struct CycleData {
    std::vector<std::size_t> lines;
    bool antilinear = false;
    Rat phase;
    std::vector<Int> coeff;  // length = #lines of the spec
};

CycleData cycle_data(const RepSpec& spec, const MonomialElement& g,
                     const std::vector<std::size_t>& cyc) {
    CycleData data;
    data.lines = cyc;
    data.coeff.assign(spec.lines(), 0);
    // w_t = product of (-1)^conj over the steps after t in the walk
    std::vector<int> w(cyc.size(), 1);
    for (std::size_t t = cyc.size(); t-- > 1;)
        w[t - 1] = w[t] * (g.conj[cyc[t]] ? -1 : 1);
    int parity = 1;
    for (std::size_t t = 0; t < cyc.size(); ++t) {
        std::size_t j = cyc[t];
        data.phase += Rat(w[t]) * g.rot[j];
        // translates enter through theta_j + (-1)^{conj_j} delta_j
        data.coeff[j] = Int(w[t] * (g.conj[j] ? -1 : 1));
        if (g.conj[j]) parity = -parity;
    }
    data.phase = mod1(data.phase);
    data.antilinear = parity < 0;
    return data;
}

std::size_t v0_fixed_dim(const RepSpec& spec, const lin::RatMatrix& b) {
    if (spec.v0_dim == 0) return 0;
    return spec.v0_dim - lin::rank(lin::RatMatrix::identity(spec.v0_dim) - b);
}

lin::IntMat weight_line_matrix(const RepSpec& spec) {
    lin::IntMat m(spec.lines(), spec.m);
    for (std::size_t j = 0; j < spec.lines(); ++j)
        for (std::size_t i = 0; i < spec.m; ++i) m.at(j, i) = spec.weights.items[j][i];
    return m;
}

std::vector<std::vector<Int>> conj_adjusted_rows(const lin::Lattice& ann,
                                                 const std::vector<bool>& conj) {
    std::vector<std::vector<Int>> rows = ann.basis;
    for (auto& row : rows)
        for (std::size_t j = 0; j < row.size(); ++j)
            if (conj[j]) row[j] = -row[j];
    return lin::hermite_row_basis(std::move(rows));
}

void check_element_shape(const RepSpec& spec, const MonomialElement& g) {
    std::size_t n = spec.lines();
    if (g.perm.size() != n || g.conj.size() != n || g.rot.size() != n)
        throw Error(ErrorCode::InvalidInput, "element has wrong number of lines");
    std::vector<bool> hit(n, false);
    for (std::size_t v : g.perm) {
        if (v >= n || hit[v]) throw Error(ErrorCode::InvalidInput, "perm is not a permutation");
        hit[v] = true;
    }
    if (g.v0_block.rows() != spec.v0_dim || g.v0_block.cols() != spec.v0_dim)
        throw Error(ErrorCode::InvalidInput, "v0 block has wrong shape");
}

std::vector<Int> canonical_sign(const std::vector<Int>& v) {
    for (const Int& x : v) {
        if (x == 0) continue;
        if (x < 0) {
            std::vector<Int> neg(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
            return neg;
        }
        break;
    }
    return v;
}

}  // namespace

RepSpec make_spec(std::size_t m, std::vector<std::vector<Int>> weights, std::size_t v0_dim) {
    RepSpec spec;
    spec.m = m;
    spec.weights = ws::WeightMultiset::of(m, std::move(weights));
    spec.v0_dim = v0_dim;
    spec.v0_gram = lin::RatMatrix::identity(v0_dim);
    return spec;
}

MonomialElement identity_element(const RepSpec& spec) {
    MonomialElement g;
    std::size_t n = spec.lines();
    g.perm.resize(n);
    std::iota(g.perm.begin(), g.perm.end(), 0);
    g.conj.assign(n, false);
    g.rot.assign(n, Rat(0));
    g.v0_block = lin::RatMatrix::identity(spec.v0_dim);
    return g;
}

MonomialElement compose(const MonomialElement& g, const MonomialElement& h) {
    std::size_t n = g.perm.size();
    if (h.perm.size() != n) throw Error(ErrorCode::InvalidInput, "composing incompatible elements");
    MonomialElement out;
    out.perm.resize(n);
    out.conj.resize(n);
    out.rot.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t mid = h.perm[j];
        out.perm[j] = g.perm[mid];
        out.conj[j] = g.conj[mid] != h.conj[j];
        out.rot[j] = mod1(g.rot[mid] + (g.conj[mid] ? -h.rot[j] : h.rot[j]));
    }
    out.v0_block = g.v0_block * h.v0_block;
    return out;
}

MonomialElement inverse_element(const RepSpec& spec, const MonomialElement& g) {
    check_element_shape(spec, g);
    std::size_t n = g.perm.size();
    MonomialElement out;
    out.perm.resize(n);
    out.conj.resize(n);
    out.rot.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.perm[g.perm[k]] = k;
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t k = out.perm[j];  // sigma^{-1}(j)
        out.conj[j] = g.conj[k];
        out.rot[j] = mod1(g.conj[k] ? g.rot[k] : -g.rot[k]);
    }
    out.v0_block = spec.v0_dim == 0 ? lin::RatMatrix(0, 0) : lin::inverse(g.v0_block);
    return out;
}

MonomialElement torus_element(const RepSpec& spec, const std::vector<Rat>& delta) {
    if (delta.size() != spec.lines())
        throw Error(ErrorCode::InvalidInput, "torus element of wrong length");
    MonomialElement g = identity_element(spec);
    for (std::size_t j = 0; j < delta.size(); ++j) g.rot[j] = mod1(delta[j]);
    return g;
}

MonomialElement translated(const RepSpec& spec, const MonomialElement& g,
                           const std::vector<Rat>& delta) {
    if (delta.size() != spec.lines())
        throw Error(ErrorCode::InvalidInput, "translate of wrong length");
    MonomialElement out = g;
    for (std::size_t j = 0; j < spec.lines(); ++j)
        out.rot[j] = mod1(out.rot[j] + (g.conj[j] ? -delta[j] : delta[j]));
    return out;
}

std::string element_key(const MonomialElement& g) {
    std::ostringstream out;
    for (std::size_t v : g.perm) out << v << ',';
    out << '|';
    for (bool c : g.conj) out << (c ? '1' : '0');
    out << '|';
    for (const Rat& r : g.rot) out << rat_str(r) << ',';
    out << '|';
    for (std::size_t i = 0; i < g.v0_block.rows(); ++i)
        for (std::size_t j = 0; j < g.v0_block.cols(); ++j)
            out << rat_str(g.v0_block.at(i, j)) << ',';
    return out.str();
}

lin::RatMatrix ad_matrix(const RepSpec& spec, const MonomialElement& g) {
    std::size_t n = spec.lines();
    lin::RatMatrix w(spec.m, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < spec.m; ++i) w.at(i, j) = Rat(spec.weights.items[j][i]);
    auto r = lin::rref(w);
    if (r.pivots.size() != spec.m)
        throw Error(ErrorCode::WeightsDontSpan, "weights do not span the torus algebra");

    lin::RatMatrix lhs(spec.m, spec.m), rhs(spec.m, spec.m);
    for (std::size_t t = 0; t < spec.m; ++t) {
        std::size_t j = r.pivots[t];
        int s = g.conj[j] ? -1 : 1;
        for (std::size_t i = 0; i < spec.m; ++i) {
            lhs.at(i, t) = Rat(spec.weights.items[j][i]);
            rhs.at(i, t) = Rat(s) * Rat(spec.weights.items[g.perm[j]][i]);
        }
    }
    lin::RatMatrix a = rhs * lin::inverse(lhs);
    for (std::size_t j = 0; j < n; ++j) {
        int s = g.conj[j] ? -1 : 1;
        for (std::size_t i = 0; i < spec.m; ++i) {
            Rat acc = 0;
            for (std::size_t k = 0; k < spec.m; ++k)
                acc += a.at(i, k) * Rat(spec.weights.items[j][k]);
            if (acc != Rat(s) * Rat(spec.weights.items[g.perm[j]][i]))
                throw Error(ErrorCode::InconsistentAd,
                            "no torus matrix is compatible with the generator");
        }
    }
    return a;
}

std::vector<AdInfo> validate(const RepSpec& spec) {
    for (std::size_t j = 0; j < spec.lines(); ++j)
        if (spec.weights.item_is_zero(j))
            throw Error(ErrorCode::InvalidInput, "zero weight attached to a complex line");
    if (spec.weights.m != spec.m)
        throw Error(ErrorCode::InvalidInput, "weight length does not match torus rank");
    if (spec.m > 0 && lin::rank(spec.weights.column_matrix()) != spec.m)
        throw Error(ErrorCode::WeightsDontSpan, "weights do not span the torus algebra");

    if (spec.v0_gram.rows() != spec.v0_dim || spec.v0_gram.cols() != spec.v0_dim)
        throw Error(ErrorCode::InvalidInput, "gram matrix has wrong shape");
    if (spec.v0_gram != spec.v0_gram.transpose())
        throw Error(ErrorCode::InvalidInput, "gram matrix is not symmetric");
    for (std::size_t k = 1; k <= spec.v0_dim; ++k) {
        lin::RatMatrix minor(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) minor.at(i, j) = spec.v0_gram.at(i, j);
        if (lin::det(minor) <= 0)
            throw Error(ErrorCode::InvalidInput, "gram matrix is not positive definite");
    }

    auto sign_multiset = [&](const std::vector<std::vector<Int>>& items) {
        std::vector<std::vector<Int>> canon;
        for (const auto& v : items) canon.push_back(canonical_sign(v));
        std::sort(canon.begin(), canon.end());
        return canon;
    };
    auto base_multiset = sign_multiset(spec.weights.items);

    std::vector<AdInfo> infos;
    for (const auto& g : spec.generators) {
        check_element_shape(spec, g);
        for (const Rat& t : g.rot)
            if (t < 0 || t >= 1)
                throw Error(ErrorCode::InvalidInput, "rotation numbers must lie in [0,1)");
        if (spec.v0_dim > 0 &&
            !(g.v0_block.transpose() * spec.v0_gram * g.v0_block == spec.v0_gram))
            throw Error(ErrorCode::NotOrthogonal, "v0 block is not orthogonal for the gram form");

        AdInfo info = omega_invariants(spec, g);
        if (spec.m > 0 && lin::rank(info.ad) != spec.m)
            throw Error(ErrorCode::InconsistentAd, "induced torus matrix is singular");
        std::vector<std::vector<Int>> mapped;
        for (std::size_t j = 0; j < spec.lines(); ++j) {
            std::vector<Rat> img = info.ad.apply(
                std::vector<Rat>(spec.weights.items[j].begin(), spec.weights.items[j].end()));
            std::vector<Int> v(spec.m);
            for (std::size_t i = 0; i < spec.m; ++i) {
                if (!is_integer(img[i]))
                    throw Error(ErrorCode::InconsistentAd,
                                "induced torus matrix does not preserve the weight lattice");
                v[i] = rat_num(img[i]);
            }
            mapped.push_back(std::move(v));
        }
        if (sign_multiset(mapped) != base_multiset)
            throw Error(ErrorCode::InconsistentAd,
                        "induced torus matrix does not permute the weights up to sign");
        infos.push_back(std::move(info));
    }
    return infos;
}

AdInfo omega_invariants(const RepSpec& spec, const MonomialElement& g) {
    check_element_shape(spec, g);
    AdInfo info;
    info.ad = spec.m == 0 ? lin::RatMatrix(0, 0) : ad_matrix(spec, g);
    info.rk_e_minus_ad = spec.m == 0 ? 0 : lin::rank(lin::RatMatrix::identity(spec.m) - info.ad);

    std::size_t fixed = v0_fixed_dim(spec, g.v0_block);
    for (const auto& cyc : perm_cycles(g.perm)) {
        CycleData data = cycle_data(spec, g, cyc);
        if (data.antilinear)
            fixed += 1;
        else if (data.phase == 0)
            fixed += 2;
    }
    info.dim_ker_e_minus_g = fixed;
    info.rk_e_minus_g = spec.real_dim() - fixed;
    info.omega = static_cast<long>(info.rk_e_minus_g) - static_cast<long>(info.rk_e_minus_ad);
    info.in_omega = info.omega == 0 || info.omega == 2;
    return info;
}

std::string coset_key(const RepSpec& spec, const lin::Lattice& ann, const MonomialElement& g) {
    (void)spec;
    std::ostringstream out;
    for (std::size_t v : g.perm) out << v << ',';
    out << '|';
    for (bool c : g.conj) out << (c ? '1' : '0');
    out << '|';
    for (std::size_t i = 0; i < g.v0_block.rows(); ++i)
        for (std::size_t j = 0; j < g.v0_block.cols(); ++j)
            out << rat_str(g.v0_block.at(i, j)) << ',';
    out << '|';
    for (const auto& row : conj_adjusted_rows(ann, g.conj)) {
        Rat dot = 0;
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0) dot += Rat(row[j]) * g.rot[j];
        out << rat_str(mod1(dot)) << ',';
    }
    return out.str();
}

ComponentGroup component_group(const RepSpec& spec) {
    validate(spec);
    ComponentGroup group;
    group.subtorus_ann = lin::integer_kernel(weight_line_matrix(spec));

    auto push = [&](MonomialElement g) {
        std::string key = coset_key(spec, group.subtorus_ann, g);
        if (group.index.count(key)) return;
        group.index.emplace(key, group.cosets.size());
        Coset c;
        c.ad = spec.m == 0 ? lin::RatMatrix(0, 0) : ad_matrix(spec, g);
        c.rep = std::move(g);
        c.key = std::move(key);
        group.cosets.push_back(std::move(c));
    };

    push(identity_element(spec));
    std::size_t head = 0;
    while (head < group.cosets.size()) {
        MonomialElement cur = group.cosets[head].rep;
        ++head;
        for (const auto& gen : spec.generators) {
            if (group.cosets.size() > spec.caps.group_order_cap)
                throw Error(ErrorCode::CapExceeded, "component group exceeds the order cap");
            push(compose(cur, gen));
        }
    }
    if (group.cosets.size() > spec.caps.group_order_cap)
        throw Error(ErrorCode::CapExceeded, "component group exceeds the order cap");
    return group;
}

bool element_in_group(const RepSpec& spec, const ComponentGroup& group, const MonomialElement& h) {
    return group.index.count(coset_key(spec, group.subtorus_ann, h)) > 0;
}

namespace {

struct LinearCycle {
    Rat phase;
    std::vector<Int> coeff;
};

struct CycleSplit {
    std::vector<LinearCycle> linear;
    std::size_t fixed_dim = 0;  // antilinear cycles + fixed part of V0
};

CycleSplit split_cycles(const RepSpec& spec, const MonomialElement& g) {
    CycleSplit out;
    out.fixed_dim = v0_fixed_dim(spec, g.v0_block);
    for (const auto& cyc : perm_cycles(g.perm)) {
        CycleData data = cycle_data(spec, g, cyc);
        if (data.antilinear)
            out.fixed_dim += 1;
        else
            out.linear.push_back({data.phase, data.coeff});
    }
    return out;
}

// Searches the solution family for a point where every listed affine form is
// nonzero mod 1. Returned points are verified exactly by the caller, so this
// only needs to succeed whenever a point exists.
std::optional<std::vector<Rat>> avoid_vanishing(const lin::TorusSolution& sol,
                                                const std::vector<LinearCycle>& forms) {
    std::size_t n = sol.n;
    auto value = [&](std::size_t i, const std::vector<Rat>& delta) {
        Rat acc = forms[i].phase;
        for (std::size_t j = 0; j < n; ++j)
            if (forms[i].coeff[j] != 0) acc += Rat(forms[i].coeff[j]) * delta[j];
        return mod1(acc);
    };

    Int combos = 1;
    for (const auto& [idx, order] : sol.torsion) combos *= order;
    if (combos > 512) throw Error(ErrorCode::CapExceeded, "torsion enumeration too large");

    std::size_t k = sol.torsion.size();
    std::vector<Int> counter(k, 0);
    while (true) {
        std::vector<Rat> e(n, Rat(0));
        for (std::size_t t = 0; t < k; ++t)
            e[sol.torsion[t].first] = Rat(counter[t], sol.torsion[t].second);
        std::vector<Rat> base = sol.at(e);
        for (std::size_t j = 0; j < n; ++j) base[j] = mod1(base[j] + sol.particular[j]);

        std::vector<std::vector<Int>> mfree(forms.size());
        bool fiber_ok = true;
        for (std::size_t i = 0; i < forms.size(); ++i) {
            mfree[i].assign(sol.free_idx.size(), 0);
            for (std::size_t t = 0; t < sol.free_idx.size(); ++t) {
                Int acc = 0;
                for (std::size_t j = 0; j < n; ++j)
                    acc += forms[i].coeff[j] * sol.v.at(j, sol.free_idx[t]);
                mfree[i][t] = acc;
            }
            bool mzero =
                std::all_of(mfree[i].begin(), mfree[i].end(), [](const Int& x) { return x == 0; });
            if (mzero && value(i, base) == 0) {
                fiber_ok = false;  // identically zero on this fiber
                break;
            }
        }
        if (fiber_ok) {
            if (sol.free_idx.empty()) {
                bool all_nonzero = true;
                for (std::size_t i = 0; i < forms.size(); ++i)
                    if (value(i, base) == 0) all_nonzero = false;
                if (all_nonzero) return base;
            } else {
                // direction w with m_i . w != 0 for every nonzero m_i
                std::vector<Int> w;
                for (Int nbase = 1; nbase <= 64 && w.empty(); ++nbase) {
                    std::vector<Int> cand(sol.free_idx.size());
                    Int pw = 1;
                    for (auto& x : cand) {
                        x = pw;
                        pw *= nbase;
                    }
                    bool good = true;
                    for (const auto& m : mfree) {
                        bool mzero =
                            std::all_of(m.begin(), m.end(), [](const Int& x) { return x == 0; });
                        if (mzero) continue;
                        Int dot = 0;
                        for (std::size_t t = 0; t < m.size(); ++t) dot += m[t] * cand[t];
                        if (dot == 0) good = false;
                    }
                    if (good) w = std::move(cand);
                }
                static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                             31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
                if (!w.empty()) {
                    for (int p : primes) {
                        std::vector<Rat> delta = base;
                        for (std::size_t t = 0; t < sol.free_idx.size(); ++t) {
                            Rat step = Rat(w[t], Int(p));
                            if (step == 0) continue;
                            for (std::size_t j = 0; j < n; ++j)
                                if (sol.v.at(j, sol.free_idx[t]) != 0)
                                    delta[j] =
                                        mod1(delta[j] + Rat(sol.v.at(j, sol.free_idx[t])) * step);
                        }
                        bool all_nonzero = true;
                        for (std::size_t i = 0; i < forms.size(); ++i)
                            if (value(i, delta) == 0) all_nonzero = false;
                        if (all_nonzero) return delta;
                    }
                }
            }
        }
        std::size_t t = 0;
        while (t < k) {
            counter[t] += 1;
            if (counter[t] < sol.torsion[t].second) break;
            counter[t] = 0;
            ++t;
        }
        if (t == k) break;
    }
    return std::nullopt;
}

}  // namespace

OmegaWitness coset_meets_omega(const RepSpec& spec, const ComponentGroup& group, const Coset& c) {
    AdInfo rep_info = omega_invariants(spec, c.rep);
    if (rep_info.in_omega) return {OmegaWitness::State::Yes, c.rep};

    CycleSplit split = split_cycles(spec, c.rep);
    if (split.linear.size() > kMaxLinearCycles) return {OmegaWitness::State::Capped, std::nullopt};

    long budget = static_cast<long>(spec.real_dim()) - static_cast<long>(split.fixed_dim) -
                  static_cast<long>(rep_info.rk_e_minus_ad);
    const auto& ann = group.subtorus_ann.basis;
    std::size_t nlines = spec.lines();

    for (long target : {2L, 0L}) {
        long twice_k = budget - target;
        if (twice_k < 0 || twice_k % 2 != 0) continue;
        std::size_t k = static_cast<std::size_t>(twice_k / 2);
        if (k > split.linear.size()) continue;

        // subsets S of linear cycles with |S| = k: exactly those cycles vanish
        std::vector<std::size_t> pick(k);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            std::vector<bool> in_s(split.linear.size(), false);
            for (std::size_t t : pick) in_s[t] = true;

            lin::IntMat sys(ann.size() + k, nlines);
            std::vector<Rat> rhs(ann.size() + k, Rat(0));
            for (std::size_t r = 0; r < ann.size(); ++r)
                for (std::size_t j = 0; j < nlines; ++j) sys.at(r, j) = ann[r][j];
            {
                std::size_t r = ann.size();
                for (std::size_t t = 0; t < split.linear.size(); ++t) {
                    if (!in_s[t]) continue;
                    for (std::size_t j = 0; j < nlines; ++j)
                        sys.at(r, j) = split.linear[t].coeff[j];
                    rhs[r] = mod1(-split.linear[t].phase);
                    ++r;
                }
            }
            auto sol = lin::solve_torus_congruences(sys, rhs);
            if (sol) {
                std::vector<std::vector<Int>> sys_rows;
                for (std::size_t r = 0; r < sys.rows; ++r) {
                    std::vector<Int> row(nlines);
                    for (std::size_t j = 0; j < nlines; ++j) row[j] = sys.at(r, j);
                    sys_rows.push_back(std::move(row));
                }
                auto sys_lattice = lin::hermite_row_basis(sys_rows);

                std::vector<LinearCycle> forms;
                bool impossible = false;
                for (std::size_t t = 0; t < split.linear.size(); ++t) {
                    if (in_s[t]) continue;
                    Rat at_particular = split.linear[t].phase;
                    for (std::size_t j = 0; j < nlines; ++j)
                        if (split.linear[t].coeff[j] != 0)
                            at_particular += Rat(split.linear[t].coeff[j]) * sol->particular[j];
                    bool char_vanishes = lin::lattice_member(split.linear[t].coeff, sys_lattice);
                    if (char_vanishes && is_integer(at_particular)) {
                        impossible = true;  // cycle vanishes on the whole solution set
                        break;
                    }
                    forms.push_back(split.linear[t]);
                }
                if (!impossible) {
                    auto delta = avoid_vanishing(*sol, forms);
                    if (delta) {
                        MonomialElement witness = translated(spec, c.rep, *delta);
                        AdInfo info = omega_invariants(spec, witness);
                        if (!info.in_omega)
                            throw Error(ErrorCode::InternalContradiction,
                                        "omega witness failed verification");
                        return {OmegaWitness::State::Yes, witness};
                    }
                }
            }

            if (k == 0) break;
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == split.linear.size() - (k - i) - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return {OmegaWitness::State::No, std::nullopt};
}

bool factors_over_partition(const RepSpec& spec, const ComponentGroup& group, const Coset& c,
                            const std::vector<PartitionBlock>& partition) {
    if (partition.size() <= 1) return true;

    std::size_t nlines = spec.lines();
    {
        std::vector<bool> covered(nlines, false);
        for (const auto& blk : partition)
            for (std::size_t j : blk.lines) {
                if (j >= nlines || covered[j])
                    throw Error(ErrorCode::InvalidInput, "blocks do not partition the lines");
                covered[j] = true;
            }
        for (bool b : covered)
            if (!b) throw Error(ErrorCode::InvalidInput, "blocks do not cover the lines");
    }

    for (const auto& blk : partition)
        for (std::size_t j : blk.lines)
            if (std::find(blk.lines.begin(), blk.lines.end(), c.rep.perm[j]) == blk.lines.end())
                return false;

    auto restricted_shape = [&](const PartitionBlock& blk) {
        MonomialElement y = identity_element(spec);
        for (std::size_t j : blk.lines) {
            y.perm[j] = c.rep.perm[j];
            y.conj[j] = c.rep.conj[j];
        }
        if (blk.include_v0) y.v0_block = c.rep.v0_block;
        return y;
    };

    std::vector<std::vector<std::size_t>> candidates;
    for (const auto& blk : partition) {
        MonomialElement shape = restricted_shape(blk);
        std::vector<std::size_t> cand;
        for (std::size_t i = 0; i < group.cosets.size(); ++i) {
            const auto& d = group.cosets[i];
            if (d.rep.perm == shape.perm && d.rep.conj == shape.conj &&
                d.rep.v0_block == shape.v0_block)
                cand.push_back(i);
        }
        if (cand.empty()) return false;
        candidates.push_back(std::move(cand));
    }

    std::size_t combos = 1;
    for (const auto& cand : candidates) {
        combos *= cand.size();
        if (combos > 4096)
            throw Error(ErrorCode::CapExceeded, "too many factorization candidates");
    }

    const auto& ann = group.subtorus_ann.basis;
    std::vector<std::size_t> choice(partition.size(), 0);
    while (true) {
        // joint congruences over the translate delta applied to the coset rep
        std::vector<std::vector<Int>> rows;
        std::vector<Rat> rhs;
        for (const auto& d : ann) {
            rows.emplace_back(d.begin(), d.end());
            rhs.push_back(Rat(0));
        }
        for (std::size_t b = 0; b < partition.size(); ++b) {
            const auto& blk = partition[b];
            const Coset& target = group.cosets[candidates[b][choice[b]]];
            for (const auto& row : conj_adjusted_rows(group.subtorus_ann, target.rep.conj)) {
                std::vector<Int> coeff(nlines, 0);
                Rat constant = 0;
                for (std::size_t j : blk.lines) {
                    coeff[j] = c.rep.conj[j] ? -row[j] : row[j];
                    constant += Rat(row[j]) * c.rep.rot[j];
                }
                for (std::size_t j = 0; j < nlines; ++j)
                    constant -= Rat(row[j]) * target.rep.rot[j];
                rows.push_back(std::move(coeff));
                rhs.push_back(mod1(-constant));
            }
        }
        lin::IntMat sys(rows.size(), nlines);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t j = 0; j < nlines; ++j) sys.at(r, j) = rows[r][j];
        if (lin::solve_torus_congruences(sys, rhs)) return true;

        std::size_t b = 0;
        while (b < partition.size()) {
            choice[b] += 1;
            if (choice[b] < candidates[b].size()) break;
            choice[b] = 0;
            ++b;
        }
        if (b == partition.size()) break;
    }
    return false;
}

bool cosets_generate(const RepSpec& spec, const ComponentGroup& group,
                     const std::vector<std::size_t>& subset) {
    std::vector<bool> reached(group.cosets.size(), false);
    std::vector<std::size_t> queue;
    auto add = [&](std::size_t i) {
        if (!reached[i]) {
            reached[i] = true;
            queue.push_back(i);
        }
    };
    add(0);
    for (std::size_t i : subset) add(i);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (std::size_t i : subset) {
            MonomialElement prod = compose(group.cosets[queue[head]].rep, group.cosets[i].rep);
            auto it = group.index.find(coset_key(spec, group.subtorus_ann, prod));
            if (it == group.index.end())
                throw Error(ErrorCode::InternalContradiction, "product left the component group");
            add(it->second);
        }
    }
    return std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
}

}  // namespace orbi::rep
