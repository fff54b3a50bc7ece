#include "orbispace/reducer.hpp"

#include <algorithm>
#include <map>

namespace orbi::red {

namespace {

using rep::MonomialElement;
using rep::RepSpec;

std::vector<std::vector<Int>> row_basis_of_items(const ws::WeightMultiset& p,
                                                 const std::vector<bool>& removed) {
    std::vector<std::vector<Int>> rows;
    for (std::size_t i = 0; i < p.items.size(); ++i)
        if (!removed[i]) rows.push_back(p.items[i]);
    return lin::hermite_row_basis(std::move(rows));
}

// Integer coordinates of v in the given independent row basis; the callers
// guarantee membership, checked here exactly.
std::vector<Int> coords_in_basis(const std::vector<Int>& v,
                                 const std::vector<std::vector<Int>>& basis) {
    if (basis.empty()) {
        for (const Int& x : v)
            if (x != 0)
                throw Error(ErrorCode::InternalContradiction,
                            "vector outside the reduced weight lattice");
        return {};
    }
    std::size_t k = basis.size(), n = basis[0].size();
    lin::RatMatrix aug(n, k + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) aug.at(i, j) = Rat(basis[j][i]);
        aug.at(i, k) = Rat(v[i]);
    }
    auto r = lin::rref(aug);
    for (std::size_t p : r.pivots)
        if (p == k)
            throw Error(ErrorCode::InternalContradiction,
                        "vector outside the reduced weight lattice");
    std::vector<Int> coords(k);
    for (std::size_t i = 0; i < r.pivots.size(); ++i) {
        const Rat& c = r.reduced.at(i, k);
        if (!is_integer(c))
            throw Error(ErrorCode::InternalContradiction,
                        "vector outside the reduced weight lattice");
        coords[r.pivots[i]] = rat_num(c);
    }
    return coords;
}

lin::RatMatrix hyperplane_gram(std::size_t n) {
    lin::RatMatrix g(n - 1, n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j)
            g.at(i, j) = (i == j ? Rat(1) : Rat(0)) - Rat(1, Int(n));
    return g;
}

// Quarter-turn rotations are the only ones with a rational 2x2 matrix.
bool quarter_turn_block(const Rat& theta, bool reflect, lin::RatMatrix& out) {
    Rat t = mod1(theta);
    int c, s;
    if (t == 0) {
        c = 1;
        s = 0;
    } else if (t == Rat(1, 4)) {
        c = 0;
        s = 1;
    } else if (t == Rat(1, 2)) {
        c = -1;
        s = 0;
    } else if (t == Rat(3, 4)) {
        c = 0;
        s = -1;
    } else {
        return false;
    }
    out = lin::RatMatrix(2, 2);
    int k = reflect ? -1 : 1;
    out.at(0, 0) = Rat(c);
    out.at(0, 1) = Rat(-s * k);
    out.at(1, 0) = Rat(s);
    out.at(1, 1) = Rat(c * k);
    return true;
}

}  // namespace

std::pair<RepSpec, ReductionStep> reduce_step(const RepSpec& spec) {
    rep::validate(spec);
    const ws::WeightMultiset& p = spec.weights;
    if (!ws::is_q_stable(p, 1)) throw Error(ErrorCode::Not1Stable, "weights are not 1-stable");

    auto classes = ws::equivalence_classes(p);
    for (auto& cls : classes) std::sort(cls.begin(), cls.end());
    std::sort(classes.begin(), classes.end());

    std::vector<std::size_t> seed_class;
    for (const auto& cls : classes)
        if (cls.size() > 1) {
            seed_class = cls;
            break;
        }
    if (seed_class.empty())
        throw Error(ErrorCode::NoReducibleClass, "all equivalence classes are singletons");

    auto find_class = [&](const std::vector<std::size_t>& sorted_set) -> std::size_t {
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (classes[i] == sorted_set) return i;
        throw Error(ErrorCode::InternalContradiction, "line permutation broke a class");
    };

    // close the seed class into an orbit under the generators' permutations
    std::vector<std::vector<std::size_t>> orbit{seed_class};
    for (std::size_t head = 0; head < orbit.size(); ++head) {
        for (const auto& g : spec.generators) {
            std::vector<std::size_t> image;
            for (std::size_t j : orbit[head]) image.push_back(g.perm[j]);
            std::sort(image.begin(), image.end());
            (void)find_class(image);
            if (std::find(orbit.begin(), orbit.end(), image) == orbit.end())
                orbit.push_back(image);
        }
    }
    std::sort(orbit.begin(), orbit.end());

    ReductionStep step;
    step.class_orbit = orbit;
    step.m_before = spec.m;
    step.v0_before = spec.v0_dim;

    for (const auto& g : spec.generators)
        for (const auto& cls : orbit) {
            bool first = g.conj[cls.front()];
            for (std::size_t j : cls)
                if (g.conj[j] != first)
                    throw Error(ErrorCode::MixedConjugationOnClass,
                                "generator conjugates part of an equivalence class");
        }

    for (const auto& cls : orbit) step.relations.push_back(ws::class_relation(p, cls));

    std::vector<bool> removed(p.items.size(), false);
    for (const auto& cls : orbit)
        for (std::size_t j : cls) removed[j] = true;

    // reduced character lattice: intersection of the integer spans of the
    // complements, one per orbit member
    std::vector<std::vector<std::vector<Int>>> complements;
    std::vector<std::vector<Int>> lattice;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        std::vector<bool> cut(p.items.size(), false);
        for (std::size_t j : orbit[i]) cut[j] = true;
        auto li = row_basis_of_items(p, cut);
        lattice = i == 0 ? li : lin::lattice_intersection(lattice, li, spec.m);
        complements.push_back(std::move(li));
    }

    for (std::size_t i = 0; i < orbit.size(); ++i) {
        const auto& comb = step.relations[i].combination;
        bool zero = std::all_of(comb.begin(), comb.end(), [](const Int& x) { return x == 0; });
        Int t = 1;
        if (!zero) {
            // rational coordinates in the complement basis; the lcm of their
            // denominators is the smallest integer multiple inside the lattice
            std::size_t k = complements[i].size(), n = spec.m;
            lin::RatMatrix aug(n, k + 1);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t j = 0; j < k; ++j) aug.at(r, j) = Rat(complements[i][j][r]);
                aug.at(r, k) = Rat(comb[r]);
            }
            auto rr = lin::rref(aug);
            for (std::size_t piv : rr.pivots)
                if (piv == k)
                    throw Error(ErrorCode::InternalContradiction,
                                "relation leaves the complement span");
            for (std::size_t r = 0; r < rr.pivots.size(); ++r)
                t = int_lcm(t, rat_den(rr.reduced.at(r, k)));
        }
        step.multipliers.push_back(t);
    }
    std::size_t m_after = lattice.size();
    std::size_t shrink = 0;
    for (const auto& cls : orbit) shrink += cls.size() - 1;
    if (m_after != spec.m - shrink)
        throw Error(ErrorCode::InternalContradiction, "reduced torus rank mismatch");

    bool folded = std::all_of(
        step.relations[0].combination.begin(), step.relations[0].combination.end(),
        [](const Int& x) { return x == 0; });
    for (const auto& rel : step.relations) {
        bool z = std::all_of(rel.combination.begin(), rel.combination.end(),
                             [](const Int& x) { return x == 0; });
        if (z != folded)
            throw Error(ErrorCode::InternalContradiction, "orbit mixes zero and nonzero combinations");
    }
    step.folded = folded;

    std::vector<std::size_t> survivors;
    for (std::size_t j = 0; j < p.items.size(); ++j)
        if (!removed[j]) survivors.push_back(j);
    std::vector<std::size_t> line_of_survivor(p.items.size(), SIZE_MAX);
    for (std::size_t t = 0; t < survivors.size(); ++t) line_of_survivor[survivors[t]] = t;

    std::vector<std::vector<Int>> new_items;
    for (std::size_t j : survivors) new_items.push_back(coords_in_basis(p.items[j], lattice));
    if (!folded)
        for (std::size_t i = 0; i < orbit.size(); ++i) {
            std::vector<Int> scaled = step.relations[i].combination;
            for (auto& x : scaled) x *= step.multipliers[i];
            new_items.push_back(coords_in_basis(scaled, lattice));
            step.new_weights.push_back(new_items.back());
        }

    RepSpec out;
    out.m = m_after;
    out.weights = ws::WeightMultiset::of(m_after, new_items);
    out.caps = spec.caps;

    // V0 layout: old block, then one hyperplane block per orbit class, then
    // one folded complex block per class when the combination vanished
    std::size_t class_size = orbit[0].size();
    for (const auto& cls : orbit)
        if (cls.size() != class_size)
            throw Error(ErrorCode::InternalContradiction, "orbit classes of unequal size");
    std::size_t hyp_dim = class_size - 1;
    out.v0_dim = spec.v0_dim + orbit.size() * hyp_dim + (folded ? 2 * orbit.size() : 0);
    out.v0_gram = lin::RatMatrix::identity(out.v0_dim);
    for (std::size_t i = 0; i < spec.v0_dim; ++i)
        for (std::size_t j = 0; j < spec.v0_dim; ++j) out.v0_gram.at(i, j) = spec.v0_gram.at(i, j);
    auto hyp_offset = [&](std::size_t i) { return spec.v0_dim + i * hyp_dim; };
    auto fold_offset = [&](std::size_t i) {
        return spec.v0_dim + orbit.size() * hyp_dim + 2 * i;
    };
    if (hyp_dim > 0) {
        auto hg = hyperplane_gram(class_size);
        for (std::size_t i = 0; i < orbit.size(); ++i)
            for (std::size_t a = 0; a < hyp_dim; ++a)
                for (std::size_t b = 0; b < hyp_dim; ++b)
                    out.v0_gram.at(hyp_offset(i) + a, hyp_offset(i) + b) = hg.at(a, b);
    }

    step.m_after = m_after;
    step.v0_after = out.v0_dim;

    // generator propagation
    std::vector<MonomialElement> new_gens;
    std::vector<std::string> new_names;
    bool propagated = true;
    std::string warning;
    for (std::size_t gi = 0; gi < spec.generators.size() && propagated; ++gi) {
        const MonomialElement& g = spec.generators[gi];
        MonomialElement h;
        std::size_t new_line_count = survivors.size() + (folded ? 0 : orbit.size());
        h.perm.resize(new_line_count);
        h.conj.assign(new_line_count, false);
        h.rot.assign(new_line_count, Rat(0));

        for (std::size_t t = 0; t < survivors.size(); ++t) {
            std::size_t j = survivors[t];
            std::size_t target = line_of_survivor[g.perm[j]];
            if (target == SIZE_MAX)
                throw Error(ErrorCode::InternalContradiction, "survivor mapped into the orbit");
            h.perm[t] = target;
            h.conj[t] = g.conj[j];
            h.rot[t] = g.rot[j];
        }

        h.v0_block = lin::RatMatrix(out.v0_dim, out.v0_dim);
        for (std::size_t i = 0; i < spec.v0_dim; ++i)
            for (std::size_t j = 0; j < spec.v0_dim; ++j)
                h.v0_block.at(i, j) = g.v0_block.at(i, j);

        for (std::size_t i = 0; i < orbit.size(); ++i) {
            // class i maps onto class pi
            std::vector<std::size_t> image;
            for (std::size_t j : orbit[i]) image.push_back(g.perm[j]);
            std::sort(image.begin(), image.end());
            std::size_t pi = std::find(orbit.begin(), orbit.end(), image) - orbit.begin();
            const auto& rel_i = step.relations[i];
            const auto& rel_pi = step.relations[pi];
            if (step.multipliers[i] != step.multipliers[pi])
                throw Error(ErrorCode::InternalContradiction,
                            "subgroup index differs inside one orbit");
            bool cflag = g.conj[orbit[i].front()];

            // sign carrying the relation of class i onto the relation of pi
            int tau = 0;
            Rat theta;
            for (std::size_t t = 0; t < orbit[i].size(); ++t) {
                std::size_t lam = orbit[i][t];
                std::size_t mu = g.perm[lam];
                std::size_t upos =
                    std::lower_bound(orbit[pi].begin(), orbit[pi].end(), mu) - orbit[pi].begin();
                if (rel_pi.coefficients[upos] != rel_i.coefficients[t])
                    throw Error(ErrorCode::InternalContradiction,
                                "relation exponents differ inside one orbit");
                int t_here = rel_pi.sign_flips[upos] * rel_i.sign_flips[t] * (cflag ? -1 : 1);
                if (tau == 0)
                    tau = t_here;
                else if (tau != t_here)
                    throw Error(ErrorCode::InternalContradiction,
                                "relation signs differ inside one orbit");
                theta += Rat(rel_i.coefficients[t]) * Rat(rel_pi.sign_flips[upos]) * g.rot[lam];
            }
            theta = mod1(theta * Rat(step.multipliers[i]));

            if (!folded) {
                std::size_t from = survivors.size() + i;
                h.perm[from] = survivors.size() + pi;
                h.conj[from] = tau < 0;
                h.rot[from] = theta;
            } else {
                lin::RatMatrix block;
                if (!quarter_turn_block(theta, tau < 0, block)) {
                    propagated = false;
                    warning = "generator rotates a folded line by a non-quarter turn";
                    break;
                }
                for (std::size_t a = 0; a < 2; ++a)
                    for (std::size_t b = 0; b < 2; ++b)
                        h.v0_block.at(fold_offset(pi) + a, fold_offset(i) + b) = block.at(a, b);
            }

            // hyperplane block: permutation of the class coordinates restricted
            // to the sum-zero subspace, in the pi(e_t) basis
            if (hyp_dim > 0) {
                for (std::size_t t = 0; t < hyp_dim; ++t) {
                    std::size_t mu = g.perm[orbit[i][t]];
                    std::size_t upos = std::lower_bound(orbit[pi].begin(), orbit[pi].end(), mu) -
                                       orbit[pi].begin();
                    if (upos < hyp_dim)
                        h.v0_block.at(hyp_offset(pi) + upos, hyp_offset(i) + t) = Rat(1);
                    else
                        for (std::size_t s = 0; s < hyp_dim; ++s)
                            h.v0_block.at(hyp_offset(pi) + s, hyp_offset(i) + t) = Rat(-1);
                }
            }
        }
        if (propagated) {
            new_gens.push_back(std::move(h));
            new_names.push_back(gi < spec.generator_names.size() ? spec.generator_names[gi]
                                                                 : std::string{});
        }
    }

    if (propagated) {
        out.generators = std::move(new_gens);
        out.generator_names = std::move(new_names);
    } else {
        step.warning = warning;
    }
    step.group_propagated = propagated;

    rep::validate(out);

    // dimension ledger and stability preservation
    if (out.real_dim() + shrink != spec.real_dim() || out.m + shrink != spec.m)
        throw Error(ErrorCode::InternalContradiction, "dimension ledger violated");
    if (!ws::is_q_stable(out.weights, 1))
        throw Error(ErrorCode::InternalContradiction, "reduction broke 1-stability");
    if (!folded) {
        // new weights lie in the span of the surviving restricted weights
        lin::RatMatrix surv(out.m, survivors.size());
        for (std::size_t t = 0; t < survivors.size(); ++t)
            for (std::size_t i = 0; i < out.m; ++i)
                surv.at(i, t) = Rat(out.weights.items[t][i]);
        std::size_t base_rank = lin::rank(surv);
        lin::RatMatrix ext(out.m, survivors.size() + step.new_weights.size());
        for (std::size_t t = 0; t < survivors.size(); ++t)
            for (std::size_t i = 0; i < out.m; ++i) ext.at(i, t) = surv.at(i, t);
        for (std::size_t w = 0; w < step.new_weights.size(); ++w)
            for (std::size_t i = 0; i < out.m; ++i)
                ext.at(i, survivors.size() + w) = Rat(step.new_weights[w][i]);
        if (lin::rank(ext) != base_rank)
            throw Error(ErrorCode::InternalContradiction,
                        "new weight leaves the surviving span");
    }

    return {std::move(out), std::move(step)};
}

ReductionTrace reduce_to_2stable(const RepSpec& spec) {
    ReductionTrace trace;
    trace.final_spec = spec;
    if (!ws::is_q_stable(trace.final_spec.weights, 1))
        throw Error(ErrorCode::Not1Stable, "weights are not 1-stable");
    while (!ws::is_q_stable(trace.final_spec.weights, 2)) {
        auto [next, step] = reduce_step(trace.final_spec);
        trace.steps.push_back(std::move(step));
        trace.final_spec = std::move(next);
    }
    return trace;
}

}  // namespace orbi::red
