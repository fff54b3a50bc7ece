#include "orbispace/verdict.hpp"

#include "orbispace/rng.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace orbi::ver {

const char* to_string(Topological t) {
    switch (t) {
        case Topological::Yes: return "yes";
        case Topological::No: return "no";
        case Topological::Unknown: return "unknown";
    }
    return "unknown";
}

const char* to_string(SmoothAllD s) {
    switch (s) {
        case SmoothAllD::No: return "no";
        case SmoothAllD::Open: return "open";
        case SmoothAllD::Unknown: return "unknown";
    }
    return "unknown";
}

const char* tag_name(TheoremTag tag) {
    switch (tag) {
        case TheoremTag::Prop1st: return "Prop1st";
        case TheoremTag::Cor2dim: return "Cor2dim";
        case TheoremTag::Cor1dim: return "Cor1dim";
        case TheoremTag::Mich: return "Mich";
        case TheoremTag::Submain: return "Submain";
        case TheoremTag::MainNecessity: return "MainNecessity";
        case TheoremTag::MainSufficiency: return "MainSufficiency";
        case TheoremTag::Mainp: return "Mainp";
        case TheoremTag::AdGE: return "AdGE";
        case TheoremTag::Abel: return "Abel";
        case TheoremTag::Main1: return "Main1";
        case TheoremTag::GrHi: return "GrHi";
        case TheoremTag::HG3: return "HG3";
        case TheoremTag::GiHr: return "GiHr";
        case TheoremTag::TorExample: return "TorExample";
        case TheoremTag::ProductRule: return "ProductRule";
        case TheoremTag::Reduction: return "Reduction";
    }
    return "Unknown";
}

namespace {

using rep::ComponentGroup;
using rep::MonomialElement;
using rep::RepSpec;

std::string index_list(const std::vector<std::size_t>& idx) {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < idx.size(); ++i) out << (i ? "," : "") << idx[i];
    out << ']';
    return out.str();
}

void sort_certificate(std::vector<CertStep>& cert) {
    std::stable_sort(cert.begin(), cert.end(), [](const CertStep& a, const CertStep& b) {
        if (a.tag != b.tag) return static_cast<int>(a.tag) < static_cast<int>(b.tag);
        if (a.detail != b.detail) return a.detail < b.detail;
        return a.witness < b.witness;
    });
}

// ---- factor extraction ----

// Conjugate the coordinates in `flip`: the element C g C with C the
// conjugation on those lines.
MonomialElement conjugate_lines(const MonomialElement& g, const std::vector<bool>& flip) {
    MonomialElement out = g;
    for (std::size_t j = 0; j < g.perm.size(); ++j) {
        bool fin = flip[j], fout = flip[g.perm[j]];
        out.conj[j] = g.conj[j] != (fin != fout);
        out.rot[j] = fout ? mod1(-g.rot[j]) : g.rot[j];
    }
    return out;
}

struct FactorElements {
    std::vector<MonomialElement> elements;  // restricted to the factor lines
    bool capped = false;
};

// Restricted elements of the coset acting trivially outside `lines`
// (identity V0 block, other lines pointwise fixed).
FactorElements restricted_elements(const RepSpec& spec, const ComponentGroup& group,
                                   const rep::Coset& c, const std::vector<std::size_t>& lines) {
    FactorElements out;
    std::size_t nlines = spec.lines();
    std::vector<bool> inside(nlines, false);
    for (std::size_t j : lines) inside[j] = true;

    if (spec.v0_dim > 0 && !(c.rep.v0_block == lin::RatMatrix::identity(spec.v0_dim))) return out;
    for (std::size_t j = 0; j < nlines; ++j) {
        if (inside[j]) {
            if (!inside[c.rep.perm[j]]) return out;
        } else if (c.rep.perm[j] != j || c.rep.conj[j]) {
            return out;
        }
    }

    std::vector<std::vector<Int>> rows;
    std::vector<Rat> rhs;
    for (const auto& d : group.subtorus_ann.basis) {
        rows.emplace_back(d.begin(), d.end());
        rhs.push_back(Rat(0));
    }
    for (std::size_t j = 0; j < nlines; ++j) {
        if (inside[j]) continue;
        std::vector<Int> row(nlines, 0);
        row[j] = 1;
        rows.push_back(std::move(row));
        rhs.push_back(mod1(-c.rep.rot[j]));
    }
    lin::IntMat sys(rows.size(), nlines);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t j = 0; j < nlines; ++j) sys.at(r, j) = rows[r][j];
    auto sol = lin::solve_torus_congruences(sys, rhs);
    if (!sol) return out;

    Int combos = 1;
    for (const auto& [idx, order] : sol->torsion) combos *= order;
    if (combos > 512) {
        out.capped = true;
        return out;
    }

    lin::TorusSolution finite = *sol;
    finite.free_idx.clear();  // the free directions stay inside one coset
    std::set<std::string> seen;
    for (const auto& delta : lin::enumerate_finite_solutions(finite, 512)) {
        MonomialElement full = rep::translated(spec, c.rep, delta);
        for (std::size_t j = 0; j < nlines; ++j)
            if (!inside[j] && full.rot[j] != 0)
                throw Error(ErrorCode::InternalContradiction, "restriction left a rotation behind");
        MonomialElement restricted;
        restricted.perm.resize(lines.size());
        restricted.conj.resize(lines.size());
        restricted.rot.resize(lines.size());
        std::map<std::size_t, std::size_t> pos;
        for (std::size_t t = 0; t < lines.size(); ++t) pos[lines[t]] = t;
        for (std::size_t t = 0; t < lines.size(); ++t) {
            restricted.perm[t] = pos.at(full.perm[lines[t]]);
            restricted.conj[t] = full.conj[lines[t]];
            restricted.rot[t] = full.rot[lines[t]];
        }
        restricted.v0_block = lin::RatMatrix(0, 0);
        if (seen.insert(rep::element_key(restricted)).second)
            out.elements.push_back(std::move(restricted));
    }
    return out;
}

}  // namespace

RepSpec factor_spec(const RepSpec& spec, const ComponentGroup& group,
                    const std::vector<std::size_t>& lines) {
    // torus of the factor: saturated integer points of the common kernel of
    // the complement weights
    std::vector<std::size_t> complement;
    for (std::size_t j = 0; j < spec.lines(); ++j)
        if (std::find(lines.begin(), lines.end(), j) == lines.end()) complement.push_back(j);
    lin::IntMat columns(spec.m, complement.size());
    for (std::size_t t = 0; t < complement.size(); ++t)
        for (std::size_t i = 0; i < spec.m; ++i)
            columns.at(i, t) = spec.weights.items[complement[t]][i];
    lin::Lattice sub = lin::integer_kernel(columns);
    std::size_t mw = sub.basis.size();

    std::vector<std::vector<Int>> weights;
    for (std::size_t j : lines) {
        std::vector<Int> w(mw, 0);
        for (std::size_t r = 0; r < mw; ++r)
            for (std::size_t i = 0; i < spec.m; ++i)
                w[r] += sub.basis[r][i] * spec.weights.items[j][i];
        weights.push_back(std::move(w));
    }

    RepSpec factor;
    factor.m = mw;
    factor.caps = spec.caps;
    factor.v0_dim = 0;
    factor.v0_gram = lin::RatMatrix(0, 0);

    // flip lines whose factor weight starts negative, so equal-up-to-sign
    // inputs produce the same factor data
    std::vector<bool> flip(lines.size(), false);
    for (std::size_t t = 0; t < lines.size(); ++t)
        for (const Int& x : weights[t]) {
            if (x == 0) continue;
            if (x < 0) {
                flip[t] = true;
                for (auto& y : weights[t]) y = -y;
            }
            break;
        }
    factor.weights = ws::WeightMultiset::of(mw, weights);

    bool capped = false;
    std::set<std::string> seen;
    for (const auto& c : group.cosets) {
        FactorElements fe = restricted_elements(spec, group, c, lines);
        capped = capped || fe.capped;
        for (auto& e : fe.elements) {
            MonomialElement adjusted = conjugate_lines(e, flip);
            if (seen.insert(rep::element_key(adjusted)).second)
                factor.generators.push_back(std::move(adjusted));
        }
    }
    if (capped)
        throw Error(ErrorCode::CapExceeded, "factor element enumeration exceeded the cap");
    factor.generator_names.assign(factor.generators.size(), std::string{});
    return factor;
}

std::vector<lin::RatMatrix> v0_factor_matrices(const RepSpec& spec, const ComponentGroup& group) {
    std::vector<lin::RatMatrix> mats;
    std::set<std::string> seen;
    for (const auto& c : group.cosets) {
        bool line_part_ok = true;
        for (std::size_t j = 0; j < spec.lines(); ++j)
            if (c.rep.perm[j] != j || c.rep.conj[j]) line_part_ok = false;
        if (!line_part_ok) continue;
        std::vector<Rat> neg(spec.lines());
        for (std::size_t j = 0; j < spec.lines(); ++j) neg[j] = mod1(-c.rep.rot[j]);
        if (!lin::in_subtorus(neg, group.subtorus_ann)) continue;
        std::ostringstream key;
        for (std::size_t i = 0; i < spec.v0_dim; ++i)
            for (std::size_t j = 0; j < spec.v0_dim; ++j)
                key << rat_str(c.rep.v0_block.at(i, j)) << ',';
        if (seen.insert(key.str()).second) mats.push_back(c.rep.v0_block);
    }
    return mats;
}

Verdict check_finite_case(const std::vector<lin::RatMatrix>& mats, const lin::RatMatrix& gram,
                          std::size_t cap) {
    (void)gram;
    Verdict v;
    std::size_t dim = mats.empty() ? 0 : mats[0].rows();
    if (dim == 0) {
        v.topological = Topological::Yes;
        v.smooth = SmoothAllD::Open;
        v.certificate.push_back({TheoremTag::Mich, "trivial fixed block", ""});
        return v;
    }

    // close the set under products (the input is a group already; this also
    // validates that)
    std::map<std::string, std::size_t> index;
    std::vector<lin::RatMatrix> all;
    auto key_of = [&](const lin::RatMatrix& m) {
        std::ostringstream key;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) key << rat_str(m.at(i, j)) << ',';
        return key.str();
    };
    auto push = [&](const lin::RatMatrix& m) {
        std::string k = key_of(m);
        if (index.count(k)) return;
        index.emplace(k, all.size());
        all.push_back(m);
    };
    push(lin::RatMatrix::identity(dim));
    for (const auto& m : mats) push(m);
    for (std::size_t head = 0; head < all.size(); ++head) {
        if (all.size() > cap) throw Error(ErrorCode::CapExceeded, "finite closure exceeds the cap");
        for (const auto& m : mats) push(all[head] * m);
    }

    auto e = lin::RatMatrix::identity(dim);
    std::vector<std::size_t> pseudo;
    for (std::size_t i = 0; i < all.size(); ++i) {
        std::size_t r = lin::rank(e - all[i]);
        if (r == 1) {
            Verdict no;
            no.topological = Topological::No;
            no.smooth = SmoothAllD::No;
            no.certificate.push_back(
                {TheoremTag::Cor1dim, "group element reflecting a fixed-block hyperplane",
                 key_of(all[i])});
            return no;
        }
        if (r == 2) pseudo.push_back(i);
    }

    // closure of the pseudoreflections
    std::vector<bool> reached(all.size(), false);
    std::vector<std::size_t> queue{index.at(key_of(e))};
    reached[queue[0]] = true;
    for (std::size_t p : pseudo)
        if (!reached[p]) {
            reached[p] = true;
            queue.push_back(p);
        }
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (std::size_t p : pseudo) {
            std::size_t t = index.at(key_of(all[queue[head]] * all[p]));
            if (!reached[t]) {
                reached[t] = true;
                queue.push_back(t);
            }
        }
    bool generated = std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
    if (generated) {
        v.topological = Topological::Yes;
        v.smooth = SmoothAllD::Open;
        v.certificate.push_back(
            {TheoremTag::Mich,
             "finite block group of order " + std::to_string(all.size()) +
                 " is generated by pseudoreflections",
             ""});
    } else {
        v.topological = Topological::Unknown;
        v.smooth = SmoothAllD::No;
        v.certificate.push_back(
            {TheoremTag::Mich,
             "finite block group of order " + std::to_string(all.size()) +
                 " is not generated by pseudoreflections",
             ""});
    }
    return v;
}

MainConditions check_main_conditions(const RepSpec& factor, const ComponentGroup& group) {
    MainConditions out;
    std::size_t n = factor.lines();
    out.count_ok = n == factor.m + 2 && ws::is_q_stable(factor.weights, 2);

    bool all_trivial = true;
    for (const auto& c : group.cosets)
        for (std::size_t j = 0; j < n; ++j)
            if (c.rep.perm[j] != j) all_trivial = false;

    if (factor.m > 2) {
        out.structure_ok = all_trivial;
    } else {
        out.structure_ok = false;
        for (std::size_t a = 0; a < n && !out.structure_ok; ++a)
            for (std::size_t b = a + 1; b < n && !out.structure_ok; ++b) {
                bool invariant = true;
                for (const auto& c : group.cosets) {
                    auto maps_into = [&](std::size_t j) {
                        return c.rep.perm[j] == a || c.rep.perm[j] == b;
                    };
                    if (!maps_into(a) || !maps_into(b)) invariant = false;
                }
                if (invariant) out.structure_ok = true;
            }
    }

    out.minus_e_ok = false;
    auto minus_e = lin::RatMatrix::identity(factor.m);
    for (std::size_t i = 0; i < factor.m; ++i) minus_e.at(i, i) = Rat(-1);
    for (const auto& c : group.cosets) {
        bool lines_fixed = true;
        for (std::size_t j = 0; j < n; ++j)
            if (c.rep.perm[j] != j) lines_fixed = false;
        if (lines_fixed && c.ad == minus_e) out.minus_e_ok = true;
    }

    if (all_trivial) {
        out.iv.status = CondIv::Status::Proved;
        out.iv.witness = "";
    } else {
        auto witness =
            sample_condition_iv(factor, group, factor.caps.seed, factor.caps.iv_trials);
        if (witness) {
            out.iv.status = CondIv::Status::Falsified;
            out.iv.witness = *witness;
        } else {
            out.iv.status = CondIv::Status::Inconclusive;
        }
    }
    return out;
}

namespace {

// ---- exact stabilizer machinery for the sampler ----

struct StabilizerResult {
    bool finite = true;
    std::vector<MonomialElement> elements;
};

StabilizerResult exact_stabilizer(const RepSpec& spec, const ComponentGroup& group,
                                  const std::vector<Int>& radii, const std::vector<Rat>& phases) {
    StabilizerResult out;
    std::size_t n = spec.lines();
    for (const auto& c : group.cosets) {
        bool radii_match = true;
        for (std::size_t j = 0; j < n; ++j)
            if (radii[c.rep.perm[j]] != radii[j]) radii_match = false;
        if (!radii_match || !(c.rep.v0_block == lin::RatMatrix::identity(spec.v0_dim))) continue;

        std::vector<std::vector<Int>> rows;
        std::vector<Rat> rhs;
        for (const auto& d : group.subtorus_ann.basis) {
            rows.emplace_back(d.begin(), d.end());
            rhs.push_back(Rat(0));
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<Int> row(n, 0);
            row[j] = c.rep.conj[j] ? -1 : 1;
            Rat target = phases[c.rep.perm[j]] - (c.rep.conj[j] ? -phases[j] : phases[j]) -
                         c.rep.rot[j];
            rows.push_back(std::move(row));
            rhs.push_back(mod1(target));
        }
        lin::IntMat sys(rows.size(), n);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t j = 0; j < n; ++j) sys.at(r, j) = rows[r][j];
        auto sol = lin::solve_torus_congruences(sys, rhs);
        if (!sol) continue;
        if (!sol->free_idx.empty()) {
            out.finite = false;
            return out;
        }
        for (const auto& delta : lin::enumerate_finite_solutions(*sol, 512))
            out.elements.push_back(rep::translated(spec, c.rep, delta));
    }
    return out;
}

}  // namespace

std::optional<std::string> sample_condition_iv(const RepSpec& factor, const ComponentGroup& group,
                                               std::uint64_t seed, std::size_t trials) {
    std::size_t n = factor.lines();
    if (n == 0) return std::nullopt;
    Int denom = 2;
    for (const auto& c : group.cosets)
        for (const Rat& r : c.rep.rot) denom = int_lcm(denom, rat_den(r));
    Int grid = denom * 2;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        CounterRng rng(seed, trial);
        std::vector<Int> radii(n, 1);
        if (rng.next_below(2) == 1)
            for (auto& r : radii) r = Int(rng.next_range(1, 3));
        std::vector<Rat> phases(n);
        Int local = trial % 3 == 2 ? grid * Int(rng.next_range(1, 4)) : grid;
        for (auto& p : phases) p = mod1(Rat(Int(rng.next()) % local, local));

        auto stab = exact_stabilizer(factor, group, radii, phases);
        if (!stab.finite) continue;

        std::map<std::string, std::size_t> idx;
        for (std::size_t i = 0; i < stab.elements.size(); ++i)
            idx.emplace(rep::element_key(stab.elements[i]), i);

        std::vector<std::size_t> omega_part;
        for (std::size_t i = 0; i < stab.elements.size(); ++i)
            if (rep::omega_invariants(factor, stab.elements[i]).in_omega) omega_part.push_back(i);

        std::vector<bool> reached(stab.elements.size(), false);
        std::vector<std::size_t> queue;
        auto add = [&](std::size_t i) {
            if (!reached[i]) {
                reached[i] = true;
                queue.push_back(i);
            }
        };
        auto id_it = idx.find(rep::element_key(rep::identity_element(factor)));
        if (id_it == idx.end())
            throw Error(ErrorCode::InternalContradiction, "stabilizer lost the identity");
        add(id_it->second);
        for (std::size_t i : omega_part) add(i);
        for (std::size_t head = 0; head < queue.size(); ++head)
            for (std::size_t i : omega_part) {
                auto prod = rep::compose(stab.elements[queue[head]], stab.elements[i]);
                auto it = idx.find(rep::element_key(prod));
                if (it == idx.end())
                    throw Error(ErrorCode::InternalContradiction,
                                "omega closure left the stabilizer");
                add(it->second);
            }
        if (!std::all_of(reached.begin(), reached.end(), [](bool b) { return b; })) {
            std::ostringstream w;
            w << "{\"radii\":[";
            for (std::size_t j = 0; j < n; ++j) w << (j ? "," : "") << radii[j].str();
            w << "],\"phases\":[";
            for (std::size_t j = 0; j < n; ++j)
                w << (j ? "," : "") << '"' << rat_str(phases[j]) << '"';
            w << "],\"stabilizer_order\":" << stab.elements.size()
              << ",\"omega_generated_order\":" << queue.size() << "}";
            return w.str();
        }
    }
    return std::nullopt;
}

namespace {

// ---- one-dimensional factor machinery ----

bool is_linear_coset(const rep::Coset& c) {
    for (bool b : c.rep.conj)
        if (b) return false;
    return true;
}

bool has_minus_e(const RepSpec& factor, const ComponentGroup& group) {
    auto minus_e = lin::RatMatrix::identity(factor.m);
    for (std::size_t i = 0; i < factor.m; ++i) minus_e.at(i, i) = Rat(-1);
    for (const auto& c : group.cosets)
        if (c.ad == minus_e) return true;
    return false;
}

// Invariant complex line of a finite list of linear monomial elements whose
// diagonal members are all scalar. Candidate lines are the eigenlines of a
// 3-cycle element; phases stay rational throughout. Callers guarantee the
// permutation images form a transitive subgroup of S3, so a 3-cycle exists.
bool has_invariant_line(const std::vector<MonomialElement>& elems) {
    const MonomialElement* cyc = nullptr;
    for (const auto& g : elems)
        if (g.perm[0] != 0 && g.perm[g.perm[0]] != 0) {
            cyc = &g;
            break;
        }
    if (!cyc)
        throw Error(ErrorCode::InternalContradiction,
                    "transitive permutation image without a 3-cycle");

    // eigenlines of the cycle: phases p with p_{sigma(j)} = theta_j + p_j - rho
    Rat total = cyc->rot[0] + cyc->rot[1] + cyc->rot[2];
    for (int s = 0; s < 3; ++s) {
        Rat rho = mod1((total + Rat(s)) / Rat(3));
        std::vector<Rat> p(3);
        p[0] = 0;
        std::size_t j = 0;
        for (int step = 0; step < 2; ++step) {
            p[cyc->perm[j]] = mod1(cyc->rot[j] + p[j] - rho);
            j = cyc->perm[j];
        }
        bool invariant = true;
        for (const auto& g : elems) {
            // g maps the phase line p to phases q with q_{sigma(j)} = theta_j + p_j
            std::vector<Rat> q(3);
            for (std::size_t t = 0; t < 3; ++t) q[g.perm[t]] = mod1(g.rot[t] + p[t]);
            Rat diff = mod1(q[0] - p[0]);
            for (std::size_t t = 1; t < 3; ++t)
                if (mod1(q[t] - p[t]) != diff) invariant = false;
            if (!invariant) break;
        }
        if (invariant) return true;
    }
    return false;
}

bool transitive_on_lines(const std::vector<const MonomialElement*>& elems, std::size_t n) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto* g : elems)
        for (std::size_t j = 0; j < n; ++j) parent[find(j)] = find(g->perm[j]);
    for (std::size_t j = 1; j < n; ++j)
        if (find(j) != find(0)) return false;
    return true;
}

// Irreducibility over C of the full linear part (torus included).
bool linear_part_irreducible(const RepSpec& factor, const ComponentGroup& group) {
    std::vector<const MonomialElement*> linear;
    for (const auto& c : group.cosets)
        if (is_linear_coset(c)) linear.push_back(&c.rep);
    if (!transitive_on_lines(linear, factor.lines())) return false;

    bool weights_all_equal = true;
    for (std::size_t j = 1; j < factor.lines(); ++j)
        if (factor.weights.items[j] != factor.weights.items[0]) weights_all_equal = false;
    if (!weights_all_equal) return true;  // the torus itself is a nonscalar diagonal

    for (const auto* g : linear) {
        bool diagonal = true;
        for (std::size_t j = 0; j < factor.lines(); ++j)
            if (g->perm[j] != j) diagonal = false;
        if (diagonal)
            for (std::size_t j = 1; j < factor.lines(); ++j)
                if (g->rot[j] != g->rot[0]) return true;  // nonscalar diagonal element
    }

    std::vector<MonomialElement> elems;
    for (const auto* g : linear) elems.push_back(*g);
    return !has_invariant_line(elems);
}

bool elements_irreducible(const std::vector<MonomialElement>& elems, std::size_t n) {
    std::vector<const MonomialElement*> ptrs;
    for (const auto& g : elems) ptrs.push_back(&g);
    if (!transitive_on_lines(ptrs, n)) return false;
    for (const auto& g : elems) {
        bool diagonal = true;
        for (std::size_t j = 0; j < n; ++j)
            if (g.perm[j] != j) diagonal = false;
        if (diagonal)
            for (std::size_t j = 1; j < n; ++j)
                if (g.rot[j] != g.rot[0]) return true;
    }
    return !has_invariant_line(elems);
}

}  // namespace

ReflectionReport reflection_subgroup(const RepSpec& factor, const ComponentGroup& group) {
    ReflectionReport report;
    std::size_t n = factor.lines();
    const auto& ann = group.subtorus_ann.basis;

    auto solve_and_collect = [&](const rep::Coset& c, const std::vector<std::vector<Int>>& extra,
                                 const std::vector<Rat>& extra_rhs,
                                 std::vector<MonomialElement>& into) {
        std::vector<std::vector<Int>> rows;
        std::vector<Rat> rhs;
        for (const auto& d : ann) {
            rows.emplace_back(d.begin(), d.end());
            rhs.push_back(Rat(0));
        }
        for (std::size_t r = 0; r < extra.size(); ++r) {
            rows.push_back(extra[r]);
            rhs.push_back(extra_rhs[r]);
        }
        lin::IntMat sys(rows.size(), n);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t j = 0; j < n; ++j) sys.at(r, j) = rows[r][j];
        auto sol = lin::solve_torus_congruences(sys, rhs);
        if (!sol) return;
        if (!sol->free_idx.empty())
            throw Error(ErrorCode::InternalContradiction,
                        "reflection family is not finite");
        for (const auto& delta : lin::enumerate_finite_solutions(*sol, 512))
            into.push_back(rep::translated(factor, c.rep, delta));
    };

    std::vector<MonomialElement> reflections;
    for (const auto& c : group.cosets) {
        if (!is_linear_coset(c)) continue;
        bool diagonal = true;
        std::vector<std::size_t> moved;
        for (std::size_t j = 0; j < n; ++j)
            if (c.rep.perm[j] != j) {
                diagonal = false;
                moved.push_back(j);
            }
        if (diagonal) {
            // one line rotated, the others pointwise fixed
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<std::vector<Int>> extra;
                std::vector<Rat> extra_rhs;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == j) continue;
                    std::vector<Int> row(n, 0);
                    row[k] = 1;
                    extra.push_back(std::move(row));
                    extra_rhs.push_back(mod1(-c.rep.rot[k]));
                }
                std::vector<MonomialElement> found;
                solve_and_collect(c, extra, extra_rhs, found);
                for (auto& g : found)
                    if (g.rot[j] != 0) reflections.push_back(std::move(g));
            }
        } else if (moved.size() == 2) {
            // transposition with unit scalar product, the rest fixed
            std::vector<std::vector<Int>> extra;
            std::vector<Rat> extra_rhs;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == moved[0] || k == moved[1]) continue;
                std::vector<Int> row(n, 0);
                row[k] = 1;
                extra.push_back(std::move(row));
                extra_rhs.push_back(mod1(-c.rep.rot[k]));
            }
            std::vector<Int> pair_row(n, 0);
            pair_row[moved[0]] = 1;
            pair_row[moved[1]] = 1;
            extra.push_back(std::move(pair_row));
            extra_rhs.push_back(mod1(-c.rep.rot[moved[0]] - c.rep.rot[moved[1]]));
            solve_and_collect(c, extra, extra_rhs, reflections);
        }
    }

    for (const auto& g : reflections)
        if (rep::omega_invariants(factor, g).rk_e_minus_g != 2)
            throw Error(ErrorCode::InternalContradiction, "collected element is not a reflection");
    report.reflections = reflections;

    // closure
    std::map<std::string, std::size_t> idx;
    std::vector<MonomialElement> all;
    auto push = [&](MonomialElement g) {
        std::string k = rep::element_key(g);
        if (idx.count(k)) return;
        idx.emplace(k, all.size());
        all.push_back(std::move(g));
    };
    push(rep::identity_element(factor));
    for (const auto& g : reflections) push(g);
    for (std::size_t head = 0; head < all.size(); ++head) {
        if (all.size() > factor.caps.group_order_cap)
            throw Error(ErrorCode::CapExceeded, "reflection closure exceeds the cap");
        for (const auto& g : reflections) push(rep::compose(all[head], g));
    }
    report.elements = all;
    report.order = all.size();
    report.irreducible_c = n == 3 && elements_irreducible(all, n);

    if (report.irreducible_c) {
        // imprimitive recognition: diagonal orders give (pq, q)
        Int m_hat = 1, q_hat = 1;
        for (const auto& g : all) {
            bool diagonal = true;
            for (std::size_t j = 0; j < n; ++j)
                if (g.perm[j] != j) diagonal = false;
            if (!diagonal) continue;
            Rat sum = 0;
            for (std::size_t j = 0; j < n; ++j) {
                m_hat = int_lcm(m_hat, rat_den(g.rot[j]));
                sum += g.rot[j];
            }
            q_hat = int_lcm(q_hat, rat_den(mod1(sum)));
        }
        if (m_hat % q_hat != 0)
            throw Error(ErrorCode::InternalContradiction, "imprimitive recognition failed");
        if (m_hat > 64)
            throw Error(ErrorCode::CapExceeded, "imprimitive recognition cap exceeded");
        Int p = m_hat / q_hat;
        // standard group of the same parameters, as an element set
        std::set<std::string> standard;
        std::vector<std::size_t> perm{0, 1, 2};
        std::sort(perm.begin(), perm.end());
        do {
            for (Int a = 0; a < m_hat; ++a)
                for (Int b = 0; b < m_hat; ++b)
                    for (Int cc = 0; cc < m_hat; ++cc) {
                        Rat sum = Rat(a + b + cc, m_hat);
                        if (q_hat % rat_den(mod1(sum)) != 0) continue;
                        MonomialElement g;
                        g.perm = perm;
                        g.conj.assign(3, false);
                        g.rot = {Rat(a, m_hat), Rat(b, m_hat), Rat(cc, m_hat)};
                        g.v0_block = lin::RatMatrix(0, 0);
                        standard.insert(rep::element_key(g));
                    }
        } while (std::next_permutation(perm.begin(), perm.end()));
        std::set<std::string> ours;
        for (const auto& g : all) ours.insert(rep::element_key(g));
        if (standard == ours) {
            report.imprimitive_pq = std::make_pair(p, q_hat);
            report.degrees_distinct = p != 3;
        } else {
            throw Error(ErrorCode::InternalContradiction,
                        "irreducible reflection subgroup is not the expected imprimitive group");
        }
    }
    return report;
}

namespace {

// Component group of the standard one-dimensional extension built from the
// full diagonal q-torsion reflection group, the 3-cycle and the antilinear
// swap, over the same factor weights.
ComponentGroup standard_g_q3(const RepSpec& factor, const Int& q, RepSpec& standard_out) {
    RepSpec standard = factor;
    standard.generators.clear();
    standard.generator_names.clear();
    MonomialElement diag = rep::identity_element(standard);
    diag.rot[0] = Rat(1, q);
    MonomialElement cyc = rep::identity_element(standard);
    cyc.perm = {1, 2, 0};
    MonomialElement anti = rep::identity_element(standard);
    anti.perm = {0, 2, 1};
    anti.conj.assign(3, true);
    standard.generators = {diag, cyc, anti};
    standard.generator_names = {"diag", "cycle", "antiswap"};
    standard_out = standard;
    return rep::component_group(standard);
}

std::vector<std::size_t> omega_meeting_cosets(const RepSpec& factor, const ComponentGroup& group,
                                              bool& capped) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < group.size(); ++i) {
        auto st = rep::coset_meets_omega(factor, group, group.cosets[i]);
        if (st.state == rep::OmegaWitness::State::Capped) capped = true;
        if (st.state == rep::OmegaWitness::State::Yes) out.push_back(i);
    }
    return out;
}

}  // namespace

Verdict check_dim1(const RepSpec& factor, const ComponentGroup& group) {
    Verdict v;
    std::size_t n = factor.lines();

    if (!has_minus_e(factor, group)) {
        v.topological = Topological::Unknown;
        v.smooth = SmoothAllD::No;
        v.certificate.push_back(
            {TheoremTag::Abel,
             "one-dimensional factor with trivial conjugation action and " + std::to_string(n) +
                 " nonzero weights",
             ""});
        return v;
    }
    if (n != 3) {
        v.topological = Topological::Unknown;
        v.smooth = SmoothAllD::No;
        v.certificate.push_back(
            {TheoremTag::Main1,
             "one-dimensional factor needs exactly 3 lines, found " + std::to_string(n), ""});
        return v;
    }

    ReflectionReport h = reflection_subgroup(factor, group);

    bool route_grhi;
    if (h.irreducible_c) {
        bool is_g3q33 = h.imprimitive_pq && h.imprimitive_pq->first == 3;
        if (!is_g3q33) {
            v.topological = Topological::Yes;
            v.smooth = SmoothAllD::Open;
            v.certificate.push_back(
                {TheoremTag::HG3,
                 "irreducible reflection subgroup of order " + std::to_string(h.order) +
                     " avoids the obstructing family",
                 ""});
            return v;
        }
        route_grhi = true;  // irreducible H covers the reducibility hypothesis
    } else {
        route_grhi = !linear_part_irreducible(factor, group);
    }

    if (route_grhi) {
        bool capped = false;
        auto omega = omega_meeting_cosets(factor, group, capped);
        if (capped) {
            v.capped = true;
            v.certificate.push_back({TheoremTag::GrHi, "omega search hit an enumeration cap", ""});
            return v;
        }
        if (rep::cosets_generate(factor, group, omega)) {
            v.topological = Topological::Yes;
            v.smooth = SmoothAllD::Open;
            v.certificate.push_back(
                {TheoremTag::GrHi, "component group is generated by omega-meeting cosets", ""});
            bool all_lines_fixed = true;
            for (const auto& c : group.cosets)
                for (std::size_t j = 0; j < n; ++j)
                    if (c.rep.perm[j] != j) all_lines_fixed = false;
            if (all_lines_fixed)
                v.certificate.push_back(
                    {TheoremTag::Mainp, "all lines are preserved, direct route agrees", ""});
        } else {
            v.topological = Topological::Unknown;
            v.smooth = SmoothAllD::No;
            v.certificate.push_back(
                {TheoremTag::GrHi, "omega-meeting cosets fail to generate the component group",
                 ""});
        }
        return v;
    }

    // linear part irreducible over C, reflections reducible
    Int q = 1;
    bool cube = false;
    for (Int c = 1; c * c * c <= Int(h.order); ++c)
        if (c * c * c == Int(h.order)) {
            q = c;
            cube = true;
        }
    if (cube && q > 1) {
        RepSpec standard;
        auto sgroup = standard_g_q3(factor, q, standard);
        std::set<std::string> lhs, rhs;
        for (const auto& c : group.cosets) lhs.insert(c.key);
        for (const auto& c : sgroup.cosets) rhs.insert(c.key);
        if (lhs == rhs) {
            v.topological = Topological::Yes;
            v.smooth = SmoothAllD::Open;
            v.certificate.push_back(
                {TheoremTag::GiHr,
                 "group equals the standard one-dimensional extension with torsion " + q.str(),
                 ""});
            return v;
        }
    }
    v.topological = Topological::Unknown;
    v.smooth = SmoothAllD::No;
    v.certificate.push_back(
        {TheoremTag::GiHr,
         "irreducible action whose reflection subgroup (order " + std::to_string(h.order) +
             ") does not match any standard extension",
         ""});
    return v;
}

namespace {

Verdict analyze_factor(const RepSpec& factor) {
    auto group = rep::component_group(factor);
    if (factor.m == 1) return check_dim1(factor, group);

    // m >= 2: the two-stability theorem conditions
    Verdict v;
    MainConditions mc = check_main_conditions(factor, group);
    if (mc.count_ok && mc.structure_ok && mc.minus_e_ok) {
        if (mc.iv.status == CondIv::Status::Proved) {
            v.topological = Topological::Yes;
            v.smooth = SmoothAllD::Open;
            v.certificate.push_back(
                {TheoremTag::MainSufficiency,
                 "weight count, line structure and -E conditions hold", ""});
            v.certificate.push_back(
                {TheoremTag::AdGE, "all lines preserved, stabilizer condition follows", ""});
        } else if (mc.iv.status == CondIv::Status::Falsified) {
            v.topological = Topological::Unknown;
            v.smooth = SmoothAllD::No;
            v.certificate.push_back({TheoremTag::MainNecessity,
                                     "a finite stabilizer is not generated by its omega part",
                                     mc.iv.witness});
        } else {
            v.topological = Topological::Unknown;
            v.smooth = SmoothAllD::Unknown;
            v.certificate.push_back(
                {TheoremTag::MainNecessity,
                 "stabilizer condition undetermined by sampling; no conclusion", ""});
        }
    } else {
        std::string which;
        if (!mc.count_ok) which += " count";
        if (!mc.structure_ok) which += " structure";
        if (!mc.minus_e_ok) which += " minus-e";
        v.topological = Topological::Unknown;
        v.smooth = SmoothAllD::No;
        v.certificate.push_back(
            {TheoremTag::MainNecessity, "failed conditions:" + which, ""});
    }
    return v;
}

void absorb_factor(Verdict& total, const Verdict& part, const std::string& prefix,
                   bool& all_yes) {
    if (part.topological != Topological::Yes) all_yes = false;
    if (part.topological == Topological::No) {
        // only the hyperplane-reflection route emits a factor-level no, and
        // that argument is global
        total.topological = Topological::No;
        total.smooth = SmoothAllD::No;
    }
    if (part.smooth == SmoothAllD::No && total.topological != Topological::No)
        total.smooth = SmoothAllD::No;
    total.capped = total.capped || part.capped;
    for (CertStep step : part.certificate) {
        step.detail = prefix + step.detail;
        total.certificate.push_back(std::move(step));
    }
}

}  // namespace

AnalyzeOutput analyze_with_trace(const RepSpec& spec) {
    AnalyzeOutput out;
    rep::validate(spec);

    if (!ws::is_q_stable(spec.weights, 1)) {
        std::size_t witness = 0;
        std::size_t full = lin::rank(spec.weights.column_matrix());
        for (std::size_t j = 0; j < spec.lines(); ++j) {
            std::vector<std::size_t> rest;
            for (std::size_t k = 0; k < spec.lines(); ++k)
                if (k != j) rest.push_back(k);
            if (lin::rank(spec.weights.column_matrix(rest)) != full) {
                witness = j;
                break;
            }
        }
        out.verdict.topological = Topological::No;
        out.verdict.smooth = SmoothAllD::No;
        out.verdict.certificate.push_back(
            {TheoremTag::Prop1st,
             "weights are not 1-stable: removing line " + std::to_string(witness) +
                 " shrinks the span",
             ""});
        out.verdict.certificate.push_back(
            {TheoremTag::Cor2dim,
             "the corresponding isotypic plane has an infinite pointwise stabilizer", ""});
        sort_certificate(out.verdict.certificate);
        out.trace.final_spec = spec;
        return out;
    }

    out.trace = red::reduce_to_2stable(spec);
    const RepSpec& work = out.trace.final_spec;
    Verdict& v = out.verdict;

    for (std::size_t s = 0; s < out.trace.steps.size(); ++s) {
        const auto& step = out.trace.steps[s];
        std::ostringstream detail;
        detail << "step " << s + 1 << ": eliminated classes ";
        for (std::size_t i = 0; i < step.class_orbit.size(); ++i)
            detail << (i ? "," : "") << index_list(step.class_orbit[i]);
        detail << "; torus " << step.m_before << "->" << step.m_after << ", fixed block "
               << step.v0_before << "->" << step.v0_after;
        if (!step.group_propagated) detail << "; generators dropped (" << step.warning << ")";
        v.certificate.push_back({TheoremTag::Reduction, detail.str(), ""});
    }
    if (!out.trace.steps.empty())
        v.certificate.push_back(
            {TheoremTag::TorExample,
             "each eliminated block quotients onto a vector space with a linear residual action",
             ""});

    // a dropped generator means the reduced data describes a smaller group;
    // no verdict about the original action can be certified from it
    for (const auto& step : out.trace.steps)
        if (!step.group_propagated) {
            v.topological = Topological::Unknown;
            v.smooth = SmoothAllD::Unknown;
            sort_certificate(v.certificate);
            return out;
        }

    try {
        auto group = rep::component_group(work);

        auto decomposition = ws::indecomposable_components(work.weights);
        std::vector<rep::PartitionBlock> partition;
        for (const auto& blk : decomposition.blocks) partition.push_back({blk, false});
        if (work.v0_dim > 0 || partition.empty()) partition.push_back({{}, true});

        if (partition.size() > 1) {
            for (const auto& coset : group.cosets) {
                if (!rep::factors_over_partition(work, group, coset, partition)) {
                    v.topological = Topological::Unknown;
                    v.smooth = SmoothAllD::No;
                    v.certificate.push_back(
                        {TheoremTag::Submain,
                         "component group does not split over the isotypic partition",
                         "coset:" + coset.key});
                    sort_certificate(v.certificate);
                    return out;
                }
            }
            v.certificate.push_back(
                {TheoremTag::Submain,
                 "group splits as a direct product over " + std::to_string(partition.size()) +
                     " blocks",
                 ""});
        }

        bool all_yes = true;
        v.topological = Topological::Unknown;
        v.smooth = SmoothAllD::Unknown;
        Verdict total;
        total.topological = Topological::Unknown;
        total.smooth = SmoothAllD::Unknown;

        for (std::size_t b = 0; b < decomposition.blocks.size(); ++b) {
            RepSpec factor = factor_spec(work, group, decomposition.blocks[b]);
            Verdict part = analyze_factor(factor);
            absorb_factor(total, part, "block " + index_list(decomposition.blocks[b]) + ": ",
                          all_yes);
            if (total.topological == Topological::No) break;
        }
        if (total.topological != Topological::No &&
            (work.v0_dim > 0 || decomposition.blocks.empty())) {
            auto mats = v0_factor_matrices(work, group);
            Verdict part = check_finite_case(mats, work.v0_gram, work.caps.group_order_cap);
            absorb_factor(total, part, "fixed block: ", all_yes);
        }

        v.capped = v.capped || total.capped;
        for (auto& step : total.certificate) v.certificate.push_back(std::move(step));
        if (total.topological == Topological::No) {
            v.topological = Topological::No;
            v.smooth = SmoothAllD::No;
        } else if (all_yes && !v.capped) {
            v.topological = Topological::Yes;
            v.smooth = SmoothAllD::Open;
            if (partition.size() > 1)
                v.certificate.push_back(
                    {TheoremTag::ProductRule,
                     "orbit space is the product of the per-block orbit spaces", ""});
        } else {
            v.topological = Topological::Unknown;
            v.smooth = total.smooth;
        }
    } catch (const Error& err) {
        if (err.code() != ErrorCode::CapExceeded) throw;
        v.topological = Topological::Unknown;
        v.smooth = SmoothAllD::Unknown;
        v.capped = true;
        v.certificate.push_back(
            {TheoremTag::Submain, std::string("enumeration cap exceeded: ") + err.what(), ""});
    }

    sort_certificate(v.certificate);
    return out;
}

Verdict analyze(const RepSpec& spec) { return analyze_with_trace(spec).verdict; }

}  // namespace orbi::ver
