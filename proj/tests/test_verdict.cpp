#include "doctest.h"

#include "orbispace/verdict.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <set>

using namespace orbi;
using namespace orbi::ver;
using orbi::rep::MonomialElement;
using orbi::rep::RepSpec;

namespace {

std::vector<std::vector<Int>> iw(const std::vector<std::vector<long>>& rows) {
    std::vector<std::vector<Int>> out;
    for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
    return out;
}

bool cites(const Verdict& v, TheoremTag tag) {
    return std::any_of(v.certificate.begin(), v.certificate.end(),
                       [&](const CertStep& s) { return s.tag == tag; });
}

RepSpec g23_spec() {
    RepSpec spec = rep::make_spec(1, iw({{1}, {1}, {1}}));
    MonomialElement diag = rep::identity_element(spec);
    diag.rot[0] = Rat(1, 2);
    MonomialElement cyc = rep::identity_element(spec);
    cyc.perm = {1, 2, 0};
    MonomialElement anti = rep::identity_element(spec);
    anti.perm = {0, 2, 1};
    anti.conj.assign(3, true);
    spec.generators = {diag, cyc, anti};
    spec.generator_names = {"diag_half", "cycle", "antiswap"};
    return spec;
}

RepSpec conj_all_spec(std::vector<std::vector<Int>> weights, std::size_t m) {
    RepSpec spec = rep::make_spec(m, std::move(weights));
    MonomialElement conj = rep::identity_element(spec);
    conj.conj.assign(spec.lines(), true);
    spec.generators = {conj};
    return spec;
}

lin::RatMatrix mat2(long a, long b, long c, long d) {
    lin::RatMatrix m(2, 2);
    m.at(0, 0) = Rat(a);
    m.at(0, 1) = Rat(b);
    m.at(1, 0) = Rat(c);
    m.at(1, 1) = Rat(d);
    return m;
}

// conjugate the chosen coordinates, adjusting an element's bookkeeping
MonomialElement flip_element(const MonomialElement& g, const std::vector<bool>& flip) {
    MonomialElement out = g;
    for (std::size_t j = 0; j < g.perm.size(); ++j) {
        bool fin = flip[j], fout = flip[g.perm[j]];
        out.conj[j] = g.conj[j] != (fin != fout);
        out.rot[j] = fout ? mod1(-g.rot[j]) : g.rot[j];
    }
    return out;
}

}  // namespace

TEST_CASE("hopf pair analyzes to a manifold") {
    auto out = analyze_with_trace(rep::make_spec(1, iw({{1}, {1}})));
    CHECK(out.verdict.topological == Topological::Yes);
    CHECK(out.verdict.smooth == SmoothAllD::Open);
    CHECK(out.trace.steps.size() == 1);
    CHECK(cites(out.verdict, TheoremTag::Reduction));
    CHECK(cites(out.verdict, TheoremTag::Mich));
}

TEST_CASE("torus with three equal weights is never smooth") {
    auto v = analyze(rep::make_spec(1, iw({{1}, {1}, {1}})));
    CHECK(v.topological == Topological::Unknown);
    CHECK(v.smooth == SmoothAllD::No);
    CHECK(cites(v, TheoremTag::Abel));
}

TEST_CASE("non-1-stable weights give a global no") {
    auto v = analyze(rep::make_spec(2, iw({{1, 0}, {1, 0}, {0, 1}})));
    CHECK(v.topological == Topological::No);
    CHECK(v.smooth == SmoothAllD::No);
    CHECK(cites(v, TheoremTag::Prop1st));
}

TEST_CASE("the standard one-dimensional extension is a manifold") {
    auto v = analyze(g23_spec());
    CHECK(v.topological == Topological::Yes);
    CHECK(v.smooth == SmoothAllD::Open);
    CHECK(cites(v, TheoremTag::GiHr));
}

TEST_CASE("rank-two example passes the main sufficiency route") {
    auto v = analyze(conj_all_spec(iw({{1, 0}, {0, 1}, {1, 1}, {1, -1}}), 2));
    CHECK(v.topological == Topological::Yes);
    CHECK(v.smooth == SmoothAllD::Open);
    CHECK(cites(v, TheoremTag::MainSufficiency));
    CHECK(cites(v, TheoremTag::AdGE));
}

TEST_CASE("finite case classification") {
    auto gram = lin::RatMatrix::identity(2);
    auto yes = check_finite_case({mat2(-1, 0, 0, -1)}, gram, 1000);
    CHECK(yes.topological == Topological::Yes);
    CHECK(cites(yes, TheoremTag::Mich));

    auto no = check_finite_case({mat2(-1, 0, 0, 1)}, gram, 1000);
    CHECK(no.topological == Topological::No);
    CHECK(no.smooth == SmoothAllD::No);
    CHECK(cites(no, TheoremTag::Cor1dim));

    auto trivial = check_finite_case({lin::RatMatrix::identity(2)}, gram, 1000);
    CHECK(trivial.topological == Topological::Yes);

    // 90-degree rotation alone: no reflections, no pseudoreflection generation gap
    auto rot = check_finite_case({mat2(0, -1, 1, 0)}, gram, 1000);
    CHECK(rot.topological == Topological::Yes);
}

TEST_CASE("main conditions on the rank-two example") {
    RepSpec spec = conj_all_spec(iw({{1, 0}, {0, 1}, {1, 1}, {1, -1}}), 2);
    auto group = rep::component_group(spec);
    RepSpec factor = factor_spec(spec, group, {0, 1, 2, 3});
    auto mc = check_main_conditions(factor, rep::component_group(factor));
    CHECK(mc.count_ok);
    CHECK(mc.structure_ok);
    CHECK(mc.minus_e_ok);
    CHECK(mc.iv.status == CondIv::Status::Proved);
}

TEST_CASE("five weights at rank two fail the count condition") {
    RepSpec spec = conj_all_spec(iw({{1, 0}, {0, 1}, {1, 1}, {1, -1}, {1, 2}}), 2);
    auto group = rep::component_group(spec);
    RepSpec factor = factor_spec(spec, group, {0, 1, 2, 3, 4});
    auto mc = check_main_conditions(factor, rep::component_group(factor));
    CHECK_FALSE(mc.count_ok);

    auto v = analyze(spec);
    CHECK(v.smooth == SmoothAllD::No);
    CHECK(cites(v, TheoremTag::MainNecessity));
}

TEST_CASE("reflection subgroup of the standard extension") {
    RepSpec spec = g23_spec();
    auto group = rep::component_group(spec);
    RepSpec factor = factor_spec(spec, group, {0, 1, 2});
    auto h = reflection_subgroup(factor, rep::component_group(factor));
    CHECK(h.order == 8);
    CHECK_FALSE(h.irreducible_c);
}

TEST_CASE("reflection subgroup of a torus-only factor is trivial") {
    RepSpec spec = rep::make_spec(1, iw({{1}, {1}, {1}}));
    auto group = rep::component_group(spec);
    RepSpec factor = factor_spec(spec, group, {0, 1, 2});
    auto h = reflection_subgroup(factor, rep::component_group(factor));
    CHECK(h.order == 1);
}

TEST_CASE("even-monomial torsion group has no reflections") {
    RepSpec spec = rep::make_spec(1, iw({{1}, {1}, {1}}));
    MonomialElement cyc = rep::identity_element(spec);
    cyc.perm = {1, 2, 0};
    MonomialElement diag = rep::identity_element(spec);
    diag.rot = {Rat(1, 3), Rat(2, 3), Rat(0)};
    spec.generators = {cyc, diag};
    auto group = rep::component_group(spec);
    RepSpec factor = factor_spec(spec, group, {0, 1, 2});
    auto h = reflection_subgroup(factor, rep::component_group(factor));
    CHECK(h.order == 1);

    auto v = analyze(spec);  // no antilinear part at all
    CHECK(v.smooth == SmoothAllD::No);
    CHECK(cites(v, TheoremTag::Abel));
}

TEST_CASE("conjugation-only scalar action routes through the reducible branch") {
    auto v = analyze(conj_all_spec(iw({{1}, {1}, {1}}), 1));
    CHECK(v.topological == Topological::Yes);
    CHECK(v.smooth == SmoothAllD::Open);
    CHECK(cites(v, TheoremTag::GrHi));
    CHECK(cites(v, TheoremTag::Mainp));
}

TEST_CASE("full sign-monomial reflection subgroup routes through the irreducible branch") {
    // reflections close to the order-48 sign-monomial group; p = 1 family
    RepSpec spec = rep::make_spec(1, iw({{1}, {1}, {1}}));
    MonomialElement diag = rep::identity_element(spec);
    diag.rot[0] = Rat(1, 2);
    MonomialElement swap01 = rep::identity_element(spec);
    swap01.perm = {1, 0, 2};
    MonomialElement cyc = rep::identity_element(spec);
    cyc.perm = {1, 2, 0};
    MonomialElement conj = rep::identity_element(spec);
    conj.conj.assign(3, true);
    spec.generators = {diag, swap01, cyc, conj};

    auto group = rep::component_group(spec);
    RepSpec factor = factor_spec(spec, group, {0, 1, 2});
    auto fgroup = rep::component_group(factor);
    auto h = reflection_subgroup(factor, fgroup);
    CHECK(h.order == 48);
    CHECK(h.irreducible_c);
    REQUIRE(h.imprimitive_pq.has_value());
    CHECK(h.imprimitive_pq->first == 1);
    CHECK(h.imprimitive_pq->second == 2);
    CHECK(h.degrees_distinct);

    auto v = analyze(spec);
    CHECK(v.topological == Topological::Yes);
    CHECK(cites(v, TheoremTag::HG3));
}

TEST_CASE("the obstructing reflection family falls back to the generation test") {
    // reflection closure is the 54-element product-one cube-root group (p = 3)
    RepSpec spec = rep::make_spec(1, iw({{1}, {1}, {1}}));
    MonomialElement swap01 = rep::identity_element(spec);
    swap01.perm = {1, 0, 2};
    MonomialElement diag = rep::identity_element(spec);
    diag.rot = {Rat(1, 3), Rat(2, 3), Rat(0)};
    MonomialElement cyc = rep::identity_element(spec);
    cyc.perm = {1, 2, 0};
    MonomialElement conj = rep::identity_element(spec);
    conj.conj.assign(3, true);
    spec.generators = {swap01, diag, cyc, conj};

    auto group = rep::component_group(spec);
    RepSpec factor = factor_spec(spec, group, {0, 1, 2});
    auto fgroup = rep::component_group(factor);
    auto h = reflection_subgroup(factor, fgroup);
    CHECK(h.order == 54);
    CHECK(h.irreducible_c);
    REQUIRE(h.imprimitive_pq.has_value());
    CHECK(h.imprimitive_pq->first == 3);
    CHECK_FALSE(h.degrees_distinct);

    auto v = analyze(spec);
    CHECK_FALSE(cites(v, TheoremTag::HG3));
    CHECK(cites(v, TheoremTag::GrHi));
}

TEST_CASE("condition-iv sampler agrees with grid exhaustion on a swap example") {
    RepSpec spec = rep::make_spec(2, iw({{1, 0}, {0, 1}, {1, 1}, {1, -1}}));
    MonomialElement swap = rep::identity_element(spec);
    swap.perm = {1, 0, 2, 3};
    swap.conj = {false, false, false, true};
    MonomialElement conj = rep::identity_element(spec);
    conj.conj.assign(4, true);
    spec.generators = {swap, conj};
    spec.caps.iv_trials = 60;
    auto group = rep::component_group(spec);
    RepSpec factor = factor_spec(spec, group, {0, 1, 2, 3});
    auto fgroup = rep::component_group(factor);

    auto sampled = sample_condition_iv(factor, fgroup, 0, 60);

    // grid-exhaustion oracle with phase denominator 2: every grid stabilizer
    // element keeps grid rotations, so the element search below is complete
    bool oracle_found = false;
    std::size_t n = factor.lines();
    std::vector<std::vector<Rat>> grid_subtorus;
    {
        std::vector<Rat> delta(n, Rat(0));
        std::vector<std::size_t> counter(n, 0);
        while (true) {
            for (std::size_t j = 0; j < n; ++j) delta[j] = Rat(Int(counter[j]), Int(2));
            if (lin::in_subtorus(delta, fgroup.subtorus_ann)) grid_subtorus.push_back(delta);
            std::size_t t = 0;
            while (t < n) {
                if (++counter[t] < 2) break;
                counter[t] = 0;
                ++t;
            }
            if (t == n) break;
        }
    }
    std::vector<MonomialElement> grid_elements;
    for (const auto& c : fgroup.cosets) {
        bool on_grid = true;
        for (const Rat& r : c.rep.rot)
            if (rat_den(r) > 2) on_grid = false;
        if (!on_grid) continue;
        for (const auto& delta : grid_subtorus)
            grid_elements.push_back(rep::translated(factor, c.rep, delta));
    }
    std::vector<Rat> phases(n);
    std::vector<std::size_t> counter(n, 0);
    while (!oracle_found) {
        for (std::size_t j = 0; j < n; ++j) phases[j] = Rat(Int(counter[j]), Int(2));
        // all radii equal; stabilizer = grid elements fixing the phase vector
        std::vector<MonomialElement> stab;
        for (const auto& g : grid_elements) {
            bool fixes = true;
            for (std::size_t j = 0; j < n; ++j) {
                Rat img = g.rot[j] + (g.conj[j] ? -phases[j] : phases[j]);
                if (mod1(img - phases[g.perm[j]]) != 0) fixes = false;
            }
            if (fixes) stab.push_back(g);
        }
        std::set<std::string> keys;
        for (const auto& g : stab) keys.insert(rep::element_key(g));
        std::vector<MonomialElement> omega_part;
        for (const auto& g : stab)
            if (rep::omega_invariants(factor, g).in_omega) omega_part.push_back(g);
        std::set<std::string> closure;
        std::vector<MonomialElement> queue{rep::identity_element(factor)};
        closure.insert(rep::element_key(queue[0]));
        for (const auto& g : omega_part)
            if (closure.insert(rep::element_key(g)).second) queue.push_back(g);
        for (std::size_t head = 0; head < queue.size(); ++head)
            for (const auto& g : omega_part) {
                auto prod = rep::compose(queue[head], g);
                if (closure.insert(rep::element_key(prod)).second) queue.push_back(prod);
            }
        if (closure.size() != keys.size()) oracle_found = true;

        std::size_t t = 0;
        while (t < n) {
            if (++counter[t] < 2) break;
            counter[t] = 0;
            ++t;
        }
        if (t == n) break;
    }
    CHECK(sampled.has_value() == oracle_found);
}

TEST_CASE("sampler edge cases") {
    RepSpec spec = conj_all_spec(iw({{1, 0}, {0, 1}, {1, 1}, {1, -1}}), 2);
    auto group = rep::component_group(spec);
    RepSpec factor = factor_spec(spec, group, {0, 1, 2, 3});
    auto fgroup = rep::component_group(factor);
    CHECK_FALSE(sample_condition_iv(factor, fgroup, 0, 0).has_value());
    CHECK_FALSE(sample_condition_iv(factor, fgroup, 0, 40).has_value());
}

TEST_CASE("verdict consistency and certificate soundness") {
    std::vector<RepSpec> specs;
    specs.push_back(rep::make_spec(1, iw({{1}, {1}})));
    specs.push_back(rep::make_spec(1, iw({{1}, {1}, {1}})));
    specs.push_back(rep::make_spec(2, iw({{1, 0}, {1, 0}, {0, 1}})));
    specs.push_back(g23_spec());
    specs.push_back(conj_all_spec(iw({{1, 0}, {0, 1}, {1, 1}, {1, -1}}), 2));
    specs.push_back(rep::make_spec(2, iw({{1, 0}, {1, 0}, {0, 1}, {0, 1}})));
    specs.push_back(conj_all_spec(iw({{1}, {1}, {1}}), 1));
    specs.push_back(conj_all_spec(iw({{1, 0}, {0, 1}, {1, 1}, {1, -1}, {1, 2}}), 2));

    const std::set<TheoremTag> yes_tags{TheoremTag::MainSufficiency, TheoremTag::Mainp,
                                        TheoremTag::Mich,            TheoremTag::GrHi,
                                        TheoremTag::HG3,             TheoremTag::GiHr,
                                        TheoremTag::ProductRule,     TheoremTag::TorExample};
    const std::set<TheoremTag> no_tags{TheoremTag::Prop1st, TheoremTag::Cor1dim,
                                       TheoremTag::Cor2dim};
    const std::set<TheoremTag> smooth_no_tags{
        TheoremTag::Submain, TheoremTag::MainNecessity, TheoremTag::Abel,
        TheoremTag::Main1,   TheoremTag::GrHi,          TheoremTag::GiHr,
        TheoremTag::Mich,    TheoremTag::Prop1st,       TheoremTag::Cor1dim,
        TheoremTag::Cor2dim};

    for (const auto& spec : specs) {
        auto v = analyze(spec);
        if (v.topological == Topological::Yes) CHECK(v.smooth == SmoothAllD::Open);
        if (v.topological == Topological::No) CHECK(v.smooth == SmoothAllD::No);
        auto cites_any = [&](const std::set<TheoremTag>& allowed) {
            return std::any_of(v.certificate.begin(), v.certificate.end(),
                               [&](const CertStep& s) { return allowed.count(s.tag) > 0; });
        };
        if (v.topological == Topological::Yes) CHECK(cites_any(yes_tags));
        if (v.topological == Topological::No) CHECK(cites_any(no_tags));
        if (v.smooth == SmoothAllD::No) CHECK(cites_any(smooth_no_tags));
    }
}

TEST_CASE("verdicts are invariant under line relabeling") {
    RepSpec base = conj_all_spec(iw({{1, 0}, {0, 1}, {1, 1}, {1, -1}}), 2);
    auto vb = analyze(base);

    std::vector<std::size_t> relabel{2, 0, 3, 1};
    RepSpec moved = rep::make_spec(2, {});
    std::vector<std::vector<Int>> witems(4);
    for (std::size_t j = 0; j < 4; ++j) witems[relabel[j]] = base.weights.items[j];
    moved = rep::make_spec(2, witems);
    MonomialElement g = rep::identity_element(moved);
    for (std::size_t j = 0; j < 4; ++j) {
        g.perm[relabel[j]] = relabel[base.generators[0].perm[j]];
        g.conj[relabel[j]] = base.generators[0].conj[j];
        g.rot[relabel[j]] = base.generators[0].rot[j];
    }
    moved.generators = {g};
    auto vm = analyze(moved);
    CHECK(vb.topological == vm.topological);
    CHECK(vb.smooth == vm.smooth);
    auto tags = [](const Verdict& v) {
        std::multiset<int> t;
        for (const auto& s : v.certificate) t.insert(static_cast<int>(s.tag));
        return t;
    };
    CHECK(tags(vb) == tags(vm));
}

TEST_CASE("verdicts are invariant under weight sign flips") {
    for (std::size_t flip_line = 0; flip_line < 3; ++flip_line) {
        RepSpec base = g23_spec();
        std::vector<bool> flips(3, false);
        flips[flip_line] = true;
        std::vector<std::vector<Int>> witems = base.weights.items;
        for (auto& x : witems[flip_line]) x = -x;
        RepSpec flipped = rep::make_spec(1, witems);
        for (const auto& g : base.generators) flipped.generators.push_back(flip_element(g, flips));
        auto vb = analyze(base);
        auto vf = analyze(flipped);
        CHECK(vb.topological == vf.topological);
        CHECK(vb.smooth == vf.smooth);
    }

    for (std::size_t flip_line = 0; flip_line < 4; ++flip_line) {
        RepSpec base = conj_all_spec(iw({{1, 0}, {0, 1}, {1, 1}, {1, -1}}), 2);
        std::vector<bool> flips(4, false);
        flips[flip_line] = true;
        std::vector<std::vector<Int>> witems = base.weights.items;
        for (auto& x : witems[flip_line]) x = -x;
        RepSpec flipped = rep::make_spec(2, witems);
        for (const auto& g : base.generators) flipped.generators.push_back(flip_element(g, flips));
        auto vb = analyze(base);
        auto vf = analyze(flipped);
        CHECK(vb.topological == vf.topological);
        CHECK(vb.smooth == vf.smooth);
    }
}

TEST_CASE("mixed line and fixed blocks combine through the product rule") {
    RepSpec spec = rep::make_spec(1, iw({{1}, {1}, {1}}), 2);
    MonomialElement conj = rep::identity_element(spec);
    conj.conj.assign(3, true);
    MonomialElement central = rep::identity_element(spec);
    central.v0_block.at(0, 0) = Rat(-1);
    central.v0_block.at(1, 1) = Rat(-1);
    spec.generators = {conj, central};

    auto v = analyze(spec);
    CHECK(v.topological == Topological::Yes);
    CHECK(v.smooth == SmoothAllD::Open);
    CHECK(cites(v, TheoremTag::ProductRule));
    CHECK(cites(v, TheoremTag::GrHi));
    CHECK(cites(v, TheoremTag::Mich));
    CHECK(cites(v, TheoremTag::Submain));
}

TEST_CASE("non-splitting groups are rejected by the product test") {
    RepSpec spec = rep::make_spec(1, iw({{1}, {1}, {1}}), 2);
    MonomialElement mixed = rep::identity_element(spec);
    mixed.conj.assign(3, true);
    mixed.v0_block.at(0, 0) = Rat(-1);
    mixed.v0_block.at(1, 1) = Rat(-1);
    spec.generators = {mixed};

    auto v = analyze(spec);
    CHECK(v.topological == Topological::Unknown);
    CHECK(v.smooth == SmoothAllD::No);
    CHECK(cites(v, TheoremTag::Submain));
}

TEST_CASE("dropped generators leave the verdict open") {
    // the folded line picks up a 1/3 rotation, which has no rational block;
    // the reduced data then describes a smaller group and proves nothing
    RepSpec spec = rep::make_spec(1, iw({{1}, {1}}));
    auto g = rep::identity_element(spec);
    g.rot[0] = Rat(1, 3);
    spec.generators = {g};
    auto v = analyze(spec);
    CHECK(v.topological == Topological::Unknown);
    CHECK(v.smooth == SmoothAllD::Unknown);
    CHECK(cites(v, TheoremTag::Reduction));
}

TEST_CASE("double hopf pair is a manifold after full reduction") {
    auto out = analyze_with_trace(rep::make_spec(2, iw({{1, 0}, {1, 0}, {0, 1}, {0, 1}})));
    CHECK(out.trace.steps.size() == 2);
    CHECK(out.trace.final_spec.m == 0);
    CHECK(out.trace.final_spec.v0_dim == 6);
    CHECK(out.verdict.topological == Topological::Yes);
}
