#include "doctest.h"

#include "orbispace/reducer.hpp"
#include "test_support.hpp"

using namespace orbi;
using namespace orbi::red;
using orbi::rep::RepSpec;

namespace {

std::vector<std::vector<Int>> iw(const std::vector<std::vector<long>>& rows) {
    std::vector<std::vector<Int>> out;
    for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
    return out;
}

}  // namespace

TEST_CASE("double hopf pair reduces in two steps") {
    RepSpec spec = rep::make_spec(2, iw({{1, 0}, {1, 0}, {0, 1}, {0, 1}}));
    auto [first, step1] = reduce_step(spec);
    CHECK(step1.class_orbit == std::vector<std::vector<std::size_t>>{{0, 1}});
    CHECK(step1.folded);
    CHECK(first.m == 1);
    CHECK(first.v0_dim == 3);
    CHECK(first.weights.items == iw({{1}, {1}}));

    auto [second, step2] = reduce_step(first);
    CHECK(second.m == 0);
    CHECK(second.v0_dim == 6);
    CHECK(second.lines() == 0);

    auto trace = reduce_to_2stable(spec);
    CHECK(trace.steps.size() == 2);
    CHECK(trace.final_spec.m == 0);
    CHECK(trace.final_spec.v0_dim == 6);
}

TEST_CASE("mixed class produces a new line") {
    RepSpec spec = rep::make_spec(2, iw({{1, 0}, {1, 0}, {0, 1}, {1, 1}}));
    auto [reduced, step] = reduce_step(spec);
    CHECK(step.class_orbit == std::vector<std::vector<std::size_t>>{{2, 3}});
    REQUIRE(step.relations.size() == 1);
    CHECK(step.relations[0].sign_flips == std::vector<int>{-1, 1});
    CHECK(step.relations[0].coefficients == std::vector<Int>{1, 1});
    CHECK(step.relations[0].combination == std::vector<Int>{1, 0});
    CHECK_FALSE(step.folded);
    CHECK(reduced.m == 1);
    CHECK(reduced.v0_dim == 1);
    CHECK(reduced.weights.items == iw({{1}, {1}, {1}}));

    auto trace = reduce_to_2stable(spec);
    CHECK(trace.steps.size() == 1);
}

TEST_CASE("weighted hopf reduces to three flat dimensions") {
    RepSpec spec = rep::make_spec(1, iw({{2}, {1}}));
    auto [reduced, step] = reduce_step(spec);
    CHECK(step.relations[0].sign_flips == std::vector<int>{1, -1});
    CHECK(step.relations[0].coefficients == std::vector<Int>{1, 2});
    CHECK(step.folded);
    CHECK(reduced.m == 0);
    CHECK(reduced.v0_dim == 3);

    auto trace = reduce_to_2stable(spec);
    CHECK(trace.steps.size() == 1);
}

TEST_CASE("already 2-stable specs reduce trivially") {
    RepSpec spec = rep::make_spec(2, iw({{1, 0}, {0, 1}, {1, 1}, {1, -1}}));
    auto trace = reduce_to_2stable(spec);
    CHECK(trace.steps.empty());
    CHECK(trace.final_spec.weights.items == spec.weights.items);

    CHECK_THROWS_AS((void)reduce_step(spec), Error);  // no reducible class
}

TEST_CASE("reduction requires 1-stability") {
    RepSpec spec = rep::make_spec(2, iw({{1, 0}, {1, 0}, {0, 1}}));
    CHECK_THROWS_AS((void)reduce_to_2stable(spec), Error);
}

TEST_CASE("conjugation propagates onto the folded block") {
    RepSpec spec = rep::make_spec(1, iw({{1}, {1}}));
    auto conj = rep::identity_element(spec);
    conj.conj.assign(2, true);
    spec.generators = {conj};
    auto [reduced, step] = reduce_step(spec);
    CHECK(step.group_propagated);
    CHECK(reduced.m == 0);
    CHECK(reduced.v0_dim == 3);
    REQUIRE(reduced.generators.size() == 1);
    const auto& b = reduced.generators[0].v0_block;
    // hyperplane coordinate fixed, folded complex line conjugated
    CHECK(b.at(0, 0) == Rat(1));
    CHECK(b.at(1, 1) == Rat(1));
    CHECK(b.at(2, 2) == Rat(-1));
    CHECK(lin::rank(lin::RatMatrix::identity(3) - b) == 1);
}

TEST_CASE("class-swapping generators are processed as one orbit") {
    RepSpec spec = rep::make_spec(2, iw({{1, 0}, {1, 0}, {0, 1}, {0, 1}}));
    auto swap = rep::identity_element(spec);
    swap.perm = {2, 3, 0, 1};
    spec.generators = {swap};
    auto [reduced, step] = reduce_step(spec);
    CHECK(step.class_orbit == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});
    CHECK(step.folded);
    CHECK(step.group_propagated);
    CHECK(reduced.m == 0);
    CHECK(reduced.v0_dim == 6);
    REQUIRE(reduced.generators.size() == 1);
    const auto& b = reduced.generators[0].v0_block;
    // hyperplane coordinates swap, folded blocks swap
    CHECK(b.at(1, 0) == Rat(1));
    CHECK(b.at(0, 1) == Rat(1));
    CHECK(b.at(4, 2) == Rat(1));
    CHECK(b.at(2, 4) == Rat(1));

    auto trace = reduce_to_2stable(spec);
    CHECK(trace.steps.size() == 1);
}

TEST_CASE("disconnected class subgroup scales the quotient exponents") {
    // kernel of the complement weights {(0,4),(0,4)} has four components;
    // the eliminated subgroup is cut out by twice the primitive relation
    RepSpec spec = rep::make_spec(2, iw({{1, 2}, {1, 0}, {0, 4}, {0, 4}}));
    auto [reduced, step] = reduce_step(spec);
    CHECK(step.class_orbit == std::vector<std::vector<std::size_t>>{{0, 1}});
    CHECK(step.relations[0].combination == std::vector<Int>{0, 2});
    CHECK(step.multipliers == std::vector<Int>{2});
    CHECK_FALSE(step.folded);
    CHECK(reduced.m == 1);
    CHECK(reduced.v0_dim == 1);
    CHECK(reduced.weights.items == iw({{1}, {1}, {1}}));
}

TEST_CASE("non-quarter-turn folded rotations drop the generators with a warning") {
    RepSpec spec = rep::make_spec(1, iw({{1}, {1}}));
    auto g = rep::identity_element(spec);
    g.rot[0] = Rat(1, 3);
    spec.generators = {g};
    auto [reduced, step] = reduce_step(spec);
    CHECK(step.folded);
    CHECK_FALSE(step.group_propagated);
    CHECK_FALSE(step.warning.empty());
    CHECK(reduced.generators.empty());
    CHECK(reduced.v0_dim == 3);
}

TEST_CASE("quarter-turn folded rotations propagate exactly") {
    RepSpec spec = rep::make_spec(1, iw({{1}, {1}}));
    auto g = rep::identity_element(spec);
    g.rot[0] = Rat(1, 2);
    spec.generators = {g};
    auto [reduced, step] = reduce_step(spec);
    CHECK(step.folded);
    CHECK(step.group_propagated);
    REQUIRE(reduced.generators.size() == 1);
    const auto& b = reduced.generators[0].v0_block;
    // half turn on the folded complex block
    CHECK(b.at(1, 1) == Rat(-1));
    CHECK(b.at(2, 2) == Rat(-1));
    CHECK(b.at(0, 0) == Rat(1));
}

TEST_CASE("generator propagation is a homomorphism") {
    // generators g, h and g*h must propagate to g', h', g'*h'
    RepSpec spec = rep::make_spec(2, iw({{1, 0}, {1, 0}, {0, 1}, {0, 1}}));
    auto swap = rep::identity_element(spec);
    swap.perm = {2, 3, 0, 1};
    auto conj = rep::identity_element(spec);
    conj.conj.assign(4, true);
    auto both = rep::compose(swap, conj);
    spec.generators = {swap, conj, both};
    auto [reduced, step] = reduce_step(spec);
    REQUIRE(step.group_propagated);
    REQUIRE(reduced.generators.size() == 3);
    CHECK(reduced.generators[2] ==
          rep::compose(reduced.generators[0], reduced.generators[1]));
}

TEST_CASE("reduction is idempotent at the fixpoint") {
    for (std::uint64_t t = 0; t < 200; ++t) {
        auto p = testsup::random_multiset(131, t, 6, 3, -2, 2);
        if (p.items.empty()) continue;
        bool has_zero = false;
        for (std::size_t i = 0; i < p.items.size(); ++i)
            if (p.item_is_zero(i)) has_zero = true;
        if (has_zero) continue;
        if (lin::rank(p.column_matrix()) != p.m) continue;
        if (!ws::is_q_stable(p, 1)) continue;
        RepSpec spec = rep::make_spec(p.m, p.items);
        auto trace = reduce_to_2stable(spec);
        CHECK(ws::is_q_stable(trace.final_spec.weights, 2));
        auto again = reduce_to_2stable(trace.final_spec);
        CHECK(again.steps.empty());
        CHECK(again.final_spec.weights.items == trace.final_spec.weights.items);
        CHECK(again.final_spec.v0_dim == trace.final_spec.v0_dim);
    }
}
