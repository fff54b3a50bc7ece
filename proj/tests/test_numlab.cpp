#include "doctest.h"

#include "orbispace/numlab.hpp"

using namespace orbi;
using namespace orbi::lab;

namespace {

rep::RepSpec scalar3() {
    return rep::make_spec(1, {{Int(1)}, {Int(1)}, {Int(1)}});
}

}  // namespace

TEST_CASE("materialize pinned blocks") {
    auto spec = rep::make_spec(1, {{Int(1)}});
    auto id = rep::identity_element(spec);
    auto m = materialize(spec, id);
    CHECK(m[0][0] == doctest::Approx(1.0));
    CHECK(m[1][1] == doctest::Approx(1.0));
    CHECK(m[0][1] == doctest::Approx(0.0));

    id.rot[0] = Rat(1, 4);
    auto q = materialize(spec, id);
    CHECK(q[0][0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q[0][1] == doctest::Approx(-1.0));
    CHECK(q[1][0] == doctest::Approx(1.0));
    CHECK(q[1][1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("antilinear swap has float rank 3") {
    auto spec = scalar3();
    auto g = rep::identity_element(spec);
    g.perm = {0, 2, 1};
    g.conj.assign(3, true);
    auto m = materialize(spec, g);
    for (std::size_t i = 0; i < m.size(); ++i) m[i][i] -= 1.0;
    CHECK(float_rank(m) == 3);
    CHECK(orthogonality_defect(spec, materialize(spec, g)) < kAlgebraTol);
}

TEST_CASE("tor quotient map pinned values") {
    auto img = tor_quotient_map({{1.0, 0.0}, {0.0, 0.0}}, {Int(1), Int(1)});
    CHECK(img.radial[0] == doctest::Approx(0.5));
    CHECK(img.radial[1] == doctest::Approx(-0.5));
    CHECK(std::abs(img.monomial) == doctest::Approx(0.0));

    auto img2 = tor_quotient_map({{1.0, 0.0}, {1.0, 0.0}}, {Int(1), Int(1)});
    CHECK(img2.radial[0] == doctest::Approx(0.0));
    CHECK(img2.radial[1] == doctest::Approx(0.0));
    CHECK(img2.monomial.real() == doctest::Approx(1.0));
    CHECK(img2.monomial.imag() == doctest::Approx(0.0));
}

TEST_CASE("quaternion map pinned values") {
    Quaternion one{1.0, 0.0, 0.0, 0.0};
    auto i = quaternion_map(one);
    CHECK(i[0] == doctest::Approx(0.0));
    CHECK(i[1] == doctest::Approx(1.0));

    Quaternion j{0.0, 0.0, 1.0, 0.0};
    auto mj = quaternion_map(j);  // (j i)(-j) = -i
    CHECK(mj[0] == doctest::Approx(0.0));
    CHECK(mj[1] == doctest::Approx(-1.0));
    CHECK(mj[2] == doctest::Approx(0.0));
    CHECK(mj[3] == doctest::Approx(0.0));
}

TEST_CASE("verify suite passes on healthy specs and flags corruption") {
    auto trivial = rep::make_spec(0, {});
    for (const auto& check : verify_suite(trivial, 0, 50)) {
        CAPTURE(check.check);
        CHECK(check.pass);
    }

    auto spec = scalar3();
    spec.generators = {rep::identity_element(spec)};
    spec.generators[0].conj.assign(3, true);
    for (const auto& check : verify_suite(spec, 1, 50)) {
        CAPTURE(check.check);
        CHECK(check.pass);
    }

    // corrupted generator: non-orthogonal V0 block must blow the defect
    auto bad = rep::make_spec(1, {{Int(1)}}, 1);
    auto g = rep::identity_element(bad);
    g.v0_block.at(0, 0) = Rat(3, 2);
    bad.generators = {g};
    bool flagged = false;
    for (const auto& check : verify_suite(bad, 2, 20))
        if (!check.pass && check.max_defect > 1e-3) flagged = true;
    CHECK(flagged);
}
