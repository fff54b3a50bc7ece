#pragma once

#include "orbispace/repmodel.hpp"

#include <string>
#include <vector>

namespace orbi::red {

// One elimination round: the orbit of a non-singleton equivalence class is
// replaced by one new complex line per class (weight = the class combination)
// plus real hyperplane blocks appended to V0. Zero combinations fold the new
// line into V0 instead.
struct ReductionStep {
    std::vector<std::vector<std::size_t>> class_orbit;   // sorted index sets
    std::vector<ws::ClassRelation> relations;            // parallel to class_orbit
    // smallest s > 0 with s * combination inside the integer span of the
    // complement; the eliminated subgroup is cut out by s * relation, so the
    // quotient coordinate carries exponents s * a
    std::vector<Int> multipliers;
    std::vector<std::vector<Int>> new_weights;           // reduced coordinates; empty when folded
    bool folded = false;                                 // combination was zero
    std::size_t m_before = 0, m_after = 0;
    std::size_t v0_before = 0, v0_after = 0;
    bool group_propagated = true;
    std::string warning;
};

struct ReductionTrace {
    std::vector<ReductionStep> steps;
    rep::RepSpec final_spec;
};

// Eliminates the lexicographically smallest non-singleton class (closed into
// an orbit under the generators' line permutations). The reduced spec keeps
// the manifold status of the orbit space.
std::pair<rep::RepSpec, ReductionStep> reduce_step(const rep::RepSpec& spec);

// Iterates reduce_step until the weight multiset is 2-stable.
ReductionTrace reduce_to_2stable(const rep::RepSpec& spec);

}  // namespace orbi::red
