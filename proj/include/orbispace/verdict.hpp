#pragma once

#include "orbispace/reducer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace orbi::ver {

enum class Topological { Yes, No, Unknown };
enum class SmoothAllD { No, Open, Unknown };

const char* to_string(Topological t);
const char* to_string(SmoothAllD s);

enum class TheoremTag {
    Prop1st,
    Cor2dim,
    Cor1dim,
    Mich,
    Submain,
    MainNecessity,
    MainSufficiency,
    Mainp,
    AdGE,
    Abel,
    Main1,
    GrHi,
    HG3,
    GiHr,
    TorExample,
    ProductRule,
    Reduction,
};

const char* tag_name(TheoremTag tag);

struct CertStep {
    TheoremTag tag;
    std::string detail;
    std::string witness;  // optional serialized object

    bool operator==(const CertStep&) const = default;
};

// Decision pair: is the orbit space a topological manifold, and can the
// stabilized quotient be a smooth manifold for any flat summand. A yes on the
// first leaves the second open; a no forces a no.
struct Verdict {
    Topological topological = Topological::Unknown;
    SmoothAllD smooth = SmoothAllD::Unknown;
    bool capped = false;  // some decision hit an enumeration cap
    std::vector<CertStep> certificate;
};

struct ReflectionReport {
    std::size_t order = 0;
    std::vector<rep::MonomialElement> reflections;   // generating reflections found
    std::vector<rep::MonomialElement> elements;      // full closure
    bool irreducible_c = false;
    std::optional<std::pair<Int, Int>> imprimitive_pq;  // (p, q) with H = G(pq, p, 3)
    bool degrees_distinct = false;
};

struct CondIv {
    enum class Status { Proved, Falsified, Inconclusive } status = Status::Inconclusive;
    std::string witness;
};

struct MainConditions {
    bool count_ok = false;       // m + 2 nonzero weights, 2-stable
    bool structure_ok = false;   // line permutation pattern admissible
    bool minus_e_ok = false;     // coset acting by -E on the torus, lines fixed
    CondIv iv;
};

// Representation of the subgroup fixing everything outside the given lines,
// rebuilt over its own torus; generators are the reachable restricted
// elements of the enumerated component group.
rep::RepSpec factor_spec(const rep::RepSpec& spec, const rep::ComponentGroup& group,
                         const std::vector<std::size_t>& lines);

// Orthogonal matrices through which the group acts on V0 alone.
std::vector<lin::RatMatrix> v0_factor_matrices(const rep::RepSpec& spec,
                                               const rep::ComponentGroup& group);

Verdict check_finite_case(const std::vector<lin::RatMatrix>& mats, const lin::RatMatrix& gram,
                          std::size_t cap);

MainConditions check_main_conditions(const rep::RepSpec& factor,
                                     const rep::ComponentGroup& group);

ReflectionReport reflection_subgroup(const rep::RepSpec& factor, const rep::ComponentGroup& group);

Verdict check_dim1(const rep::RepSpec& factor, const rep::ComponentGroup& group);

// Random search for a vector with finite stabilizer not generated by its
// omega part; a returned witness is verified exactly.
std::optional<std::string> sample_condition_iv(const rep::RepSpec& factor,
                                               const rep::ComponentGroup& group,
                                               std::uint64_t seed, std::size_t trials);

struct AnalyzeOutput {
    Verdict verdict;
    red::ReductionTrace trace;
};

AnalyzeOutput analyze_with_trace(const rep::RepSpec& spec);
Verdict analyze(const rep::RepSpec& spec);

}  // namespace orbi::ver
