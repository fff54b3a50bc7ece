#pragma once

#include "orbispace/lattice.hpp"
#include "orbispace/weightset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace orbi::rep {

// Group element of a monomial representation: permutes the complex lines,
// rotating line j by e^{2 pi i rot[j]} (composed with complex conjugation when
// conj[j] is set) into slot perm[j], plus an orthogonal block on the real
// part V0. Left action: (g z)_{perm[j]} = e^{2 pi i rot[j]} * conj_j(z_j).
struct MonomialElement {
    std::vector<std::size_t> perm;
    std::vector<bool> conj;
    std::vector<Rat> rot;  // entries kept in [0,1)
    lin::RatMatrix v0_block;

    bool operator==(const MonomialElement& other) const = default;
};

struct Caps {
    std::size_t group_order_cap = 20000;
    std::size_t iv_trials = 2000;
    std::uint64_t seed = 0;
};

// Full description of the representation: torus of rank m acting on one
// complex line per weight, a fixed real block V0 with its Gram form, and the
// monomial generators of the component group.
struct RepSpec {
    std::size_t m = 0;
    ws::WeightMultiset weights;          // all items nonzero, spanning Q^m
    std::size_t v0_dim = 0;
    lin::RatMatrix v0_gram;              // positive definite; identity by default
    std::vector<MonomialElement> generators;
    std::vector<std::string> generator_names;
    Caps caps;

    std::size_t lines() const { return weights.items.size(); }
    std::size_t real_dim() const { return 2 * lines() + v0_dim; }
};

RepSpec make_spec(std::size_t m, std::vector<std::vector<Int>> weights, std::size_t v0_dim = 0);

struct AdInfo {
    lin::RatMatrix ad;             // induced matrix on the torus algebra
    std::size_t rk_e_minus_ad = 0;
    std::size_t dim_ker_e_minus_g = 0;
    std::size_t rk_e_minus_g = 0;
    long omega = 0;
    bool in_omega = false;
};

MonomialElement identity_element(const RepSpec& spec);
MonomialElement compose(const MonomialElement& g, const MonomialElement& h);
MonomialElement inverse_element(const RepSpec& spec, const MonomialElement& g);

// Torus element with rotation vector delta (and identity on V0).
MonomialElement torus_element(const RepSpec& spec, const std::vector<Rat>& delta);

// g composed with the torus element of delta (right translate).
MonomialElement translated(const RepSpec& spec, const MonomialElement& g,
                           const std::vector<Rat>& delta);

// Exact identity of an element (not of its coset).
std::string element_key(const MonomialElement& g);

// Solves ad * weight_j = s_j * weight_{perm(j)} for the induced torus matrix;
// throws InconsistentAd when the equations are contradictory.
lin::RatMatrix ad_matrix(const RepSpec& spec, const MonomialElement& g);

// Checks shape, Ad consistency, weight-multiset preservation up to sign and
// V0 orthogonality for every generator.
std::vector<AdInfo> validate(const RepSpec& spec);

// Exact rank data of E - g, computed from the cycle structure of the line
// permutation: an odd-conjugation cycle fixes a real line; an even one fixes
// a complex line iff its signed rotation sum vanishes mod 1.
AdInfo omega_invariants(const RepSpec& spec, const MonomialElement& g);

struct OmegaWitness {
    enum class State { Yes, No, Capped } state = State::No;
    std::optional<MonomialElement> witness;  // translate with omega in {0,2}
};

struct Coset {
    MonomialElement rep;
    lin::RatMatrix ad;
    std::string key;
};

// Component group G/G0: closure of the generators modulo the image subtorus.
struct ComponentGroup {
    std::vector<Coset> cosets;               // cosets[0] is the trivial coset
    lin::Lattice subtorus_ann;               // annihilator of the weight subtorus
    std::unordered_map<std::string, std::size_t> index;

    const Coset& trivial() const { return cosets[0]; }
    std::size_t size() const { return cosets.size(); }
};

// Canonical coset key of an element: permutation, conjugation flags, V0 block
// and the residues of the rotation vector against the conjugation-adjusted
// annihilator lattice.
std::string coset_key(const RepSpec& spec, const lin::Lattice& ann, const MonomialElement& g);

ComponentGroup component_group(const RepSpec& spec);

// True iff h lies in the enumerated group (same coset as some listed one).
bool element_in_group(const RepSpec& spec, const ComponentGroup& group, const MonomialElement& h);

// Decides whether some torus translate of the coset representative has
// omega in {0,2}; exact vanishing patterns of the linear-cycle rotation sums
// are enumerated through the congruence solver.
OmegaWitness coset_meets_omega(const RepSpec& spec, const ComponentGroup& group, const Coset& c);

inline constexpr std::size_t kMaxLinearCycles = 16;

// Partition block: a set of lines, or the V0 block (include_v0).
struct PartitionBlock {
    std::vector<std::size_t> lines;
    bool include_v0 = false;
};

// True iff some representative of the coset is a product of per-block
// elements of G (identity outside each block).
bool factors_over_partition(const RepSpec& spec, const ComponentGroup& group, const Coset& c,
                            const std::vector<PartitionBlock>& partition);

// Closure of the given cosets equals the whole component group.
bool cosets_generate(const RepSpec& spec, const ComponentGroup& group,
                     const std::vector<std::size_t>& subset);

}  // namespace orbi::rep
