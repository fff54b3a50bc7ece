#pragma once

#include "orbispace/matrix.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace orbi::lin {

// Integer lattice given by an independent basis, stored as rows in Hermite
// normal form so equal lattices compare equal. `saturated` is recorded by the
// producers that guarantee it (integer_kernel does).
struct Lattice {
    std::size_t ambient_dim = 0;
    std::vector<std::vector<Int>> basis;  // HNF rows, linearly independent
    bool saturated = false;

    bool operator==(const Lattice& other) const = default;
};

struct SnfResult {
    IntMat u, s, v;  // u * m * v == s, u and v unimodular, s diagonal d1 | d2 | ...
};

SnfResult smith_normal_form(const IntMat& m);

// Canonical HNF row basis of the lattice spanned by `rows`; zero rows dropped.
std::vector<std::vector<Int>> hermite_row_basis(std::vector<std::vector<Int>> rows);

// Saturated lattice {d : d^T m = 0}; rows of m index the coordinates of d.
Lattice integer_kernel(const IntMat& m);

// Membership of delta (mod 1) in the subtorus annihilated by d: true iff
// d * delta is an integer for every basis vector. Rejects non-saturated d.
bool in_subtorus(const std::vector<Rat>& delta, const Lattice& d);

// True iff v lies in the lattice spanned by `rows` (as an integer combination).
bool lattice_member(const std::vector<Int>& v, const std::vector<std::vector<Int>>& rows);

// Honest intersection of the two row lattices (no saturation applied).
std::vector<std::vector<Int>> lattice_intersection(const std::vector<std::vector<Int>>& a,
                                                   const std::vector<std::vector<Int>>& b,
                                                   std::size_t ambient_dim);

bool lattice_is_saturated(const std::vector<std::vector<Int>>& rows, std::size_t ambient_dim);

// Solution set of  a * delta == b (mod Z^k)  over delta in the torus T^n,
// described through the Smith form: delta = v * e with e_i pinned modulo
// 1/s_i on torsion coordinates and unconstrained on free ones.
struct TorusSolution {
    std::size_t n = 0;
    std::vector<Rat> particular;                    // one solution, entries in [0,1)
    IntMat v;                                       // unimodular coordinate change
    std::vector<std::pair<std::size_t, Int>> torsion;  // (index into e, invariant factor > 1)
    std::vector<std::size_t> free_idx;              // indices of unconstrained e coordinates

    std::vector<Rat> at(const std::vector<Rat>& e) const;  // delta for given e
};

std::optional<TorusSolution> solve_torus_congruences(const IntMat& a, const std::vector<Rat>& b);

// All solutions when the solution set is finite (no free coordinates).
// Throws CapExceeded when more than `cap` solutions would be produced.
std::vector<std::vector<Rat>> enumerate_finite_solutions(const TorusSolution& sol, std::size_t cap);

}  // namespace orbi::lin
