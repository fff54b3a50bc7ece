#pragma once

#include "orbispace/repmodel.hpp"

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace orbi::lab {

// Tolerances: algebraic identities in doubles, SVD rank threshold, and the
// statistical orbit-separation bound.
inline constexpr double kAlgebraTol = 1e-9;
inline constexpr double kRankTol = 1e-7;
inline constexpr double kSeparationTol = 1e-3;

using FloatMatrix = std::vector<std::vector<double>>;

// Real matrix of the element: each line j maps onto slot perm[j] as a 2x2
// rotation block (times a reflection when conjugated), then the V0 block.
FloatMatrix materialize(const rep::RepSpec& spec, const rep::MonomialElement& g);

// Number of singular values above kRankTol.
std::size_t float_rank(const FloatMatrix& m);

double orthogonality_defect(const rep::RepSpec& spec, const FloatMatrix& m);

FloatMatrix float_product(const FloatMatrix& a, const FloatMatrix& b);
double max_abs_diff(const FloatMatrix& a, const FloatMatrix& b);

struct TorImage {
    std::vector<double> radial;  // (|z_1|^2, ..., |z_n|^2) minus its mean
    std::complex<double> monomial;
};

// Quotient data of a diagonal subtorus with exponent vector a.
TorImage tor_quotient_map(const std::vector<std::complex<double>>& z, const std::vector<Int>& a);

using Quaternion = std::array<double, 4>;  // (re, i, j, k)

Quaternion quaternion_multiply(const Quaternion& a, const Quaternion& b);
Quaternion quaternion_conjugate(const Quaternion& q);

// v -> v * i * conj(v); the result has no real part.
Quaternion quaternion_map(const Quaternion& v);

struct LabCheck {
    std::string check;
    std::size_t trials = 0;
    double max_defect = 0.0;
    bool pass = false;
};

// Homomorphism, orthogonality, exact-vs-float rank and quotient-map checks,
// sampled with the counter RNG keyed by (seed, trial).
std::vector<LabCheck> verify_suite(const rep::RepSpec& spec, std::uint64_t seed,
                                   std::size_t trials = 200);

}  // namespace orbi::lab
