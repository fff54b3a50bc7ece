#pragma once

#include "orbispace/rat.hpp"

#include <cstddef>
#include <vector>

namespace orbi::lin {

// Dense matrix over the rationals, row-major. Entries stay canonical because
// Rat itself is canonical, so operator== is structural equality of values.
class RatMatrix {
  public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RatMatrix identity(std::size_t n);
    static RatMatrix from_rows(const std::vector<std::vector<Rat>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RatMatrix transpose() const;
    RatMatrix operator*(const RatMatrix& other) const;
    RatMatrix operator-(const RatMatrix& other) const;
    bool operator==(const RatMatrix& other) const = default;

    bool is_zero() const;
    std::vector<Rat> apply(const std::vector<Rat>& v) const;  // M * v

  private:
    std::size_t rows_, cols_;
    std::vector<Rat> data_;
};

struct RrefResult {
    RatMatrix reduced;
    std::vector<std::size_t> pivots;
};

// Unique reduced row-echelon form; rank == pivots.size().
RrefResult rref(const RatMatrix& m);

std::size_t rank(const RatMatrix& m);

// Basis of {v : M v = 0} read off the RREF: the vector for free column f has
// entry 1 at f and 0 at every other free column. The weightset module relies
// on this exact normalization.
std::vector<std::vector<Rat>> kernel_basis(const RatMatrix& m);

// Inverse of a square nonsingular matrix; throws InternalContradiction if
// singular (callers establish nonsingularity beforehand).
RatMatrix inverse(const RatMatrix& m);

// Solves A X = B for X when A is square nonsingular.
RatMatrix solve(const RatMatrix& a, const RatMatrix& b);

Rat det(const RatMatrix& m);

// Integer matrix, used by the normal-form routines.
struct IntMat {
    std::size_t rows = 0, cols = 0;
    std::vector<Int> data;

    IntMat() = default;
    IntMat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    static IntMat identity(std::size_t n);
    static IntMat from_rows(const std::vector<std::vector<Int>>& rows);

    Int& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    IntMat operator*(const IntMat& other) const;
    bool operator==(const IntMat& other) const = default;

    RatMatrix to_rat() const;
};

}  // namespace orbi::lin
