#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <string>
#include <vector>

#include "wmk/errors.hpp"

namespace wmk {

using Int = boost::multiprecision::cpp_int;

// Dense matrix over arbitrary-precision integers.  Row/column counts are
// fixed at construction; entries are mutable.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const {
    return a_[r * cols_ + c];
  }

  IntMatrix operator*(const IntMatrix& rhs) const;  // DimensionMismatch
  bool operator==(const IntMatrix&) const = default;

  std::string str() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

// U * A * V = D with U, V unimodular and D diagonal, each diagonal entry
// positive and dividing the next.  Pivot choice is the minimal absolute value
// in the working submatrix (ties: smallest row, then column), so the
// decomposition is deterministic.
struct SnfDecomposition {
  IntMatrix U, D, V;
  std::vector<Int> invariant_factors;  // nonzero diagonal of D
  std::size_t rank = 0;
};

SnfDecomposition smith_normal_form(const IntMatrix& A);

// Finitely generated abelian group Z^free_rank + sum Z/d_i, with the trivial
// factors d = 1 dropped.
struct AbelianGroupInvariants {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;  // factors > 1, each dividing the next

  bool operator==(const AbelianGroupInvariants&) const = default;
};

// Invariants of the abelian group presented by `relations` (one row per
// relation) on `num_generators` generators.
AbelianGroupInvariants abelian_invariants(const IntMatrix& relations,
                                          std::size_t num_generators);

bool group_iso_check(const AbelianGroupInvariants& a,
                     const AbelianGroupInvariants& b);

// Subgroup of Z^n spanned by integer row vectors, held as an integer row
// echelon basis; membership is exact.
class IntegerLattice {
 public:
  IntegerLattice(std::vector<std::vector<Int>> rows, std::size_t cols);

  bool contains(std::vector<Int> v) const;
  std::size_t rank() const { return basis_.size(); }
  std::size_t cols() const { return cols_; }
  const std::vector<std::vector<Int>>& basis() const { return basis_; }

 private:
  std::size_t cols_ = 0;
  std::vector<std::vector<Int>> basis_;      // echelon rows, positive pivots
  std::vector<std::size_t> pivot_cols_;
};

}  // namespace wmk
