#include "wmk/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace wmk {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_)
    throw DimensionMismatch("matrix product " + std::to_string(rows_) + "x" +
                            std::to_string(cols_) + " * " +
                            std::to_string(rhs.rows_) + "x" +
                            std::to_string(rhs.cols_));
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j)
        out(i, j) += a * rhs(k, j);
    }
  return out;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i == 0 ? "[" : " ") << "[";
    for (std::size_t j = 0; j < cols_; ++j)
      os << (j ? " " : "") << (*this)(i, j).str();
    os << "]" << (i + 1 == rows_ ? "]" : "\n");
  }
  if (rows_ == 0) os << "[]";
  return os.str();
}

namespace {

void row_swap(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void col_swap(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row[t] += q * row[s]
void row_addmul(IntMatrix& m, std::size_t t, std::size_t s, const Int& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(t, j) += q * m(s, j);
}

// col[t] += q * col[s]
void col_addmul(IntMatrix& m, std::size_t t, std::size_t s, const Int& q) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, t) += q * m(i, s);
}

void row_negate(IntMatrix& m, std::size_t t) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(t, j) = -m(t, j);
}

}  // namespace

SnfDecomposition smith_normal_form(const IntMatrix& A) {
  const std::size_t m = A.rows(), n = A.cols();
  SnfDecomposition s;
  s.D = A;
  s.U = IntMatrix::identity(m);
  s.V = IntMatrix::identity(n);
  IntMatrix& D = s.D;

  const std::size_t steps = std::min(m, n);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      // Minimal-absolute-value pivot in the submatrix [t..m) x [t..n),
      // ties broken by smallest row then column.
      std::size_t pi = m, pj = n;
      Int best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (D(i, j) == 0) continue;
          Int a = abs(D(i, j));
          if (pi == m || a < best) {
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (pi == m) {  // submatrix is zero
        t = steps;
        break;
      }
      if (pi != t) {
        row_swap(D, t, pi);
        row_swap(s.U, t, pi);
      }
      if (pj != t) {
        col_swap(D, t, pj);
        col_swap(s.V, t, pj);
      }

      bool cleared = true;
      for (std::size_t r = t + 1; r < m; ++r) {
        if (D(r, t) == 0) continue;
        Int q = D(r, t) / D(t, t);  // truncated; remainder has smaller |.|
        if (q != 0) {
          row_addmul(D, r, t, -q);
          row_addmul(s.U, r, t, -q);
        }
        if (D(r, t) != 0) cleared = false;
      }
      for (std::size_t c = t + 1; c < n; ++c) {
        if (D(t, c) == 0) continue;
        Int q = D(t, c) / D(t, t);
        if (q != 0) {
          col_addmul(D, c, t, -q);
          col_addmul(s.V, c, t, -q);
        }
        if (D(t, c) != 0) cleared = false;
      }
      if (!cleared) continue;  // smaller entries appeared; re-pick the pivot

      // Pivot divides the rest of the submatrix?  If not, pull the offending
      // row into row t and keep reducing.
      bool fixed = true;
      for (std::size_t r = t + 1; r < m && fixed; ++r)
        for (std::size_t c = t + 1; c < n && fixed; ++c)
          if (D(r, c) % D(t, t) != 0) {
            row_addmul(D, t, r, 1);
            row_addmul(s.U, t, r, 1);
            fixed = false;
          }
      if (fixed) break;
    }
    if (t >= steps) break;
    if (D(t, t) < 0) {
      row_negate(D, t);
      row_negate(s.U, t);
    }
  }

  for (std::size_t i = 0; i < steps; ++i)
    if (D(i, i) != 0) s.invariant_factors.push_back(D(i, i));
  s.rank = s.invariant_factors.size();
  return s;
}

AbelianGroupInvariants abelian_invariants(const IntMatrix& relations,
                                          std::size_t num_generators) {
  if (relations.rows() > 0 && relations.cols() != num_generators)
    throw DimensionMismatch("relation matrix has " +
                            std::to_string(relations.cols()) +
                            " columns for " + std::to_string(num_generators) +
                            " generators");
  SnfDecomposition s = smith_normal_form(relations);
  AbelianGroupInvariants inv;
  inv.free_rank = num_generators - s.rank;
  for (const Int& d : s.invariant_factors)
    if (d > 1) inv.torsion.push_back(d);
  return inv;
}

bool group_iso_check(const AbelianGroupInvariants& a,
                     const AbelianGroupInvariants& b) {
  return a == b;
}

IntegerLattice::IntegerLattice(std::vector<std::vector<Int>> rows,
                               std::size_t cols)
    : cols_(cols) {
  for (const auto& r : rows)
    if (r.size() != cols)
      throw DimensionMismatch("lattice generator of length " +
                              std::to_string(r.size()) + ", expected " +
                              std::to_string(cols));
  std::vector<std::vector<Int>> work = std::move(rows);
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols_ && pivot_row < work.size(); ++c) {
    for (;;) {
      // Minimal-absolute-value entry in column c at or below pivot_row.
      std::size_t best = work.size();
      for (std::size_t i = pivot_row; i < work.size(); ++i) {
        if (work[i][c] == 0) continue;
        if (best == work.size() || abs(work[i][c]) < abs(work[best][c]))
          best = i;
      }
      if (best == work.size()) break;  // column clear; no pivot here
      std::swap(work[pivot_row], work[best]);
      bool clear = true;
      for (std::size_t i = pivot_row + 1; i < work.size(); ++i) {
        if (work[i][c] == 0) continue;
        Int q = work[i][c] / work[pivot_row][c];
        if (q != 0)
          for (std::size_t j = 0; j < cols_; ++j)
            work[i][j] -= q * work[pivot_row][j];
        if (work[i][c] != 0) clear = false;
      }
      if (clear) {
        if (work[pivot_row][c] < 0)
          for (auto& x : work[pivot_row]) x = -x;
        pivot_cols_.push_back(c);
        ++pivot_row;
        break;
      }
    }
  }
  work.resize(pivot_row);
  basis_ = std::move(work);
}

bool IntegerLattice::contains(std::vector<Int> v) const {
  if (v.size() != cols_)
    throw DimensionMismatch("membership query of length " +
                            std::to_string(v.size()) + ", expected " +
                            std::to_string(cols_));
  for (std::size_t p = 0; p < basis_.size(); ++p) {
    const std::size_t c = pivot_cols_[p];
    if (v[c] == 0) continue;
    if (v[c] % basis_[p][c] != 0) return false;
    Int q = v[c] / basis_[p][c];
    for (std::size_t j = 0; j < cols_; ++j) v[j] -= q * basis_[p][j];
  }
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace wmk
