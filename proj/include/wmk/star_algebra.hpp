#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wmk/errors.hpp"
#include "wmk/graph.hpp"

namespace wmk {

using Rat = boost::multiprecision::cpp_rational;

// One letter of a *-algebra word: a vertex idempotent, an edge component
// e_i, or its adjoint e_i* (written "ghost" below).
struct Letter {
  enum class Kind { Vertex, Edge, Ghost };
  Kind kind = Kind::Vertex;
  std::string name;  // vertex name, or edge id for Edge/Ghost
  int index = 0;     // component subscript, 1-based; unused for vertices

  static Letter vertex(std::string v) { return {Kind::Vertex, std::move(v), 0}; }
  static Letter edge(std::string e, int i) { return {Kind::Edge, std::move(e), i}; }
  static Letter ghost(std::string e, int i) { return {Kind::Ghost, std::move(e), i}; }

  std::string str() const;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

// A reduced word.  Construction goes through normalize_word, which applies
// the vertex relations: adjacent equal vertices merge, distinct vertices
// annihilate, a vertex adjacent to a compatible edge/ghost letter is
// absorbed, incompatible neighbours annihilate, and a component subscript
// beyond the edge's weight is zero.  nullopt means the word is zero.
struct StarMonomial {
  std::vector<Letter> word;

  std::string str() const;
  friend auto operator<=>(const StarMonomial&, const StarMonomial&) = default;
};

std::optional<StarMonomial> normalize_word(const WeightedGraph& g,
                                           std::vector<Letter> word);

// Left/right interface of a letter: the vertex it absorbs on that side.
std::string letter_source(const WeightedGraph& g, const Letter& l);
std::string letter_range(const WeightedGraph& g, const Letter& l);

// Finite Q-linear combination of reduced words; the involution * reverses
// words and swaps edge letters with their ghosts.
class StarPolynomial {
 public:
  StarPolynomial() = default;

  static StarPolynomial vertex(const WeightedGraph& g, const std::string& v);
  static StarPolynomial edge_letter(const WeightedGraph& g,
                                    const std::string& e, int i);
  static StarPolynomial ghost_letter(const WeightedGraph& g,
                                     const std::string& e, int i);

  bool is_zero() const { return terms_.empty(); }
  const std::map<StarMonomial, Rat>& terms() const { return terms_; }

  void add_term(StarMonomial m, Rat c);  // aggregates, drops zeros

  StarPolynomial operator+(const StarPolynomial& o) const;
  StarPolynomial operator-(const StarPolynomial& o) const;
  StarPolynomial operator-() const;
  StarPolynomial scaled(const Rat& c) const;
  StarPolynomial multiply(const WeightedGraph& g,
                          const StarPolynomial& o) const;
  StarPolynomial star() const;

  std::string str() const;
  bool operator==(const StarPolynomial&) const = default;

 private:
  std::map<StarMonomial, Rat> terms_;  // zero coefficients never stored
};

// Rewriting controls.  The two complete-sum contractions can be disabled
// individually (useful as a negative control); scan_reverse flips the
// deterministic scan order so order-independence is testable.
struct ReductionRules {
  bool use_edge_ghost_sums = true;   // sum over edges of e_i f_j* groups
  bool use_ghost_edge_sums = true;   // sum over components of e_h* f_h groups
  bool scan_reverse = false;
  std::size_t pass_cap = 10000;  // contraction passes before NonTermination
};

// Applies complete-sum contractions until none applies: a group of words
// that differ only in one adjacent pair and jointly exhaust a defining sum
// (missing members being exactly the zero-padded ones) collapses to its
// value, provided all group members carry one common coefficient.  Partial
// sums are never contracted.  Throws NonTermination at the pass cap.
StarPolynomial reduce(const WeightedGraph& g, StarPolynomial p,
                      const ReductionRules& rules = {});

// Matrix over StarPolynomial entries.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  BlockMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  StarPolynomial& at(std::size_t r, std::size_t c);
  const StarPolynomial& at(std::size_t r, std::size_t c) const;

  BlockMatrix multiply(const WeightedGraph& g, const BlockMatrix& o) const;
  BlockMatrix operator-(const BlockMatrix& o) const;
  BlockMatrix star() const;  // transpose with entrywise involution
  BlockMatrix hconcat(const BlockMatrix& o) const;

  // Rows [r0, r1) and columns [c0, c1); throws IndexOutOfRange.
  BlockMatrix block(std::size_t r0, std::size_t r1, std::size_t c0,
                    std::size_t c1) const;

  static BlockMatrix diag(std::vector<StarPolynomial> entries);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<StarPolynomial> entries_;
};

// The structural matrix of an emitting vertex: rows are component indices
// 1..w(v), columns its outgoing edges in weight-then-id order, entry (h, p)
// the letter (e^p)_h -- the zero polynomial where h exceeds the edge's
// weight.  Throws EmptySource for sinks, UnknownVertex otherwise.
BlockMatrix build_A(const WeightedGraph& g, const std::string& v);

struct IdentityCheck {
  std::string name;    // which identity
  std::string vertex;  // which emitting vertex
  bool verified = false;
  std::size_t row = 0, col = 0;  // first failing entry when !verified
  std::string residual;          // its reduced value
};

// Reduces every entry of lhs - rhs; verified iff all vanish.
IdentityCheck verify_identity(const WeightedGraph& g, std::string name,
                              std::string vertex, const BlockMatrix& lhs,
                              const BlockMatrix& rhs,
                              const ReductionRules& rules = {});

struct WitnessReport {
  std::vector<IdentityCheck> checks;
  bool all_verified() const;
};

// Verifies, for each emitting vertex (or just `vertex` if given), the
// witness identities behind the corner-isomorphism decomposition: the full
// matrix identities A A* = v I and A* A = diag of ranges, and per weight
// stratum the complement identity, the truncation isometry, idempotency of
// the complement projection, its annihilation of the stratum block, and the
// two corner factorization products.
WitnessReport verify_theorem_witnesses(const WeightedGraph& g,
                                       const std::optional<std::string>& vertex,
                                       const ReductionRules& rules = {});

}  // namespace wmk
