#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wmk/errors.hpp"
#include "wmk/graph.hpp"
#include "wmk/lattice.hpp"

namespace wmk {

using Coeff = std::int64_t;

// Generator of a graph monoid presentation: either a vertex generator or one
// of the auxiliary q-generators attached to a vertex (q:v:i, 1 <= i < k_v).
struct GeneratorName {
  enum class Kind { Vertex, Q };
  Kind kind = Kind::Vertex;
  std::string vertex;
  int index = 0;  // Q only, >= 1

  static GeneratorName vertex_gen(std::string v) {
    return {Kind::Vertex, std::move(v), 0};
  }
  static GeneratorName q_gen(std::string v, int i) {
    return {Kind::Q, std::move(v), i};
  }

  bool is_q() const { return kind == Kind::Q; }
  std::string str() const;  // "v" or "q:v:1"

  // Structural parse of a rendered name ("q:<vertex>:<i>" makes a Q).
  static GeneratorName parse(const std::string& s);

  auto operator<=>(const GeneratorName&) const = default;
};

// Finitely supported formal sum of generators with coefficients in N_0.
class Element {
 public:
  Element() = default;
  static Element single(const GeneratorName& g, Coeff c = 1);

  Coeff coeff(const GeneratorName& g) const;
  void set_coeff(const GeneratorName& g, Coeff c);  // ValidationError if c < 0

  const std::map<GeneratorName, Coeff>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Coeff total() const;  // sum of coefficients

  Element& operator+=(const Element& rhs);
  Element operator+(const Element& rhs) const;
  Element scaled(Coeff c) const;

  // Replace y by repl (substituting coeff(y) copies of repl).
  Element substitute(const GeneratorName& y, const Element& repl) const;

  std::string str() const;  // name-sorted; display via presentation order

  auto operator<=>(const Element&) const = default;

 private:
  std::map<GeneratorName, Coeff> terms_;  // no zero coefficients stored
};

// Unordered as a constraint; stored in definition orientation.
struct Relation {
  Element lhs, rhs;
  bool operator==(const Relation&) const = default;

  // Orientation-independent key for deduplication.
  std::pair<Element, Element> canonical_key() const;
};

// Commutative monoid presentation <generators | lhs = rhs, ...>.
// Relations with lhs == rhs are dropped at construction; duplicates are kept
// (deduplicated() removes unordered duplicates).
class MonoidPresentation {
 public:
  MonoidPresentation() = default;
  MonoidPresentation(std::vector<GeneratorName> generators,
                     std::vector<Relation> relations);

  const std::vector<GeneratorName>& generators() const { return generators_; }
  const std::vector<Relation>& relations() const { return relations_; }

  bool has_generator(const GeneratorName& g) const;
  std::size_t generator_index(const GeneratorName& g) const;  // ValidationError

  std::vector<Coeff> to_vec(const Element& e) const;
  Element from_vec(const std::vector<Coeff>& v) const;

  std::string render(const Element& e) const;  // declaration order
  std::string render_relation(std::size_t i) const;

  MonoidPresentation deduplicated() const;

  bool operator==(const MonoidPresentation&) const = default;

 private:
  std::vector<GeneratorName> generators_;
  std::vector<Relation> relations_;
  std::map<GeneratorName, std::size_t> index_;
};

// Abelian group presentation: one relation per matrix row, columns aligned
// with the generator sequence.
struct GroupPresentation {
  std::vector<GeneratorName> generators;
  IntMatrix relations;  // relations.cols() == generators.size()

  std::size_t generator_index(const GeneratorName& g) const;
  bool operator==(const GroupPresentation&) const = default;
};

// --- builders ---------------------------------------------------------------

// V-monoid of a weighted graph: generators are all vertices plus q:v:1 ..
// q:v:(k_v - 1) for each vertex, and for every vertex v with stratification
// (weights w_0 < ... < w_k, counts n_0 <= ... <= n_k) there is one relation
//   q:v:(i-1) + (w_i - w_{i-1}) v  =  q:v:i + sum of r(e) over outgoing e
//                                     with w(e) = w_i
// for 1 <= i <= k (q:v:0 and q:v:k read as zero).
MonoidPresentation build_v_monoid(const WeightedGraph& g);

// Unweighted graph monoid: v = sum of r(e) over s^-1(v) for emitting v.
// Requires every vertex to emit edges of at most one distinct weight.
MonoidPresentation build_graph_monoid_classic(const WeightedGraph& g);

// K_0 relation matrix: one row per emitting vertex encoding
// w(v) * v - sum of r(e) over s^-1(v); sinks contribute no row.
GroupPresentation build_k0(const WeightedGraph& g);

// --- elimination ------------------------------------------------------------

struct EliminationStep {
  GeneratorName eliminated;
  Element substitution;        // value of the eliminated generator
  std::size_t relation_index;  // in the presentation the step was applied to
};

struct EliminationLog {
  std::vector<EliminationStep> steps;

  // Map an element of the original presentation into the simplified one by
  // applying the recorded substitutions in order.
  Element apply(const Element& e) const;
};

struct MonoidElimination {
  MonoidPresentation result;
  EliminationStep step;
};

// Remove generator y using relation `relation_index`, which must read
// y = (y-free element) up to orientation.  Throws NotEliminable otherwise,
// IndexOutOfRange for a bad index.
MonoidElimination eliminate_generator(const MonoidPresentation& p,
                                      const GeneratorName& y,
                                      std::size_t relation_index);

struct SimplifyResult {
  MonoidPresentation presentation;
  EliminationLog log;
};

// Repeatedly eliminate generators until none qualifies.  Scan order: first
// q-generators, then vertex generators; within each pass relations in order,
// candidate generators in declaration order.  Unordered-duplicate relations
// are dropped between rounds.
SimplifyResult auto_simplify(const MonoidPresentation& p);

struct GroupEliminationStep {
  GeneratorName eliminated;
  std::vector<std::pair<GeneratorName, Int>> substitution;
  std::size_t relation_index;
};

struct GroupElimination {
  GroupPresentation result;
  GroupEliminationStep step;
};

// Remove generator y using row `relation_index`, in which y's coefficient
// must be +-1.  The defining row is removed; other rows are substituted
// (zero rows are kept).
GroupElimination eliminate_generator(const GroupPresentation& p,
                                     const GeneratorName& y,
                                     std::size_t relation_index);

// Eliminate every q-generator that admits a +-1 coefficient row, first to
// last.  For group completions of V-monoid presentations this leaves a
// presentation on the vertex generators only.
GroupPresentation eliminate_q_generators(const GroupPresentation& p);

// Abelianize-and-group-complete: rows lhs - rhs over the same generators.
GroupPresentation group_completion(const MonoidPresentation& p);

// --- K_0 pipeline -----------------------------------------------------------

AbelianGroupInvariants k0_invariants(const WeightedGraph& g);

struct K0ConsistencyReport {
  IntMatrix direct_matrix;                   // build_k0
  SnfDecomposition direct_snf;
  AbelianGroupInvariants direct_invariants;
  std::vector<GeneratorName> monoid_generators;  // after auto_simplify
  IntMatrix monoid_matrix;                   // group_completion o auto_simplify
  SnfDecomposition monoid_snf;
  AbelianGroupInvariants monoid_invariants;
  bool consistent = false;
};

K0ConsistencyReport k0_consistency(const WeightedGraph& g);

struct ConsistencyFailure : std::runtime_error {
  explicit ConsistencyFailure(const std::string& what)
      : std::runtime_error(what) {}
};

// k0_consistency that throws ConsistencyFailure when the two routes disagree.
K0ConsistencyReport require_k0_consistency(const WeightedGraph& g);

}  // namespace wmk
