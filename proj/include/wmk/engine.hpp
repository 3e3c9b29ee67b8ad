#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "wmk/lattice.hpp"
#include "wmk/presentation.hpp"

namespace wmk {

// Dense exponent vector aligned with a presentation's generator sequence.
using Vec = std::vector<Coeff>;

struct VecHash {
  std::size_t operator()(const Vec& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Coeff c : v) {
      h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

enum class Verdict { Equal, NotEqual, Unknown };

// One application of an original relation: forward replaces lhs by rhs
// inside the current vector, backward the reverse.
struct TraceStep {
  std::size_t relation = 0;
  bool forward = true;
};

// Certificate for Equal: applying `steps` to `start` must end at `end`,
// with every intermediate staying componentwise nonnegative.
struct RewriteTrace {
  Vec start, end;
  std::vector<TraceStep> steps;
};

// Rewrite rule produced by completion, oriented from > to in graded reverse
// lexicographic order; `proof` replays from -> to using original relations.
struct CompletedRule {
  Vec from, to;
  std::vector<TraceStep> proof;
};

struct DecisionResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<RewriteTrace> trace;                // Equal
  std::optional<std::vector<Int>> lattice_witness;  // NotEqual: a-b not in
                                                    // the difference lattice
  std::optional<std::pair<Vec, Vec>> normal_forms;  // NotEqual: distinct
                                                    // canonical forms
  bool disjoint_complete_classes = false;           // NotEqual: finished BFS
  std::string note;                                 // Unknown: what ran out
};

struct EngineOptions {
  std::size_t completion_pair_cap = 100000;  // S-pairs processed
  std::size_t bfs_node_cap = 100000;
  int degree_bound = 8;  // default degree bound for bounded searches
};

// true iff a > b in graded reverse lexicographic order
bool grevlex_greater(const Vec& a, const Vec& b);

// Word-problem engine for a finitely presented commutative monoid.
// Construction computes the difference lattice (NotEqual fast path) and a
// Buchberger-style completion of the relation set viewed as pure-difference
// binomials; each completed rule carries a replayable proof over the
// original relations.  Queries are safe to issue concurrently.
class CongruenceEngine {
 public:
  explicit CongruenceEngine(MonoidPresentation p, EngineOptions opt = {});

  const MonoidPresentation& presentation() const { return pres_; }
  const EngineOptions& options() const { return opt_; }
  bool completion_succeeded() const { return completion_ok_; }
  const std::vector<CompletedRule>& rules() const { return rules_; }
  const IntegerLattice& difference_lattice() const { return lattice_; }
  const std::vector<std::pair<Vec, Vec>>& relation_vectors() const {
    return rel_vecs_;
  }

  // Three stages: (1) difference-lattice membership of a - b (failure is a
  // certified NotEqual); (2) canonical forms under the completed system
  // (decisive when completion finished; still sound for Equal otherwise);
  // (3) bidirectional bounded BFS.  Unknown only when completion was capped
  // and the BFS hit its node cap.
  DecisionResult equal(const Element& a, const Element& b) const;
  DecisionResult equal(const Vec& a, const Vec& b) const;

  // Reduced form under the completed rules (memoized).  Canonical iff
  // completion_succeeded().
  Vec normal_form(const Vec& a) const;
  std::pair<Vec, std::vector<TraceStep>> normal_form_traced(const Vec& a) const;

  // Validates a trace against the original relations; on failure *err names
  // the failing step.
  bool replay(const RewriteTrace& t, std::string* err = nullptr) const;

  struct ClassEnumeration {
    std::vector<Vec> elements;  // BFS order from the seed
    bool complete = false;
  };
  ClassEnumeration class_enumerate(const Vec& a, std::size_t node_cap) const;

  Vec to_vec(const Element& e) const { return pres_.to_vec(e); }
  Element from_vec(const Vec& v) const { return pres_.from_vec(v); }

 private:
  void complete_rules();
  bool reduce_once(Vec& v, std::size_t* rule_idx) const;

  MonoidPresentation pres_;
  EngineOptions opt_;
  std::vector<std::pair<Vec, Vec>> rel_vecs_;
  IntegerLattice lattice_{{}, 0};
  std::vector<CompletedRule> rules_;
  bool completion_ok_ = false;

  mutable std::mutex memo_mu_;
  mutable std::unordered_map<Vec, Vec, VecHash> nf_memo_;
};

// --- derived decision procedures ---------------------------------------------

struct AtomResult {
  enum class Status { Yes, No, Unknown };
  Status status = Status::Unknown;
  std::optional<std::pair<Element, Element>> witness;  // No: a ~ b + c
  std::string note;
};

// Atom test: a is an atom iff it is not congruent to 0 and admits no
// decomposition into two parts both noncongruent to 0.  Searches every split
// of every member of the (completely enumerated) class; Yes only when the
// enumeration finished and every split was refuted.
AtomResult is_atom(const CongruenceEngine& eng, const Element& a,
                   std::size_t class_node_cap);

struct ModuleTypeResult {
  enum class Status { Found, NoneFound, Inconclusive };
  Status status = Status::Inconclusive;
  int n = 0, k = 0;
  std::string note;
};

// Smallest n >= 1 such that n*u ~ (n+k)*u for some k >= 1, then smallest
// such k; searched lexicographically up to (n_max, k_max).
ModuleTypeResult module_type(const CongruenceEngine& eng,
                             const GeneratorName& u, int n_max, int k_max);

struct InfiniteCertificateResult {
  enum class Status { InfiniteByWeights, NotApplicable, Inconclusive };
  Status status = Status::NotApplicable;
  std::string vertex;  // first vertex with k_v > 1
  int bound = 0;
  std::vector<Element> representatives;  // n * q:vertex:1, 0 <= n <= bound
  std::string note;
};

// Certifies infiniteness of the V-monoid when some vertex emits edges of
// more than one distinct weight: the classes of n * q:v:1 are pairwise
// distinct for 0 <= n <= bound.  The engine must be built on
// build_v_monoid(g).
InfiniteCertificateResult infinite_certificate(const WeightedGraph& g,
                                               const CongruenceEngine& eng,
                                               int bound);

struct RefinementResult {
  enum class Status { Satisfied, Fails, Inapplicable };
  Status status = Status::Inapplicable;
  int degree_bound = 0;
  struct Witness {
    Element a1, a2, b1, b2;  // a1 + a2 ~ b1 + b2 with no refinement matrix
  };
  std::optional<Witness> witness;
  std::uint64_t candidates_examined = 0;
  std::string note;
};

// Exhaustive refinement check up to a total degree bound.  Only applicable
// when every relation preserves total degree (classes are then finite and
// fully enumerable, so the search is complete).
RefinementResult refinement_check(const CongruenceEngine& eng,
                                  int degree_bound);

// Distinct congruence classes with a representative of total degree in
// [1, degree_bound], one representative each, in graded enumeration order.
std::vector<Element> enumerate_class_representatives(
    const CongruenceEngine& eng, int degree_bound);

struct FingerprintBounds {
  int atom_degree = 8;
  int refinement_degree = 8;
  int infinite_bound = 10;
  std::size_t class_node_cap = 100000;
};

struct Fingerprint {
  std::size_t generator_count = 0;
  std::size_t relation_count = 0;
  int atom_degree_bound = 0;
  std::vector<Element> atoms;  // atom class representatives up to the bound
  std::size_t atom_unknown = 0;
  AbelianGroupInvariants group;  // invariants of the group completion
  bool degree_preserving = false;
  RefinementResult refinement;

  enum class Infiniteness { InfiniteByWeights, InfiniteByGroupRank, Finite,
                            Unknown };
  Infiniteness infiniteness = Infiniteness::Unknown;
  std::size_t monoid_size = 0;  // set when Finite (congruence classes,
                                // including the zero class)
  std::string infiniteness_detail;
};

// Bounded isomorphism-sensitive summary.  `graph`, when given, must be the
// graph the engine's presentation was derived from; it enables the
// weight-stratification infiniteness certificate.
Fingerprint fingerprint(const CongruenceEngine& eng,
                        const FingerprintBounds& bounds,
                        const WeightedGraph* graph = nullptr);

}  // namespace wmk
