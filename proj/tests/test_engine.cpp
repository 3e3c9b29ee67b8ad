#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <thread>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wmk/engine.hpp"
#include "wmk/presentation.hpp"

using namespace wmk;

namespace {

WeightedGraph p4_L() {
  return WeightedGraph({"u", "v", "x"},
                       {{"e", "v", "u", 2}, {"f", "v", "x", 2}});
}
WeightedGraph p4_Lprime() {
  return WeightedGraph({"u", "v", "x"},
                       {{"e", "v", "u", 1}, {"f", "v", "x", 2}});
}
WeightedGraph ex52() {
  return WeightedGraph({"u", "v"}, {{"e", "v", "u", 1}, {"f", "v", "u", 2}});
}
WeightedGraph ex53() {
  return WeightedGraph({"v"}, {{"e", "v", "v", 1}, {"f", "v", "v", 2}});
}
WeightedGraph rose_3333() {
  return WeightedGraph({"v"}, {{"e", "v", "v", 3},
                               {"f", "v", "v", 3},
                               {"g", "v", "v", 3},
                               {"h", "v", "v", 3}});
}
WeightedGraph rose_2333() {
  return WeightedGraph({"v"}, {{"e", "v", "v", 2},
                               {"f", "v", "v", 3},
                               {"g", "v", "v", 3},
                               {"h", "v", "v", 3}});
}

const GeneratorName U = GeneratorName::vertex_gen("u");
const GeneratorName V = GeneratorName::vertex_gen("v");
const GeneratorName X = GeneratorName::vertex_gen("x");
const GeneratorName Q = GeneratorName::q_gen("v", 1);

Element el(const GeneratorName& g, Coeff c = 1) { return Element::single(g, c); }

}  // namespace

TEST_CASE("graded reverse lexicographic order") {
  // total degree first
  CHECK(grevlex_greater({2, 0}, {1, 0}));
  CHECK_FALSE(grevlex_greater({1, 0}, {2, 0}));
  // tie: the vector whose trailing difference entry is negative is greater,
  // so earlier generators outrank later ones at equal degree
  CHECK(grevlex_greater({2, 0}, {1, 1}));
  CHECK(grevlex_greater({1, 1}, {0, 2}));
  CHECK(grevlex_greater({2, 0}, {0, 2}));
  CHECK_FALSE(grevlex_greater({0, 2}, {2, 0}));
  // irreflexive
  CHECK_FALSE(grevlex_greater({1, 2}, {1, 2}));
  // three generators, classic grevlex inversion
  CHECK(grevlex_greater({0, 2, 0}, {1, 0, 1}));
  // total order on distinct vectors: exactly one direction holds
  std::vector<Vec> vs = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (const Vec& a : vs)
    for (const Vec& b : vs)
      if (a != b) CHECK(grevlex_greater(a, b) != grevlex_greater(b, a));
}

TEST_CASE("completion invariants on every bundled graph") {
  for (const WeightedGraph& g :
       {p4_L(), p4_Lprime(), ex52(), ex53(), rose_3333(), rose_2333()}) {
    const CongruenceEngine eng(build_v_monoid(g));
    CHECK(eng.completion_succeeded());
    for (const CompletedRule& r : eng.rules()) {
      CHECK(grevlex_greater(r.from, r.to));
      // every completed rule carries a replayable proof over the originals
      std::string err;
      const bool ok = eng.replay({r.from, r.to, r.proof}, &err);
      CHECK_MESSAGE(ok, err);
    }
  }
}

TEST_CASE("normal forms are canonical under a finished completion") {
  const CongruenceEngine eng(build_v_monoid(rose_2333()));
  REQUIRE(eng.completion_succeeded());
  // generators (v, q:v:1)
  CHECK(eng.normal_form({0, 1}) == Vec{0, 1});
  CHECK(eng.normal_form({2, 0}) == Vec{1, 1});
  CHECK(eng.normal_form({3, 0}) == Vec{1, 1});
  CHECK(eng.normal_form({5, 0}) == Vec{1, 1});
  CHECK(eng.normal_form({1, 4}) == Vec{1, 1});
  CHECK(eng.normal_form({0, 3}) == Vec{0, 3});
  // idempotent, including via the memo
  for (Coeff a = 0; a <= 4; ++a)
    for (Coeff b = 0; b <= 4; ++b) {
      const Vec nf = eng.normal_form({a, b});
      CHECK(eng.normal_form(nf) == nf);
    }
  // traced variant replays
  const auto [nf, steps] = eng.normal_form_traced({4, 2});
  CHECK(nf == eng.normal_form({4, 2}));
  CHECK(eng.replay({{4, 2}, nf, steps}));
}

TEST_CASE("equal: three-stage decisions on the Toeplitz-like monoid") {
  const CongruenceEngine eng(build_v_monoid(ex53()));  // <v,q | v = v+q>
  SUBCASE("absorbing relation holds to depth 10 with replayable traces") {
    for (Coeff n = 1; n <= 10; ++n) {
      const DecisionResult d = eng.equal(Vec{1, 0}, Vec{1, n});
      REQUIRE(d.verdict == Verdict::Equal);
      REQUIRE(d.trace.has_value());
      CHECK(d.trace->start == Vec{1, 0});
      CHECK(d.trace->end == Vec{1, n});
      std::string err;
      CHECK_MESSAGE(eng.replay(*d.trace, &err), err);
    }
  }
  SUBCASE("distinct pure-q classes are separated by normal forms") {
    const DecisionResult d = eng.equal(Vec{0, 1}, Vec{0, 2});
    CHECK(d.verdict == Verdict::NotEqual);
    REQUIRE(d.normal_forms.has_value());
    CHECK(d.normal_forms->first == Vec{0, 1});
    CHECK(d.normal_forms->second == Vec{0, 2});
  }
  SUBCASE("equal is reflexive and symmetric") {
    CHECK(eng.equal(Vec{2, 3}, Vec{2, 3}).verdict == Verdict::Equal);
    CHECK(eng.equal(Vec{1, 4}, Vec{1, 0}).verdict == Verdict::Equal);
  }
}

TEST_CASE("equal: difference lattice certifies inequality outright") {
  const CongruenceEngine eng(build_v_monoid(p4_L()));
  CHECK(eng.relation_vectors().size() == 1);
  CHECK(eng.difference_lattice().rank() == 1);
  const DecisionResult d = eng.equal(el(U), el(V));
  CHECK(d.verdict == Verdict::NotEqual);
  REQUIRE(d.lattice_witness.has_value());
  // the witness is u - v itself, which the relation lattice cannot reach
  CHECK(*d.lattice_witness == std::vector<Int>{Int(1), Int(-1), Int(0)});
  // but 2v and u + x are identified by the defining relation
  const DecisionResult e = eng.equal(el(V, 2), el(U) + el(X));
  CHECK(e.verdict == Verdict::Equal);
  REQUIRE(e.trace.has_value());
  CHECK(e.trace->steps.size() == 1);
  CHECK(eng.replay(*e.trace));
}

TEST_CASE("equal: ex52 verdicts in simplified coordinates") {
  const CongruenceEngine raw(build_v_monoid(ex52()));
  REQUIRE(raw.completion_succeeded());
  CHECK(raw.equal(el(U), el(V) + el(Q)).verdict == Verdict::Equal);
  CHECK(raw.equal(el(U, 2), el(V, 2)).verdict == Verdict::Equal);
  const DecisionResult d = raw.equal(el(U), el(V));
  CHECK(d.verdict == Verdict::NotEqual);
  CHECK(d.lattice_witness.has_value());

  // after simplification: <u, q | u = u + 2q>, coordinates (u, q)
  const CongruenceEngine eng(auto_simplify(build_v_monoid(ex52())).presentation);
  CHECK(eng.equal(Vec{1, 0}, Vec{1, 2}).verdict == Verdict::Equal);
  CHECK(eng.equal(Vec{1, 0}, Vec{1, 4}).verdict == Verdict::Equal);
  CHECK(eng.equal(Vec{1, 0}, Vec{0, 2}).verdict == Verdict::NotEqual);
  CHECK(eng.equal(Vec{1, 0}, Vec{1, 1}).verdict == Verdict::NotEqual);
  CHECK(eng.equal(Vec{1, 3}, Vec{1, 5}).verdict == Verdict::Equal);
}

TEST_CASE("replay rejects corrupted traces") {
  const CongruenceEngine eng(build_v_monoid(ex53()));
  DecisionResult d = eng.equal(Vec{1, 0}, Vec{1, 3});
  REQUIRE(d.verdict == Verdict::Equal);
  REQUIRE(d.trace.has_value());
  REQUIRE(eng.replay(*d.trace));

  SUBCASE("flipped direction") {
    RewriteTrace bad = *d.trace;
    bad.steps[0].forward = !bad.steps[0].forward;
    std::string err;
    CHECK_FALSE(eng.replay(bad, &err));
    CHECK_FALSE(err.empty());
  }
  SUBCASE("wrong endpoint") {
    RewriteTrace bad = *d.trace;
    bad.end = Vec{1, 4};
    CHECK_FALSE(eng.replay(bad));
  }
  SUBCASE("relation index out of range") {
    RewriteTrace bad = *d.trace;
    bad.steps[0].relation = 99;
    std::string err;
    CHECK_FALSE(eng.replay(bad, &err));
    CHECK_FALSE(err.empty());
  }
  SUBCASE("pattern does not fit, would go negative") {
    // forward applies v -> v + q and needs a v present; (0,1) has none
    RewriteTrace bad{{0, 1}, {0, 2}, {TraceStep{0, true}}};
    std::string err;
    CHECK_FALSE(eng.replay(bad, &err));
    CHECK(err.find("step") != std::string::npos);
  }
}

TEST_CASE("engine verdicts agree with a plain BFS oracle") {
  std::mt19937 rng(991);
  std::uniform_int_distribution<int> coef(0, 3);
  for (const WeightedGraph& g : {ex52(), ex53(), rose_2333(), p4_Lprime()}) {
    const MonoidPresentation pres = build_v_monoid(g);
    const CongruenceEngine eng(pres);
    const std::size_t n = pres.generators().size();
    for (int t = 0; t < 60; ++t) {
      Vec a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) a[i] = coef(rng), b[i] = coef(rng);
      const DecisionResult d = eng.equal(a, b);
      const oracle::Verdict o =
          oracle::bfs_equal(eng.relation_vectors(), a, b, 20000);
      if (o == oracle::Verdict::Equal)
        CHECK(d.verdict == Verdict::Equal);
      if (o == oracle::Verdict::NotEqual)
        CHECK(d.verdict == Verdict::NotEqual);
      if (d.verdict == Verdict::Equal) CHECK(o != oracle::Verdict::NotEqual);
      if (d.verdict == Verdict::NotEqual) CHECK(o != oracle::Verdict::Equal);
    }
  }
}

TEST_CASE("class enumeration") {
  const CongruenceEngine eng(build_v_monoid(ex53()));
  SUBCASE("a singleton class is complete") {
    const auto cls = eng.class_enumerate(Vec{0, 1}, 100);
    CHECK(cls.complete);
    CHECK(cls.elements == std::vector<Vec>{{0, 1}});
  }
  SUBCASE("an infinite class truncates at the cap") {
    const auto cls = eng.class_enumerate(Vec{1, 0}, 50);
    CHECK_FALSE(cls.complete);
    CHECK(cls.elements.size() >= 50);
    // BFS order from the seed: the seed comes first
    CHECK(cls.elements.front() == Vec{1, 0});
  }
  SUBCASE("zero sits in a singleton class") {
    const auto cls = eng.class_enumerate(Vec{0, 0}, 10);
    CHECK(cls.complete);
    CHECK(cls.elements == std::vector<Vec>{{0, 0}});
  }
}

TEST_CASE("atom detection") {
  SUBCASE("single-generator classes with no splits are atoms") {
    const CongruenceEngine eng(build_v_monoid(rose_3333()));
    const AtomResult r = is_atom(eng, el(V), 1000);
    CHECK(r.status == AtomResult::Status::Yes);
  }
  SUBCASE("a doubled generator splits") {
    const CongruenceEngine eng(build_v_monoid(rose_3333()));
    const AtomResult r = is_atom(eng, el(V, 2), 1000);
    CHECK(r.status == AtomResult::Status::No);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->first + r.witness->second == el(V, 2));
  }
  SUBCASE("absorbing generators are not atoms") {
    // v ~ v + q with q not congruent to zero
    const CongruenceEngine eng(build_v_monoid(ex53()));
    const AtomResult r = is_atom(eng, el(V), 10000);
    CHECK(r.status == AtomResult::Status::No);
    REQUIRE(r.witness.has_value());
  }
  SUBCASE("a split is found even when the class truncates") {
    const CongruenceEngine eng(build_v_monoid(rose_2333()));
    const AtomResult r = is_atom(eng, el(V, 2), 30);  // tiny cap
    CHECK(r.status == AtomResult::Status::No);
  }
  SUBCASE("truncation without a witness is Unknown") {
    const CongruenceEngine eng(build_v_monoid(ex53()));
    const AtomResult r = is_atom(eng, el(V), 1);
    CHECK(r.status == AtomResult::Status::Unknown);
    CHECK_FALSE(r.note.empty());
  }
  SUBCASE("zero is rejected") {
    const CongruenceEngine eng(build_v_monoid(ex53()));
    CHECK_THROWS_AS(is_atom(eng, Element(), 100), ZeroElement);
  }
}

TEST_CASE("module type search") {
  SUBCASE("uniform-weight rose") {
    const CongruenceEngine eng(build_v_monoid(rose_3333()));
    const ModuleTypeResult r = module_type(eng, V, 20, 20);
    REQUIRE(r.status == ModuleTypeResult::Status::Found);
    CHECK(r.n == 3);
    CHECK(r.k == 1);
  }
  SUBCASE("mixed-weight rose") {
    const CongruenceEngine eng(build_v_monoid(rose_2333()));
    const ModuleTypeResult r = module_type(eng, V, 20, 20);
    REQUIRE(r.status == ModuleTypeResult::Status::Found);
    CHECK(r.n == 2);
    CHECK(r.k == 1);
  }
  SUBCASE("no collapse within bounds") {
    const CongruenceEngine eng(build_v_monoid(p4_L()));
    const ModuleTypeResult r = module_type(eng, U, 20, 20);
    CHECK(r.status == ModuleTypeResult::Status::NoneFound);
  }
  SUBCASE("starved engine is inconclusive, not wrong") {
    const CongruenceEngine eng(build_v_monoid(rose_2333()),
                               EngineOptions{0, 0, 8});
    const ModuleTypeResult r = module_type(eng, V, 3, 3);
    CHECK(r.status == ModuleTypeResult::Status::Inconclusive);
  }
}

TEST_CASE("infiniteness certificate") {
  SUBCASE("mixed weights embed the naturals") {
    const WeightedGraph g = rose_2333();
    const CongruenceEngine eng(build_v_monoid(g));
    const InfiniteCertificateResult r = infinite_certificate(g, eng, 10);
    REQUIRE(r.status == InfiniteCertificateResult::Status::InfiniteByWeights);
    CHECK(r.vertex == "v");
    CHECK(r.bound == 10);
    CHECK(r.representatives.size() == 11);
    CHECK(r.representatives[0].is_zero());
    CHECK(r.representatives[3] == el(Q, 3));
  }
  SUBCASE("uniform weights are out of scope for this criterion") {
    const WeightedGraph g = rose_3333();
    const CongruenceEngine eng(build_v_monoid(g));
    const InfiniteCertificateResult r = infinite_certificate(g, eng, 10);
    CHECK(r.status == InfiniteCertificateResult::Status::NotApplicable);
    CHECK(r.note.find("at most one distinct weight") != std::string::npos);
  }
  SUBCASE("engine must carry the graph's q generators") {
    const CongruenceEngine other(build_v_monoid(rose_3333()));
    CHECK_THROWS_AS(infinite_certificate(rose_2333(), other, 5),
                    ValidationError);
  }
}

TEST_CASE("refinement check") {
  SUBCASE("the uniform-weight pair fails with the documented witness") {
    const CongruenceEngine eng(build_v_monoid(p4_L()));
    const RefinementResult r = refinement_check(eng, 8);
    REQUIRE(r.status == RefinementResult::Status::Fails);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->a1 == el(V));
    CHECK(r.witness->a2 == el(V));
    CHECK(r.witness->b1 == el(X));
    CHECK(r.witness->b2 == el(U));
    CHECK(r.candidates_examined > 0);
  }
  SUBCASE("degree-changing relations make the bounded check inapplicable") {
    const CongruenceEngine eng(build_v_monoid(p4_Lprime()));
    const RefinementResult r = refinement_check(eng, 8);
    CHECK(r.status == RefinementResult::Status::Inapplicable);
    CHECK(r.note.find("total degree") != std::string::npos);
  }
  SUBCASE("a free presentation satisfies refinement") {
    const CongruenceEngine eng(
        auto_simplify(build_v_monoid(p4_Lprime())).presentation);
    const RefinementResult r = refinement_check(eng, 6);
    CHECK(r.status == RefinementResult::Status::Satisfied);
    CHECK(r.degree_bound == 6);
    CHECK(r.note.find("refinable") != std::string::npos);
  }
  SUBCASE("a degree-preserving identification still satisfies refinement") {
    const GeneratorName A = GeneratorName::vertex_gen("a");
    const GeneratorName B = GeneratorName::vertex_gen("b");
    const MonoidPresentation p({A, B},
                               {{Element::single(A), Element::single(B)}});
    const CongruenceEngine eng(p);
    const RefinementResult r = refinement_check(eng, 5);
    CHECK(r.status == RefinementResult::Status::Satisfied);
  }
}

TEST_CASE("class representatives are deduplicated and graded") {
  const CongruenceEngine eng(build_v_monoid(ex53()));
  const std::vector<Element> reps = enumerate_class_representatives(eng, 2);
  // degree 1: q, v; degree 2: 2q, 2v (v + q collapses onto v)
  CHECK(reps == std::vector<Element>{el(Q), el(V), el(Q, 2), el(V, 2)});
  for (const Element& a : reps)
    for (const Element& b : reps)
      if (!(a == b)) CHECK(eng.equal(a, b).verdict == Verdict::NotEqual);
}

TEST_CASE("fingerprints of the distinguishing pair") {
  const FingerprintBounds bounds{6, 6, 10, 100000};
  SUBCASE("uniform weights: three atoms, no refinement") {
    const WeightedGraph g = p4_L();
    const CongruenceEngine eng(build_v_monoid(g));
    const Fingerprint fp = fingerprint(eng, bounds, &g);
    CHECK(fp.generator_count == 3);
    CHECK(fp.relation_count == 1);
    CHECK(fp.atoms == std::vector<Element>{el(X), el(V), el(U)});
    CHECK(fp.atom_unknown == 0);
    CHECK(fp.group == AbelianGroupInvariants{2, {}});
    CHECK(fp.degree_preserving);
    CHECK(fp.refinement.status == RefinementResult::Status::Fails);
    CHECK(fp.infiniteness == Fingerprint::Infiniteness::InfiniteByGroupRank);
  }
  SUBCASE("mixed weights, simplified: two atoms, refinement satisfied") {
    const WeightedGraph g = p4_Lprime();
    const CongruenceEngine eng(auto_simplify(build_v_monoid(g)).presentation);
    const Fingerprint fp = fingerprint(eng, bounds, &g);
    CHECK(fp.generator_count == 2);
    CHECK(fp.relation_count == 0);
    CHECK(fp.atoms == std::vector<Element>{el(Q), el(U)});
    CHECK(fp.atom_unknown == 0);
    CHECK(fp.group == AbelianGroupInvariants{2, {}});
    CHECK(fp.degree_preserving);
    CHECK(fp.refinement.status == RefinementResult::Status::Satisfied);
    CHECK(fp.infiniteness == Fingerprint::Infiniteness::InfiniteByWeights);
  }
  SUBCASE("the two summaries differ in every load-bearing field") {
    const WeightedGraph a = p4_L(), b = p4_Lprime();
    const CongruenceEngine ea(build_v_monoid(a));
    const CongruenceEngine eb(auto_simplify(build_v_monoid(b)).presentation);
    const Fingerprint fa = fingerprint(ea, bounds, &a);
    const Fingerprint fb = fingerprint(eb, bounds, &b);
    CHECK(fa.atoms.size() != fb.atoms.size());
    CHECK(fa.refinement.status != fb.refinement.status);
    // while the group completions are isomorphic
    CHECK(group_iso_check(fa.group, fb.group));
  }
}

TEST_CASE("fingerprint detects a finite monoid") {
  const GeneratorName A = GeneratorName::vertex_gen("a");
  const MonoidPresentation p(
      {A}, {{Element::single(A), Element::single(A, 2)}});  // a = 2a
  const CongruenceEngine eng(p);
  const Fingerprint fp = fingerprint(eng, FingerprintBounds{});
  CHECK(fp.infiniteness == Fingerprint::Infiniteness::Finite);
  CHECK(fp.monoid_size == 2);  // the zero class and the class of a
  CHECK(fp.group == AbelianGroupInvariants{0, {}});
}

TEST_CASE("starved engine reports unknown with a note instead of guessing") {
  const CongruenceEngine eng(build_v_monoid(rose_2333()),
                             EngineOptions{0, 10, 8});
  CHECK_FALSE(eng.completion_succeeded());
  const DecisionResult d = eng.equal(Vec{2, 0}, Vec{20, 0});
  CHECK(d.verdict == Verdict::Unknown);
  CHECK(d.note.find("cap") != std::string::npos);
  // the default engine settles the same query
  const CongruenceEngine full(build_v_monoid(rose_2333()));
  CHECK(full.equal(Vec{2, 0}, Vec{20, 0}).verdict == Verdict::Equal);
}

TEST_CASE("concurrent queries return the same verdicts as sequential ones") {
  const CongruenceEngine eng(build_v_monoid(rose_2333()));
  std::vector<std::pair<Vec, Vec>> queries;
  for (Coeff a = 0; a <= 3; ++a)
    for (Coeff b = 0; b <= 3; ++b)
      for (Coeff c = 0; c <= 3; ++c)
        for (Coeff d = 0; d <= 3; ++d)
          queries.push_back({{a, b}, {c, d}});
  std::vector<Verdict> expected;
  for (const auto& [a, b] : queries) expected.push_back(eng.equal(a, b).verdict);

  std::vector<std::thread> workers;
  std::vector<int> mismatches(8, 0);
  for (int w = 0; w < 8; ++w)
    workers.emplace_back([&, w] {
      for (std::size_t i = 0; i < queries.size(); ++i) {
        if (eng.equal(queries[i].first, queries[i].second).verdict !=
            expected[i])
          ++mismatches[w];
        eng.normal_form(queries[i].first);
      }
    });
  for (std::thread& t : workers) t.join();
  for (int w = 0; w < 8; ++w) CHECK(mismatches[w] == 0);
}
