#include "wmk/engine.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <memory>
#include <stdexcept>

namespace wmk {

namespace {

Coeff vec_total(const Vec& v) {
  Coeff t = 0;
  for (Coeff c : v) t += c;
  return t;
}

bool vec_leq(const Vec& a, const Vec& b) {  // a <= b componentwise
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Vec vec_add(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

// a - b + c, requires b <= a
Vec vec_replace(const Vec& a, const Vec& b, const Vec& c) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i] + c[i];
  return out;
}

std::vector<TraceStep> reversed_steps(const std::vector<TraceStep>& steps) {
  std::vector<TraceStep> out(steps.rbegin(), steps.rend());
  for (TraceStep& s : out) s.forward = !s.forward;
  return out;
}

void append_steps(std::vector<TraceStep>& dst,
                  const std::vector<TraceStep>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

// Enumerate all vectors of length n with the given total, lexicographically
// ascending; fn may return false to stop.  Used for graded enumerations.
bool for_each_vec_of_total(std::size_t n, Coeff total, Vec& scratch,
                           std::size_t pos,
                           const std::function<bool(const Vec&)>& fn) {
  if (pos + 1 == n) {
    scratch[pos] = total;
    bool cont = fn(scratch);
    scratch[pos] = 0;
    return cont;
  }
  for (Coeff c = 0; c <= total; ++c) {
    scratch[pos] = c;
    if (!for_each_vec_of_total(n, total - c, scratch, pos + 1, fn)) {
      scratch[pos] = 0;
      return false;
    }
  }
  scratch[pos] = 0;
  return true;
}

bool for_each_vec_of_total(std::size_t n, Coeff total,
                           const std::function<bool(const Vec&)>& fn) {
  if (n == 0) return total == 0 ? fn(Vec{}) : true;
  Vec scratch(n, 0);
  return for_each_vec_of_total(n, total, scratch, 0, fn);
}

// Enumerate sub-vectors b <= s (including 0 and s), lexicographically.
bool for_each_subvector(const Vec& s, Vec& scratch, std::size_t pos,
                        const std::function<bool(const Vec&)>& fn) {
  if (pos == s.size()) return fn(scratch);
  for (Coeff c = 0; c <= s[pos]; ++c) {
    scratch[pos] = c;
    if (!for_each_subvector(s, scratch, pos + 1, fn)) {
      scratch[pos] = 0;
      return false;
    }
  }
  scratch[pos] = 0;
  return true;
}

bool for_each_subvector(const Vec& s,
                        const std::function<bool(const Vec&)>& fn) {
  Vec scratch(s.size(), 0);
  return for_each_subvector(s, scratch, 0, fn);
}

}  // namespace

bool grevlex_greater(const Vec& a, const Vec& b) {
  const Coeff ta = vec_total(a), tb = vec_total(b);
  if (ta != tb) return ta > tb;
  for (std::size_t i = a.size(); i-- > 0;) {
    const Coeff d = a[i] - b[i];
    if (d != 0) return d < 0;  // smaller last exponent wins
  }
  return false;
}

CongruenceEngine::CongruenceEngine(MonoidPresentation p, EngineOptions opt)
    : pres_(std::move(p)), opt_(opt) {
  const std::size_t n = pres_.generators().size();
  std::vector<std::vector<Int>> diff_rows;
  for (const Relation& r : pres_.relations()) {
    rel_vecs_.emplace_back(pres_.to_vec(r.lhs), pres_.to_vec(r.rhs));
    std::vector<Int> row(n);
    for (std::size_t j = 0; j < n; ++j)
      row[j] = Int(rel_vecs_.back().first[j]) - Int(rel_vecs_.back().second[j]);
    diff_rows.push_back(std::move(row));
  }
  lattice_ = IntegerLattice(std::move(diff_rows), n);
  complete_rules();
}

bool CongruenceEngine::reduce_once(Vec& v, std::size_t* rule_idx) const {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (vec_leq(rules_[i].from, v)) {
      v = vec_replace(v, rules_[i].from, rules_[i].to);
      if (rule_idx) *rule_idx = i;
      return true;
    }
  }
  return false;
}

void CongruenceEngine::complete_rules() {
  completion_ok_ = false;
  for (std::size_t idx = 0; idx < rel_vecs_.size(); ++idx) {
    const auto& [l, r] = rel_vecs_[idx];
    if (grevlex_greater(l, r))
      rules_.push_back({l, r, {{idx, true}}});
    else
      rules_.push_back({r, l, {{idx, false}}});
  }

  // Reduce a vector by the current rules, collecting the replayable proof.
  auto reduce_traced = [&](Vec cur) {
    std::vector<TraceStep> steps;
    std::size_t ri = 0;
    while (reduce_once(cur, &ri)) append_steps(steps, rules_[ri].proof);
    return std::make_pair(cur, steps);
  };

  std::deque<std::pair<std::size_t, std::size_t>> queue;
  for (std::size_t i = 0; i < rules_.size(); ++i)
    for (std::size_t j = i + 1; j < rules_.size(); ++j) queue.emplace_back(i, j);

  std::size_t processed = 0;
  while (!queue.empty()) {
    if (processed++ >= opt_.completion_pair_cap) return;  // capped
    auto [i, j] = queue.front();
    queue.pop_front();
    const Vec& fi = rules_[i].from;
    const Vec& fj = rules_[j].from;

    bool coprime = true;  // product criterion: disjoint supports
    Vec lcm(fi.size());
    for (std::size_t t = 0; t < fi.size(); ++t) {
      lcm[t] = std::max(fi[t], fj[t]);
      if (fi[t] > 0 && fj[t] > 0) coprime = false;
    }
    if (coprime) continue;

    Vec a0 = vec_replace(lcm, fi, rules_[i].to);
    Vec b0 = vec_replace(lcm, fj, rules_[j].to);
    if (a0 == b0) continue;
    auto [a, pa] = reduce_traced(a0);
    auto [b, pb] = reduce_traced(b0);
    if (a == b) continue;

    // proof a ~> b: back out of a's reduction, undo rule i, apply rule j,
    // then b's reduction.
    std::vector<TraceStep> proof = reversed_steps(pa);
    append_steps(proof, reversed_steps(rules_[i].proof));
    append_steps(proof, rules_[j].proof);
    append_steps(proof, pb);

    CompletedRule nr;
    if (grevlex_greater(a, b)) {
      nr = {std::move(a), std::move(b), std::move(proof)};
    } else {
      nr = {std::move(b), std::move(a), reversed_steps(proof)};
    }
    rules_.push_back(std::move(nr));
    for (std::size_t t = 0; t + 1 < rules_.size(); ++t)
      queue.emplace_back(t, rules_.size() - 1);
  }
  completion_ok_ = true;
}

Vec CongruenceEngine::normal_form(const Vec& a) const {
  {
    std::lock_guard<std::mutex> lock(memo_mu_);
    auto it = nf_memo_.find(a);
    if (it != nf_memo_.end()) return it->second;
  }
  Vec v = a;
  while (reduce_once(v, nullptr)) {
  }
  {
    std::lock_guard<std::mutex> lock(memo_mu_);
    nf_memo_.emplace(a, v);
  }
  return v;
}

std::pair<Vec, std::vector<TraceStep>> CongruenceEngine::normal_form_traced(
    const Vec& a) const {
  Vec v = a;
  std::vector<TraceStep> steps;
  std::size_t ri = 0;
  while (reduce_once(v, &ri)) append_steps(steps, rules_[ri].proof);
  return {v, steps};
}

DecisionResult CongruenceEngine::equal(const Element& a,
                                       const Element& b) const {
  return equal(pres_.to_vec(a), pres_.to_vec(b));
}

DecisionResult CongruenceEngine::equal(const Vec& a, const Vec& b) const {
  const std::size_t n = pres_.generators().size();
  if (a.size() != n || b.size() != n)
    throw DimensionMismatch("element vector length mismatch");
  DecisionResult res;
  if (a == b) {
    res.verdict = Verdict::Equal;
    res.trace = RewriteTrace{a, b, {}};
    return res;
  }

  std::vector<Int> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = Int(a[i]) - Int(b[i]);
  if (!lattice_.contains(diff)) {
    res.verdict = Verdict::NotEqual;
    res.lattice_witness = std::move(diff);
    return res;
  }

  auto [na, pa] = normal_form_traced(a);
  auto [nb, pb] = normal_form_traced(b);
  if (na == nb) {
    res.verdict = Verdict::Equal;
    RewriteTrace t{a, b, std::move(pa)};
    append_steps(t.steps, reversed_steps(pb));
    res.trace = std::move(t);
    return res;
  }
  if (completion_ok_) {
    res.verdict = Verdict::NotEqual;
    res.normal_forms = std::make_pair(std::move(na), std::move(nb));
    return res;
  }

  // Bidirectional bounded BFS over the rewrite graph of the original
  // relations (completion was capped, so canonical forms are unreliable).
  struct ParentLink {
    Vec parent;
    TraceStep step;
    bool root = false;
  };
  using Visited = std::unordered_map<Vec, ParentLink, VecHash>;
  Visited vis[2];
  std::deque<Vec> frontier[2];
  bool truncated[2] = {false, false};
  vis[0].emplace(a, ParentLink{{}, {}, true});
  vis[1].emplace(b, ParentLink{{}, {}, true});
  frontier[0].push_back(a);
  frontier[1].push_back(b);
  std::optional<Vec> meet;

  auto expand = [&](int side) {
    Vec x = frontier[side].front();
    frontier[side].pop_front();
    for (std::size_t idx = 0; idx < rel_vecs_.size() && !meet; ++idx) {
      for (bool fwd : {true, false}) {
        const Vec& del = fwd ? rel_vecs_[idx].first : rel_vecs_[idx].second;
        const Vec& ins = fwd ? rel_vecs_[idx].second : rel_vecs_[idx].first;
        if (!vec_leq(del, x)) continue;
        Vec y = vec_replace(x, del, ins);
        if (vis[side].count(y)) continue;
        if (vis[side].size() >= opt_.bfs_node_cap) {
          truncated[side] = true;
          frontier[side].clear();
          return;
        }
        vis[side].emplace(y, ParentLink{x, TraceStep{idx, fwd}, false});
        frontier[side].push_back(y);
        if (vis[1 - side].count(y)) {
          meet = y;
          return;
        }
      }
    }
  };

  while (!meet && (!frontier[0].empty() || !frontier[1].empty())) {
    int side;
    if (frontier[0].empty())
      side = 1;
    else if (frontier[1].empty())
      side = 0;
    else
      side = vis[0].size() <= vis[1].size() ? 0 : 1;
    expand(side);
  }

  if (meet) {
    // Walk the meet point back to each seed.
    auto chain = [&](int side) {
      std::vector<TraceStep> steps;  // seed -> meet, reversed while walking
      Vec cur = *meet;
      while (true) {
        const ParentLink& link = vis[side].at(cur);
        if (link.root) break;
        steps.push_back(link.step);
        cur = link.parent;
      }
      std::reverse(steps.begin(), steps.end());
      return steps;
    };
    RewriteTrace t{a, b, chain(0)};
    append_steps(t.steps, reversed_steps(chain(1)));
    res.verdict = Verdict::Equal;
    res.trace = std::move(t);
    return res;
  }
  if (!truncated[0] || !truncated[1]) {
    res.verdict = Verdict::NotEqual;
    res.disjoint_complete_classes = true;
    return res;
  }
  res.verdict = Verdict::Unknown;
  res.note = "completion pair cap and BFS node cap both exhausted";
  return res;
}

bool CongruenceEngine::replay(const RewriteTrace& t, std::string* err) const {
  Vec cur = t.start;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const TraceStep& s = t.steps[i];
    if (s.relation >= rel_vecs_.size()) {
      if (err) *err = "step " + std::to_string(i) + ": bad relation index";
      return false;
    }
    const Vec& del =
        s.forward ? rel_vecs_[s.relation].first : rel_vecs_[s.relation].second;
    const Vec& ins =
        s.forward ? rel_vecs_[s.relation].second : rel_vecs_[s.relation].first;
    if (!vec_leq(del, cur)) {
      if (err) *err = "step " + std::to_string(i) + ": relation inapplicable";
      return false;
    }
    cur = vec_replace(cur, del, ins);
  }
  if (cur != t.end) {
    if (err) *err = "trace does not land on the target element";
    return false;
  }
  return true;
}

CongruenceEngine::ClassEnumeration CongruenceEngine::class_enumerate(
    const Vec& a, std::size_t node_cap) const {
  ClassEnumeration out;
  std::unordered_set<Vec, VecHash> vis;
  std::deque<Vec> frontier;
  vis.insert(a);
  frontier.push_back(a);
  out.elements.push_back(a);
  out.complete = true;
  while (!frontier.empty()) {
    Vec x = frontier.front();
    frontier.pop_front();
    for (const auto& [l, r] : rel_vecs_) {
      for (bool fwd : {true, false}) {
        const Vec& del = fwd ? l : r;
        const Vec& ins = fwd ? r : l;
        if (!vec_leq(del, x)) continue;
        Vec y = vec_replace(x, del, ins);
        if (vis.count(y)) continue;
        if (vis.size() >= node_cap) {
          out.complete = false;
          return out;
        }
        vis.insert(y);
        out.elements.push_back(y);
        frontier.push_back(y);
      }
    }
  }
  return out;
}

// --- derived decision procedures ---------------------------------------------

AtomResult is_atom(const CongruenceEngine& eng, const Element& a,
                   std::size_t class_node_cap) {
  const Vec av = eng.to_vec(a);
  const Vec zero(av.size(), 0);
  if (av == zero) throw ZeroElement("is_atom on the zero element");
  {
    DecisionResult z = eng.equal(av, zero);
    if (z.verdict == Verdict::Equal)
      throw ZeroElement("is_atom on an element congruent to zero: " + a.str());
    if (z.verdict == Verdict::Unknown)
      return {AtomResult::Status::Unknown, std::nullopt,
              "equality with zero undecided"};
  }
  // A decomposition found among the reached class members refutes atomhood
  // even when the enumeration was truncated; only Yes needs completeness.
  auto cls = eng.class_enumerate(av, class_node_cap);
  bool saw_unknown = false;
  for (const Vec& s : cls.elements) {
    AtomResult found{AtomResult::Status::Yes, std::nullopt, ""};
    bool stop = false;
    for_each_subvector(s, [&](const Vec& b) {
      bool b_zero = true, b_full = true;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (b[i] != 0) b_zero = false;
        if (b[i] != s[i]) b_full = false;
      }
      if (b_zero || b_full) return true;
      Vec c(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) c[i] = s[i] - b[i];

      DecisionResult bz = eng.equal(b, Vec(s.size(), 0));
      if (bz.verdict == Verdict::Unknown) {
        saw_unknown = true;
        return true;
      }
      if (bz.verdict == Verdict::Equal) return true;  // trivial split
      DecisionResult cz = eng.equal(c, Vec(s.size(), 0));
      if (cz.verdict == Verdict::Unknown) {
        saw_unknown = true;
        return true;
      }
      if (cz.verdict == Verdict::Equal) return true;

      found = {AtomResult::Status::No,
               std::make_pair(eng.from_vec(b), eng.from_vec(c)), ""};
      stop = true;
      return false;
    });
    if (stop) return found;
  }
  if (!cls.complete)
    return {AtomResult::Status::Unknown, std::nullopt,
            "class enumeration truncated"};
  if (saw_unknown)
    return {AtomResult::Status::Unknown, std::nullopt,
            "some split comparisons undecided"};
  return {AtomResult::Status::Yes, std::nullopt, ""};
}

ModuleTypeResult module_type(const CongruenceEngine& eng,
                             const GeneratorName& u, int n_max, int k_max) {
  const std::size_t ui = eng.presentation().generator_index(u);
  const std::size_t dim = eng.presentation().generators().size();
  bool saw_unknown = false;
  for (int n = 1; n <= n_max; ++n) {
    for (int k = 1; k <= k_max; ++k) {
      Vec lhs(dim, 0), rhs(dim, 0);
      lhs[ui] = n;
      rhs[ui] = n + k;
      DecisionResult r = eng.equal(lhs, rhs);
      if (r.verdict == Verdict::Equal) {
        if (saw_unknown)
          return {ModuleTypeResult::Status::Inconclusive, n, k,
                  "an earlier comparison was undecided; minimality unknown"};
        return {ModuleTypeResult::Status::Found, n, k, ""};
      }
      if (r.verdict == Verdict::Unknown) saw_unknown = true;
    }
  }
  if (saw_unknown)
    return {ModuleTypeResult::Status::Inconclusive, 0, 0,
            "some comparisons undecided within the bounds"};
  return {ModuleTypeResult::Status::NoneFound, 0, 0, ""};
}

InfiniteCertificateResult infinite_certificate(const WeightedGraph& g,
                                               const CongruenceEngine& eng,
                                               int bound) {
  InfiniteCertificateResult out;
  out.bound = bound;
  std::string vertex;
  for (const std::string& v : g.vertices())
    if (g.strata(v).k > 1) {
      vertex = v;
      break;
    }
  if (vertex.empty()) {
    out.status = InfiniteCertificateResult::Status::NotApplicable;
    out.note = "every vertex emits edges of at most one distinct weight";
    return out;
  }
  out.vertex = vertex;
  const GeneratorName q = GeneratorName::q_gen(vertex, 1);
  if (!eng.presentation().has_generator(q))
    throw ValidationError("engine presentation lacks " + q.str() +
                          "; build it with build_v_monoid");
  const std::size_t qi = eng.presentation().generator_index(q);
  const std::size_t dim = eng.presentation().generators().size();
  for (int m = 0; m <= bound; ++m) {
    Vec mv(dim, 0);
    mv[qi] = m;
    out.representatives.push_back(eng.from_vec(mv));
    for (int nn = m + 1; nn <= bound; ++nn) {
      Vec nv(dim, 0);
      nv[qi] = nn;
      DecisionResult r = eng.equal(mv, nv);
      if (r.verdict == Verdict::Unknown) {
        out.status = InfiniteCertificateResult::Status::Inconclusive;
        out.note = "distinctness of " + std::to_string(m) + " and " +
                   std::to_string(nn) + " multiples undecided";
        return out;
      }
      if (r.verdict == Verdict::Equal)
        throw std::logic_error("weight-stratification classes collided at " +
                               q.str());
    }
  }
  out.status = InfiniteCertificateResult::Status::InfiniteByWeights;
  return out;
}

namespace {

struct ClassData {
  std::vector<Vec> list;
  std::unordered_set<Vec, VecHash> set;
};

using ClassCache =
    std::unordered_map<Vec, std::shared_ptr<const ClassData>, VecHash>;

std::shared_ptr<const ClassData> get_class(const CongruenceEngine& eng,
                                           ClassCache& cache, const Vec& v) {
  auto it = cache.find(v);
  if (it != cache.end()) return it->second;
  auto cls = eng.class_enumerate(v, 1u << 22);  // degree-preserving => finite
  if (!cls.complete)
    throw NonTermination("congruence class too large to enumerate");
  auto data = std::make_shared<ClassData>();
  data->list = cls.elements;
  data->set.insert(cls.elements.begin(), cls.elements.end());
  auto shared = std::shared_ptr<const ClassData>(data);
  for (const Vec& m : shared->list) cache.emplace(m, shared);
  return shared;
}

}  // namespace

RefinementResult refinement_check(const CongruenceEngine& eng,
                                  int degree_bound) {
  RefinementResult out;
  out.degree_bound = degree_bound;
  for (const auto& [l, r] : eng.relation_vectors())
    if (vec_total(l) != vec_total(r)) {
      out.status = RefinementResult::Status::Inapplicable;
      out.note = "a relation changes total degree";
      return out;
    }

  const std::size_t n = eng.presentation().generators().size();
  ClassCache cache;

  // For s == t the componentwise-minimum refinement works outright, so only
  // distinct class members are interesting.
  for (Coeff d = 2; d <= degree_bound; ++d) {
    bool keep_going = true;
    for_each_vec_of_total(n, d, [&](const Vec& s) {
      auto cls = get_class(eng, cache, s);
      for (const Vec& t : cls->list) {
        if (t == s || std::lexicographical_compare(t.begin(), t.end(),
                                                   s.begin(), s.end()))
          continue;  // s == t trivial; (t, s) pair transposes (s, t)
        for_each_subvector(s, [&](const Vec& a1) {
          if (a1 == s || vec_total(a1) == 0) return true;
          Vec a2(n);
          for (std::size_t i = 0; i < n; ++i) a2[i] = s[i] - a1[i];
          auto cls_a1 = get_class(eng, cache, a1);
          auto cls_a2 = get_class(eng, cache, a2);
          for_each_subvector(t, [&](const Vec& b1) {
            if (b1 == t || vec_total(b1) == 0) return true;
            Vec b2(n);
            for (std::size_t i = 0; i < n; ++i) b2[i] = t[i] - b1[i];
            auto cls_b1 = get_class(eng, cache, b1);
            auto cls_b2 = get_class(eng, cache, b2);

            bool refinable = false;
            for (const Vec& u : cls_a1->list) {
              for_each_subvector(u, [&](const Vec& c11) {
                ++out.candidates_examined;
                Vec c12(n);
                for (std::size_t i = 0; i < n; ++i) c12[i] = u[i] - c11[i];
                for (const Vec& w : cls_b1->list) {
                  if (!vec_leq(c11, w)) continue;
                  Vec c21(n);
                  for (std::size_t i = 0; i < n; ++i) c21[i] = w[i] - c11[i];
                  for (const Vec& z : cls_b2->list) {
                    if (!vec_leq(c12, z)) continue;
                    Vec c22(n);
                    for (std::size_t i = 0; i < n; ++i) c22[i] = z[i] - c12[i];
                    if (cls_a2->set.count(vec_add(c21, c22))) {
                      refinable = true;
                      return false;
                    }
                  }
                }
                return true;
              });
              if (refinable) break;
            }
            if (!refinable) {
              out.status = RefinementResult::Status::Fails;
              out.witness = RefinementResult::Witness{
                  eng.from_vec(a1), eng.from_vec(a2), eng.from_vec(b1),
                  eng.from_vec(b2)};
              out.note = "search over all candidate refinements exhausted";
              keep_going = false;
              return false;
            }
            return true;
          });
          return keep_going;
        });
        if (!keep_going) break;
      }
      return keep_going;
    });
    if (!keep_going) return out;
  }
  out.status = RefinementResult::Status::Satisfied;
  out.note = "all instances refinable up to total degree " +
             std::to_string(degree_bound);
  return out;
}

std::vector<Element> enumerate_class_representatives(
    const CongruenceEngine& eng, int degree_bound) {
  const std::size_t n = eng.presentation().generators().size();
  std::vector<Element> reps;
  std::vector<Vec> rep_vecs;
  std::unordered_set<Vec, VecHash> seen_nf;
  for (Coeff d = 1; d <= degree_bound; ++d) {
    for_each_vec_of_total(n, d, [&](const Vec& v) {
      if (eng.completion_succeeded()) {
        if (seen_nf.insert(eng.normal_form(v)).second) {
          reps.push_back(eng.from_vec(v));
          rep_vecs.push_back(v);
        }
      } else {
        for (const Vec& r : rep_vecs)
          if (eng.equal(v, r).verdict == Verdict::Equal) return true;
        reps.push_back(eng.from_vec(v));
        rep_vecs.push_back(v);
      }
      return true;
    });
  }
  return reps;
}

Fingerprint fingerprint(const CongruenceEngine& eng,
                        const FingerprintBounds& bounds,
                        const WeightedGraph* graph) {
  Fingerprint fp;
  fp.generator_count = eng.presentation().generators().size();
  fp.relation_count = eng.presentation().relations().size();
  fp.atom_degree_bound = bounds.atom_degree;

  for (const Element& rep :
       enumerate_class_representatives(eng, bounds.atom_degree)) {
    try {
      AtomResult r = is_atom(eng, rep, bounds.class_node_cap);
      if (r.status == AtomResult::Status::Yes) fp.atoms.push_back(rep);
      if (r.status == AtomResult::Status::Unknown) ++fp.atom_unknown;
    } catch (const ZeroElement&) {
      // the class of zero is never an atom
    }
  }

  const GroupPresentation gp = group_completion(eng.presentation());
  fp.group = abelian_invariants(gp.relations, gp.generators.size());

  fp.degree_preserving = true;
  for (const auto& [l, r] : eng.relation_vectors())
    if (vec_total(l) != vec_total(r)) fp.degree_preserving = false;

  fp.refinement = refinement_check(eng, bounds.refinement_degree);

  // Infiniteness: weight-stratification certificate on the graph's own
  // V-monoid when available, group rank otherwise, else an attempt to list
  // every congruence class.
  if (graph) {
    bool stratified = false;
    for (const std::string& v : graph->vertices())
      if (graph->strata(v).k > 1) stratified = true;
    if (stratified) {
      CongruenceEngine base(build_v_monoid(*graph), eng.options());
      InfiniteCertificateResult cert =
          infinite_certificate(*graph, base, bounds.infinite_bound);
      if (cert.status == InfiniteCertificateResult::Status::InfiniteByWeights) {
        fp.infiniteness = Fingerprint::Infiniteness::InfiniteByWeights;
        fp.infiniteness_detail =
            "classes of multiples of q:" + cert.vertex + ":1 are pairwise "
            "distinct up to " + std::to_string(cert.bound);
        return fp;
      }
    }
  }
  if (fp.group.free_rank >= 1) {
    fp.infiniteness = Fingerprint::Infiniteness::InfiniteByGroupRank;
    fp.infiniteness_detail = "group completion has free rank " +
                             std::to_string(fp.group.free_rank);
    return fp;
  }
  if (eng.completion_succeeded()) {
    // Saturate canonical forms under adding single generators.
    const std::size_t n = eng.presentation().generators().size();
    std::unordered_set<Vec, VecHash> classes;
    std::deque<Vec> frontier;
    Vec zero(n, 0);
    classes.insert(eng.normal_form(zero));
    frontier.push_back(eng.normal_form(zero));
    bool capped = false;
    while (!frontier.empty() && !capped) {
      Vec x = frontier.front();
      frontier.pop_front();
      for (std::size_t i = 0; i < n; ++i) {
        Vec y = x;
        ++y[i];
        Vec ny = eng.normal_form(y);
        if (classes.count(ny)) continue;
        if (classes.size() >= bounds.class_node_cap) {
          capped = true;
          break;
        }
        classes.insert(ny);
        frontier.push_back(std::move(ny));
      }
    }
    if (!capped) {
      fp.infiniteness = Fingerprint::Infiniteness::Finite;
      fp.monoid_size = classes.size();
      fp.infiniteness_detail =
          std::to_string(classes.size()) + " congruence classes";
      return fp;
    }
  }
  fp.infiniteness = Fingerprint::Infiniteness::Unknown;
  fp.infiniteness_detail = "no certificate within bounds";
  return fp;
}

}  // namespace wmk
