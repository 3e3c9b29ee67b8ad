#include "wmk/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace wmk {

std::string GeneratorName::str() const {
  if (kind == Kind::Vertex) return vertex;
  return "q:" + vertex + ":" + std::to_string(index);
}

GeneratorName GeneratorName::parse(const std::string& s) {
  if (s.rfind("q:", 0) == 0) {
    auto last = s.rfind(':');
    if (last > 1 && last + 1 < s.size()) {
      const std::string digits = s.substr(last + 1);
      if (std::all_of(digits.begin(), digits.end(),
                      [](unsigned char c) { return std::isdigit(c); })) {
        const std::string vertex = s.substr(2, last - 2);
        int idx = std::stoi(digits);
        if (!vertex.empty() && idx >= 1) return q_gen(vertex, idx);
      }
    }
  }
  return vertex_gen(s);
}

Element Element::single(const GeneratorName& g, Coeff c) {
  Element e;
  e.set_coeff(g, c);
  return e;
}

Coeff Element::coeff(const GeneratorName& g) const {
  auto it = terms_.find(g);
  return it == terms_.end() ? 0 : it->second;
}

void Element::set_coeff(const GeneratorName& g, Coeff c) {
  if (c < 0)
    throw ValidationError("negative coefficient " + std::to_string(c) +
                          " for generator " + g.str());
  if (c == 0)
    terms_.erase(g);
  else
    terms_[g] = c;
}

Coeff Element::total() const {
  Coeff t = 0;
  for (const auto& [g, c] : terms_) t += c;
  return t;
}

Element& Element::operator+=(const Element& rhs) {
  for (const auto& [g, c] : rhs.terms_) terms_[g] += c;
  return *this;
}

Element Element::operator+(const Element& rhs) const {
  Element out = *this;
  out += rhs;
  return out;
}

Element Element::scaled(Coeff c) const {
  if (c < 0)
    throw ValidationError("negative scale " + std::to_string(c));
  Element out;
  if (c == 0) return out;
  for (const auto& [g, k] : terms_) out.terms_[g] = k * c;
  return out;
}

Element Element::substitute(const GeneratorName& y, const Element& repl) const {
  const Coeff c = coeff(y);
  if (c == 0) return *this;
  Element out = *this;
  out.terms_.erase(y);
  out += repl.scaled(c);
  return out;
}

std::string Element::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << c;
    os << g.str();
  }
  return os.str();
}

std::pair<Element, Element> Relation::canonical_key() const {
  return lhs <= rhs ? std::make_pair(lhs, rhs) : std::make_pair(rhs, lhs);
}

MonoidPresentation::MonoidPresentation(std::vector<GeneratorName> generators,
                                       std::vector<Relation> relations)
    : generators_(std::move(generators)) {
  std::set<std::string> rendered;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (!rendered.insert(generators_[i].str()).second)
      throw ValidationError("duplicate generator name: " +
                            generators_[i].str());
    index_.emplace(generators_[i], i);
  }
  for (Relation& r : relations) {
    for (const auto* side : {&r.lhs, &r.rhs})
      for (const auto& [g, c] : side->terms())
        if (!index_.count(g))
          throw ValidationError("relation uses undeclared generator " +
                                g.str());
    if (r.lhs == r.rhs) continue;  // trivial
    relations_.push_back(std::move(r));
  }
}

bool MonoidPresentation::has_generator(const GeneratorName& g) const {
  return index_.count(g) != 0;
}

std::size_t MonoidPresentation::generator_index(const GeneratorName& g) const {
  auto it = index_.find(g);
  if (it == index_.end())
    throw ValidationError("unknown generator: " + g.str());
  return it->second;
}

std::vector<Coeff> MonoidPresentation::to_vec(const Element& e) const {
  std::vector<Coeff> v(generators_.size(), 0);
  for (const auto& [g, c] : e.terms()) v[generator_index(g)] = c;
  return v;
}

Element MonoidPresentation::from_vec(const std::vector<Coeff>& v) const {
  if (v.size() != generators_.size())
    throw DimensionMismatch("vector of length " + std::to_string(v.size()) +
                            " for " + std::to_string(generators_.size()) +
                            " generators");
  Element e;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) e.set_coeff(generators_[i], v[i]);
  return e;
}

std::string MonoidPresentation::render(const Element& e) const {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const GeneratorName& g : generators_) {
    const Coeff c = e.coeff(g);
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << c;
    os << g.str();
  }
  return os.str();
}

std::string MonoidPresentation::render_relation(std::size_t i) const {
  if (i >= relations_.size())
    throw IndexOutOfRange("relation index " + std::to_string(i));
  return render(relations_[i].lhs) + " = " + render(relations_[i].rhs);
}

MonoidPresentation MonoidPresentation::deduplicated() const {
  std::set<std::pair<Element, Element>> seen;
  std::vector<Relation> rels;
  for (const Relation& r : relations_)
    if (seen.insert(r.canonical_key()).second) rels.push_back(r);
  return MonoidPresentation(generators_, std::move(rels));
}

std::size_t GroupPresentation::generator_index(const GeneratorName& g) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == g) return i;
  throw ValidationError("unknown generator: " + g.str());
}

// --- builders ---------------------------------------------------------------

MonoidPresentation build_v_monoid(const WeightedGraph& g) {
  std::vector<GeneratorName> gens;
  std::vector<VertexStrata> strata;
  strata.reserve(g.vertices().size());
  for (const std::string& v : g.vertices()) {
    strata.push_back(g.strata(v));
    gens.push_back(GeneratorName::vertex_gen(v));
    for (std::size_t i = 1; i < strata.back().k; ++i)
      gens.push_back(GeneratorName::q_gen(v, static_cast<int>(i)));
  }

  std::vector<Relation> rels;
  for (const VertexStrata& s : strata) {
    const GeneratorName v = GeneratorName::vertex_gen(s.vertex);
    for (std::size_t i = 1; i <= s.k; ++i) {
      Relation r;
      if (i > 1)
        r.lhs.set_coeff(GeneratorName::q_gen(s.vertex, static_cast<int>(i - 1)),
                        1);
      r.lhs += Element::single(v, s.weights[i] - s.weights[i - 1]);
      if (i < s.k)
        r.rhs.set_coeff(GeneratorName::q_gen(s.vertex, static_cast<int>(i)), 1);
      for (std::size_t m = s.counts[i - 1]; m < s.counts[i]; ++m)
        r.rhs += Element::single(GeneratorName::vertex_gen(s.edges[m].range));
      rels.push_back(std::move(r));
    }
  }
  return MonoidPresentation(std::move(gens), std::move(rels));
}

MonoidPresentation build_graph_monoid_classic(const WeightedGraph& g) {
  std::vector<GeneratorName> gens;
  std::vector<Relation> rels;
  for (const std::string& v : g.vertices()) {
    const VertexStrata s = g.strata(v);
    if (s.k > 1) throw NotClassic(v);
    gens.push_back(GeneratorName::vertex_gen(v));
  }
  for (const std::string& v : g.vertices()) {
    const VertexStrata s = g.strata(v);
    if (s.out_degree() == 0) continue;
    Relation r;
    r.lhs = Element::single(GeneratorName::vertex_gen(v));
    for (const Edge& e : s.edges)
      r.rhs += Element::single(GeneratorName::vertex_gen(e.range));
    rels.push_back(std::move(r));
  }
  return MonoidPresentation(std::move(gens), std::move(rels));
}

GroupPresentation build_k0(const WeightedGraph& g) {
  GroupPresentation gp;
  for (const std::string& v : g.vertices())
    gp.generators.push_back(GeneratorName::vertex_gen(v));
  std::vector<std::vector<Int>> rows;
  for (const std::string& v : g.vertices()) {
    const VertexStrata s = g.strata(v);
    if (s.out_degree() == 0) continue;
    std::vector<Int> row(g.vertices().size(), 0);
    row[g.vertex_index(v)] += s.vertex_weight();
    for (const Edge& e : s.edges) row[g.vertex_index(e.range)] -= 1;
    rows.push_back(std::move(row));
  }
  gp.relations = IntMatrix(rows.size(), gp.generators.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < gp.generators.size(); ++j)
      gp.relations(i, j) = rows[i][j];
  return gp;
}

// --- elimination ------------------------------------------------------------

namespace {

bool is_single(const Element& e, const GeneratorName& y) {
  return e.terms().size() == 1 && e.coeff(y) == 1;
}

// The substitution for y if the relation defines it, i.e. one side is exactly
// y and the other side does not mention y.
std::optional<Element> defining_substitution(const Relation& r,
                                             const GeneratorName& y) {
  if (is_single(r.lhs, y) && r.rhs.coeff(y) == 0) return r.rhs;
  if (is_single(r.rhs, y) && r.lhs.coeff(y) == 0) return r.lhs;
  return std::nullopt;
}

}  // namespace

MonoidElimination eliminate_generator(const MonoidPresentation& p,
                                      const GeneratorName& y,
                                      std::size_t relation_index) {
  if (relation_index >= p.relations().size())
    throw IndexOutOfRange("relation index " + std::to_string(relation_index));
  if (!p.has_generator(y))
    throw NotEliminable("unknown generator: " + y.str());
  const Relation& r = p.relations()[relation_index];
  auto subst = defining_substitution(r, y);
  if (!subst)
    throw NotEliminable("relation " + std::to_string(relation_index) +
                        " does not read " + y.str() + " = (" + y.str() +
                        "-free element)");
  std::vector<GeneratorName> gens;
  for (const GeneratorName& g : p.generators())
    if (g != y) gens.push_back(g);
  std::vector<Relation> rels;
  for (std::size_t i = 0; i < p.relations().size(); ++i) {
    if (i == relation_index) continue;
    const Relation& old = p.relations()[i];
    rels.push_back(Relation{old.lhs.substitute(y, *subst),
                            old.rhs.substitute(y, *subst)});
  }
  MonoidElimination out{MonoidPresentation(std::move(gens), std::move(rels)),
                        EliminationStep{y, *subst, relation_index}};
  return out;
}

Element EliminationLog::apply(const Element& e) const {
  Element out = e;
  for (const EliminationStep& s : steps)
    out = out.substitute(s.eliminated, s.substitution);
  return out;
}

SimplifyResult auto_simplify(const MonoidPresentation& p) {
  SimplifyResult out{p.deduplicated(), {}};
  for (;;) {
    bool progressed = false;
    for (GeneratorName::Kind kind :
         {GeneratorName::Kind::Q, GeneratorName::Kind::Vertex}) {
      for (std::size_t i = 0;
           i < out.presentation.relations().size() && !progressed; ++i) {
        for (const GeneratorName& g : out.presentation.generators()) {
          if (g.kind != kind) continue;
          if (!defining_substitution(out.presentation.relations()[i], g))
            continue;
          MonoidElimination e = eliminate_generator(out.presentation, g, i);
          out.presentation = e.result.deduplicated();
          out.log.steps.push_back(std::move(e.step));
          progressed = true;
          break;
        }
      }
      if (progressed) break;
    }
    if (!progressed) return out;
  }
}

GroupElimination eliminate_generator(const GroupPresentation& p,
                                     const GeneratorName& y,
                                     std::size_t relation_index) {
  if (relation_index >= p.relations.rows())
    throw IndexOutOfRange("relation index " + std::to_string(relation_index));
  const std::size_t yi = p.generator_index(y);  // ValidationError if unknown
  const Int c = p.relations(relation_index, yi);
  if (c != 1 && c != -1)
    throw NotEliminable("row " + std::to_string(relation_index) +
                        " has coefficient " + c.str() + " at " + y.str());

  GroupElimination out;
  out.step.eliminated = y;
  out.step.relation_index = relation_index;
  // Solve the row for y:  c*y + rest = 0  =>  y = -c * rest (c^2 = 1).
  for (std::size_t j = 0; j < p.generators.size(); ++j) {
    if (j == yi) continue;
    Int v = -c * p.relations(relation_index, j);
    if (v != 0) out.step.substitution.emplace_back(p.generators[j], v);
  }

  for (std::size_t j = 0; j < p.generators.size(); ++j)
    if (j != yi) out.result.generators.push_back(p.generators[j]);
  out.result.relations =
      IntMatrix(p.relations.rows() - 1, p.generators.size() - 1);
  std::size_t ri = 0;
  for (std::size_t i = 0; i < p.relations.rows(); ++i) {
    if (i == relation_index) continue;
    const Int f = p.relations(i, yi) * c;  // row_i -= f * defining row
    std::size_t cj = 0;
    for (std::size_t j = 0; j < p.generators.size(); ++j) {
      if (j == yi) continue;
      out.result.relations(ri, cj) =
          p.relations(i, j) - f * p.relations(relation_index, j);
      ++cj;
    }
    ++ri;
  }
  return out;
}

GroupPresentation eliminate_q_generators(const GroupPresentation& p) {
  GroupPresentation cur = p;
  for (;;) {
    bool progressed = false;
    for (std::size_t i = 0; i < cur.relations.rows() && !progressed; ++i) {
      for (const GeneratorName& g : cur.generators) {
        if (!g.is_q()) continue;
        const Int c = cur.relations(i, cur.generator_index(g));
        if (c != 1 && c != -1) continue;
        cur = eliminate_generator(cur, g, i).result;
        progressed = true;
        break;
      }
    }
    if (!progressed) return cur;
  }
}

GroupPresentation group_completion(const MonoidPresentation& p) {
  GroupPresentation gp;
  gp.generators = p.generators();
  gp.relations =
      IntMatrix(p.relations().size(), p.generators().size());
  for (std::size_t i = 0; i < p.relations().size(); ++i) {
    const std::vector<Coeff> l = p.to_vec(p.relations()[i].lhs);
    const std::vector<Coeff> r = p.to_vec(p.relations()[i].rhs);
    for (std::size_t j = 0; j < l.size(); ++j)
      gp.relations(i, j) = Int(l[j]) - Int(r[j]);
  }
  return gp;
}

// --- K_0 pipeline -----------------------------------------------------------

AbelianGroupInvariants k0_invariants(const WeightedGraph& g) {
  const GroupPresentation gp = build_k0(g);
  return abelian_invariants(gp.relations, gp.generators.size());
}

K0ConsistencyReport k0_consistency(const WeightedGraph& g) {
  K0ConsistencyReport rep;
  const GroupPresentation direct = build_k0(g);
  rep.direct_matrix = direct.relations;
  rep.direct_snf = smith_normal_form(direct.relations);
  rep.direct_invariants =
      abelian_invariants(direct.relations, direct.generators.size());

  const SimplifyResult simplified = auto_simplify(build_v_monoid(g));
  const GroupPresentation completed = group_completion(simplified.presentation);
  rep.monoid_generators = completed.generators;
  rep.monoid_matrix = completed.relations;
  rep.monoid_snf = smith_normal_form(completed.relations);
  rep.monoid_invariants =
      abelian_invariants(completed.relations, completed.generators.size());

  rep.consistent = group_iso_check(rep.direct_invariants, rep.monoid_invariants);
  return rep;
}

K0ConsistencyReport require_k0_consistency(const WeightedGraph& g) {
  K0ConsistencyReport rep = k0_consistency(g);
  if (!rep.consistent)
    throw ConsistencyFailure(
        "K_0 invariants disagree\ndirect matrix:\n" + rep.direct_matrix.str() +
        "\ndirect SNF:\n" + rep.direct_snf.D.str() +
        "\nvia monoid matrix:\n" + rep.monoid_matrix.str() +
        "\nvia monoid SNF:\n" + rep.monoid_snf.D.str());
  return rep;
}

}  // namespace wmk
