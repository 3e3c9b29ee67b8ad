#include "wmk/json_io.hpp"

#include <fstream>
#include <sstream>

namespace wmk {

namespace {

using nlohmann::json;

void require_keys(const json& j, std::initializer_list<const char*> keys,
                  const std::string& what) {
  if (!j.is_object()) throw ParseError(what + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) known = true;
    if (!known)
      throw ParseError("unexpected key \"" + it.key() + "\" in " + what);
  }
  for (const char* k : keys)
    if (!j.contains(k))
      throw ParseError(what + " is missing key \"" + std::string(k) + "\"");
}

json int_to_json(const Int& v) { return v.str(); }

json int_vec_to_json(const std::vector<Int>& v) {
  json out = json::array();
  for (const Int& x : v) out.push_back(int_to_json(x));
  return out;
}

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Coeff c : v) out.push_back(c);
  return out;
}

}  // namespace

json graph_to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges())
    edges.push_back({{"id", e.id},
                     {"source", e.source},
                     {"range", e.range},
                     {"weight", e.weight}});
  return {{"vertices", g.vertices()}, {"edges", edges}};
}

WeightedGraph graph_from_json(const json& j) {
  require_keys(j, {"vertices", "edges"}, "graph document");
  if (!j["vertices"].is_array())
    throw ParseError("\"vertices\" must be an array of strings");
  std::vector<std::string> vertices;
  for (const json& v : j["vertices"]) {
    if (!v.is_string()) throw ParseError("vertex names must be strings");
    vertices.push_back(v.get<std::string>());
  }
  if (!j["edges"].is_array())
    throw ParseError("\"edges\" must be an array of edge objects");
  std::vector<Edge> edges;
  for (const json& e : j["edges"]) {
    require_keys(e, {"id", "source", "range", "weight"}, "edge");
    if (!e["id"].is_string() || !e["source"].is_string() ||
        !e["range"].is_string())
      throw ParseError("edge id, source and range must be strings");
    if (!e["weight"].is_number_integer())
      throw ParseError("edge weight must be an integer");
    edges.push_back({e["id"].get<std::string>(), e["source"].get<std::string>(),
                     e["range"].get<std::string>(), e["weight"].get<int>()});
  }
  return WeightedGraph(std::move(vertices), std::move(edges));
}

WeightedGraph parse_graph(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return graph_from_json(j);
}

std::string serialize_graph(const WeightedGraph& g, int indent) {
  return graph_to_json(g).dump(indent) + "\n";
}

WeightedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

Element parse_element_literal(const std::string& text,
                              const MonoidPresentation& p) {
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  const std::string whole = trim(text);
  if (whole.empty()) throw ParseError("empty element literal");
  Element out;
  if (whole == "0") return out;
  std::istringstream in(whole);
  std::string part;
  while (std::getline(in, part, ',')) {
    part = trim(part);
    const auto eq = part.rfind('=');
    if (eq == std::string::npos)
      throw ParseError("element term \"" + part +
                       "\" is not of the form name=coefficient");
    const std::string name = trim(part.substr(0, eq));
    const std::string count = trim(part.substr(eq + 1));
    GeneratorName g = GeneratorName::parse(name);
    if (!p.has_generator(g))
      throw ValidationError("unknown generator \"" + g.str() + "\"");
    Coeff c = 0;
    try {
      std::size_t used = 0;
      c = std::stoll(count, &used);
      if (used != count.size()) throw std::invalid_argument(count);
    } catch (const std::exception&) {
      throw ParseError("bad coefficient \"" + count + "\" in element literal");
    }
    if (c < 0) throw ParseError("coefficients must be nonnegative");
    out.set_coeff(g, out.coeff(g) + c);
  }
  return out;
}

json element_to_json(const Element& e) {
  json out = json::object();
  for (const auto& [g, c] : e.terms()) out[g.str()] = c;
  return out;
}

json presentation_to_json(const MonoidPresentation& p) {
  json gens = json::array();
  for (const GeneratorName& g : p.generators()) gens.push_back(g.str());
  json rels = json::array();
  for (const Relation& r : p.relations())
    rels.push_back({{"lhs", element_to_json(r.lhs)},
                    {"rhs", element_to_json(r.rhs)},
                    {"display", r.lhs.str() + " = " + r.rhs.str()}});
  return {{"generators", gens}, {"relations", rels}};
}

json invariants_to_json(const AbelianGroupInvariants& inv) {
  return {{"free_rank", inv.free_rank}, {"torsion", int_vec_to_json(inv.torsion)}};
}

json matrix_to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(int_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json decision_to_json(const DecisionResult& r, const MonoidPresentation& p) {
  json out;
  switch (r.verdict) {
    case Verdict::Equal:
      out["verdict"] = "equal";
      break;
    case Verdict::NotEqual:
      out["verdict"] = "not_equal";
      break;
    case Verdict::Unknown:
      out["verdict"] = "unknown";
      break;
  }
  if (r.trace) {
    json steps = json::array();
    for (const TraceStep& s : r.trace->steps)
      steps.push_back({{"relation", s.relation}, {"forward", s.forward}});
    out["trace"] = {{"start", p.render(p.from_vec(r.trace->start))},
                    {"end", p.render(p.from_vec(r.trace->end))},
                    {"steps", std::move(steps)}};
  }
  if (r.lattice_witness)
    out["lattice_witness"] = int_vec_to_json(*r.lattice_witness);
  if (r.normal_forms)
    out["normal_forms"] = {vec_to_json(r.normal_forms->first),
                           vec_to_json(r.normal_forms->second)};
  if (r.disjoint_complete_classes) out["disjoint_complete_classes"] = true;
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

json atom_to_json(const AtomResult& r) {
  json out;
  switch (r.status) {
    case AtomResult::Status::Yes:
      out["atom"] = "yes";
      break;
    case AtomResult::Status::No:
      out["atom"] = "no";
      break;
    case AtomResult::Status::Unknown:
      out["atom"] = "unknown";
      break;
  }
  if (r.witness)
    out["decomposition"] = {element_to_json(r.witness->first),
                            element_to_json(r.witness->second)};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

json module_type_to_json(const ModuleTypeResult& r) {
  json out;
  switch (r.status) {
    case ModuleTypeResult::Status::Found:
      out["status"] = "found";
      out["n"] = r.n;
      out["k"] = r.k;
      break;
    case ModuleTypeResult::Status::NoneFound:
      out["status"] = "none_found";
      break;
    case ModuleTypeResult::Status::Inconclusive:
      out["status"] = "inconclusive";
      if (r.n > 0) {
        out["n"] = r.n;
        out["k"] = r.k;
      }
      break;
  }
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

json infinite_to_json(const InfiniteCertificateResult& r) {
  json out;
  switch (r.status) {
    case InfiniteCertificateResult::Status::InfiniteByWeights:
      out["status"] = "infinite";
      break;
    case InfiniteCertificateResult::Status::NotApplicable:
      out["status"] = "not_applicable";
      break;
    case InfiniteCertificateResult::Status::Inconclusive:
      out["status"] = "inconclusive";
      break;
  }
  if (!r.vertex.empty()) out["vertex"] = r.vertex;
  out["bound"] = r.bound;
  json reps = json::array();
  for (const Element& e : r.representatives) reps.push_back(element_to_json(e));
  if (!reps.empty()) out["representatives"] = std::move(reps);
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

json refinement_to_json(const RefinementResult& r) {
  json out;
  switch (r.status) {
    case RefinementResult::Status::Satisfied:
      out["status"] = "satisfied";
      break;
    case RefinementResult::Status::Fails:
      out["status"] = "fails";
      break;
    case RefinementResult::Status::Inapplicable:
      out["status"] = "inapplicable";
      break;
  }
  out["degree_bound"] = r.degree_bound;
  out["candidates_examined"] = r.candidates_examined;
  if (r.witness)
    out["witness"] = {{"a1", element_to_json(r.witness->a1)},
                      {"a2", element_to_json(r.witness->a2)},
                      {"b1", element_to_json(r.witness->b1)},
                      {"b2", element_to_json(r.witness->b2)}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

json fingerprint_to_json(const Fingerprint& fp) {
  json atoms = json::array();
  for (const Element& a : fp.atoms) atoms.push_back(a.str());
  json out = {{"generator_count", fp.generator_count},
              {"relation_count", fp.relation_count},
              {"atom_degree_bound", fp.atom_degree_bound},
              {"atoms", std::move(atoms)},
              {"atom_unknown", fp.atom_unknown},
              {"group", invariants_to_json(fp.group)},
              {"degree_preserving", fp.degree_preserving},
              {"refinement", refinement_to_json(fp.refinement)}};
  switch (fp.infiniteness) {
    case Fingerprint::Infiniteness::InfiniteByWeights:
      out["infiniteness"] = "infinite_by_weights";
      break;
    case Fingerprint::Infiniteness::InfiniteByGroupRank:
      out["infiniteness"] = "infinite_by_group_rank";
      break;
    case Fingerprint::Infiniteness::Finite:
      out["infiniteness"] = "finite";
      out["monoid_size"] = fp.monoid_size;
      break;
    case Fingerprint::Infiniteness::Unknown:
      out["infiniteness"] = "unknown";
      break;
  }
  if (!fp.infiniteness_detail.empty())
    out["infiniteness_detail"] = fp.infiniteness_detail;
  return out;
}

json witness_report_to_json(const WitnessReport& rep) {
  json checks = json::array();
  for (const IdentityCheck& c : rep.checks) {
    json jc = {{"name", c.name}, {"vertex", c.vertex}, {"verified", c.verified}};
    if (!c.verified) {
      jc["row"] = c.row;
      jc["col"] = c.col;
      jc["residual"] = c.residual;
    }
    checks.push_back(std::move(jc));
  }
  return {{"all_verified", rep.all_verified()}, {"checks", std::move(checks)}};
}

json consistency_to_json(const K0ConsistencyReport& rep) {
  json monoid_gens = json::array();
  for (const GeneratorName& g : rep.monoid_generators)
    monoid_gens.push_back(g.str());
  return {{"consistent", rep.consistent},
          {"direct_matrix", matrix_to_json(rep.direct_matrix)},
          {"direct_invariants", invariants_to_json(rep.direct_invariants)},
          {"direct_factors", int_vec_to_json(rep.direct_snf.invariant_factors)},
          {"monoid_generators", std::move(monoid_gens)},
          {"monoid_matrix", matrix_to_json(rep.monoid_matrix)},
          {"monoid_invariants", invariants_to_json(rep.monoid_invariants)},
          {"monoid_factors", int_vec_to_json(rep.monoid_snf.invariant_factors)}};
}

}  // namespace wmk
