// Command-line driver: decision procedures and reports for monoids and
// K-theory data attached to weighted graphs.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "wmk/engine.hpp"
#include "wmk/json_io.hpp"
#include "wmk/presentation.hpp"
#include "wmk/star_algebra.hpp"

namespace {

using nlohmann::json;

struct Bounds {
  int degree = 8;            // total-degree bound for bounded searches
  std::size_t nodes = 100000;   // BFS / class enumeration node cap
  std::size_t pairs = 100000;   // completion S-pair cap
  int n = 20;                // module-type n bound
  int k = 20;                // module-type k bound
  int infinite = 10;         // distinctness bound for the weight certificate
};

Bounds env_bounds() {
  Bounds b;
  const char* env = std::getenv("WMK_DEFAULT_BOUNDS");
  if (!env || !*env) return b;
  std::istringstream in(env);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos)
      throw wmk::ParseError("WMK_DEFAULT_BOUNDS entry \"" + part +
                            "\" is not key=value");
    const std::string key = part.substr(0, eq);
    const std::string val = part.substr(eq + 1);
    long long v = 0;
    try {
      std::size_t used = 0;
      v = std::stoll(val, &used);
      if (used != val.size() || v < 0) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw wmk::ParseError("bad value \"" + val + "\" in WMK_DEFAULT_BOUNDS");
    }
    if (key == "degree")
      b.degree = static_cast<int>(v);
    else if (key == "nodes")
      b.nodes = static_cast<std::size_t>(v);
    else if (key == "pairs")
      b.pairs = static_cast<std::size_t>(v);
    else if (key == "n")
      b.n = static_cast<int>(v);
    else if (key == "k")
      b.k = static_cast<int>(v);
    else if (key == "infinite")
      b.infinite = static_cast<int>(v);
    else
      throw wmk::ParseError("unknown key \"" + key + "\" in WMK_DEFAULT_BOUNDS");
  }
  return b;
}

wmk::EngineOptions engine_options(const Bounds& b) {
  wmk::EngineOptions opt;
  opt.completion_pair_cap = b.pairs;
  opt.bfs_node_cap = b.nodes;
  opt.degree_bound = b.degree;
  return opt;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string torsion_str(const wmk::AbelianGroupInvariants& inv) {
  if (inv.torsion.empty()) return "none";
  std::string out;
  for (const wmk::Int& t : inv.torsion) {
    if (!out.empty()) out += " ";
    out += t.str();
  }
  return out;
}

int run_present(const std::string& path, bool simplify, bool as_json) {
  const wmk::WeightedGraph g = wmk::load_graph_file(path);
  wmk::MonoidPresentation pres = wmk::build_v_monoid(g);
  wmk::EliminationLog log;
  if (simplify) {
    wmk::SimplifyResult sr = wmk::auto_simplify(pres);
    pres = std::move(sr.presentation);
    log = std::move(sr.log);
  }
  if (as_json) {
    json j = wmk::presentation_to_json(pres);
    if (simplify) {
      json steps = json::array();
      for (const wmk::EliminationStep& s : log.steps)
        steps.push_back({{"generator", s.eliminated.str()},
                         {"substitution", wmk::element_to_json(s.substitution)}});
      j["eliminated"] = std::move(steps);
    }
    emit(j);
    return 0;
  }
  std::cout << "generators:";
  for (const wmk::GeneratorName& gn : pres.generators())
    std::cout << " " << gn.str();
  std::cout << "\n";
  std::cout << "relations (" << pres.relations().size() << "):\n";
  for (std::size_t i = 0; i < pres.relations().size(); ++i)
    std::cout << "  " << pres.render_relation(i) << "\n";
  if (simplify)
    for (const wmk::EliminationStep& s : log.steps)
      std::cout << "eliminated: " << s.eliminated.str() << " = "
                << s.substitution.str() << "\n";
  return 0;
}

int run_k0(const std::string& path, bool as_json) {
  const wmk::WeightedGraph g = wmk::load_graph_file(path);
  const wmk::GroupPresentation gp = wmk::build_k0(g);
  const wmk::AbelianGroupInvariants inv =
      wmk::abelian_invariants(gp.relations, gp.generators.size());
  if (as_json) {
    json gens = json::array();
    for (const wmk::GeneratorName& gn : gp.generators) gens.push_back(gn.str());
    emit({{"generators", std::move(gens)},
          {"matrix", wmk::matrix_to_json(gp.relations)},
          {"free_rank", inv.free_rank},
          {"torsion", wmk::invariants_to_json(inv)["torsion"]}});
    return 0;
  }
  std::cout << "free_rank: " << inv.free_rank << "\n";
  std::cout << "torsion: " << torsion_str(inv) << "\n";
  return 0;
}

int run_equal(const std::string& path, const std::string& ta,
              const std::string& tb, const Bounds& b, bool assert_eq,
              bool assert_ne, bool as_json) {
  const wmk::WeightedGraph g = wmk::load_graph_file(path);
  const wmk::CongruenceEngine eng(wmk::build_v_monoid(g), engine_options(b));
  const wmk::Element ea = wmk::parse_element_literal(ta, eng.presentation());
  const wmk::Element eb = wmk::parse_element_literal(tb, eng.presentation());
  const wmk::DecisionResult res = eng.equal(ea, eb);
  if (as_json) {
    emit(wmk::decision_to_json(res, eng.presentation()));
  } else {
    switch (res.verdict) {
      case wmk::Verdict::Equal:
        std::cout << "verdict: equal\n";
        std::cout << "certificate: rewrite trace with "
                  << res.trace->steps.size() << " steps\n";
        break;
      case wmk::Verdict::NotEqual:
        std::cout << "verdict: not_equal\n";
        if (res.lattice_witness)
          std::cout << "certificate: difference outside the relation lattice\n";
        else if (res.normal_forms)
          std::cout << "certificate: distinct canonical forms\n";
        else if (res.disjoint_complete_classes)
          std::cout << "certificate: disjoint fully enumerated classes\n";
        break;
      case wmk::Verdict::Unknown:
        std::cout << "verdict: unknown\n";
        if (!res.note.empty()) std::cout << "note: " << res.note << "\n";
        break;
    }
  }
  if (res.verdict == wmk::Verdict::Unknown) return 2;
  if (assert_eq) return res.verdict == wmk::Verdict::Equal ? 0 : 1;
  if (assert_ne) return res.verdict == wmk::Verdict::NotEqual ? 0 : 1;
  return 0;
}

int run_module_type(const std::string& path, const std::string& vertex,
                    const Bounds& b, bool as_json) {
  const wmk::WeightedGraph g = wmk::load_graph_file(path);
  g.vertex_index(vertex);  // throws UnknownVertex early
  const wmk::CongruenceEngine eng(wmk::build_v_monoid(g), engine_options(b));
  const wmk::ModuleTypeResult res =
      wmk::module_type(eng, wmk::GeneratorName::vertex_gen(vertex), b.n, b.k);
  if (as_json) {
    emit(wmk::module_type_to_json(res));
  } else {
    switch (res.status) {
      case wmk::ModuleTypeResult::Status::Found:
        std::cout << "module_type: (" << res.n << "," << res.k << ")\n";
        break;
      case wmk::ModuleTypeResult::Status::NoneFound:
        std::cout << "module_type: none within n<=" << b.n << " k<=" << b.k
                  << "\n";
        break;
      case wmk::ModuleTypeResult::Status::Inconclusive:
        std::cout << "module_type: inconclusive\n";
        if (!res.note.empty()) std::cout << "note: " << res.note << "\n";
        break;
    }
  }
  switch (res.status) {
    case wmk::ModuleTypeResult::Status::Found:
      return 0;
    case wmk::ModuleTypeResult::Status::NoneFound:
      return 1;
    case wmk::ModuleTypeResult::Status::Inconclusive:
      return 2;
  }
  return 2;
}

int run_atoms(const std::string& path, const Bounds& b, bool simplify,
              bool as_json) {
  const wmk::WeightedGraph g = wmk::load_graph_file(path);
  wmk::MonoidPresentation pres = wmk::build_v_monoid(g);
  if (simplify) pres = wmk::auto_simplify(pres).presentation;
  const wmk::CongruenceEngine eng(pres, engine_options(b));
  std::vector<wmk::Element> atoms;
  std::size_t unknown = 0;
  for (const wmk::Element& rep :
       wmk::enumerate_class_representatives(eng, b.degree)) {
    try {
      const wmk::AtomResult r = wmk::is_atom(eng, rep, b.nodes);
      if (r.status == wmk::AtomResult::Status::Yes) atoms.push_back(rep);
      if (r.status == wmk::AtomResult::Status::Unknown) ++unknown;
    } catch (const wmk::ZeroElement&) {
      // zero is not an atom
    }
  }
  if (as_json) {
    json ja = json::array();
    for (const wmk::Element& a : atoms)
      ja.push_back(eng.presentation().render(a));
    emit({{"degree_bound", b.degree},
          {"atoms", std::move(ja)},
          {"unknown", unknown}});
    return 0;
  }
  std::cout << "atoms (" << atoms.size() << "):\n";
  for (const wmk::Element& a : atoms)
    std::cout << "  " << eng.presentation().render(a) << "\n";
  if (unknown) std::cout << "unknown: " << unknown << "\n";
  return 0;
}

int run_infinite(const std::string& path, const Bounds& b, bool as_json) {
  const wmk::WeightedGraph g = wmk::load_graph_file(path);
  const wmk::CongruenceEngine eng(wmk::build_v_monoid(g), engine_options(b));
  const wmk::InfiniteCertificateResult res =
      wmk::infinite_certificate(g, eng, b.infinite);
  if (as_json) {
    emit(wmk::infinite_to_json(res));
  } else {
    switch (res.status) {
      case wmk::InfiniteCertificateResult::Status::InfiniteByWeights:
        std::cout << "infinite: yes (vertex " << res.vertex << ", bound "
                  << res.bound << ")\n";
        break;
      case wmk::InfiniteCertificateResult::Status::NotApplicable:
        std::cout << "infinite: not_applicable\n";
        if (!res.note.empty()) std::cout << "note: " << res.note << "\n";
        break;
      case wmk::InfiniteCertificateResult::Status::Inconclusive:
        std::cout << "infinite: inconclusive\n";
        if (!res.note.empty()) std::cout << "note: " << res.note << "\n";
        break;
    }
  }
  switch (res.status) {
    case wmk::InfiniteCertificateResult::Status::InfiniteByWeights:
      return 0;
    case wmk::InfiniteCertificateResult::Status::NotApplicable:
      return 1;
    case wmk::InfiniteCertificateResult::Status::Inconclusive:
      return 2;
  }
  return 2;
}

int run_refine(const std::string& path, const Bounds& b, bool simplify,
               bool as_json) {
  const wmk::WeightedGraph g = wmk::load_graph_file(path);
  wmk::MonoidPresentation pres = wmk::build_v_monoid(g);
  if (simplify) pres = wmk::auto_simplify(pres).presentation;
  const wmk::CongruenceEngine eng(pres, engine_options(b));
  const wmk::RefinementResult res = wmk::refinement_check(eng, b.degree);
  if (as_json) {
    emit(wmk::refinement_to_json(res));
  } else {
    switch (res.status) {
      case wmk::RefinementResult::Status::Satisfied:
        std::cout << "refinement: satisfied (degree <= " << res.degree_bound
                  << ")\n";
        break;
      case wmk::RefinementResult::Status::Fails:
        std::cout << "refinement: fails\n";
        std::cout << "witness: " << res.witness->a1.str() << " + "
                  << res.witness->a2.str() << " = " << res.witness->b1.str()
                  << " + " << res.witness->b2.str() << "\n";
        break;
      case wmk::RefinementResult::Status::Inapplicable:
        std::cout << "refinement: inapplicable\n";
        if (!res.note.empty()) std::cout << "note: " << res.note << "\n";
        break;
    }
  }
  switch (res.status) {
    case wmk::RefinementResult::Status::Satisfied:
      return 0;
    case wmk::RefinementResult::Status::Fails:
      return 1;
    case wmk::RefinementResult::Status::Inapplicable:
      return 2;
  }
  return 2;
}

int run_witnesses(const std::string& path,
                  const std::optional<std::string>& vertex, bool as_json) {
  const wmk::WeightedGraph g = wmk::load_graph_file(path);
  const wmk::WitnessReport rep = wmk::verify_theorem_witnesses(g, vertex);
  if (as_json) {
    emit(wmk::witness_report_to_json(rep));
  } else {
    std::size_t ok = 0;
    for (const wmk::IdentityCheck& c : rep.checks) {
      if (c.verified) ++ok;
      std::cout << (c.verified ? "[ok]   " : "[FAIL] ") << c.vertex << " "
                << c.name;
      if (!c.verified)
        std::cout << " entry (" << c.row << "," << c.col
                  << ") residual: " << c.residual;
      std::cout << "\n";
    }
    std::cout << "verified: " << ok << "/" << rep.checks.size() << "\n";
  }
  return rep.all_verified() ? 0 : 1;
}

int run_fingerprint(const std::string& path, const Bounds& b, bool as_json) {
  const wmk::WeightedGraph g = wmk::load_graph_file(path);
  wmk::SimplifyResult sr = wmk::auto_simplify(wmk::build_v_monoid(g));
  const wmk::CongruenceEngine eng(std::move(sr.presentation),
                                  engine_options(b));
  wmk::FingerprintBounds fb;
  fb.atom_degree = b.degree;
  fb.refinement_degree = b.degree;
  fb.infinite_bound = b.infinite;
  fb.class_node_cap = b.nodes;
  const wmk::Fingerprint fp = wmk::fingerprint(eng, fb, &g);
  if (as_json) {
    emit(wmk::fingerprint_to_json(fp));
    return 0;
  }
  std::cout << "generators: " << fp.generator_count << "\n";
  std::cout << "relations: " << fp.relation_count << "\n";
  std::cout << "atoms (degree <= " << fp.atom_degree_bound << "):";
  for (const wmk::Element& a : fp.atoms) std::cout << " [" << a.str() << "]";
  std::cout << "\n";
  if (fp.atom_unknown) std::cout << "atoms_unknown: " << fp.atom_unknown << "\n";
  std::cout << "group: free_rank " << fp.group.free_rank << ", torsion "
            << torsion_str(fp.group) << "\n";
  std::cout << "degree_preserving: " << (fp.degree_preserving ? "yes" : "no")
            << "\n";
  std::cout << "refinement: ";
  switch (fp.refinement.status) {
    case wmk::RefinementResult::Status::Satisfied:
      std::cout << "satisfied\n";
      break;
    case wmk::RefinementResult::Status::Fails:
      std::cout << "fails\n";
      break;
    case wmk::RefinementResult::Status::Inapplicable:
      std::cout << "inapplicable\n";
      break;
  }
  std::cout << "infiniteness: ";
  switch (fp.infiniteness) {
    case wmk::Fingerprint::Infiniteness::InfiniteByWeights:
      std::cout << "infinite_by_weights";
      break;
    case wmk::Fingerprint::Infiniteness::InfiniteByGroupRank:
      std::cout << "infinite_by_group_rank";
      break;
    case wmk::Fingerprint::Infiniteness::Finite:
      std::cout << "finite (" << fp.monoid_size << " classes)";
      break;
    case wmk::Fingerprint::Infiniteness::Unknown:
      std::cout << "unknown";
      break;
  }
  std::cout << "\n";
  return 0;
}

int run_consistency(const std::string& path, bool as_json) {
  const wmk::WeightedGraph g = wmk::load_graph_file(path);
  const wmk::K0ConsistencyReport rep = wmk::k0_consistency(g);
  if (as_json) {
    emit(wmk::consistency_to_json(rep));
  } else {
    std::cout << "direct: free_rank " << rep.direct_invariants.free_rank
              << ", torsion " << torsion_str(rep.direct_invariants) << "\n";
    std::cout << "monoid: free_rank " << rep.monoid_invariants.free_rank
              << ", torsion " << torsion_str(rep.monoid_invariants) << "\n";
    std::cout << "consistent: " << (rep.consistent ? "yes" : "no") << "\n";
  }
  return rep.consistent ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monoid and K-theory invariants of weighted graphs"};
  app.require_subcommand(1);

  int exit_code = 0;
  Bounds bounds;

  std::string path, vertex, elem_a, elem_b;
  bool as_json = false, simplify = false, assert_eq = false, assert_ne = false;
  std::optional<std::string> vertex_opt;

  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("graph", path, "graph JSON file")->required();
    sub->add_flag("--json", as_json, "emit JSON");
  };
  auto add_engine_bounds = [&](CLI::App* sub) {
    sub->add_option("--bound-nodes", bounds.nodes, "search node cap");
    sub->add_option("--bound-pairs", bounds.pairs, "completion pair cap");
  };

  try {
    bounds = env_bounds();

    CLI::App* present = app.add_subcommand("present", "print the presentation");
    add_graph(present);
    present->add_flag("--simplify", simplify, "eliminate redundant generators");
    present->callback([&] { exit_code = run_present(path, simplify, as_json); });

    CLI::App* k0 = app.add_subcommand("k0", "lattice invariants");
    add_graph(k0);
    k0->callback([&] { exit_code = run_k0(path, as_json); });

    CLI::App* equal = app.add_subcommand("equal", "decide a congruence");
    add_graph(equal);
    equal->add_option("a", elem_a, "left element, e.g. \"u=1,q:v:1=2\"")
        ->required();
    equal->add_option("b", elem_b, "right element")->required();
    add_engine_bounds(equal);
    CLI::Option* oa = equal->add_flag("--assert-equal", assert_eq,
                                      "exit 1 unless the verdict is equal");
    equal
        ->add_flag("--assert-not-equal", assert_ne,
                   "exit 1 unless the verdict is not_equal")
        ->excludes(oa);
    equal->callback([&] {
      exit_code =
          run_equal(path, elem_a, elem_b, bounds, assert_eq, assert_ne, as_json);
    });

    CLI::App* mt = app.add_subcommand("module-type", "vertex module type");
    add_graph(mt);
    mt->add_option("--vertex", vertex, "vertex generator")->required();
    mt->add_option("--bound-n", bounds.n, "n bound");
    mt->add_option("--bound-k", bounds.k, "k bound");
    add_engine_bounds(mt);
    mt->callback([&] { exit_code = run_module_type(path, vertex, bounds, as_json); });

    CLI::App* atoms = app.add_subcommand("atoms", "atom representatives");
    add_graph(atoms);
    atoms->add_option("--bound-degree", bounds.degree, "total degree bound");
    atoms->add_flag("--simplify", simplify, "eliminate redundant generators");
    add_engine_bounds(atoms);
    atoms->callback(
        [&] { exit_code = run_atoms(path, bounds, simplify, as_json); });

    CLI::App* inf = app.add_subcommand("infinite-check",
                                       "weight-stratification certificate");
    add_graph(inf);
    inf->add_option("--bound-n", bounds.infinite, "distinctness bound");
    add_engine_bounds(inf);
    inf->callback([&] { exit_code = run_infinite(path, bounds, as_json); });

    CLI::App* refine = app.add_subcommand("refine-check",
                                          "bounded refinement property");
    add_graph(refine);
    refine->add_option("--bound-degree", bounds.degree, "total degree bound");
    refine->add_flag("--simplify", simplify, "eliminate redundant generators");
    add_engine_bounds(refine);
    refine->callback(
        [&] { exit_code = run_refine(path, bounds, simplify, as_json); });

    CLI::App* wit = app.add_subcommand("verify-witnesses",
                                       "corner decomposition identities");
    add_graph(wit);
    wit->add_option("--vertex", vertex, "restrict to one vertex");
    wit->callback([&] {
      vertex_opt = vertex.empty() ? std::nullopt
                                  : std::optional<std::string>(vertex);
      exit_code = run_witnesses(path, vertex_opt, as_json);
    });

    CLI::App* fp = app.add_subcommand("fingerprint", "bounded invariant summary");
    add_graph(fp);
    fp->add_option("--bound-degree", bounds.degree, "total degree bound");
    fp->add_option("--bound-n", bounds.infinite, "distinctness bound");
    add_engine_bounds(fp);
    fp->callback([&] { exit_code = run_fingerprint(path, bounds, as_json); });

    CLI::App* cons = app.add_subcommand("consistency",
                                        "cross-check the two lattice routes");
    add_graph(cons);
    cons->callback([&] { exit_code = run_consistency(path, as_json); });

    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const wmk::NonTermination& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
