#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "wmk/engine.hpp"
#include "wmk/graph.hpp"
#include "wmk/presentation.hpp"
#include "wmk/star_algebra.hpp"

namespace wmk {

// Graph schema (see graph.hpp); malformed documents raise ParseError.
nlohmann::json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const nlohmann::json& j);

// "u=2,q:v:1=1" -> element over p's generators; "0" is the zero element.
// ParseError on malformed input, ValidationError on unknown generators.
Element parse_element_literal(const std::string& text,
                              const MonoidPresentation& p);

nlohmann::json element_to_json(const Element& e);
nlohmann::json presentation_to_json(const MonoidPresentation& p);
nlohmann::json invariants_to_json(const AbelianGroupInvariants& inv);
nlohmann::json matrix_to_json(const IntMatrix& m);
nlohmann::json decision_to_json(const DecisionResult& r,
                                const MonoidPresentation& p);
nlohmann::json atom_to_json(const AtomResult& r);
nlohmann::json module_type_to_json(const ModuleTypeResult& r);
nlohmann::json infinite_to_json(const InfiniteCertificateResult& r);
nlohmann::json refinement_to_json(const RefinementResult& r);
nlohmann::json fingerprint_to_json(const Fingerprint& fp);
nlohmann::json witness_report_to_json(const WitnessReport& rep);
nlohmann::json consistency_to_json(const K0ConsistencyReport& rep);

}  // namespace wmk
