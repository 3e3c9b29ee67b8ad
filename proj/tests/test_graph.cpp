#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "wmk/graph.hpp"

using namespace wmk;

namespace {

// Mirrors graphs/p4_Lprime.json: u <- v -> x with weights 1 and 2.
WeightedGraph lprime() {
  return WeightedGraph({"u", "v", "x"}, {{"e", "v", "u", 1},
                                         {"f", "v", "x", 2}});
}

}  // namespace

TEST_CASE("strata of a two-weight vertex") {
  const VertexStrata s = lprime().strata("v");
  CHECK(s.vertex == "v");
  CHECK(s.k == 2);
  CHECK(s.weights == std::vector<int>{0, 1, 2});
  CHECK(s.counts == std::vector<std::size_t>{0, 1, 2});
  REQUIRE(s.edges.size() == 2);
  CHECK(s.edges[0].id == "e");
  CHECK(s.edges[1].id == "f");
  CHECK(s.vertex_weight() == 2);
  CHECK(s.out_degree() == 2);
}

TEST_CASE("strata of a sink") {
  const VertexStrata s = lprime().strata("u");
  CHECK(s.k == 0);
  CHECK(s.weights == std::vector<int>{0});
  CHECK(s.counts == std::vector<std::size_t>{0});
  CHECK(s.edges.empty());
  CHECK(s.vertex_weight() == 0);
  CHECK(lprime().out_edges("u").empty());
}

TEST_CASE("strata group equal weights and sort ties by edge id") {
  // weight-(2,3,3,3) rose, edges declared out of order on purpose
  const WeightedGraph g({"v"}, {{"h", "v", "v", 3},
                                {"e", "v", "v", 2},
                                {"g", "v", "v", 3},
                                {"f", "v", "v", 3}});
  const VertexStrata s = g.strata("v");
  CHECK(s.k == 2);
  CHECK(s.weights == std::vector<int>{0, 2, 3});
  CHECK(s.counts == std::vector<std::size_t>{0, 1, 4});
  std::vector<std::string> ids;
  for (const Edge& e : s.edges) ids.push_back(e.id);
  CHECK(ids == std::vector<std::string>{"e", "f", "g", "h"});
}

TEST_CASE("edge declaration order does not affect out_edges or strata") {
  const WeightedGraph a({"u", "v", "x"}, {{"e", "v", "u", 2},
                                          {"f", "v", "x", 2}});
  const WeightedGraph b({"u", "v", "x"}, {{"f", "v", "x", 2},
                                          {"e", "v", "u", 2}});
  CHECK(a.out_edges("v") == b.out_edges("v"));
  const VertexStrata sa = a.strata("v");
  const VertexStrata sb = b.strata("v");
  CHECK(sa.weights == sb.weights);
  CHECK(sa.counts == sb.counts);
  CHECK(sa.edges == sb.edges);
}

TEST_CASE("vertex lookups") {
  const WeightedGraph g = lprime();
  CHECK(g.has_vertex("v"));
  CHECK_FALSE(g.has_vertex("w"));
  CHECK(g.vertex_index("u") == 0);
  CHECK(g.vertex_index("x") == 2);
  CHECK(g.vertex_weight("v") == 2);
  CHECK(g.vertex_weight("x") == 0);
  CHECK_THROWS_AS(g.vertex_index("w"), UnknownVertex);
  CHECK_THROWS_AS(g.out_edges("w"), UnknownVertex);
  CHECK_THROWS_AS(g.strata("w"), UnknownVertex);
}

TEST_CASE("construction validation") {
  CHECK_THROWS_AS(WeightedGraph({"u", "u"}, {}), ValidationError);
  CHECK_THROWS_AS(WeightedGraph({""}, {}), ValidationError);
  CHECK_THROWS_AS(WeightedGraph({"u"}, {{"", "u", "u", 1}}), ValidationError);
  CHECK_THROWS_AS(WeightedGraph({"u"}, {{"e", "u", "u", 1},
                                        {"e", "u", "u", 2}}),
                  ValidationError);
  CHECK_THROWS_AS(WeightedGraph({"u"}, {{"e", "w", "u", 1}}), ValidationError);
  CHECK_THROWS_AS(WeightedGraph({"u"}, {{"e", "u", "w", 1}}), ValidationError);
  CHECK_THROWS_AS(WeightedGraph({"u"}, {{"e", "u", "u", 0}}), ValidationError);
  CHECK_THROWS_AS(WeightedGraph({"u"}, {{"e", "u", "u", -3}}), ValidationError);
}

TEST_CASE("parse accepts the documented schema") {
  const WeightedGraph g = parse_graph(R"({
    "vertices": ["u", "v", "x"],
    "edges": [
      {"id": "e", "source": "v", "range": "u", "weight": 1},
      {"id": "f", "source": "v", "range": "x", "weight": 2}
    ]
  })");
  CHECK(g == lprime());
}

TEST_CASE("serialize then parse is the identity") {
  const WeightedGraph g({"a", "b"}, {{"e1", "a", "b", 3},
                                     {"e2", "b", "b", 1}});
  CHECK(parse_graph(serialize_graph(g)) == g);
  // and the indent parameter only changes whitespace
  CHECK(parse_graph(serialize_graph(g, 0)) == g);
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse_graph("not json"), ParseError);
  CHECK_THROWS_AS(parse_graph("[1, 2]"), ParseError);
  CHECK_THROWS_AS(parse_graph(R"({"vertices": ["u"]})"), ParseError);
  CHECK_THROWS_AS(parse_graph(R"({"edges": []})"), ParseError);
  CHECK_THROWS_AS(parse_graph(R"({"vertices": ["u"], "edges": [],
                                  "extra": 1})"),
                  ParseError);
  CHECK_THROWS_AS(parse_graph(R"({"vertices": [1], "edges": []})"),
                  ParseError);
  CHECK_THROWS_AS(parse_graph(R"({"vertices": ["u"],
      "edges": [{"id": "e", "source": "u", "range": "u"}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_graph(R"({"vertices": ["u"],
      "edges": [{"id": "e", "source": "u", "range": "u", "weight": 1,
                 "color": "red"}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_graph(R"({"vertices": ["u"],
      "edges": [{"id": "e", "source": "u", "range": "u", "weight": 1.5}]})"),
                  ParseError);
  // structurally valid JSON, semantically bad graph
  CHECK_THROWS_AS(parse_graph(R"({"vertices": ["u"],
      "edges": [{"id": "e", "source": "u", "range": "u", "weight": 0}]})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_graph(R"({"vertices": ["u", "u"], "edges": []})"),
                  ValidationError);
}

TEST_CASE("load_graph_file reports unreadable paths") {
  CHECK_THROWS_AS(load_graph_file("/nonexistent/graph.json"), ParseError);
}
