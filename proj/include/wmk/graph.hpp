#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "wmk/errors.hpp"

namespace wmk {

struct Edge {
  std::string id;
  std::string source;  // s(e)
  std::string range;   // r(e)
  int weight = 1;      // w(e) >= 1

  bool operator==(const Edge&) const = default;
};

// Per-vertex weight stratification.  Outgoing edges are ordered by ascending
// weight, ties broken by edge id; weights[0] = 0 and counts[0] = 0 so that
// weights[l] / counts[l] are the l-th distinct weight and the number of
// outgoing edges of weight <= weights[l], for 1 <= l <= k.
struct VertexStrata {
  std::string vertex;
  std::size_t k = 0;               // number of distinct outgoing weights
  std::vector<int> weights;        // size k+1, strictly increasing from 0
  std::vector<std::size_t> counts; // size k+1, nondecreasing from 0
  std::vector<Edge> edges;         // s^-1(v), weight-then-id order

  int vertex_weight() const { return weights.back(); }     // max, 0 for sinks
  std::size_t out_degree() const { return counts.back(); }
};

// Finite directed graph with positive integer edge weights.  Vertex and edge
// ids are opaque strings; declaration order of vertices is preserved and is
// the order used for generators and matrix columns downstream.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(std::vector<std::string> vertices, std::vector<Edge> edges);

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_vertex(const std::string& v) const;
  std::size_t vertex_index(const std::string& v) const;  // throws UnknownVertex

  // s^-1(v) in weight-then-id order.
  std::vector<Edge> out_edges(const std::string& v) const;

  VertexStrata strata(const std::string& v) const;

  // Maximum outgoing weight; 0 for sinks.
  int vertex_weight(const std::string& v) const;

  bool operator==(const WeightedGraph&) const = default;

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::map<std::string, std::size_t> vertex_index_;
};

// JSON schema: {"vertices": ["u", ...],
//               "edges": [{"id": "e", "source": "v", "range": "u",
//                          "weight": 1}, ...]}
// Unknown keys are rejected.  Implemented in json_io.cpp.
WeightedGraph parse_graph(const std::string& json_text);
std::string serialize_graph(const WeightedGraph& g, int indent = 2);
WeightedGraph load_graph_file(const std::string& path);

}  // namespace wmk
