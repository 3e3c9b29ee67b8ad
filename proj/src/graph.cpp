#include "wmk/graph.hpp"

#include <algorithm>
#include <set>

namespace wmk {

WeightedGraph::WeightedGraph(std::vector<std::string> vertices,
                             std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].empty())
      throw ValidationError("empty vertex id at position " + std::to_string(i));
    if (!vertex_index_.emplace(vertices_[i], i).second)
      throw ValidationError("duplicate vertex id: " + vertices_[i]);
  }
  std::set<std::string> edge_ids;
  for (const Edge& e : edges_) {
    if (e.id.empty()) throw ValidationError("empty edge id");
    if (!edge_ids.insert(e.id).second)
      throw ValidationError("duplicate edge id: " + e.id);
    if (!vertex_index_.count(e.source))
      throw ValidationError("edge " + e.id + ": unknown source " + e.source);
    if (!vertex_index_.count(e.range))
      throw ValidationError("edge " + e.id + ": unknown range " + e.range);
    if (e.weight < 1)
      throw ValidationError("edge " + e.id + ": weight must be >= 1, got " +
                            std::to_string(e.weight));
  }
}

bool WeightedGraph::has_vertex(const std::string& v) const {
  return vertex_index_.count(v) != 0;
}

std::size_t WeightedGraph::vertex_index(const std::string& v) const {
  auto it = vertex_index_.find(v);
  if (it == vertex_index_.end()) throw UnknownVertex(v);
  return it->second;
}

std::vector<Edge> WeightedGraph::out_edges(const std::string& v) const {
  if (!has_vertex(v)) throw UnknownVertex(v);
  std::vector<Edge> out;
  for (const Edge& e : edges_)
    if (e.source == v) out.push_back(e);
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
    return a.weight != b.weight ? a.weight < b.weight : a.id < b.id;
  });
  return out;
}

VertexStrata WeightedGraph::strata(const std::string& v) const {
  VertexStrata s;
  s.vertex = v;
  s.edges = out_edges(v);  // throws UnknownVertex
  s.weights.push_back(0);
  s.counts.push_back(0);
  for (std::size_t i = 0; i < s.edges.size(); ++i) {
    if (s.weights.back() != s.edges[i].weight) {
      s.weights.push_back(s.edges[i].weight);
      s.counts.push_back(i + 1);
    } else {
      s.counts.back() = i + 1;
    }
  }
  s.k = s.weights.size() - 1;
  return s;
}

int WeightedGraph::vertex_weight(const std::string& v) const {
  return strata(v).vertex_weight();
}

}  // namespace wmk
