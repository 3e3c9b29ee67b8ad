#pragma once

#include <stdexcept>
#include <string>

namespace wmk {

// Malformed input that never produced a structured object (bad JSON, wrong
// types, unknown keys).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally well-formed input that violates a semantic requirement
// (duplicate ids, dangling endpoints, non-positive weights, ...).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownVertex : std::runtime_error {
  explicit UnknownVertex(const std::string& v)
      : std::runtime_error("unknown vertex: " + v) {}
};

// Requested classic (unweighted) construction on a graph where some vertex
// emits edges of more than one weight.
struct NotClassic : std::runtime_error {
  explicit NotClassic(const std::string& v)
      : std::runtime_error("vertex " + v + " emits edges of distinct weights") {}
};

struct NotEliminable : std::runtime_error {
  explicit NotEliminable(const std::string& what) : std::runtime_error(what) {}
};

// is_atom was asked about an element congruent to zero.
struct ZeroElement : std::runtime_error {
  explicit ZeroElement(const std::string& what) : std::runtime_error(what) {}
};

// Matrix-of-generators constructions need an emitting vertex.
struct EmptySource : std::runtime_error {
  explicit EmptySource(const std::string& v)
      : std::runtime_error("vertex " + v + " emits no edges") {}
};

struct IndexOutOfRange : std::out_of_range {
  explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

// A rewriting pass cap was hit; the reduction strategy is expected to
// terminate on its own, so this signals a genuine runaway.
struct NonTermination : std::runtime_error {
  explicit NonTermination(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wmk
