#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "docmodel/document.hpp"

namespace planetary::graph {

enum class EdgeKind { Imports, Uses, Defines };

std::string_view edge_kind_name(EdgeKind kind);
std::optional<EdgeKind> edge_kind_from_name(std::string_view name);

struct Edge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::Uses;

  auto operator<=>(const Edge&) const = default;
};

// Every edge endpoint is a node; no imports self-loops.
struct DepGraph {
  std::set<std::string> nodes;
  std::set<Edge> edges;

  void add_edge(std::string from, std::string to, EdgeKind kind);
  friend bool operator==(const DepGraph&, const DepGraph&) = default;
};

// Nodes: documents, modules and declared symbols (plus any referenced IRI).
// Edges:
//   imports  document -> imported module, module -> imported module
//   defines  document -> declared symbol, document -> definition for= target,
//            module -> declared symbol
//   uses     document -> symbol used in a term reference or formula,
//            symbol -> other symbol used in one of its definitions
DepGraph build_dependency_graph(const std::vector<const docmodel::LinkedDocument*>& corpus);

struct PrereqResult {
  std::string root;
  // Breadth-first layers, lexicographic within a layer. Contains root only
  // when root lies on a cycle.
  std::vector<std::string> prerequisites;
  // Breadth-first layer of each prerequisite (root is layer 0).
  std::vector<std::size_t> layers;
  // Edges of the graph among {root} and the prerequisites.
  std::set<Edge> edges;
};

// Throws Error{UnknownNode} when root is not a node. An empty `kinds` set
// follows every edge kind.
PrereqResult prerequisites(const DepGraph& g, std::string_view root,
                           const std::set<EdgeKind>& kinds = {});

// Strongly connected components of size >= 2 and self-looped singletons,
// each sorted, the list sorted.
std::vector<std::vector<std::string>> detect_cycles(const DepGraph& g);

}  // namespace planetary::graph
