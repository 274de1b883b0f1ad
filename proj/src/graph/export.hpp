#pragma once

#include <map>
#include <string>

#include "graph/depgraph.hpp"

namespace planetary::graph {

using Labels = std::map<std::string, std::string>;

// Layered SVG: root at the top, one layer per breadth-first distance. One
// <g data-uri> per node and one <line> per edge. Nodes missing from `labels`
// are labelled with their IRI.
std::string export_svg(const PrereqResult& result, const Labels& labels);

std::string export_dot(const PrereqResult& result, const Labels& labels);

// Canonical text of a whole graph: "node <iri>" lines, then
// "edge <from> <to> <kind>" lines, both sorted.
std::string dump_graph(const DepGraph& g);

// Display label of an IRI: the part after the last '/' or '#'.
std::string default_label(std::string_view iri);

}  // namespace planetary::graph
