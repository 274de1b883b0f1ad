#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "triples/triple.hpp"

namespace planetary::triples {

struct PatternTerm {
  bool is_variable = false;
  std::string variable;  // without the leading '?'
  Node constant;

  static PatternTerm var(std::string name) { return {true, std::move(name), {}}; }
  static PatternTerm term(Node n) { return {false, {}, std::move(n)}; }

  friend bool operator==(const PatternTerm&, const PatternTerm&) = default;
};

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
  // Matches chains of `predicate` of length >= 1; predicate must be constant.
  bool transitive = false;

  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

struct Query {
  std::vector<TriplePattern> patterns;  // conjunctive
  std::vector<std::string> select;      // empty selects every variable

  friend bool operator==(const Query&, const Query&) = default;
};

using Binding = std::map<std::string, Node>;

// All and only the bindings of the selected variables that satisfy every
// pattern, deduplicated and sorted lexicographically by the selected values
// in select order. Throws Error{MalformedQuery}.
std::vector<Binding> query(const TripleGraph& graph, const Query& q);

// Variables in order of first appearance.
std::vector<std::string> query_variables(const Query& q);

// Textual syntax (docs/query-syntax.md):
//   SELECT ?d ?t WHERE { ?d plnt:hasTitle ?t . ?d plnt:dependsOn+ <//nat> }
Query parse_query(std::string_view text);

}  // namespace planetary::triples
