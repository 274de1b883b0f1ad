#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace planetary::triples {

// IRI or literal. IRIs order before literals.
struct Node {
  bool literal = false;
  std::string value;

  static Node iri(std::string v) { return {false, std::move(v)}; }
  static Node lit(std::string v) { return {true, std::move(v)}; }

  // "<iri>" or "\"escaped literal\"".
  std::string to_ntriples() const;

  auto operator<=>(const Node&) const = default;
};

struct Triple {
  Node subject;
  Node predicate;
  Node object;

  std::string to_ntriples() const;  // without trailing newline
  auto operator<=>(const Triple&) const = default;
};

namespace vocab {
inline constexpr std::string_view kHasTitle = "plnt:hasTitle";
inline constexpr std::string_view kHasMSC = "plnt:hasMSC";
inline constexpr std::string_view kDeclaresSymbol = "plnt:declaresSymbol";
inline constexpr std::string_view kDefinesSymbol = "plnt:definesSymbol";
inline constexpr std::string_view kImports = "plnt:imports";
inline constexpr std::string_view kUsesSymbol = "plnt:usesSymbol";
inline constexpr std::string_view kDependsOn = "plnt:dependsOn";
inline constexpr std::string_view kAtRevision = "plnt:atRevision";
inline constexpr std::string_view kMscPrefix = "msc:";

std::string msc_iri(std::string_view code);
}  // namespace vocab

// Immutable, deduplicated triple set with term interning and lookup indexes.
class TripleGraph {
 public:
  using Id = std::uint32_t;
  struct IdTriple {
    Id s, p, o;
  };

  TripleGraph() = default;
  explicit TripleGraph(std::vector<Triple> triples);

  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }

  // Sorted N-Triples lines, each terminated by '\n'.
  std::string dump() const;

  // Interned view used by the query engine.
  std::optional<Id> find(const Node& n) const;
  const Node& node(Id id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<IdTriple>& id_triples() const { return ids_; }
  // Indexes into id_triples().
  const std::vector<std::uint32_t>& by_subject(Id s) const;
  const std::vector<std::uint32_t>& by_predicate(Id p) const;
  const std::vector<std::uint32_t>& by_object(Id o) const;

 private:
  std::vector<Triple> triples_;
  std::vector<Node> nodes_;
  std::map<Node, Id> lookup_;
  std::vector<IdTriple> ids_;
  std::vector<std::vector<std::uint32_t>> by_s_, by_p_, by_o_;
};

std::vector<Triple> parse_ntriples(std::string_view text);

}  // namespace planetary::triples
