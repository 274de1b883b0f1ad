#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace planetary::docmodel {

enum class TermKind { Apply, SymbolRef, Var, Num, Text };

std::string_view term_kind_name(TermKind kind);

// Operator-applied formula tree. An Apply node stores its head at
// children[0] and its arguments at children[1..], so a TermPath step indexes
// `children` directly (0 = head, k >= 1 = k-th argument).
struct Term {
  TermKind kind = TermKind::Num;
  // Var: name. Num: decimal literal. Text: content. SymbolRef: the reference
  // as written in the source (e.g. "plus" or "nat?nat?plus").
  std::string value;
  // SymbolRef only: absolute symbol URI, empty until references are resolved.
  std::string uri;
  std::vector<Term> children;

  static Term apply(Term head, std::vector<Term> args);
  static Term symbol(std::string reference, std::string uri = {});
  static Term var(std::string name);
  static Term num(std::string literal);
  static Term text(std::string content);

  const Term& head() const { return children.front(); }
  std::span<const Term> args() const {
    return std::span<const Term>(children).subspan(1);
  }

  std::size_t node_count() const;
  std::size_t depth() const;

  friend bool operator==(const Term&, const Term&) = default;
};

using TermPath = std::vector<std::size_t>;

// Throws Error{InvalidTermPath} when a step exceeds a node's child count.
const Term& subterm_at(const Term& term, std::span<const std::size_t> path);

// Returns a copy of `term` with the node at `path` replaced. The input is not
// modified. Throws Error{InvalidTermPath}.
Term replace_subterm(const Term& term, std::span<const std::size_t> path,
                     Term replacement);

bool is_valid_path(const Term& term, std::span<const std::size_t> path);

// "" for the root, otherwise dot-separated steps ("1.0.2").
std::string format_term_path(std::span<const std::size_t> path);
std::optional<TermPath> parse_term_path(std::string_view text);

// Every path in the tree in pre-order (root first, then head, then args).
std::vector<TermPath> all_paths(const Term& term);

}  // namespace planetary::docmodel
