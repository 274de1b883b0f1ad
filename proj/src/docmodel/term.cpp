#include "docmodel/term.hpp"

#include <algorithm>
#include <charconv>

#include "common/error.hpp"

namespace planetary::docmodel {

std::string_view term_kind_name(TermKind kind) {
  switch (kind) {
    case TermKind::Apply: return "apply";
    case TermKind::SymbolRef: return "symbol";
    case TermKind::Var: return "var";
    case TermKind::Num: return "num";
    case TermKind::Text: return "text";
  }
  return "unknown";
}

Term Term::apply(Term head, std::vector<Term> args) {
  Term t;
  t.kind = TermKind::Apply;
  t.children.reserve(args.size() + 1);
  t.children.push_back(std::move(head));
  for (auto& a : args) t.children.push_back(std::move(a));
  return t;
}

Term Term::symbol(std::string reference, std::string uri) {
  Term t;
  t.kind = TermKind::SymbolRef;
  t.value = std::move(reference);
  t.uri = std::move(uri);
  return t;
}

Term Term::var(std::string name) {
  Term t;
  t.kind = TermKind::Var;
  t.value = std::move(name);
  return t;
}

Term Term::num(std::string literal) {
  Term t;
  t.kind = TermKind::Num;
  t.value = std::move(literal);
  return t;
}

Term Term::text(std::string content) {
  Term t;
  t.kind = TermKind::Text;
  t.value = std::move(content);
  return t;
}

std::size_t Term::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

std::size_t Term::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth() + 1);
  return d;
}

namespace {

[[noreturn]] void invalid_step(std::span<const std::size_t> path,
                               std::size_t at) {
  throw Error(ErrorCode::InvalidTermPath,
              "term path " + format_term_path(path) + " has no child at step " +
                  std::to_string(at));
}

}  // namespace

const Term& subterm_at(const Term& term, std::span<const std::size_t> path) {
  const Term* node = &term;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= node->children.size()) invalid_step(path, i);
    node = &node->children[path[i]];
  }
  return *node;
}

Term replace_subterm(const Term& term, std::span<const std::size_t> path,
                     Term replacement) {
  if (!is_valid_path(term, path)) invalid_step(path, 0);
  Term result = term;
  Term* node = &result;
  for (const auto step : path) node = &node->children[step];
  *node = std::move(replacement);
  return result;
}

bool is_valid_path(const Term& term, std::span<const std::size_t> path) {
  const Term* node = &term;
  for (const auto step : path) {
    if (step >= node->children.size()) return false;
    node = &node->children[step];
  }
  return true;
}

std::string format_term_path(std::span<const std::size_t> path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(path[i]);
  }
  return out;
}

std::optional<TermPath> parse_term_path(std::string_view text) {
  TermPath path;
  if (text.empty()) return path;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('.', start);
    if (end == std::string_view::npos) end = text.size();
    const auto part = text.substr(start, end - start);
    std::size_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
      return std::nullopt;
    }
    path.push_back(value);
    start = end + 1;
  }
  return path;
}

namespace {

void collect_paths(const Term& term, TermPath& prefix,
                   std::vector<TermPath>& out) {
  out.push_back(prefix);
  for (std::size_t i = 0; i < term.children.size(); ++i) {
    prefix.push_back(i);
    collect_paths(term.children[i], prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<TermPath> all_paths(const Term& term) {
  std::vector<TermPath> out;
  TermPath prefix;
  collect_paths(term, prefix, out);
  return out;
}

}  // namespace planetary::docmodel
