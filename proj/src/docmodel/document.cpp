#include "docmodel/document.hpp"

#include <algorithm>

#include "docmodel/fragments.hpp"

namespace planetary::docmodel {

std::string_view statement_kind_name(StatementKind kind) {
  switch (kind) {
    case StatementKind::Definition: return "definition";
    case StatementKind::Theorem: return "theorem";
    case StatementKind::Example: return "example";
    case StatementKind::Paragraph: return "paragraph";
  }
  return "paragraph";
}

std::optional<StatementKind> statement_kind_from_env(std::string_view env) {
  if (env == "definition") return StatementKind::Definition;
  if (env == "theorem") return StatementKind::Theorem;
  if (env == "example") return StatementKind::Example;
  return std::nullopt;
}

std::vector<const ModuleDecl*> DocumentAST::modules() const {
  std::vector<const ModuleDecl*> out;
  for (const auto& block : body) {
    if (const auto* m = std::get_if<ModuleDecl>(&block)) out.push_back(m);
  }
  return out;
}

std::string document_key(std::string_view repo_path) {
  constexpr std::string_view kExt = ".stx";
  if (repo_path.size() > kExt.size() &&
      repo_path.substr(repo_path.size() - kExt.size()) == kExt) {
    repo_path.remove_suffix(kExt.size());
  }
  return std::string(repo_path);
}

std::string document_repo_path(std::string_view key) {
  return std::string(key) + ".stx";
}

std::string document_uri(std::string_view key) {
  return "//" + std::string(key);
}

std::string module_uri(std::string_view key, std::string_view module) {
  return document_uri(key) + "#" + std::string(module);
}

std::string symbol_uri(std::string_view key, std::string_view module,
                       std::string_view symbol) {
  return module_uri(key, module) + "/" + std::string(symbol);
}

std::optional<SymbolUriParts> parse_uri(std::string_view uri) {
  if (uri.substr(0, 2) != "//") return std::nullopt;
  uri.remove_prefix(2);
  SymbolUriParts parts;
  const auto hash = uri.find('#');
  parts.document = std::string(uri.substr(0, hash));
  if (parts.document.empty()) return std::nullopt;
  if (hash == std::string_view::npos) return parts;
  const auto rest = uri.substr(hash + 1);
  const auto slash = rest.find('/');
  parts.module = std::string(rest.substr(0, slash));
  if (parts.module.empty()) return std::nullopt;
  if (slash != std::string_view::npos) {
    parts.symbol = std::string(rest.substr(slash + 1));
    if (parts.symbol.empty()) return std::nullopt;
  }
  return parts;
}

std::string_view fragment_kind_name(FragmentKind kind) {
  switch (kind) {
    case FragmentKind::Document: return "document";
    case FragmentKind::Module: return "module";
    case FragmentKind::Statement: return "statement";
    case FragmentKind::Formula: return "formula";
    case FragmentKind::Subterm: return "subterm";
    case FragmentKind::SymbolOccurrence: return "symbol-occurrence";
  }
  return "document";
}

const Fragment* LinkedDocument::find_fragment(std::string_view id) const {
  const auto it = fragments.find(std::string(id));
  return it == fragments.end() ? nullptr : &it->second;
}

const Term* LinkedDocument::formula_term(const Fragment& fragment) const {
  if (fragment.kind != FragmentKind::Formula &&
      fragment.kind != FragmentKind::Subterm) {
    return nullptr;
  }
  const auto* owner = find_fragment(fragment.formula);
  if (owner == nullptr) return nullptr;
  const auto& ord = owner->ordinal;
  // ordinal = [block, (statement,)? inline]
  if (ord.empty() || ord[0] >= ast.body.size()) return nullptr;
  const Statement* statement = nullptr;
  std::size_t inline_index = 0;
  if (const auto* m = std::get_if<ModuleDecl>(&ast.body[ord[0]])) {
    if (ord.size() != 3 || ord[1] >= m->statements.size()) return nullptr;
    statement = &m->statements[ord[1]];
    inline_index = ord[2];
  } else {
    if (ord.size() != 2) return nullptr;
    statement = &std::get<Statement>(ast.body[ord[0]]);
    inline_index = ord[1];
  }
  std::size_t seen = 0;
  for (const auto& item : statement->content) {
    if (std::holds_alternative<TextRun>(item)) continue;
    if (seen++ == inline_index) {
      const auto* f = std::get_if<Formula>(&item);
      if (f == nullptr) return nullptr;
      if (!is_valid_path(f->term, fragment.term_path)) return nullptr;
      return &f->term;
    }
  }
  return nullptr;
}

int LinkedDocument::line_count() const {
  int lines = 0;
  for (const auto& [id, f] : fragments) lines = std::max(lines, f.line);
  return lines;
}

}  // namespace planetary::docmodel
