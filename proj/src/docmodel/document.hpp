#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "docmodel/term.hpp"

namespace planetary::docmodel {

// Source location kept for diagnostics only. It never takes part in
// structural equality: a pretty-printed and reparsed document moves every
// line but is the same document.
struct SourcePos {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

enum class StatementKind { Definition, Theorem, Example, Paragraph };

std::string_view statement_kind_name(StatementKind kind);
std::optional<StatementKind> statement_kind_from_env(std::string_view env);

struct TextRun {
  std::string text;
  friend bool operator==(const TextRun&, const TextRun&) = default;
};

struct Formula {
  Term term;
  SourcePos pos;
  friend bool operator==(const Formula&, const Formula&) = default;
};

struct TermRef {
  std::string reference;  // as written: name, module?name or doc?module?name
  std::string text;
  std::string uri;  // filled by reference resolution
  SourcePos pos;
  friend bool operator==(const TermRef&, const TermRef&) = default;
};

struct Definiendum {
  std::string name;
  std::string text;
  std::string uri;
  SourcePos pos;
  friend bool operator==(const Definiendum&, const Definiendum&) = default;
};

using Inline = std::variant<TextRun, Formula, TermRef, Definiendum>;

struct Statement {
  StatementKind kind = StatementKind::Paragraph;
  std::vector<std::string> for_refs;
  std::vector<std::string> for_uris;  // parallel to for_refs once resolved
  std::vector<Inline> content;
  SourcePos pos;
  friend bool operator==(const Statement&, const Statement&) = default;
};

struct SymbolDecl {
  std::string name;
  int arity = 0;
  std::string uri;
  SourcePos pos;
  friend bool operator==(const SymbolDecl&, const SymbolDecl&) = default;
};

struct ImportDecl {
  std::string document;  // empty: a module of the importing document
  std::string module;
  std::string uri;
  SourcePos pos;

  std::string reference() const { return document + "?" + module; }
  friend bool operator==(const ImportDecl&, const ImportDecl&) = default;
};

struct ModuleDecl {
  std::string name;
  std::vector<ImportDecl> imports;
  std::vector<SymbolDecl> symbols;
  std::vector<Statement> statements;
  std::string uri;
  SourcePos pos;
  friend bool operator==(const ModuleDecl&, const ModuleDecl&) = default;
};

using Block = std::variant<ModuleDecl, Statement>;

// Parsed semantic document. `path` is the repository path ("algebra/groups.stx").
struct DocumentAST {
  std::string path;
  std::string title;
  std::vector<std::string> msc;
  std::vector<Block> body;

  std::vector<const ModuleDecl*> modules() const;
  friend bool operator==(const DocumentAST&, const DocumentAST&) = default;
};

// Document key used inside URIs and fragment IDs: the repository path with a
// trailing ".stx" removed.
std::string document_key(std::string_view repo_path);
std::string document_repo_path(std::string_view key);

std::string document_uri(std::string_view key);
std::string module_uri(std::string_view key, std::string_view module);
std::string symbol_uri(std::string_view key, std::string_view module,
                       std::string_view symbol);

struct SymbolUriParts {
  std::string document;
  std::string module;
  std::string symbol;  // empty for document and module URIs
};
// Accepts //doc, //doc#module and //doc#module/symbol.
std::optional<SymbolUriParts> parse_uri(std::string_view uri);

enum class FragmentKind {
  Document,
  Module,
  Statement,
  Formula,
  Subterm,
  SymbolOccurrence,
};

std::string_view fragment_kind_name(FragmentKind kind);

// Descriptor stored in a LinkedDocument's fragment map.
struct Fragment {
  std::string id;
  FragmentKind kind = FragmentKind::Document;
  std::vector<std::size_t> ordinal;
  int line = 0;  // gutter line (see assign_fragment_ids)
  bool foldable = false;
  std::optional<std::string> symbol;
  // Statement kind name for statements, term kind name for subterms.
  std::string label;
  // Formula and subterm fragments: the owning formula and the path in it.
  std::string formula;
  TermPath term_path;

  friend bool operator==(const Fragment&, const Fragment&) = default;
};

// A document whose references carry absolute URIs, plus its fragment map.
struct LinkedDocument {
  DocumentAST ast;
  std::map<std::string, Fragment> fragments;

  std::string key() const { return document_key(ast.path); }
  const Fragment* find_fragment(std::string_view id) const;
  // Root term of the formula owning a formula or subterm fragment; null when
  // the fragment's term path does not exist in it.
  const Term* formula_term(const Fragment& fragment) const;
  int line_count() const;

  friend bool operator==(const LinkedDocument&, const LinkedDocument&) = default;
};

}  // namespace planetary::docmodel
