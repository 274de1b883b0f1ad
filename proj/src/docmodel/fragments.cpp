#include "docmodel/fragments.hpp"

#include <charconv>

namespace planetary::docmodel {

std::string make_fragment_id(std::string_view doc_key,
                             std::span<const std::size_t> ordinal) {
  std::string id(doc_key);
  id.push_back('!');
  for (std::size_t i = 0; i < ordinal.size(); ++i) {
    if (i) id.push_back('.');
    id += std::to_string(ordinal[i]);
  }
  return id;
}

std::optional<ParsedFragmentId> parse_fragment_id(std::string_view id) {
  const auto bang = id.rfind('!');
  if (bang == std::string_view::npos || bang == 0) return std::nullopt;
  ParsedFragmentId parsed;
  parsed.document = std::string(id.substr(0, bang));
  const auto path = parse_term_path(id.substr(bang + 1));
  if (!path) return std::nullopt;
  parsed.ordinal = *path;
  return parsed;
}

namespace {

class Assigner {
 public:
  explicit Assigner(LinkedDocument& doc) : doc_(doc), key_(doc.key()) {}

  void run() {
    doc_.fragments.clear();
    std::vector<std::size_t> ord;
    add({}, FragmentKind::Document, 1, false, std::nullopt, "document");
    int line = 1;
    for (std::size_t i = 0; i < doc_.ast.body.size(); ++i) {
      ord = {i};
      auto& block = doc_.ast.body[i];
      if (auto* m = std::get_if<ModuleDecl>(&block)) {
        ++line;
        add(ord, FragmentKind::Module, line, true, std::nullopt, "module");
        for (std::size_t j = 0; j < m->statements.size(); ++j) {
          ord = {i, j};
          ++line;
          statement(ord, m->statements[j], line);
        }
      } else {
        ++line;
        statement(ord, std::get<Statement>(block), line);
      }
    }
  }

 private:
  void add(std::span<const std::size_t> ord, FragmentKind kind, int line,
           bool foldable, std::optional<std::string> symbol, std::string label,
           std::string formula = {}, TermPath term_path = {}) {
    Fragment f;
    f.id = make_fragment_id(key_, ord);
    f.kind = kind;
    f.ordinal.assign(ord.begin(), ord.end());
    f.line = line;
    f.foldable = foldable;
    f.symbol = std::move(symbol);
    f.label = std::move(label);
    f.formula = std::move(formula);
    f.term_path = std::move(term_path);
    auto id = f.id;
    doc_.fragments.emplace(std::move(id), std::move(f));
  }

  void statement(std::vector<std::size_t> ord, const Statement& s, int line) {
    add(ord, FragmentKind::Statement, line, true, std::nullopt,
        std::string(statement_kind_name(s.kind)));
    std::size_t n = 0;
    for (const auto& item : s.content) {
      if (std::holds_alternative<TextRun>(item)) continue;
      ord.push_back(n++);
      if (const auto* f = std::get_if<Formula>(&item)) {
        formula(ord, f->term, line);
      } else if (const auto* r = std::get_if<TermRef>(&item)) {
        add(ord, FragmentKind::SymbolOccurrence, line, false,
            optional_uri(r->uri), "termref");
      } else if (const auto* d = std::get_if<Definiendum>(&item)) {
        add(ord, FragmentKind::SymbolOccurrence, line, false,
            optional_uri(d->uri), "definiendum");
      }
      ord.pop_back();
    }
  }

  void formula(std::vector<std::size_t> ord, const Term& root, int line) {
    const auto formula_id = make_fragment_id(key_, ord);
    const auto base = ord.size();
    for (auto& path : all_paths(root)) {
      const auto& node = subterm_at(root, path);
      ord.resize(base);
      ord.insert(ord.end(), path.begin(), path.end());
      add(ord, path.empty() ? FragmentKind::Formula : FragmentKind::Subterm,
          line, true, head_symbol(node), std::string(term_kind_name(node.kind)),
          formula_id, std::move(path));
    }
  }

  static std::optional<std::string> optional_uri(const std::string& uri) {
    if (uri.empty()) return std::nullopt;
    return uri;
  }

  // The symbol a subterm is "about": itself if a SymbolRef, else its head.
  static std::optional<std::string> head_symbol(const Term& t) {
    if (t.kind == TermKind::SymbolRef) return optional_uri(t.uri);
    if (t.kind == TermKind::Apply &&
        t.head().kind == TermKind::SymbolRef) {
      return optional_uri(t.head().uri);
    }
    return std::nullopt;
  }

  LinkedDocument& doc_;
  std::string key_;
};

}  // namespace

LinkedDocument assign_fragment_ids(LinkedDocument doc) {
  Assigner(doc).run();
  return doc;
}

}  // namespace planetary::docmodel
