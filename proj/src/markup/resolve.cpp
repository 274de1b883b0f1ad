#include "markup/resolve.hpp"

#include <algorithm>
#include <set>

#include "common/text.hpp"

namespace planetary::markup {

using namespace docmodel;

DocumentExports SymbolRegistry::exports_of(const DocumentAST& ast) {
  const auto key = document_key(ast.path);
  DocumentExports out;
  for (const auto* m : ast.modules()) {
    ModuleExports e;
    for (const auto& s : m->symbols) e.symbols.push_back(s.name);
    for (const auto& i : m->imports) {
      e.imports.emplace_back(i.document.empty() ? key : i.document, i.module);
    }
    out.emplace(m->name, std::move(e));
  }
  return out;
}

void SymbolRegistry::add_document(const DocumentAST& ast) {
  docs_[document_key(ast.path)] =
      std::make_shared<const DocumentExports>(exports_of(ast));
}

void SymbolRegistry::remove_document(const std::string& key) {
  docs_.erase(key);
}

const DocumentExports* SymbolRegistry::find_document(
    const std::string& key) const {
  const auto it = docs_.find(key);
  return it == docs_.end() ? nullptr : it->second.get();
}

const ModuleExports* SymbolRegistry::find_module(
    const std::string& key, const std::string& module) const {
  const auto* doc = find_document(key);
  if (doc == nullptr) return nullptr;
  const auto it = doc->find(module);
  return it == doc->end() ? nullptr : &it->second;
}

namespace {

class Resolver {
 public:
  Resolver(const DocumentAST& ast, const SymbolRegistry& registry)
      : registry_(registry),
        key_(document_key(ast.path)),
        self_(SymbolRegistry::exports_of(ast)) {
    doc_.ast = ast;
  }

  ResolveResult run() {
    for (auto& block : doc_.ast.body) {
      if (auto* m = std::get_if<ModuleDecl>(&block)) {
        module(*m);
      } else {
        statement(std::get<Statement>(block), nullptr);
      }
    }
    if (!errors_.empty()) return errors_;
    return std::move(doc_);
  }

 private:
  const ModuleExports* find_module(const std::string& doc,
                                   const std::string& module) const {
    if (doc == key_) {
      const auto it = self_.find(module);
      return it == self_.end() ? nullptr : &it->second;
    }
    return registry_.find_module(doc, module);
  }

  void fail(const SourcePos& pos, const std::string& what) {
    errors_.push_back(ParseError{pos.line, pos.column,
                                 ParseErrorCode::MalformedReference,
                                 "unresolved reference '" + what + "'"});
  }

  // Symbols visible from a module: own declarations, then imports depth-first.
  std::vector<std::pair<std::string, std::string>> visible_modules(
      const std::string& module) const {
    std::vector<std::pair<std::string, std::string>> order;
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<std::pair<std::string, std::string>> stack{{key_, module}};
    while (!stack.empty()) {
      auto current = stack.back();
      stack.pop_back();
      if (!seen.insert(current).second) continue;
      const auto* exports = find_module(current.first, current.second);
      if (exports == nullptr) continue;
      order.push_back(current);
      for (auto it = exports->imports.rbegin(); it != exports->imports.rend();
           ++it) {
        stack.push_back(*it);
      }
    }
    return order;
  }

  static bool declares(const ModuleExports& m, const std::string& name) {
    return std::find(m.symbols.begin(), m.symbols.end(), name) !=
           m.symbols.end();
  }

  // Returns the URI for a symbol reference or an empty string.
  std::string lookup(const std::string& reference,
                     const ModuleDecl* enclosing) const {
    const auto parts = text::split(reference, '?');
    if (parts.size() == 1) {
      if (enclosing == nullptr) return {};
      for (const auto& [doc, mod] : visible_modules(enclosing->name)) {
        const auto* m = find_module(doc, mod);
        if (m != nullptr && declares(*m, parts[0])) {
          return symbol_uri(doc, mod, parts[0]);
        }
      }
      return {};
    }
    const auto doc =
        parts.size() == 3 && !parts[0].empty() ? parts[0] : key_;
    const auto& mod = parts[parts.size() - 2];
    const auto& name = parts.back();
    const auto* m = find_module(doc, mod);
    if (m == nullptr || !declares(*m, name)) return {};
    return symbol_uri(doc, mod, name);
  }

  void module(ModuleDecl& m) {
    m.uri = module_uri(key_, m.name);
    for (auto& s : m.symbols) s.uri = symbol_uri(key_, m.name, s.name);
    for (auto& i : m.imports) {
      const auto doc = i.document.empty() ? key_ : i.document;
      if (doc == key_ && i.module == m.name) {
        errors_.push_back(ParseError{i.pos.line, i.pos.column,
                                     ParseErrorCode::MalformedReference,
                                     "module '" + m.name + "' imports itself"});
        continue;
      }
      if (find_module(doc, i.module) == nullptr) {
        fail(i.pos, i.reference());
        continue;
      }
      i.uri = module_uri(doc, i.module);
    }
    for (auto& s : m.statements) statement(s, &m);
  }

  void statement(Statement& s, const ModuleDecl* enclosing) {
    s.for_uris.clear();
    for (const auto& ref : s.for_refs) {
      auto uri = lookup(ref, enclosing);
      if (uri.empty()) fail(s.pos, ref);
      s.for_uris.push_back(std::move(uri));
    }
    for (auto& item : s.content) {
      if (auto* r = std::get_if<TermRef>(&item)) {
        r->uri = lookup(r->reference, enclosing);
        if (r->uri.empty()) fail(r->pos, r->reference);
      } else if (auto* d = std::get_if<Definiendum>(&item)) {
        d->uri = lookup(d->name, enclosing);
        if (d->uri.empty()) fail(d->pos, d->name);
      } else if (auto* f = std::get_if<Formula>(&item)) {
        term(f->term, f->pos, enclosing);
      }
    }
  }

  void term(Term& t, const SourcePos& pos, const ModuleDecl* enclosing) {
    if (t.kind == TermKind::SymbolRef) {
      t.uri = lookup(t.value, enclosing);
      if (t.uri.empty()) fail(pos, t.value);
    }
    for (auto& c : t.children) term(c, pos, enclosing);
  }

  const SymbolRegistry& registry_;
  std::string key_;
  DocumentExports self_;
  LinkedDocument doc_;
  std::vector<ParseError> errors_;
};

}  // namespace

ResolveResult resolve_references(const DocumentAST& ast,
                                 const SymbolRegistry& registry) {
  return Resolver(ast, registry).run();
}

}  // namespace planetary::markup
