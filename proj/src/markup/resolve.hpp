#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "docmodel/document.hpp"
#include "markup/errors.hpp"

namespace planetary::markup {

struct ModuleExports {
  std::vector<std::string> symbols;  // declaration order
  // (document key, module) pairs with the importing document filled in.
  std::vector<std::pair<std::string, std::string>> imports;
};

using DocumentExports = std::map<std::string, ModuleExports>;

// Exported modules and symbols of every ingested document, keyed by document
// key. Values are shared so that snapshot copies stay cheap.
class SymbolRegistry {
 public:
  static DocumentExports exports_of(const docmodel::DocumentAST& ast);

  void add_document(const docmodel::DocumentAST& ast);
  void remove_document(const std::string& key);

  const DocumentExports* find_document(const std::string& key) const;
  const ModuleExports* find_module(const std::string& key,
                                   const std::string& module) const;
  std::size_t size() const { return docs_.size(); }

 private:
  std::map<std::string, std::shared_ptr<const DocumentExports>> docs_;
};

using ResolveResult =
    std::variant<docmodel::LinkedDocument, std::vector<ParseError>>;

// Gives every import, symbol declaration, statement `for=` entry, term
// reference, definiendum and formula symbol an absolute URI. The document's
// own modules are taken from `ast`, overriding any registry entry under the
// same key. Bare names resolve against the enclosing module: its own
// declarations first, then imported modules (transitively, in import order).
// All-or-nothing: any unresolved name yields MalformedReference errors and no
// document. The returned document has an empty fragment map.
ResolveResult resolve_references(const docmodel::DocumentAST& ast,
                                 const SymbolRegistry& registry);

}  // namespace planetary::markup
