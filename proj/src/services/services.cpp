#include "services/services.hpp"

#include "common/error.hpp"
#include "docmodel/fragments.hpp"

namespace planetary::services {

using namespace docmodel;

const LinkedDocument* Corpus::find_document(std::string_view key) const {
  const auto it = documents.find(std::string(key));
  return it == documents.end() ? nullptr : it->second.get();
}

const LinkedDocument& Corpus::document_of_fragment(std::string_view id) const {
  const auto parsed = parse_fragment_id(id);
  const auto* doc = parsed ? find_document(parsed->document) : nullptr;
  if (doc == nullptr || doc->find_fragment(id) == nullptr) {
    throw Error(ErrorCode::UnknownFragment, "unknown fragment " + std::string(id));
  }
  return *doc;
}

const Fragment& Corpus::fragment(std::string_view id) const {
  return *document_of_fragment(id).find_fragment(id);
}

namespace {

bool defines(const Statement& s, std::string_view symbol) {
  if (s.kind != StatementKind::Definition) return false;
  for (const auto& u : s.for_uris) {
    if (u == symbol) return true;
  }
  return false;
}

// Fragment ID of the first matching definition in document order.
std::optional<std::string> find_definition(const LinkedDocument& doc,
                                           std::string_view symbol) {
  const auto key = doc.key();
  for (std::size_t i = 0; i < doc.ast.body.size(); ++i) {
    const auto& block = doc.ast.body[i];
    if (const auto* m = std::get_if<ModuleDecl>(&block)) {
      for (std::size_t j = 0; j < m->statements.size(); ++j) {
        if (defines(m->statements[j], symbol)) {
          const std::size_t ord[] = {i, j};
          return make_fragment_id(key, ord);
        }
      }
    } else if (defines(std::get<Statement>(block), symbol)) {
      const std::size_t ord[] = {i};
      return make_fragment_id(key, ord);
    }
  }
  return std::nullopt;
}

}  // namespace

Definition definition_lookup(const Corpus& corpus, std::string_view symbol) {
  const auto not_found = [&] {
    return Error(ErrorCode::NotFound, "no definition for " + std::string(symbol));
  };
  const auto parts = parse_uri(symbol);
  if (!parts || parts->symbol.empty()) throw not_found();

  std::vector<const LinkedDocument*> order;
  if (const auto* home = corpus.find_document(parts->document)) order.push_back(home);
  for (const auto& [key, doc] : corpus.documents) {
    if (key != parts->document) order.push_back(doc.get());
  }
  for (const auto* doc : order) {
    if (const auto id = find_definition(*doc, symbol)) {
      const auto tree = render::render_document(*doc, {});
      const auto* node = render::find_fragment_node(tree, *id);
      if (node == nullptr) break;
      return Definition{std::string(symbol), doc->ast.path, *id, *node};
    }
  }
  throw not_found();
}

std::string_view service_name(ServiceId id) {
  switch (id) {
    case ServiceId::Discuss: return "discuss";
    case ServiceId::DefinitionLookup: return "definition-lookup";
    case ServiceId::Prerequisites: return "prerequisites";
    case ServiceId::Fold: return "fold";
  }
  return "discuss";
}

ContextObject context_of(const Fragment& fragment) {
  return ContextObject{fragment.id, fragment.kind, fragment.symbol, fragment.foldable};
}

bool applies(ServiceId id, const ContextObject& ctx) {
  switch (id) {
    case ServiceId::Discuss:
      return true;
    case ServiceId::DefinitionLookup:
      return ctx.symbol.has_value();
    case ServiceId::Prerequisites:
      return ctx.symbol.has_value() || ctx.kind == FragmentKind::Module ||
             ctx.kind == FragmentKind::Document;
    case ServiceId::Fold:
      return ctx.foldable;
  }
  return false;
}

namespace {

constexpr ServiceDescriptor kDescriptors[] = {
    {ServiceId::Discuss, "discuss", "Discuss", "question-mark"},
    {ServiceId::DefinitionLookup, "definition-lookup", "Look up definition", "book"},
    {ServiceId::Prerequisites, "prerequisites", "Show prerequisites", "graph"},
    {ServiceId::Fold, "fold", "Fold", "ellipsis"},
};

}  // namespace

std::vector<ServiceDescriptor> available_services(const ContextObject& ctx) {
  std::vector<ServiceDescriptor> out;
  for (const auto& d : kDescriptors) {
    if (applies(d.id, ctx)) out.push_back(d);
  }
  return out;
}

std::vector<ServiceDescriptor> available_services(const Corpus& corpus,
                                                  std::string_view fragment) {
  return available_services(context_of(corpus.fragment(fragment)));
}

}  // namespace planetary::services
