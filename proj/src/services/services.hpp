#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docmodel/document.hpp"
#include "render/render.hpp"

namespace planetary::services {

// Head-revision documents keyed by document key.
struct Corpus {
  std::map<std::string, std::shared_ptr<const docmodel::LinkedDocument>> documents;

  const docmodel::LinkedDocument* find_document(std::string_view key) const;
  // Throws Error{UnknownFragment}.
  const docmodel::Fragment& fragment(std::string_view id) const;
  const docmodel::LinkedDocument& document_of_fragment(std::string_view id) const;
};

struct Definition {
  std::string symbol;
  std::string document;  // repository path
  std::string fragment;  // the definition statement
  render::RenderNode node;
};

// The first definition statement whose for= list names `symbol`: the
// declaring document is searched first, then every other document in key
// order; within a document, document order. Throws Error{NotFound}.
Definition definition_lookup(const Corpus& corpus, std::string_view symbol);

enum class ServiceId { Discuss, DefinitionLookup, Prerequisites, Fold };

struct ServiceDescriptor {
  ServiceId id;
  std::string_view name;   // "discuss", "definition-lookup", ...
  std::string_view label;
  std::string_view icon;
};

std::string_view service_name(ServiceId id);

struct ContextObject {
  std::string fragment;
  docmodel::FragmentKind kind = docmodel::FragmentKind::Document;
  std::optional<std::string> symbol;
  bool foldable = false;
};

ContextObject context_of(const docmodel::Fragment& fragment);

// Applicability predicates.
bool applies(ServiceId id, const ContextObject& ctx);

// Descriptors whose predicate holds, in the order discuss,
// definition-lookup, prerequisites, fold.
std::vector<ServiceDescriptor> available_services(const ContextObject& ctx);
// Throws Error{UnknownFragment}.
std::vector<ServiceDescriptor> available_services(const Corpus& corpus,
                                                  std::string_view fragment);

}  // namespace planetary::services
