#pragma once

#include <string>
#include <string_view>

#include "docmodel/document.hpp"
#include "json.hpp"

namespace planetary::docmodel {

inline constexpr std::string_view kLinkedDocumentSchema =
    "planetary.linked-document/1";

nlohmann::json term_to_json(const Term& term);
Term term_from_json(const nlohmann::json& j);

nlohmann::json document_to_json(const LinkedDocument& doc);
// Rebuilds the fragment map from the body and checks it against the stored
// one. Throws Error{Corrupt} on schema violations.
LinkedDocument document_from_json(const nlohmann::json& j);

// Canonical text: compact JSON, keys in schema order, trailing newline.
std::string serialize_document(const LinkedDocument& doc);
LinkedDocument deserialize_document(std::string_view text);

}  // namespace planetary::docmodel
