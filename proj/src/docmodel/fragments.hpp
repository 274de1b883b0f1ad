#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docmodel/document.hpp"

namespace planetary::docmodel {

// FragmentID text: "<doc-key>!<ordinal-path>", ordinal path dot-separated.
// The document itself is "<doc-key>!".
std::string make_fragment_id(std::string_view doc_key,
                             std::span<const std::size_t> ordinal);

struct ParsedFragmentId {
  std::string document;  // doc key
  std::vector<std::size_t> ordinal;
};
std::optional<ParsedFragmentId> parse_fragment_id(std::string_view id);

// Assigns every fragment an ordinal-path ID and a gutter line:
//   document           k!            line 1
//   body block i       k!i           next line in document order
//   module statement j k!i.j         next line
//   inline object n    <stmt>.n      line of its statement
//   subterm at path p  <formula>.p   line of its statement
// Inline objects are formulas, term references and definienda, numbered in
// reading order (text runs are not fragments). Any existing map is replaced.
LinkedDocument assign_fragment_ids(LinkedDocument doc);

}  // namespace planetary::docmodel
