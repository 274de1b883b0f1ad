#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "docmodel/document.hpp"
#include "triples/triple.hpp"

namespace planetary::triples {

// Metadata triples of one linked document, sorted and deduplicated:
//   doc hasTitle "title"          doc hasMSC msc:CODE
//   doc declaresSymbol sym        doc definesSymbol sym  (definition for=)
//   doc imports module            doc usesSymbol sym     (termrefs, formulas)
//   doc dependsOn doc'            (documents of imports and used symbols)
//   doc atRevision "N"
std::vector<Triple> extract_triples(const docmodel::LinkedDocument& doc,
                                    std::uint64_t revision);

// Documents classified under `code_prefix` (string prefix of the MSC code),
// as (document IRI, title) sorted by title then IRI.
std::vector<std::pair<std::string, std::string>> msc_browse(
    const TripleGraph& graph, std::string_view code_prefix);

}  // namespace planetary::triples
