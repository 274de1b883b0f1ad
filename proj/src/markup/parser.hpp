#pragma once

#include <string>
#include <variant>
#include <vector>

#include "docmodel/document.hpp"
#include "markup/errors.hpp"

namespace planetary::markup {

struct SourceDocument {
  std::string path;  // repository-relative, '/' separated
  std::string text;  // UTF-8; CRLF is accepted and normalized to LF
};

using ParseResult =
    std::variant<docmodel::DocumentAST, std::vector<ParseError>>;

// Parses the semantic markup subset described in docs/grammar.ebnf.
// Recoverable problems are accumulated (the parser resynchronizes at the next
// command); an unrecoverable lexing failure (unbalanced group, unterminated
// formula, invalid UTF-8) yields exactly one error. Never returns both.
ParseResult parse_document(const SourceDocument& source);

inline bool parse_ok(const ParseResult& r) {
  return std::holds_alternative<docmodel::DocumentAST>(r);
}

}  // namespace planetary::markup
