#pragma once

#include <string>

#include "docmodel/document.hpp"

namespace planetary::markup {

// Canonical source form. parse_document(print_document(ast)) reproduces `ast`
// for every AST the parser can produce.
std::string print_document(const docmodel::DocumentAST& ast);

// Formula body (without the surrounding `$`).
std::string print_term(const docmodel::Term& term);

std::string escape_text(std::string_view text);

}  // namespace planetary::markup
