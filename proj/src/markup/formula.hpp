#pragma once

#include <cstddef>
#include <string_view>
#include <variant>

#include "docmodel/term.hpp"
#include "markup/errors.hpp"

namespace planetary::markup {

// Formula grammar (body of `$...$`):
//   term    := apply | numeral | reference | '\text{' chars '}'
//   apply   := '\apply{' term '}{' [ term { ',' term } ] '}'
//   numeral := digit+ [ '.' digit+ ]           (kept as a decimal string)
//   reference := single letter                 -> variable
//              | ident | module?ident | doc?module?ident -> symbol reference
// Error positions are relative to `text`.
std::variant<docmodel::Term, ParseError> parse_formula(std::string_view text);

namespace detail {

struct FormulaFailure {
  std::size_t offset = 0;
  ParseErrorCode code = ParseErrorCode::UnexpectedInput;
  std::string message;
};

std::variant<docmodel::Term, FormulaFailure> parse_formula_at(
    std::string_view text);

}  // namespace detail

// True for name, module?name, ?module?name and doc?module?name shapes.
bool is_valid_symbol_reference(std::string_view ref);
bool is_identifier(std::string_view s);
bool is_document_key(std::string_view s);

}  // namespace planetary::markup
