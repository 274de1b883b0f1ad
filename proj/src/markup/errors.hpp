#pragma once

#include <string>
#include <string_view>

namespace planetary::markup {

enum class ParseErrorCode {
  UnclosedEnvironment,
  UnknownCommand,
  BadArgumentCount,
  DuplicateSymbol,
  EmptyFormula,
  MalformedReference,
  UnexpectedInput,
  InvalidEncoding,
};

std::string_view parse_error_code_name(ParseErrorCode code);

// 1-based position in the LF-normalized source; column counts code points.
struct ParseError {
  int line = 1;
  int column = 1;
  ParseErrorCode code = ParseErrorCode::UnexpectedInput;
  std::string message;

  friend bool operator==(const ParseError&, const ParseError&) = default;
};

std::string format_error(const ParseError& e);

}  // namespace planetary::markup
