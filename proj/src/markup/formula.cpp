#include "markup/formula.hpp"

#include <string>

#include "common/text.hpp"

namespace planetary::markup {

using docmodel::Term;

std::string_view parse_error_code_name(ParseErrorCode code) {
  switch (code) {
    case ParseErrorCode::UnclosedEnvironment: return "UnclosedEnvironment";
    case ParseErrorCode::UnknownCommand: return "UnknownCommand";
    case ParseErrorCode::BadArgumentCount: return "BadArgumentCount";
    case ParseErrorCode::DuplicateSymbol: return "DuplicateSymbol";
    case ParseErrorCode::EmptyFormula: return "EmptyFormula";
    case ParseErrorCode::MalformedReference: return "MalformedReference";
    case ParseErrorCode::UnexpectedInput: return "UnexpectedInput";
    case ParseErrorCode::InvalidEncoding: return "InvalidEncoding";
  }
  return "UnexpectedInput";
}

std::string format_error(const ParseError& e) {
  return std::to_string(e.line) + ":" + std::to_string(e.column) + ": " +
         std::string(parse_error_code_name(e.code)) + ": " + e.message;
}

namespace {

bool is_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}
bool is_reference_char(char c) {
  return is_letter(c) || is_digit(c) || c == '-' || c == '_' || c == '.' ||
         c == '/' || c == '?';
}

constexpr int kMaxDepth = 256;

struct Failure {
  detail::FormulaFailure info;
};

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : s_(text) {}

  Term parse() {
    skip_space();
    if (at_end()) fail(pos_, ParseErrorCode::EmptyFormula, "empty formula");
    Term t = term(0);
    skip_space();
    if (!at_end()) {
      fail(pos_, ParseErrorCode::UnexpectedInput,
           "unexpected '" + std::string(1, s_[pos_]) + "' after term");
    }
    return t;
  }

 private:
  [[noreturn]] void fail(std::size_t at, ParseErrorCode code,
                         std::string message) {
    throw Failure{{at, code, std::move(message)}};
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void skip_space() {
    while (!at_end() && is_space(s_[pos_])) ++pos_;
  }

  void expect(char c, ParseErrorCode code, const char* what) {
    skip_space();
    if (peek() != c) fail(pos_, code, what);
    ++pos_;
  }

  Term term(int depth) {
    if (depth > kMaxDepth) {
      fail(pos_, ParseErrorCode::UnexpectedInput, "formula nested too deeply");
    }
    skip_space();
    const char c = peek();
    if (at_end() || c == '}' || c == ',') {
      fail(pos_, ParseErrorCode::BadArgumentCount, "missing term");
    }
    if (c == '\\') return command(depth);
    if (is_digit(c)) return numeral();
    if (is_letter(c) || c == '?') return reference();
    fail(pos_, ParseErrorCode::UnexpectedInput,
         "unexpected '" + std::string(1, c) + "' in formula");
  }

  Term command(int depth) {
    const auto start = pos_++;
    std::string name;
    while (!at_end() && is_letter(s_[pos_])) name.push_back(s_[pos_++]);
    if (name == "apply") return apply(start, depth);
    if (name == "text") return text_term(start);
    fail(start, ParseErrorCode::MalformedReference,
         "unknown escape '\\" + (name.empty() ? std::string(1, peek()) : name) +
             "' in formula");
  }

  Term apply(std::size_t start, int depth) {
    skip_space();
    if (peek() != '{') {
      fail(start, ParseErrorCode::BadArgumentCount,
           "\\apply needs a head group and an argument group");
    }
    ++pos_;
    Term head = term(depth + 1);
    expect('}', ParseErrorCode::UnexpectedInput, "expected '}' after head");
    skip_space();
    if (peek() != '{') {
      fail(start, ParseErrorCode::BadArgumentCount,
           "\\apply has no argument group");
    }
    ++pos_;
    std::vector<Term> args;
    skip_space();
    if (peek() == '}') {
      ++pos_;
      return Term::apply(std::move(head), std::move(args));
    }
    while (true) {
      args.push_back(term(depth + 1));
      skip_space();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == '}') {
        ++pos_;
        break;
      }
      if (at_end()) {
        fail(pos_, ParseErrorCode::UnexpectedInput,
             "unterminated argument group");
      }
      fail(pos_, ParseErrorCode::UnexpectedInput,
           "expected ',' or '}' in argument group");
    }
    return Term::apply(std::move(head), std::move(args));
  }

  Term text_term(std::size_t start) {
    skip_space();
    if (peek() != '{') {
      fail(start, ParseErrorCode::BadArgumentCount, "\\text needs a group");
    }
    ++pos_;
    std::string out;
    int depth = 0;
    while (true) {
      if (at_end()) {
        fail(start, ParseErrorCode::UnexpectedInput, "unterminated \\text");
      }
      const char c = s_[pos_++];
      if (c == '\\' && !at_end()) {
        out.push_back(s_[pos_++]);
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}' && depth-- == 0) break;
      out.push_back(c);
    }
    return Term::text(out);
  }

  Term numeral() {
    const auto start = pos_;
    while (!at_end() && is_digit(s_[pos_])) ++pos_;
    if (peek() == '.' && pos_ + 1 < s_.size() && is_digit(s_[pos_ + 1])) {
      ++pos_;
      while (!at_end() && is_digit(s_[pos_])) ++pos_;
    }
    if (!at_end() && (is_letter(s_[pos_]) || s_[pos_] == '.')) {
      fail(pos_, ParseErrorCode::UnexpectedInput, "malformed numeral");
    }
    return Term::num(std::string(s_.substr(start, pos_ - start)));
  }

  Term reference() {
    const auto start = pos_;
    while (!at_end() && is_reference_char(s_[pos_])) ++pos_;
    const auto token = s_.substr(start, pos_ - start);
    if (token.size() == 1 && is_letter(token[0])) {
      return Term::var(std::string(token));
    }
    if (!is_valid_symbol_reference(token)) {
      fail(start, ParseErrorCode::MalformedReference,
           "malformed symbol reference '" + std::string(token) + "'");
    }
    return Term::symbol(std::string(token));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty() || !is_letter(s[0])) return false;
  for (const char c : s) {
    if (!(is_letter(c) || is_digit(c) || c == '-' || c == '_')) return false;
  }
  return true;
}

bool is_document_key(std::string_view s) {
  if (s.empty() || s.front() == '/' || s.back() == '/') return false;
  for (const char c : s) {
    if (!(is_letter(c) || is_digit(c) || c == '-' || c == '_' || c == '.' ||
          c == '/')) {
      return false;
    }
  }
  for (const auto& seg : text::split(s, '/')) {
    if (seg.empty() || seg == "." || seg == "..") return false;
  }
  return true;
}

bool is_valid_symbol_reference(std::string_view ref) {
  const auto parts = text::split(ref, '?');
  switch (parts.size()) {
    case 1:
      return is_identifier(parts[0]);
    case 2:
      return is_identifier(parts[0]) && is_identifier(parts[1]);
    case 3:
      return (parts[0].empty() || is_document_key(parts[0])) &&
             is_identifier(parts[1]) && is_identifier(parts[2]);
    default:
      return false;
  }
}

namespace detail {

std::variant<Term, FormulaFailure> parse_formula_at(std::string_view text) {
  try {
    return FormulaParser(text).parse();
  } catch (const Failure& f) {
    return f.info;
  }
}

}  // namespace detail

std::variant<Term, ParseError> parse_formula(std::string_view text) {
  auto result = detail::parse_formula_at(text);
  if (auto* t = std::get_if<Term>(&result)) return std::move(*t);
  const auto& f = std::get<detail::FormulaFailure>(result);
  ParseError e;
  e.code = f.code;
  e.message = f.message;
  e.line = 1;
  e.column = 1;
  for (std::size_t i = 0; i < f.offset && i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == '\n') {
      ++e.line;
      e.column = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++e.column;
    }
  }
  return e;
}

}  // namespace planetary::markup
