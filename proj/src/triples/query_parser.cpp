#include <cctype>
#include <string>

#include "common/error.hpp"
#include "triples/query.hpp"

namespace planetary::triples {

namespace {

class QueryLexer {
 public:
  explicit QueryLexer(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::MalformedQuery,
                what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  // Case-insensitive keyword followed by a non-word character.
  bool accept_keyword(std::string_view kw) {
    skip_space();
    if (text_.size() - pos_ < kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != kw[i]) return false;
    }
    const auto end = pos_ + kw.size();
    if (end < text_.size() && is_word(text_[end])) return false;
    pos_ = end;
    return true;
  }

  std::string variable() {
    expect('?');
    const auto start = pos_;
    while (pos_ < text_.size() && is_word(text_[pos_])) ++pos_;
    if (pos_ == start) fail("empty variable name");
    return std::string(text_.substr(start, pos_ - start));
  }

  PatternTerm term() {
    const char c = peek();
    if (c == '?') return PatternTerm::var(variable());
    if (c == '<') {
      ++pos_;
      const auto close = text_.find('>', pos_);
      if (close == std::string_view::npos) fail("unterminated IRI");
      std::string iri(text_.substr(pos_, close - pos_));
      if (iri.empty()) fail("empty IRI");
      pos_ = close + 1;
      return PatternTerm::term(Node::iri(std::move(iri)));
    }
    if (c == '"') {
      ++pos_;
      std::string value;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated literal");
        const char ch = text_[pos_++];
        if (ch == '"') break;
        if (ch == '\\') {
          if (pos_ >= text_.size()) fail("unterminated literal");
          const char esc = text_[pos_++];
          switch (esc) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case 'r': value += '\r'; break;
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            default: fail("unknown escape in literal");
          }
        } else {
          value += ch;
        }
      }
      return PatternTerm::term(Node::lit(std::move(value)));
    }
    // prefix:local
    const auto start = pos_;
    while (pos_ < text_.size() && is_word(text_[pos_])) ++pos_;
    if (pos_ == start || pos_ >= text_.size() || text_[pos_] != ':') {
      fail("expected a variable, IRI, literal or prefixed name");
    }
    ++pos_;
    while (pos_ < text_.size() && (is_word(text_[pos_]) || text_[pos_] == '.' ||
                                    text_[pos_] == '-')) {
      ++pos_;
    }
    // A trailing '.' is the pattern separator, not part of the name.
    while (text_[pos_ - 1] == '.') --pos_;
    return PatternTerm::term(Node::iri(std::string(text_.substr(start, pos_ - start))));
  }

 private:
  static bool is_word(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Query parse_query(std::string_view text) {
  QueryLexer lex(text);
  Query q;
  if (!lex.accept_keyword("SELECT")) lex.fail("expected SELECT");
  if (!lex.accept('*')) {
    while (lex.peek() == '?') q.select.push_back(lex.variable());
    if (q.select.empty()) lex.fail("expected '*' or variables after SELECT");
  }
  if (!lex.accept_keyword("WHERE")) lex.fail("expected WHERE");
  lex.expect('{');
  while (!lex.accept('}')) {
    TriplePattern p;
    p.subject = lex.term();
    p.predicate = lex.term();
    p.transitive = lex.accept('+');
    p.object = lex.term();
    q.patterns.push_back(std::move(p));
    if (lex.accept('.')) continue;
    lex.expect('}');
    break;
  }
  if (!lex.at_end()) lex.fail("trailing input after query");
  if (q.patterns.empty()) lex.fail("query has no patterns");
  for (const auto& name : q.select) {
    bool used = false;
    for (const auto& v : query_variables(q)) used = used || v == name;
    if (!used) throw Error(ErrorCode::MalformedQuery,
                           "selected variable ?" + name + " is not used");
  }
  for (const auto& p : q.patterns) {
    if (p.transitive && p.predicate.is_variable) {
      throw Error(ErrorCode::MalformedQuery,
                  "transitive pattern needs a constant predicate");
    }
  }
  return q;
}

}  // namespace planetary::triples
