#include "markup/parser.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "common/text.hpp"
#include "markup/formula.hpp"

namespace planetary::markup {

using namespace docmodel;

namespace {

struct Fatal {
  ParseError error;
};

bool is_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_blank(char c) { return c == ' ' || c == '\t'; }
bool is_escapable(char c) {
  return c == '{' || c == '}' || c == '$' || c == '%' || c == '\\';
}

// Collapses whitespace runs to one space, merges adjacent text runs and trims
// the ends of the inline sequence.
std::vector<Inline> normalize_inlines(std::vector<Inline> items) {
  std::vector<Inline> merged;
  for (auto& item : items) {
    if (auto* t = std::get_if<TextRun>(&item)) {
      if (!merged.empty()) {
        if (auto* prev = std::get_if<TextRun>(&merged.back())) {
          prev->text += t->text;
          continue;
        }
      }
    }
    merged.push_back(std::move(item));
  }
  for (auto& item : merged) {
    if (auto* t = std::get_if<TextRun>(&item)) {
      std::string out;
      bool space = false;
      for (const char c : t->text) {
        if (c == ' ' || c == '\t' || c == '\n') {
          space = true;
          continue;
        }
        if (space) out.push_back(' ');
        space = false;
        out.push_back(c);
      }
      if (space) out.push_back(' ');
      t->text = std::move(out);
    }
  }
  if (!merged.empty()) {
    if (auto* t = std::get_if<TextRun>(&merged.front());
        t && !t->text.empty() && t->text.front() == ' ') {
      t->text.erase(0, 1);
    }
    if (auto* t = std::get_if<TextRun>(&merged.back());
        t && !t->text.empty() && t->text.back() == ' ') {
      t->text.pop_back();
    }
  }
  std::erase_if(merged, [](const Inline& i) {
    const auto* t = std::get_if<TextRun>(&i);
    return t != nullptr && t->text.empty();
  });
  return merged;
}

std::string collapse(std::string_view s) {
  std::vector<Inline> one;
  one.emplace_back(TextRun{std::string(s)});
  auto n = normalize_inlines(std::move(one));
  return n.empty() ? std::string() : std::get<TextRun>(n.front()).text;
}

enum class Scope { Top, Module };

class Parser {
 public:
  Parser(std::string path, std::string text)
      : src_(std::move(text)) {
    ast_.path = std::move(path);
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < src_.size(); ++i) {
      if (src_[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  ParseResult run() {
    try {
      if (const auto bad = text::find_invalid_utf8(src_)) {
        throw Fatal{error_at(*bad, ParseErrorCode::InvalidEncoding,
                             "invalid UTF-8 sequence")};
      }
      parse_container(Scope::Top, nullptr);
    } catch (const Fatal& f) {
      return std::vector<ParseError>{f.error};
    }
    if (!errors_.empty()) {
      std::stable_sort(errors_.begin(), errors_.end(),
                       [](const ParseError& a, const ParseError& b) {
                         return std::tie(a.line, a.column) <
                                std::tie(b.line, b.column);
                       });
      return errors_;
    }
    return std::move(ast_);
  }

 private:
  // ---- positions and diagnostics -------------------------------------

  SourcePos pos_at(std::size_t offset) const {
    offset = std::min(offset, src_.size());
    const auto it =
        std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    const auto line = static_cast<int>(it - line_starts_.begin());
    const auto start = line_starts_[line - 1];
    int column = 1;
    for (std::size_t i = start; i < offset; ++i) {
      if ((static_cast<unsigned char>(src_[i]) & 0xC0) != 0x80) ++column;
    }
    return {line, column};
  }

  ParseError error_at(std::size_t offset, ParseErrorCode code,
                      std::string message) const {
    const auto p = pos_at(offset);
    return ParseError{p.line, p.column, code, std::move(message)};
  }

  void report(std::size_t offset, ParseErrorCode code, std::string message) {
    errors_.push_back(error_at(offset, code, std::move(message)));
  }

  // ---- low-level scanning --------------------------------------------

  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void skip_comment() {
    while (!at_end() && src_[pos_] != '\n') ++pos_;
  }

  void skip_blanks() {
    while (!at_end()) {
      if (is_blank(peek()) || peek() == '\n') {
        ++pos_;
      } else if (peek() == '%') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  std::string read_command_name() {
    std::string name;
    while (!at_end() && is_letter(src_[pos_])) name.push_back(src_[pos_++]);
    return name;
  }

  // Reads a balanced `{...}` group at the cursor (blanks allowed before it).
  // Returns nullopt without consuming anything if no group follows.
  std::optional<std::string> read_group(char open = '{', char close = '}') {
    auto probe = pos_;
    while (probe < src_.size() && is_blank(src_[probe])) ++probe;
    if (probe >= src_.size() || src_[probe] != open) return std::nullopt;
    pos_ = probe;
    const auto start = pos_++;
    int depth = 0;
    std::string raw;
    while (true) {
      if (at_end()) {
        throw Fatal{error_at(start, ParseErrorCode::UnclosedEnvironment,
                             std::string("unbalanced '") + open + "'")};
      }
      const char c = src_[pos_++];
      if (c == '\\' && !at_end()) {
        raw.push_back(c);
        raw.push_back(src_[pos_++]);
        continue;
      }
      if (c == open) ++depth;
      if (c == close && depth-- == 0) return raw;
      raw.push_back(c);
    }
  }

  // Option list like `[args=2]` that must follow the command immediately.
  std::optional<std::string> read_options() {
    if (peek() != '[') return std::nullopt;
    return read_group('[', ']');
  }

  static std::string unescape(std::string_view raw) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 1 < raw.size() && is_escapable(raw[i + 1])) {
        out.push_back(raw[++i]);
      } else {
        out.push_back(raw[i]);
      }
    }
    return out;
  }

  // Recovery after an unknown command: drop the groups attached to it.
  void skip_attached_groups() {
    while (true) {
      if (peek() == '[') {
        read_group('[', ']');
      } else if (read_group()) {
      } else {
        return;
      }
    }
  }

  // ---- containers ------------------------------------------------------

  struct Flow {
    std::vector<Inline> items;
    std::size_t start = 0;
    bool has_content = false;
  };

  void flush_paragraph(Flow& flow, std::vector<Statement>& out) {
    if (flow.has_content) {
      auto items = normalize_inlines(std::move(flow.items));
      if (!items.empty()) {
        Statement s;
        s.kind = StatementKind::Paragraph;
        s.content = std::move(items);
        s.pos = pos_at(flow.start);
        out.push_back(std::move(s));
      }
    }
    flow = Flow{};
  }

  void add_text(Flow& flow, std::string_view text) {
    if (!flow.has_content) {
      if (text::trim(text).empty()) return;
      flow.start = pos_;
      flow.has_content = true;
    }
    if (!flow.items.empty()) {
      if (auto* t = std::get_if<TextRun>(&flow.items.back())) {
        t->text += text;
        return;
      }
    }
    flow.items.emplace_back(TextRun{std::string(text)});
  }

  void add_inline(Flow& flow, Inline item, std::size_t start) {
    if (!flow.has_content) {
      flow.start = start;
      flow.has_content = true;
    }
    flow.items.push_back(std::move(item));
  }

  // Parses the top level (module == nullptr) or a module body up to its
  // \end{smodule}. Returns true when the closing \end was consumed.
  bool parse_container(Scope scope, ModuleDecl* module) {
    Flow flow;
    std::vector<Statement> paragraphs;
    auto emit_paragraphs = [&] {
      flush_paragraph(flow, paragraphs);
      for (auto& p : paragraphs) {
        if (module) {
          module->statements.push_back(std::move(p));
        } else {
          ast_.body.emplace_back(std::move(p));
        }
      }
      paragraphs.clear();
    };

    while (!at_end()) {
      const char c = peek();
      if (c == '%') {
        skip_comment();
        continue;
      }
      if (c == '\n') {
        ++pos_;
        auto probe = pos_;
        while (probe < src_.size() && is_blank(src_[probe])) ++probe;
        if (probe < src_.size() && src_[probe] == '\n') {
          flush_paragraph(flow, paragraphs);
        } else {
          add_text(flow, " ");
        }
        continue;
      }
      if (c == '$') {
        const auto start = pos_;
        if (auto f = formula()) add_inline(flow, std::move(*f), start);
        continue;
      }
      if (c == '{' || c == '}') {
        report(pos_, ParseErrorCode::UnexpectedInput,
               std::string("unexpected '") + c + "'");
        ++pos_;
        continue;
      }
      if (c != '\\') {
        const auto start = pos_;
        while (!at_end() && peek() != '\\' && peek() != '$' && peek() != '%' &&
               peek() != '\n' && peek() != '{' && peek() != '}') {
          ++pos_;
        }
        const auto saved = pos_;
        pos_ = start;
        add_text(flow, std::string_view(src_).substr(start, saved - start));
        pos_ = saved;
        continue;
      }

      // Command.
      const auto start = pos_++;
      if (is_escapable(peek())) {
        add_text(flow, std::string(1, src_[pos_++]));
        continue;
      }
      const auto name = read_command_name();
      if (name == "begin" || name == "end") {
        const auto env = read_group();
        if (!env) {
          report(start, ParseErrorCode::BadArgumentCount,
                 "\\" + name + " needs an environment name");
          continue;
        }
        if (name == "end") {
          if (scope == Scope::Module && *env == "smodule") {
            emit_paragraphs();
            return true;
          }
          report(start, ParseErrorCode::UnexpectedInput,
                 "\\end{" + *env + "} without matching \\begin");
          continue;
        }
        if (*env == "smodule") {
          emit_paragraphs();
          if (scope == Scope::Module) {
            report(start, ParseErrorCode::UnknownCommand,
                   "smodule environments cannot be nested");
            read_group();
            continue;
          }
          parse_module(start);
          continue;
        }
        if (const auto kind = statement_kind_from_env(*env)) {
          emit_paragraphs();
          auto s = parse_statement(*kind, *env, start);
          if (module) {
            module->statements.push_back(std::move(s));
          } else {
            ast_.body.emplace_back(std::move(s));
          }
          continue;
        }
        report(start, ParseErrorCode::UnknownCommand,
               "unknown environment '" + *env + "'");
        skip_attached_groups();
        continue;
      }
      if (name == "title" || name == "msc") {
        if (scope != Scope::Top) {
          report(start, ParseErrorCode::UnknownCommand,
                 "\\" + name + " is only allowed at the top level");
          skip_attached_groups();
          continue;
        }
        metadata(name, start);
        continue;
      }
      if (name == "symdef" || name == "importmodule") {
        if (module == nullptr) {
          report(start, ParseErrorCode::UnknownCommand,
                 "\\" + name + " is only allowed inside smodule");
          skip_attached_groups();
          continue;
        }
        if (name == "symdef") {
          symdef(*module, start);
        } else {
          importmodule(*module, start);
        }
        continue;
      }
      if (auto item = inline_command(name, start)) {
        add_inline(flow, std::move(*item), start);
        continue;
      }
      // inline_command reported the problem.
    }

    emit_paragraphs();
    return false;
  }

  void parse_module(std::size_t start) {
    ModuleDecl m;
    m.pos = pos_at(start);
    const auto name = read_group();
    if (!name) {
      report(start, ParseErrorCode::BadArgumentCount,
             "smodule needs a name argument");
    } else if (!is_identifier(text::trim(*name))) {
      report(start, ParseErrorCode::MalformedReference,
             "invalid module name '" + *name + "'");
    } else {
      m.name = std::string(text::trim(*name));
    }
    if (!parse_container(Scope::Module, &m)) {
      report(start, ParseErrorCode::UnclosedEnvironment,
             "smodule '" + m.name + "' is not closed");
    }
    if (m.name.empty()) return;
    if (!module_names_.insert(m.name).second) {
      report(start, ParseErrorCode::DuplicateSymbol,
             "duplicate module '" + m.name + "'");
      return;
    }
    ast_.body.emplace_back(std::move(m));
  }

  Statement parse_statement(StatementKind kind, const std::string& env,
                            std::size_t start) {
    Statement s;
    s.kind = kind;
    s.pos = pos_at(start);
    if (auto opts = read_options()) statement_options(s, *opts, start);

    Flow flow;
    flow.has_content = true;
    while (true) {
      if (at_end()) {
        report(start, ParseErrorCode::UnclosedEnvironment,
               env + " is not closed");
        break;
      }
      const char c = peek();
      if (c == '%') {
        skip_comment();
        continue;
      }
      if (c == '$') {
        const auto at = pos_;
        if (auto f = formula()) add_inline(flow, std::move(*f), at);
        continue;
      }
      if (c == '{' || c == '}') {
        report(pos_, ParseErrorCode::UnexpectedInput,
               std::string("unexpected '") + c + "'");
        ++pos_;
        continue;
      }
      if (c != '\\') {
        const auto from = pos_;
        while (!at_end() && peek() != '\\' && peek() != '$' && peek() != '%' &&
               peek() != '{' && peek() != '}') {
          ++pos_;
        }
        flow.items.emplace_back(
            TextRun{std::string(std::string_view(src_).substr(from, pos_ - from))});
        continue;
      }
      const auto at = pos_++;
      if (is_escapable(peek())) {
        flow.items.emplace_back(TextRun{std::string(1, src_[pos_++])});
        continue;
      }
      const auto name = read_command_name();
      if (name == "end") {
        const auto probe = pos_;
        const auto closing = read_group();
        if (closing && *closing == env) break;
        if (closing && *closing == "smodule") {
          // Leave \end{smodule} for the enclosing module.
          report(start, ParseErrorCode::UnclosedEnvironment,
                 env + " is not closed");
          pos_ = at;
          break;
        }
        pos_ = probe;
        report(at, ParseErrorCode::UnexpectedInput,
               "\\end{" + closing.value_or("") + "} does not close " + env);
        continue;
      }
      if (name == "begin") {
        report(at, ParseErrorCode::UnknownCommand,
               "environments cannot be nested inside " + env);
        skip_attached_groups();
        continue;
      }
      if (auto item = inline_command(name, at)) {
        flow.items.push_back(std::move(*item));
      }
    }
    s.content = normalize_inlines(std::move(flow.items));
    return s;
  }

  void statement_options(Statement& s, const std::string& raw,
                         std::size_t start) {
    for (const auto& opt : text::split(raw, ';')) {
      const auto trimmed = text::trim(opt);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      const auto key = text::trim(trimmed.substr(0, eq));
      if (eq == std::string_view::npos || key != "for") {
        report(start, ParseErrorCode::UnexpectedInput,
               "unknown statement option '" + std::string(trimmed) + "'");
        continue;
      }
      for (const auto& ref : text::split(trimmed.substr(eq + 1), ',')) {
        const auto r = std::string(text::trim(ref));
        if (!is_valid_symbol_reference(r)) {
          report(start, ParseErrorCode::MalformedReference,
                 "malformed for= reference '" + r + "'");
          continue;
        }
        s.for_refs.push_back(r);
      }
    }
  }

  void metadata(const std::string& name, std::size_t start) {
    const auto arg = read_group();
    if (!arg) {
      report(start, ParseErrorCode::BadArgumentCount,
             "\\" + name + " needs an argument");
      return;
    }
    if (name == "title") {
      ast_.title = collapse(unescape(*arg));
      return;
    }
    for (const auto& code : text::split(*arg, ',')) {
      const auto c = std::string(text::trim(code));
      const bool ok = !c.empty() && std::all_of(c.begin(), c.end(), [](char ch) {
        return is_letter(ch) || (ch >= '0' && ch <= '9') || ch == '-';
      });
      if (!ok) {
        report(start, ParseErrorCode::MalformedReference,
               "malformed classification code '" + c + "'");
        continue;
      }
      if (std::find(ast_.msc.begin(), ast_.msc.end(), c) == ast_.msc.end()) {
        ast_.msc.push_back(c);
      }
    }
  }

  void symdef(ModuleDecl& m, std::size_t start) {
    const auto name = read_group();
    if (!name) {
      report(start, ParseErrorCode::BadArgumentCount,
             "\\symdef needs a symbol name");
      return;
    }
    SymbolDecl decl;
    decl.pos = pos_at(start);
    decl.name = std::string(text::trim(*name));
    bool ok = true;
    if (auto opts = read_options()) {
      for (const auto& opt : text::split(*opts, ',')) {
        const auto trimmed = text::trim(opt);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        const auto key = text::trim(trimmed.substr(0, eq));
        if (eq == std::string_view::npos || key != "args") {
          report(start, ParseErrorCode::UnexpectedInput,
                 "unknown symdef option '" + std::string(trimmed) + "'");
          ok = false;
          continue;
        }
        const auto value = text::trim(trimmed.substr(eq + 1));
        int arity = -1;
        const auto [ptr, ec] =
            std::from_chars(value.data(), value.data() + value.size(), arity);
        if (ec != std::errc{} || ptr != value.data() + value.size() ||
            arity < 0) {
          report(start, ParseErrorCode::BadArgumentCount,
                 "args= must be a non-negative integer");
          ok = false;
          continue;
        }
        decl.arity = arity;
      }
    }
    if (!is_identifier(decl.name)) {
      report(start, ParseErrorCode::MalformedReference,
             "invalid symbol name '" + decl.name + "'");
      return;
    }
    const bool dup = std::any_of(m.symbols.begin(), m.symbols.end(),
                                 [&](const SymbolDecl& s) {
                                   return s.name == decl.name;
                                 });
    if (dup) {
      report(start, ParseErrorCode::DuplicateSymbol,
             "symbol '" + decl.name + "' already declared in module '" +
                 m.name + "'");
      return;
    }
    if (ok) m.symbols.push_back(std::move(decl));
  }

  void importmodule(ModuleDecl& m, std::size_t start) {
    const auto arg = read_group();
    if (!arg) {
      report(start, ParseErrorCode::BadArgumentCount,
             "\\importmodule needs a module reference");
      return;
    }
    const auto ref = std::string(text::trim(*arg));
    const auto parts = text::split(ref, '?');
    ImportDecl decl;
    decl.pos = pos_at(start);
    if (parts.size() == 1) {
      decl.module = parts[0];
    } else if (parts.size() == 2) {
      decl.document = parts[0];
      decl.module = parts[1];
    } else {
      report(start, ParseErrorCode::MalformedReference,
             "malformed module reference '" + ref + "'");
      return;
    }
    if (!is_identifier(decl.module) ||
        (!decl.document.empty() && !is_document_key(decl.document))) {
      report(start, ParseErrorCode::MalformedReference,
             "malformed module reference '" + ref + "'");
      return;
    }
    m.imports.push_back(std::move(decl));
  }

  // \termref and \definiendum; reports and returns nullopt otherwise.
  std::optional<Inline> inline_command(const std::string& name,
                                       std::size_t start) {
    if (name == "termref" || name == "definiendum") {
      const auto first = read_group();
      const auto second = first ? read_group() : std::nullopt;
      if (!first || !second) {
        report(start, ParseErrorCode::BadArgumentCount,
               "\\" + name + " needs two arguments");
        return std::nullopt;
      }
      const auto target = std::string(text::trim(*first));
      const auto display = collapse(unescape(*second));
      if (name == "termref") {
        if (!is_valid_symbol_reference(target)) {
          report(start, ParseErrorCode::MalformedReference,
                 "malformed symbol reference '" + target + "'");
          return std::nullopt;
        }
        return TermRef{target, display, {}, pos_at(start)};
      }
      if (!is_identifier(target)) {
        report(start, ParseErrorCode::MalformedReference,
               "malformed definiendum name '" + target + "'");
        return std::nullopt;
      }
      return Definiendum{target, display, {}, pos_at(start)};
    }
    if (name.empty()) {
      report(start, ParseErrorCode::UnknownCommand,
             std::string("unknown control sequence '\\") + peek() + "'");
      if (!at_end()) ++pos_;
      return std::nullopt;
    }
    report(start, ParseErrorCode::UnknownCommand,
           "unknown command '\\" + name + "'");
    skip_attached_groups();
    return std::nullopt;
  }

  std::optional<Inline> formula() {
    const auto start = pos_++;
    auto end = start + 1;
    while (end < src_.size() && src_[end] != '$') {
      if (src_[end] == '\\' && end + 1 < src_.size()) ++end;
      ++end;
    }
    if (end >= src_.size()) {
      throw Fatal{error_at(start, ParseErrorCode::UnclosedEnvironment,
                           "unterminated formula")};
    }
    const auto body = std::string_view(src_).substr(start + 1, end - start - 1);
    pos_ = end + 1;
    auto result = detail::parse_formula_at(body);
    if (auto* f = std::get_if<detail::FormulaFailure>(&result)) {
      report(f->code == ParseErrorCode::EmptyFormula ? start
                                                     : start + 1 + f->offset,
             f->code, f->message);
      return std::nullopt;
    }
    return Formula{std::move(std::get<Term>(result)), pos_at(start)};
  }

  std::string src_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> line_starts_;
  std::vector<ParseError> errors_;
  std::set<std::string> module_names_;
  DocumentAST ast_;
};

}  // namespace

ParseResult parse_document(const SourceDocument& source) {
  return Parser(source.path, text::normalize_newlines(source.text)).run();
}

}  // namespace planetary::markup
