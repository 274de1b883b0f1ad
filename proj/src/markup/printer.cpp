#include "markup/printer.hpp"

#include "common/text.hpp"

namespace planetary::markup {

using namespace docmodel;

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    if (c == '{' || c == '}' || c == '$' || c == '%' || c == '\\') {
      out.push_back('\\');
    }
    out.push_back(c);
  }
  return out;
}

std::string print_term(const Term& term) {
  switch (term.kind) {
    case TermKind::Apply: {
      std::string out = "\\apply{" + print_term(term.head()) + "}{";
      bool first = true;
      for (const auto& a : term.args()) {
        if (!first) out += ",";
        first = false;
        out += print_term(a);
      }
      return out + "}";
    }
    case TermKind::Text:
      return "\\text{" + escape_text(term.value) + "}";
    case TermKind::SymbolRef:
    case TermKind::Var:
    case TermKind::Num:
      return term.value;
  }
  return {};
}

namespace {

void print_inlines(const std::vector<Inline>& items, std::string& out) {
  for (const auto& item : items) {
    if (const auto* t = std::get_if<TextRun>(&item)) {
      out += escape_text(t->text);
    } else if (const auto* f = std::get_if<Formula>(&item)) {
      out += "$" + print_term(f->term) + "$";
    } else if (const auto* r = std::get_if<TermRef>(&item)) {
      out += "\\termref{" + r->reference + "}{" + escape_text(r->text) + "}";
    } else if (const auto* d = std::get_if<Definiendum>(&item)) {
      out += "\\definiendum{" + d->name + "}{" + escape_text(d->text) + "}";
    }
  }
}

void print_statement(const Statement& s, std::string& out) {
  if (s.kind == StatementKind::Paragraph) {
    print_inlines(s.content, out);
    out += "\n";
    return;
  }
  const auto env = std::string(statement_kind_name(s.kind));
  out += "\\begin{" + env + "}";
  if (!s.for_refs.empty()) out += "[for=" + text::join(s.for_refs, ",") + "]";
  out += "\n";
  print_inlines(s.content, out);
  out += "\n\\end{" + env + "}\n";
}

void print_module(const ModuleDecl& m, std::string& out) {
  out += "\\begin{smodule}{" + m.name + "}\n";
  for (const auto& i : m.imports) {
    out += "\\importmodule{" +
           (i.document.empty() ? i.module : i.document + "?" + i.module) +
           "}\n";
  }
  for (const auto& s : m.symbols) {
    out += "\\symdef{" + s.name + "}";
    if (s.arity > 0) out += "[args=" + std::to_string(s.arity) + "]";
    out += "\n";
  }
  for (const auto& s : m.statements) {
    out += "\n";
    print_statement(s, out);
  }
  out += "\\end{smodule}\n";
}

}  // namespace

std::string print_document(const DocumentAST& ast) {
  std::string out;
  if (!ast.title.empty()) out += "\\title{" + escape_text(ast.title) + "}\n";
  if (!ast.msc.empty()) out += "\\msc{" + text::join(ast.msc, ", ") + "}\n";
  for (const auto& block : ast.body) {
    out += "\n";
    if (const auto* m = std::get_if<ModuleDecl>(&block)) {
      print_module(*m, out);
    } else {
      print_statement(std::get<Statement>(block), out);
    }
  }
  return out;
}

}  // namespace planetary::markup
