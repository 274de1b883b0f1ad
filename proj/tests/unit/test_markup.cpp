#include <string>
#include <variant>
#include <vector>

#include "common/error.hpp"
#include "doctest.h"
#include "markup/formula.hpp"
#include "markup/parser.hpp"
#include "markup/printer.hpp"
#include "markup/resolve.hpp"
#include "store/diff.hpp"
#include "support/corpus_oracle.hpp"
#include "support/test_support.hpp"

using namespace planetary;
using docmodel::Term;
using docmodel::TermKind;
using markup::ParseErrorCode;

namespace {

std::vector<markup::ParseError> errors_of(const markup::ParseResult& r) {
  REQUIRE(std::holds_alternative<std::vector<markup::ParseError>>(r));
  return std::get<std::vector<markup::ParseError>>(r);
}

Term formula_ok(std::string_view text) {
  auto r = markup::parse_formula(text);
  REQUIRE(std::holds_alternative<Term>(r));
  return std::get<Term>(r);
}

markup::ParseError formula_err(std::string_view text) {
  auto r = markup::parse_formula(text);
  REQUIRE(std::holds_alternative<markup::ParseError>(r));
  return std::get<markup::ParseError>(r);
}

// Generates syntactically valid sources over the full grammar.
class SourceGen {
 public:
  explicit SourceGen(std::uint64_t seed) : rng_(seed) {}

  std::string document() {
    std::string out = "\\title{" + words(1, 3) + "}\n";
    if (testing::chance(rng_, 0.7)) out += "\\msc{" + std::to_string(10 + pick(80)) + "A0" + std::to_string(pick(9)) + "}\n";
    out += "\n";
    std::size_t modules = pick(3);
    if (testing::chance(rng_, 0.5)) out += paragraph({}) + "\n";
    std::vector<std::string> module_names;
    for (std::size_t m = 0; m < modules; ++m) {
      std::string name = "m" + std::to_string(m);
      out += "\\begin{smodule}{" + name + "}\n";
      if (!module_names.empty() && testing::chance(rng_, 0.6)) {
        out += "\\importmodule{" + module_names[pick(module_names.size() - 1)] + "}\n";
      }
      std::vector<std::string> syms;
      for (std::size_t s = 0, n = 1 + pick(3); s < n; ++s) {
        syms.push_back(name + "s" + std::to_string(s));
        out += "\\symdef{" + syms.back() + "}";
        if (testing::chance(rng_, 0.5)) out += "[args=" + std::to_string(pick(3)) + "]";
        out += "\n";
      }
      out += "\n";
      for (std::size_t k = 0, n = pick(3); k < n; ++k) out += statement(syms) + "\n";
      out += "\\end{smodule}\n\n";
      module_names.push_back(name);
    }
    return out;
  }

 private:
  std::size_t pick(std::size_t hi) { return testing::uniform(rng_, 0, hi); }

  std::string words(std::size_t lo, std::size_t hi) {
    static const char* kWords[] = {"alpha", "beta", "set", "map", "order", "the", "of", "unit"};
    std::string out;
    for (std::size_t i = 0, n = testing::uniform(rng_, lo, hi); i < n; ++i) {
      if (i) out += " ";
      out += kWords[pick(7)];
    }
    return out;
  }

  std::string term(const std::vector<std::string>& syms, std::size_t depth) {
    std::size_t choice = pick(depth == 0 ? 3 : 5);
    if (choice == 0) return std::string(1, static_cast<char>('a' + pick(25)));
    if (choice == 1) return std::to_string(pick(1000)) + (testing::chance(rng_, 0.2) ? ".5" : "");
    if (choice == 2) return syms.empty() ? "x" : syms[pick(syms.size() - 1)];
    if (choice == 3) return "\\text{" + words(1, 2) + "}";
    std::string out = "\\apply{" + term(syms, depth - 1) + "}{";
    for (std::size_t i = 0, n = pick(3); i < n; ++i) {
      if (i) out += ", ";
      out += term(syms, depth - 1);
    }
    return out + "}";
  }

  std::string paragraph(const std::vector<std::string>& syms) {
    std::string out = words(1, 4);
    if (testing::chance(rng_, 0.6)) out += " $" + term(syms, 3) + "$";
    if (!syms.empty() && testing::chance(rng_, 0.5)) {
      out += " \\termref{" + syms[pick(syms.size() - 1)] + "}{" + words(1, 2) + "}";
    }
    return out + " " + words(0, 3) + ".\n";
  }

  std::string statement(const std::vector<std::string>& syms) {
    static const char* kEnvs[] = {"definition", "theorem", "example"};
    std::string env = kEnvs[pick(2)];
    std::string out = "\\begin{" + env + "}";
    std::string target;
    if (env == "definition" && !syms.empty()) {
      target = syms[pick(syms.size() - 1)];
      out += "[for=" + target + "]";
    }
    out += "\n";
    if (!target.empty()) out += "A \\definiendum{" + target + "}{" + words(1, 2) + "} is ";
    out += paragraph(syms);
    return out + "\\end{" + env + "}\n";
  }

  testing::Rng rng_;
};

}  // namespace

TEST_SUITE("markup") {

TEST_CASE("single module with one symbol of arity 2") {
  auto r = markup::parse_document({"nat.stx", "\\begin{smodule}{nat}\\symdef{plus}[args=2]\\end{smodule}"});
  REQUIRE(markup::parse_ok(r));
  const auto& ast = std::get<docmodel::DocumentAST>(r);
  auto modules = ast.modules();
  REQUIRE(modules.size() == 1);
  CHECK(modules[0]->name == "nat");
  REQUIRE(modules[0]->symbols.size() == 1);
  CHECK(modules[0]->symbols[0].name == "plus");
  CHECK(modules[0]->symbols[0].arity == 2);
}

TEST_CASE("unclosed environment is a single error on line 1") {
  auto errors = errors_of(markup::parse_document({"nat.stx", "\\begin{smodule}{nat}"}));
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].line == 1);
  CHECK(errors[0].code == ParseErrorCode::UnclosedEnvironment);
}

TEST_CASE("recoverable errors accumulate") {
  const std::string text =
      "\\begin{smodule}{m}\n"
      "\\bogus{x}\n"
      "\\symdef{a}\n"
      "\\symdef{a}\n"
      "\\frobnicate\n"
      "\\end{smodule}\n";
  auto errors = errors_of(markup::parse_document({"m.stx", text}));
  REQUIRE(errors.size() >= 3);
  CHECK(errors[0].line == 2);
  CHECK(errors[0].code == ParseErrorCode::UnknownCommand);
  bool duplicate = false;
  for (const auto& e : errors) duplicate |= e.code == ParseErrorCode::DuplicateSymbol;
  CHECK(duplicate);
}

TEST_CASE("groups fixture counts") {
  auto ast = testing::parse_or_throw(
      {"groups.stx", testing::read_file(testing::corpus_dir() / "groups.stx")});
  const auto& expect = oracle::kDocuments[4];
  REQUIRE(expect.path == "groups.stx");
  std::size_t symbols = 0, imports = 0;
  for (const auto* m : ast.modules()) {
    symbols += m->symbols.size();
    imports += m->imports.size();
  }
  CHECK(ast.modules().size() == expect.modules);
  CHECK(symbols == expect.symbols);
  CHECK(imports == expect.imports);
}

TEST_CASE("fixture counts for every document") {
  auto sources = testing::corpus_sources();
  REQUIRE(sources.size() == oracle::kDocumentCount);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    CAPTURE(sources[i].path);
    const auto& expect = oracle::kDocuments[i];
    REQUIRE(sources[i].path == expect.path);
    auto ast = testing::parse_or_throw(sources[i]);
    std::size_t symbols = 0, imports = 0;
    for (const auto* m : ast.modules()) {
      symbols += m->symbols.size();
      imports += m->imports.size();
    }
    CHECK(ast.modules().size() == expect.modules);
    CHECK(symbols == expect.symbols);
    CHECK(imports == expect.imports);
  }
}

TEST_CASE("apply formula") {
  Term t = formula_ok("\\apply{plus}{1,2}");
  CHECK(t == Term::apply(Term::symbol("plus"), {Term::num("1"), Term::num("2")}));
}

TEST_CASE("empty formula") {
  CHECK(formula_err("").code == ParseErrorCode::EmptyFormula);
  CHECK(formula_err("   ").code == ParseErrorCode::EmptyFormula);
}

TEST_CASE("apply without argument group") {
  CHECK(formula_err("\\apply{plus}").code == ParseErrorCode::BadArgumentCount);
}

TEST_CASE("malformed reference inside a formula") {
  CHECK(formula_err("a??b").code == ParseErrorCode::MalformedReference);
}

TEST_CASE("nested apply reprints byte-identically") {
  Term expected = Term::apply(
      Term::symbol("plus"),
      {Term::apply(Term::symbol("times"), {Term::num("2"), Term::num("3")}), Term::num("4")});
  Term t = formula_ok("\\apply{plus}{\\apply{times}{2,3},4}");
  CHECK(t == expected);
  CHECK(t.depth() == 2);
  const Term& inner = docmodel::subterm_at(t, std::vector<std::size_t>{1});
  CHECK(inner.children.size() == 3);
  std::string printed = markup::print_term(expected);
  CHECK(markup::print_term(formula_ok(printed)) == printed);
}

TEST_CASE("formula leaves") {
  CHECK(formula_ok("x").kind == TermKind::Var);
  CHECK(formula_ok("plus").kind == TermKind::SymbolRef);
  CHECK(formula_ok("nat?plus").value == "nat?plus");
  CHECK(formula_ok("123456789012345678901234567890").value == "123456789012345678901234567890");
  CHECK(formula_ok("3.25").kind == TermKind::Num);
  CHECK(formula_ok("\\text{a b}").value == "a b");
  CHECK(formula_ok("\\apply{f}{}").children.size() == 1);
}

TEST_CASE("resolves a cross-document termref") {
  markup::SymbolRegistry registry;
  auto nat = testing::parse_or_throw({"nat.stx", "\\begin{smodule}{nat}\\symdef{plus}[args=2]\\end{smodule}"});
  registry.add_document(nat);
  auto user = testing::parse_or_throw(
      {"use.stx",
       "\\begin{smodule}{u}\\importmodule{nat?nat}\n"
       "\\begin{example}\\termref{plus}{sum} of $\\apply{plus}{1,2}$\\end{example}\\end{smodule}"});
  auto r = markup::resolve_references(user, registry);
  REQUIRE(std::holds_alternative<docmodel::LinkedDocument>(r));
  const auto& doc = std::get<docmodel::LinkedDocument>(r);
  const auto& module = std::get<docmodel::ModuleDecl>(doc.ast.body[0]);
  CHECK(module.imports[0].uri == "//nat#nat");
  const auto& ref = std::get<docmodel::TermRef>(module.statements[0].content[0]);
  CHECK(ref.uri == "//nat#nat/plus");
  const auto& f = std::get<docmodel::Formula>(module.statements[0].content[2]);
  CHECK(f.term.head().uri == "//nat#nat/plus");
}

TEST_CASE("unresolved import names the reference") {
  auto ast = testing::parse_or_throw({"u.stx", "\\begin{smodule}{u}\\importmodule{missing?x}\\end{smodule}"});
  auto r = markup::resolve_references(ast, markup::SymbolRegistry{});
  REQUIRE(std::holds_alternative<std::vector<markup::ParseError>>(r));
  const auto& errors = std::get<std::vector<markup::ParseError>>(r);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].code == ParseErrorCode::MalformedReference);
  CHECK(errors[0].message.find("missing?x") != std::string::npos);
}

TEST_CASE("every unresolved name is reported") {
  auto ast = testing::parse_or_throw(
      {"u.stx", "\\begin{smodule}{u}\\begin{example}$\\apply{foo}{bar}$ \\termref{baz}{b}\\end{example}\\end{smodule}"});
  auto r = markup::resolve_references(ast, markup::SymbolRegistry{});
  REQUIRE(std::holds_alternative<std::vector<markup::ParseError>>(r));
  CHECK(std::get<std::vector<markup::ParseError>>(r).size() == 3);
}

TEST_CASE("self reference resolves to its own URI") {
  auto ast = testing::parse_or_throw(
      {"nat.stx",
       "\\begin{smodule}{nat}\\symdef{plus}[args=2]\n"
       "\\begin{theorem}$\\apply{plus}{1,2}$\\end{theorem}\\end{smodule}"});
  auto r = markup::resolve_references(ast, markup::SymbolRegistry{});
  REQUIRE(std::holds_alternative<docmodel::LinkedDocument>(r));
  const auto& module = std::get<docmodel::ModuleDecl>(std::get<docmodel::LinkedDocument>(r).ast.body[0]);
  const auto& f = std::get<docmodel::Formula>(module.statements[0].content[0]);
  CHECK(f.term.head().uri == "//nat#nat/plus");
}

TEST_CASE("CRLF is normalized") {
  std::string lf = "\\title{T}\n\\begin{smodule}{m}\n\\symdef{a}\n\\end{smodule}\n";
  std::string crlf;
  for (char c : lf) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  CHECK(testing::parse_or_throw({"m.stx", lf}) == testing::parse_or_throw({"m.stx", crlf}));
}

TEST_CASE("invalid UTF-8 is a single error") {
  auto errors = errors_of(markup::parse_document({"m.stx", "\\title{ok}\n\xff\xfe"}));
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].code == ParseErrorCode::InvalidEncoding);
  CHECK(errors[0].line == 2);
}

TEST_CASE("round trip over the fixture corpus") {
  for (const auto& src : testing::corpus_sources()) {
    CAPTURE(src.path);
    auto ast = testing::parse_or_throw(src);
    auto again = testing::parse_or_throw({src.path, markup::print_document(ast)});
    CHECK(again == ast);
  }
}

TEST_CASE("round trip and determinism over generated sources") {
  SourceGen gen(0x5eed0001);
  for (int i = 0; i < 300; ++i) {
    std::string text = gen.document();
    CAPTURE(text);
    auto first = markup::parse_document({"g.stx", text});
    REQUIRE(markup::parse_ok(first));
    auto second = markup::parse_document({"g.stx", text});
    REQUIRE(markup::parse_ok(second));
    const auto& ast = std::get<docmodel::DocumentAST>(first);
    CHECK(ast == std::get<docmodel::DocumentAST>(second));
    auto again = testing::parse_or_throw({"g.stx", markup::print_document(ast)});
    CHECK(again == ast);
  }
}

TEST_CASE("error positions lie within the source") {
  SourceGen gen(0x5eed0002);
  testing::Rng rng(0x5eed0003);
  for (int i = 0; i < 300; ++i) {
    std::string text = gen.document();
    // Damage the source at a random point.
    static const char* kJunk[] = {"{", "}", "\\zap", "$", "\\begin{theorem}", "\\end{smodule}", "\\symdef{"};
    std::size_t at = testing::uniform(rng, 0, text.size());
    text.insert(at, kJunk[testing::uniform(rng, 0, 6)]);
    CAPTURE(text);
    auto r = markup::parse_document({"g.stx", text});
    if (markup::parse_ok(r)) continue;
    auto lines = store::split_lines(text);
    for (const auto& e : std::get<std::vector<markup::ParseError>>(r)) {
      REQUIRE(e.line >= 1);
      REQUIRE(static_cast<std::size_t>(e.line) <= lines.size() + 1);
      std::size_t width = static_cast<std::size_t>(e.line) <= lines.size() ? lines[e.line - 1].size() : 0;
      CHECK(e.column >= 1);
      CHECK(static_cast<std::size_t>(e.column) <= width + 1);
    }
  }
}

}  // TEST_SUITE
