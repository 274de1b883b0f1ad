#include <set>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "docmodel/fragments.hpp"
#include "docmodel/serialize.hpp"
#include "docmodel/term.hpp"
#include "doctest.h"
#include "support/corpus_oracle.hpp"
#include "support/term_gen.hpp"
#include "support/test_support.hpp"

using namespace planetary;
using docmodel::FragmentKind;
using docmodel::Term;
using docmodel::TermPath;

namespace {

Term plus12() {
  return Term::apply(Term::symbol("plus", "//nat#nat/plus"), {Term::num("1"), Term::num("2")});
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("docmodel") {

TEST_CASE("one module with one definition") {
  auto doc = testing::link_one(
      "p.stx", "\\begin{smodule}{m}\\symdef{a}\\begin{definition}[for=a]An a.\\end{definition}\\end{smodule}");
  std::set<std::string> ids;
  for (const auto& [id, f] : doc.fragments) ids.insert(id);
  CHECK(ids == std::set<std::string>{"p!", "p!0", "p!0.0"});
  CHECK(doc.fragments.at("p!0").kind == FragmentKind::Module);
  CHECK(doc.fragments.at("p!0.0").kind == FragmentKind::Statement);
  CHECK(doc.fragments.at("p!0.0").label == "definition");
}

TEST_CASE("assignment is deterministic") {
  auto doc = testing::link_one(
      "p.stx", "\\begin{smodule}{m}\\symdef{a}\\begin{definition}[for=a]$\\apply{a}{x, 2}$\\end{definition}\\end{smodule}");
  auto again = docmodel::assign_fragment_ids(doc);
  CHECK(again.fragments == doc.fragments);
  doc.fragments.clear();
  CHECK(docmodel::assign_fragment_ids(doc).fragments == again.fragments);
}

TEST_CASE("fixture fragment counts") {
  auto corpus = testing::linked_corpus();
  REQUIRE(corpus.size() == oracle::kDocumentCount);
  std::size_t total = 0;
  for (const auto& expect : oracle::kDocuments) {
    CAPTURE(expect.path);
    const auto& doc = corpus.at(std::string(expect.path));
    CHECK(doc.fragments.size() == expect.fragments);
    total += doc.fragments.size();
  }
  CHECK(total == oracle::kFragmentsTotal);
  CHECK(corpus.at("groups.stx").fragments.size() == 45);
}

TEST_CASE("fragment ids are unique and parse back") {
  for (const auto& [path, doc] : testing::linked_corpus()) {
    for (const auto& [id, f] : doc.fragments) {
      CHECK(f.id == id);
      auto parsed = docmodel::parse_fragment_id(id);
      REQUIRE(parsed.has_value());
      CHECK(parsed->document == doc.key());
      CHECK(parsed->ordinal == f.ordinal);
      CHECK(docmodel::make_fragment_id(doc.key(), f.ordinal) == id);
      CHECK(doc.find_fragment(id) == &f);
    }
  }
}

TEST_CASE("subterm fragments address their node") {
  for (const auto& [path, doc] : testing::linked_corpus()) {
    for (const auto& [id, f] : doc.fragments) {
      if (f.kind != FragmentKind::Subterm && f.kind != FragmentKind::Formula) continue;
      CAPTURE(id);
      const Term* root = doc.formula_term(f);
      REQUIRE(root != nullptr);
      const Term& node = docmodel::subterm_at(*root, f.term_path);
      CHECK(f.label == docmodel::term_kind_name(node.kind));
      auto suffix = docmodel::format_term_path(f.term_path);
      CHECK(id == (suffix.empty() ? f.formula : f.formula + "." + suffix));
    }
  }
}

TEST_CASE("subterm_at") {
  Term t = plus12();
  CHECK(docmodel::subterm_at(t, TermPath{}) == t);
  CHECK(docmodel::subterm_at(t, TermPath{2}) == Term::num("2"));
  CHECK(docmodel::subterm_at(t, TermPath{0}).value == "plus");
  CHECK(code_of([&] { docmodel::subterm_at(t, TermPath{3}); }) == ErrorCode::InvalidTermPath);
  CHECK(code_of([&] { docmodel::subterm_at(t, TermPath{1, 0}); }) == ErrorCode::InvalidTermPath);
}

TEST_CASE("replace_subterm") {
  Term t = plus12();
  Term before = t;
  CHECK(docmodel::replace_subterm(t, TermPath{}, Term::var("y")) == Term::var("y"));
  Term replaced = docmodel::replace_subterm(t, TermPath{2}, Term::var("x"));
  CHECK(replaced == Term::apply(Term::symbol("plus", "//nat#nat/plus"), {Term::num("1"), Term::var("x")}));
  CHECK(t == before);
  CHECK(code_of([&] { docmodel::replace_subterm(t, TermPath{5}, Term::num("0")); }) ==
        ErrorCode::InvalidTermPath);
}

TEST_CASE("term paths format and parse") {
  CHECK(docmodel::format_term_path(TermPath{}) == "");
  CHECK(docmodel::format_term_path(TermPath{1, 0, 2}) == "1.0.2");
  CHECK(docmodel::parse_term_path("1.0.2") == TermPath{1, 0, 2});
  CHECK(docmodel::parse_term_path("") == TermPath{});
  CHECK_FALSE(docmodel::parse_term_path("1..2").has_value());
  CHECK_FALSE(docmodel::parse_term_path("a").has_value());
}

TEST_CASE("replacement law over random trees") {
  testing::Rng rng(0xd0c0001);
  for (int i = 0; i < 500; ++i) {
    Term t = testing::random_term(rng, 6, 4);
    CHECK(t.depth() <= 6);
    auto paths = docmodel::all_paths(t);
    CHECK(paths.size() == t.node_count());
    for (const auto& p : paths) {
      REQUIRE(docmodel::is_valid_path(t, p));
      CHECK(docmodel::replace_subterm(t, p, docmodel::subterm_at(t, p)) == t);
    }
  }
}

TEST_CASE("replacement differs exactly at the path") {
  testing::Rng rng(0xd0c0002);
  const Term marker = Term::text("marker-not-generated");
  for (int i = 0; i < 200; ++i) {
    Term t = testing::random_term(rng, 5, 3);
    auto paths = docmodel::all_paths(t);
    const auto& p = paths[testing::uniform(rng, 0, paths.size() - 1)];
    Term r = docmodel::replace_subterm(t, p, marker);
    CHECK(docmodel::subterm_at(r, p) == marker);
    for (const auto& q : docmodel::all_paths(t)) {
      bool under_p = q.size() >= p.size() && std::equal(p.begin(), p.end(), q.begin());
      bool above_p = q.size() < p.size() && std::equal(q.begin(), q.end(), p.begin());
      if (under_p || above_p) continue;
      CHECK(docmodel::subterm_at(r, q) == docmodel::subterm_at(t, q));
    }
  }
}

TEST_CASE("invalid paths are rejected") {
  testing::Rng rng(0xd0c0003);
  for (int i = 0; i < 200; ++i) {
    Term t = testing::random_term(rng, 4, 3);
    auto paths = docmodel::all_paths(t);
    TermPath p = paths[testing::uniform(rng, 0, paths.size() - 1)];
    const Term& node = docmodel::subterm_at(t, p);
    p.push_back(node.children.size() + testing::uniform(rng, 0, 2));
    CHECK_FALSE(docmodel::is_valid_path(t, p));
    CHECK(code_of([&] { docmodel::subterm_at(t, p); }) == ErrorCode::InvalidTermPath);
  }
}

TEST_CASE("uris") {
  CHECK(docmodel::document_key("analysis/series.stx") == "analysis/series");
  CHECK(docmodel::document_repo_path("analysis/series") == "analysis/series.stx");
  CHECK(docmodel::symbol_uri("nat", "nat", "plus") == "//nat#nat/plus");
  auto parts = docmodel::parse_uri("//analysis/series#series/sum");
  REQUIRE(parts.has_value());
  CHECK(parts->document == "analysis/series");
  CHECK(parts->module == "series");
  CHECK(parts->symbol == "sum");
  CHECK_FALSE(docmodel::parse_uri("nat#plus").has_value());
}

TEST_CASE("serialization round trip") {
  for (const auto& [path, doc] : testing::linked_corpus()) {
    CAPTURE(path);
    std::string text = docmodel::serialize_document(doc);
    CHECK(text.back() == '\n');
    auto back = docmodel::deserialize_document(text);
    CHECK(back == doc);
    CHECK(docmodel::serialize_document(back) == text);
  }
}

TEST_CASE("serialization rejects damaged input") {
  auto doc = testing::link_one("p.stx", "\\begin{smodule}{m}\\symdef{a}\\end{smodule}");
  auto j = docmodel::document_to_json(doc);
  j["schema"] = "something-else";
  CHECK(code_of([&] { docmodel::document_from_json(j); }) == ErrorCode::Corrupt);
  CHECK(code_of([&] { docmodel::deserialize_document("{not json"); }) == ErrorCode::Corrupt);
}

TEST_CASE("term json round trip over random trees") {
  testing::Rng rng(0xd0c0004);
  for (int i = 0; i < 200; ++i) {
    Term t = testing::random_term(rng, 5, 4);
    CHECK(docmodel::term_from_json(docmodel::term_to_json(t)) == t);
  }
}

}  // TEST_SUITE
