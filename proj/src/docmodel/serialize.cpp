#include "docmodel/serialize.hpp"

#include "common/error.hpp"
#include "docmodel/fragments.hpp"

namespace planetary::docmodel {

using nlohmann::ordered_json;
using nlohmann::json;

namespace {

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorCode::Corrupt, "linked document: " + what);
}

TermKind term_kind_from(std::string_view name) {
  for (auto k : {TermKind::Apply, TermKind::SymbolRef, TermKind::Var,
                 TermKind::Num, TermKind::Text}) {
    if (term_kind_name(k) == name) return k;
  }
  corrupt("unknown term kind '" + std::string(name) + "'");
}

StatementKind statement_kind_from(std::string_view name) {
  for (auto k : {StatementKind::Definition, StatementKind::Theorem,
                 StatementKind::Example, StatementKind::Paragraph}) {
    if (statement_kind_name(k) == name) return k;
  }
  corrupt("unknown statement kind '" + std::string(name) + "'");
}

ordered_json term_json(const Term& t) {
  ordered_json j;
  j["kind"] = term_kind_name(t.kind);
  if (t.kind != TermKind::Apply) j["value"] = t.value;
  if (t.kind == TermKind::SymbolRef) j["uri"] = t.uri;
  if (t.kind == TermKind::Apply) {
    j["head"] = term_json(t.head());
    auto args = ordered_json::array();
    for (const auto& a : t.args()) args.push_back(term_json(a));
    j["args"] = std::move(args);
  }
  return j;
}

Term term_parse(const json& j) {
  const auto kind = term_kind_from(j.at("kind").get<std::string>());
  if (kind == TermKind::Apply) {
    std::vector<Term> args;
    for (const auto& a : j.at("args")) args.push_back(term_parse(a));
    return Term::apply(term_parse(j.at("head")), std::move(args));
  }
  Term t;
  t.kind = kind;
  t.value = j.at("value").get<std::string>();
  if (kind == TermKind::SymbolRef) t.uri = j.at("uri").get<std::string>();
  return t;
}

ordered_json statement_json(const Statement& s) {
  ordered_json j;
  j["type"] = "statement";
  j["kind"] = statement_kind_name(s.kind);
  j["for"] = s.for_refs;
  j["for_uris"] = s.for_uris;
  auto content = ordered_json::array();
  for (const auto& item : s.content) {
    ordered_json c;
    if (const auto* t = std::get_if<TextRun>(&item)) {
      c["type"] = "text";
      c["text"] = t->text;
    } else if (const auto* f = std::get_if<Formula>(&item)) {
      c["type"] = "formula";
      c["term"] = term_json(f->term);
    } else if (const auto* r = std::get_if<TermRef>(&item)) {
      c["type"] = "termref";
      c["ref"] = r->reference;
      c["text"] = r->text;
      c["uri"] = r->uri;
    } else if (const auto* d = std::get_if<Definiendum>(&item)) {
      c["type"] = "definiendum";
      c["name"] = d->name;
      c["text"] = d->text;
      c["uri"] = d->uri;
    }
    content.push_back(std::move(c));
  }
  j["content"] = std::move(content);
  return j;
}

Statement statement_parse(const json& j) {
  Statement s;
  s.kind = statement_kind_from(j.at("kind").get<std::string>());
  s.for_refs = j.at("for").get<std::vector<std::string>>();
  s.for_uris = j.at("for_uris").get<std::vector<std::string>>();
  for (const auto& c : j.at("content")) {
    const auto type = c.at("type").get<std::string>();
    if (type == "text") {
      s.content.emplace_back(TextRun{c.at("text").get<std::string>()});
    } else if (type == "formula") {
      s.content.emplace_back(Formula{term_parse(c.at("term")), {}});
    } else if (type == "termref") {
      s.content.emplace_back(TermRef{c.at("ref").get<std::string>(),
                                     c.at("text").get<std::string>(),
                                     c.at("uri").get<std::string>(),
                                     {}});
    } else if (type == "definiendum") {
      s.content.emplace_back(Definiendum{c.at("name").get<std::string>(),
                                         c.at("text").get<std::string>(),
                                         c.at("uri").get<std::string>(),
                                         {}});
    } else {
      corrupt("unknown inline type '" + type + "'");
    }
  }
  return s;
}

ordered_json module_json(const ModuleDecl& m) {
  ordered_json j;
  j["type"] = "module";
  j["name"] = m.name;
  j["uri"] = m.uri;
  auto imports = ordered_json::array();
  for (const auto& i : m.imports) {
    imports.push_back(ordered_json{{"document", i.document},
                                   {"module", i.module},
                                   {"uri", i.uri}});
  }
  j["imports"] = std::move(imports);
  auto symbols = ordered_json::array();
  for (const auto& s : m.symbols) {
    symbols.push_back(
        ordered_json{{"name", s.name}, {"arity", s.arity}, {"uri", s.uri}});
  }
  j["symbols"] = std::move(symbols);
  auto statements = ordered_json::array();
  for (const auto& s : m.statements) statements.push_back(statement_json(s));
  j["statements"] = std::move(statements);
  return j;
}

ModuleDecl module_parse(const json& j) {
  ModuleDecl m;
  m.name = j.at("name").get<std::string>();
  m.uri = j.at("uri").get<std::string>();
  for (const auto& i : j.at("imports")) {
    m.imports.push_back(ImportDecl{i.at("document").get<std::string>(),
                                   i.at("module").get<std::string>(),
                                   i.at("uri").get<std::string>(),
                                   {}});
  }
  for (const auto& s : j.at("symbols")) {
    m.symbols.push_back(SymbolDecl{s.at("name").get<std::string>(),
                                   s.at("arity").get<int>(),
                                   s.at("uri").get<std::string>(),
                                   {}});
  }
  for (const auto& s : j.at("statements")) {
    m.statements.push_back(statement_parse(s));
  }
  return m;
}

ordered_json fragment_json(const Fragment& f) {
  ordered_json j;
  j["id"] = f.id;
  j["kind"] = fragment_kind_name(f.kind);
  j["line"] = f.line;
  j["foldable"] = f.foldable;
  j["label"] = f.label;
  if (f.symbol) j["symbol"] = *f.symbol;
  if (!f.formula.empty()) {
    j["formula"] = f.formula;
    j["termpath"] = format_term_path(f.term_path);
  }
  return j;
}

}  // namespace

json term_to_json(const Term& term) { return json(term_json(term)); }

Term term_from_json(const json& j) {
  try {
    return term_parse(j);
  } catch (const json::exception& e) {
    corrupt(e.what());
  }
}

json document_to_json(const LinkedDocument& doc) {
  return json::parse(serialize_document(doc));
}

std::string serialize_document(const LinkedDocument& doc) {
  ordered_json j;
  j["schema"] = kLinkedDocumentSchema;
  j["path"] = doc.ast.path;
  j["title"] = doc.ast.title;
  j["msc"] = doc.ast.msc;
  auto body = ordered_json::array();
  for (const auto& block : doc.ast.body) {
    if (const auto* m = std::get_if<ModuleDecl>(&block)) {
      body.push_back(module_json(*m));
    } else {
      body.push_back(statement_json(std::get<Statement>(block)));
    }
  }
  j["body"] = std::move(body);
  auto fragments = ordered_json::array();
  for (const auto& [id, f] : doc.fragments) fragments.push_back(fragment_json(f));
  j["fragments"] = std::move(fragments);
  return j.dump() + "\n";
}

LinkedDocument document_from_json(const json& j) {
  LinkedDocument doc;
  try {
    if (j.at("schema").get<std::string>() != kLinkedDocumentSchema) {
      corrupt("unsupported schema");
    }
    doc.ast.path = j.at("path").get<std::string>();
    doc.ast.title = j.at("title").get<std::string>();
    doc.ast.msc = j.at("msc").get<std::vector<std::string>>();
    for (const auto& b : j.at("body")) {
      if (b.at("type").get<std::string>() == "module") {
        doc.ast.body.emplace_back(module_parse(b));
      } else {
        doc.ast.body.emplace_back(statement_parse(b));
      }
    }
    doc = assign_fragment_ids(std::move(doc));
    const auto& stored = j.at("fragments");
    if (stored.size() != doc.fragments.size()) {
      corrupt("fragment map does not match body");
    }
    for (const auto& f : stored) {
      if (doc.find_fragment(f.at("id").get<std::string>()) == nullptr) {
        corrupt("unknown fragment " + f.at("id").get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    corrupt(e.what());
  }
  return doc;
}

LinkedDocument deserialize_document(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    corrupt(e.what());
  }
  return document_from_json(j);
}

}  // namespace planetary::docmodel
