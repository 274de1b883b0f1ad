#include "triples/extract.hpp"

#include <algorithm>
#include <set>

#include "common/error.hpp"
#include "common/text.hpp"

namespace planetary::triples {

using namespace docmodel;

namespace {

void collect_term_uses(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::SymbolRef && !t.uri.empty()) out.insert(t.uri);
  for (const auto& c : t.children) collect_term_uses(c, out);
}

void collect_statement(const Statement& s, std::set<std::string>& defines,
                       std::set<std::string>& uses) {
  if (s.kind == StatementKind::Definition) {
    for (const auto& u : s.for_uris) {
      if (!u.empty()) defines.insert(u);
    }
  }
  for (const auto& item : s.content) {
    if (const auto* r = std::get_if<TermRef>(&item)) {
      if (!r->uri.empty()) uses.insert(r->uri);
    } else if (const auto* f = std::get_if<Formula>(&item)) {
      collect_term_uses(f->term, uses);
    }
  }
}

}  // namespace

std::vector<Triple> extract_triples(const LinkedDocument& doc,
                                    std::uint64_t revision) {
  const auto key = doc.key();
  const auto subject = Node::iri(document_uri(key));
  std::vector<Triple> out;
  auto emit = [&](std::string_view predicate, Node object) {
    out.push_back(Triple{subject, Node::iri(std::string(predicate)), std::move(object)});
  };

  if (!doc.ast.title.empty()) emit(vocab::kHasTitle, Node::lit(doc.ast.title));
  for (const auto& code : doc.ast.msc) emit(vocab::kHasMSC, Node::iri(vocab::msc_iri(code)));

  std::set<std::string> defines;
  std::set<std::string> uses;
  std::set<std::string> depends;
  for (const auto& block : doc.ast.body) {
    if (const auto* m = std::get_if<ModuleDecl>(&block)) {
      for (const auto& s : m->symbols) emit(vocab::kDeclaresSymbol, Node::iri(s.uri));
      for (const auto& i : m->imports) {
        if (i.uri.empty()) continue;
        emit(vocab::kImports, Node::iri(i.uri));
        if (const auto parts = parse_uri(i.uri); parts && parts->document != key) {
          depends.insert(document_uri(parts->document));
        }
      }
      for (const auto& s : m->statements) collect_statement(s, defines, uses);
    } else {
      collect_statement(std::get<Statement>(block), defines, uses);
    }
  }
  for (const auto& d : defines) emit(vocab::kDefinesSymbol, Node::iri(d));
  for (const auto& u : uses) {
    emit(vocab::kUsesSymbol, Node::iri(u));
    if (const auto parts = parse_uri(u); parts && parts->document != key) {
      depends.insert(document_uri(parts->document));
    }
  }
  for (const auto& d : depends) emit(vocab::kDependsOn, Node::iri(d));
  emit(vocab::kAtRevision, Node::lit(std::to_string(revision)));

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::pair<std::string, std::string>> msc_browse(
    const TripleGraph& graph, std::string_view code_prefix) {
  if (code_prefix.empty()) {
    throw Error(ErrorCode::InvalidArgument, "classification prefix is empty");
  }
  const auto has_msc = graph.find(Node::iri(std::string(vocab::kHasMSC)));
  const auto has_title = graph.find(Node::iri(std::string(vocab::kHasTitle)));
  if (!has_msc) return {};
  const auto wanted = vocab::msc_iri(code_prefix);

  std::set<TripleGraph::Id> docs;
  for (const auto idx : graph.by_predicate(*has_msc)) {
    const auto& t = graph.id_triples()[idx];
    const auto& object = graph.node(t.o);
    if (!object.literal && text::starts_with(object.value, wanted)) docs.insert(t.s);
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto doc : docs) {
    std::string title;
    if (has_title) {
      for (const auto idx : graph.by_subject(doc)) {
        const auto& t = graph.id_triples()[idx];
        if (t.p == *has_title) {
          title = graph.node(t.o).value;
          break;
        }
      }
    }
    out.emplace_back(graph.node(doc).value, std::move(title));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second, a.first) < std::tie(b.second, b.first);
  });
  return out;
}

}  // namespace planetary::triples
