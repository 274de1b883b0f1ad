#include "portal/portal.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "common/error.hpp"
#include "common/text.hpp"
#include "docmodel/fragments.hpp"
#include "docmodel/serialize.hpp"
#include "graph/export.hpp"
#include "render/html.hpp"
#include "store/diff.hpp"
#include "triples/extract.hpp"

namespace planetary::portal {

using docmodel::LinkedDocument;

namespace {

constexpr std::string_view kLinkedKind = "linked";
constexpr std::string_view kExtension = ".stx";

bool is_document_path(std::string_view path) {
  return text::is_valid_repo_path(path) && path.size() > kExtension.size() &&
         path.substr(path.size() - kExtension.size()) == kExtension && path.front() != '_';
}

void require_document_path(std::string_view path) {
  if (!is_document_path(path)) {
    throw Error(ErrorCode::InvalidPath, "invalid document path '" + std::string(path) + "'");
  }
}

}  // namespace

std::string document_path(std::string_view path) {
  std::string out(path);
  if (out.size() < kExtension.size() ||
      out.compare(out.size() - kExtension.size(), kExtension.size(), kExtension) != 0) {
    out += kExtension;
  }
  return out;
}

PortalConfig PortalConfig::from_env() {
  PortalConfig c;
  c.data_dir = store::default_data_dir();
  if (const char* v = std::getenv("PORTAL_LISTEN"); v != nullptr && *v != '\0') c.listen = v;
  if (const char* v = std::getenv("PORTAL_WRITE_TOKEN"); v != nullptr) c.write_token = v;
  return c;
}

ListenAddress parse_listen(std::string_view listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == listen.size()) {
    throw Error(ErrorCode::InvalidArgument, "listen address must be host:port");
  }
  ListenAddress a;
  a.host = std::string(listen.substr(0, colon));
  const auto port = listen.substr(colon + 1);
  int value = 0;
  for (const char c : port) {
    if (c < '0' || c > '9') throw Error(ErrorCode::InvalidArgument, "bad port");
    value = value * 10 + (c - '0');
    if (value > 65535) throw Error(ErrorCode::InvalidArgument, "bad port");
  }
  a.port = value;
  return a;
}

nlohmann::ordered_json report_to_json(const IngestReport& r) {
  nlohmann::ordered_json errors = nlohmann::ordered_json::array();
  for (const auto& e : r.errors) {
    errors.push_back({{"line", e.line},
                      {"column", e.column},
                      {"code", markup::parse_error_code_name(e.code)},
                      {"message", e.message}});
  }
  return {{"path", r.path},
          {"revision", r.revision},
          {"status", r.status == IngestStatus::Ok ? "ok" : "failed"},
          {"parse_errors", std::move(errors)},
          {"triples_added", r.triples_added},
          {"fragments", r.fragments}};
}

Portal::Portal(PortalConfig config, store::StoreOptions options)
    : config_(std::move(config)),
      store_(std::make_unique<store::VersionedStore>(config_.data_dir, std::move(options))) {
  load();
  threads_ = std::make_unique<services::ThreadStore>(
      *store_, [this](const std::string& path, std::uint64_t revision,
                      const std::string& fragment) {
        return anchor_exists(path, revision, fragment);
      });
}

namespace {

struct PinnedSnapshot {
  const Portal* portal = nullptr;
  std::shared_ptr<const Snapshot> snapshot;
};
thread_local PinnedSnapshot pinned;

}  // namespace

Portal::ReadPin::ReadPin(const Portal& portal)
    : previous_portal_(pinned.portal), previous_(std::move(pinned.snapshot)) {
  pinned.snapshot = portal.latest();
  pinned.portal = &portal;
}

Portal::ReadPin::~ReadPin() {
  pinned.portal = previous_portal_;
  pinned.snapshot = std::move(previous_);
}

std::shared_ptr<const Snapshot> Portal::snapshot() const {
  if (pinned.portal == this) return pinned.snapshot;
  return latest();
}

std::shared_ptr<const Snapshot> Portal::latest() const {
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

void Portal::publish(std::shared_ptr<const Snapshot> next) {
  std::lock_guard lock(snapshot_mutex_);
  current_ = std::move(next);
}

void Portal::authorize(std::string_view token) const {
  // An unset secret locks mutations rather than opening them.
  if (token.empty() || token != config_.write_token) throw Error(ErrorCode::AuthFailed, "write token rejected");
}

std::shared_ptr<Snapshot> Portal::rebuild(
    const Snapshot& base, std::vector<std::pair<std::string, DocumentEntry>> changed) const {
  auto next = std::make_shared<Snapshot>();
  next->documents = base.documents;
  next->registry = base.registry;
  for (auto& [key, entry] : changed) {
    next->registry.add_document(entry.doc->ast);
    next->documents[key] = std::move(entry);
  }
  next->revision = store_->head().value;

  std::vector<triples::Triple> all;
  std::vector<const LinkedDocument*> docs;
  for (const auto& [key, entry] : next->documents) {
    next->corpus.documents.emplace(key, entry.doc);
    all.insert(all.end(), entry.triples.begin(), entry.triples.end());
    docs.push_back(entry.doc.get());
  }
  next->triples = std::make_shared<const triples::TripleGraph>(std::move(all));
  next->graph = std::make_shared<const graph::DepGraph>(graph::build_dependency_graph(docs));
  return next;
}

void Portal::load() {
  std::vector<std::pair<std::string, DocumentEntry>> loaded;
  std::vector<std::string> stale;
  for (const auto& path : store_->list()) {
    if (!is_document_path(path)) continue;
    const auto rev = *store_->last_change(path);
    if (const auto bytes = store_->get_derived(kLinkedKind, path, rev)) {
      try {
        auto doc = std::make_shared<const LinkedDocument>(docmodel::deserialize_document(*bytes));
        auto triples = triples::extract_triples(*doc, rev.value);
        auto key = doc->key();
        loaded.emplace_back(std::move(key), DocumentEntry{std::move(doc), rev.value, std::move(triples)});
        continue;
      } catch (const Error&) {
      }
    }
    stale.push_back(path);
  }

  if (!stale.empty()) {
    // Sidecars missing or damaged: relink from source against every document.
    std::map<std::string, docmodel::DocumentAST> asts;
    markup::SymbolRegistry registry;
    for (const auto& path : store_->list()) {
      if (!is_document_path(path)) continue;
      auto parsed = markup::parse_document({path, store_->get(path)});
      if (auto* ast = std::get_if<docmodel::DocumentAST>(&parsed)) {
        registry.add_document(*ast);
        asts.emplace(path, std::move(*ast));
      }
    }
    for (const auto& path : stale) {
      const auto it = asts.find(path);
      if (it == asts.end()) continue;
      auto resolved = markup::resolve_references(it->second, registry);
      auto* doc = std::get_if<LinkedDocument>(&resolved);
      if (doc == nullptr) continue;
      auto linked = std::make_shared<const LinkedDocument>(
          docmodel::assign_fragment_ids(std::move(*doc)));
      const auto rev = *store_->last_change(path);
      store_->put_derived(kLinkedKind, path, rev, docmodel::serialize_document(*linked));
      auto triples = triples::extract_triples(*linked, rev.value);
      auto key = linked->key();
      loaded.emplace_back(std::move(key),
                          DocumentEntry{std::move(linked), rev.value, std::move(triples)});
    }
  }
  current_ = rebuild(Snapshot{}, std::move(loaded));
}

std::vector<IngestReport> Portal::validate(const std::vector<markup::SourceDocument>& docs,
                                           const Snapshot& base,
                                           std::vector<Prepared>& prepared) const {
  std::set<std::string> seen;
  for (const auto& d : docs) {
    require_document_path(d.path);
    if (!seen.insert(d.path).second) {
      throw Error(ErrorCode::InvalidPath, "duplicate path '" + d.path + "' in batch");
    }
  }
  std::vector<IngestReport> reports(docs.size());
  std::vector<std::optional<docmodel::DocumentAST>> asts(docs.size());
  markup::SymbolRegistry registry = base.registry;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    reports[i].path = docs[i].path;
    reports[i].revision = base.revision;
    auto parsed = markup::parse_document(docs[i]);
    if (auto* errors = std::get_if<std::vector<markup::ParseError>>(&parsed)) {
      reports[i].errors = std::move(*errors);
      continue;
    }
    asts[i] = std::move(std::get<docmodel::DocumentAST>(parsed));
    registry.add_document(*asts[i]);
  }
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!asts[i]) continue;
    auto resolved = markup::resolve_references(*asts[i], registry);
    if (auto* errors = std::get_if<std::vector<markup::ParseError>>(&resolved)) {
      reports[i].errors = std::move(*errors);
      continue;
    }
    auto doc = docmodel::assign_fragment_ids(std::move(std::get<LinkedDocument>(resolved)));
    reports[i].fragments = doc.fragments.size();
    prepared.push_back(Prepared{docs[i].path, docs[i].text, std::move(doc)});
  }
  return reports;
}

std::vector<IngestReport> Portal::commit_prepared(std::vector<Prepared> prepared,
                                                  std::vector<IngestReport> reports,
                                                  const std::string& author,
                                                  const std::string& message) {
  if (prepared.size() != reports.size() || prepared.empty()) return reports;
  std::vector<store::Change> changes;
  changes.reserve(prepared.size());
  for (const auto& p : prepared) changes.push_back(store::Change::put(p.path, p.text));
  const auto rev = store_->commit(changes, author, message);

  std::vector<std::pair<std::string, DocumentEntry>> changed;
  std::map<std::string, std::size_t> triple_counts;
  for (auto& p : prepared) {
    store_->put_derived(kLinkedKind, p.path, rev, docmodel::serialize_document(p.doc));
    auto triples = triples::extract_triples(p.doc, rev.value);
    triple_counts[p.path] = triples.size();
    auto doc = std::make_shared<const LinkedDocument>(std::move(p.doc));
    auto key = doc->key();
    changed.emplace_back(std::move(key), DocumentEntry{std::move(doc), rev.value, std::move(triples)});
  }
  publish(rebuild(*latest(), std::move(changed)));
  for (auto& r : reports) {
    r.revision = rev.value;
    r.status = IngestStatus::Ok;
    r.triples_added = triple_counts.at(r.path);
  }
  return reports;
}

IngestReport Portal::ingest(const std::string& path, const std::string& text,
                            const std::string& author, const std::string& message) {
  return ingest_batch({markup::SourceDocument{path, text}}, author, message).front();
}

std::vector<IngestReport> Portal::ingest_batch(const std::vector<markup::SourceDocument>& docs,
                                               const std::string& author,
                                               const std::string& message) {
  if (docs.empty()) throw Error(ErrorCode::EmptyCommit, "nothing to ingest");
  std::lock_guard lock(write_mutex_);
  const auto base = latest();
  std::vector<Prepared> prepared;
  auto reports = validate(docs, *base, prepared);
  return commit_prepared(std::move(prepared), std::move(reports), author, message);
}

std::vector<markup::SourceDocument> Portal::read_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::NotFound, "no such directory " + dir.string());
  }
  std::vector<markup::SourceDocument> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != kExtension) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in && !in.eof()) throw Error(ErrorCode::Io, "cannot read " + entry.path().string());
    out.push_back({fs::relative(entry.path(), dir).generic_string(), buf.str()});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.path < b.path; });
  return out;
}

std::shared_ptr<const LinkedDocument> Portal::linked(const std::string& path,
                                                     std::optional<std::uint64_t> rev) const {
  const auto snap = snapshot();
  if (!rev) {
    const auto it = snap->documents.find(docmodel::document_key(path));
    if (it == snap->documents.end() || it->second.doc->ast.path != path) {
      throw Error(ErrorCode::NotFound, "no document " + path);
    }
    return it->second.doc;
  }
  const auto changed = store_->last_change(path, store::Revision{*rev});
  if (!changed || !is_document_path(path)) {
    throw Error(ErrorCode::NotFound, "no document " + path + " at revision " + std::to_string(*rev));
  }
  if (const auto bytes = store_->get_derived(kLinkedKind, path, *changed)) {
    return std::make_shared<const LinkedDocument>(docmodel::deserialize_document(*bytes));
  }
  auto parsed = markup::parse_document({path, store_->get(path, changed)});
  auto* ast = std::get_if<docmodel::DocumentAST>(&parsed);
  if (ast == nullptr) throw Error(ErrorCode::Corrupt, "stored source of " + path + " does not parse");
  auto resolved = markup::resolve_references(*ast, snap->registry);
  auto* doc = std::get_if<LinkedDocument>(&resolved);
  if (doc == nullptr) throw Error(ErrorCode::Corrupt, "stored source of " + path + " does not link");
  return std::make_shared<const LinkedDocument>(docmodel::assign_fragment_ids(std::move(*doc)));
}

render::RenderNode Portal::render_tree(const std::string& path, std::optional<std::uint64_t> rev,
                                       const render::FoldState& folds) const {
  return render::render_document(*linked(path, rev), folds);
}

Rendered Portal::render(const std::string& path, std::optional<std::uint64_t> rev,
                        const render::FoldState& folds) const {
  const auto snap = snapshot();
  std::uint64_t shown = 0;
  std::shared_ptr<const LinkedDocument> doc;
  if (rev) {
    doc = linked(path, rev);
    shown = store_->last_change(path, store::Revision{*rev})->value;
  } else {
    const auto it = snap->documents.find(docmodel::document_key(path));
    if (it == snap->documents.end() || it->second.doc->ast.path != path) {
      throw Error(ErrorCode::NotFound, "no document " + path);
    }
    doc = it->second.doc;
    shown = it->second.revision;
  }
  return Rendered{render::to_html(render::render_document(*doc, folds)), shown, snap->revision};
}

std::string Portal::source(const std::string& path, std::optional<std::uint64_t> rev) const {
  if (!is_document_path(path)) throw Error(ErrorCode::NotFound, "no document " + path);
  if (rev) return store_->get(path, store::Revision{*rev});
  const auto snap = snapshot();
  // Reads stay on the published snapshot even while an ingest commits.
  const auto it = snap->documents.find(docmodel::document_key(path));
  if (it == snap->documents.end()) throw Error(ErrorCode::NotFound, "no document " + path);
  return store_->get(path, store::Revision{it->second.revision});
}

std::string Portal::render_fragment(const std::string& id, const render::FoldState& folds) const {
  const auto snap = snapshot();
  const auto& doc = snap->corpus.document_of_fragment(id);
  const auto tree = render::render_document(doc, folds);
  const auto* node = render::find_fragment_node(tree, id);
  if (node == nullptr) {
    // Hidden inside a folded ancestor.
    const auto full = render::render_document(doc, {});
    node = render::find_fragment_node(full, id);
    if (node == nullptr) throw Error(ErrorCode::UnknownFragment, "unknown fragment " + id);
    return render::to_html(render::apply_folds(*node, folds));
  }
  return render::to_html(*node);
}

render::GutterData Portal::gutter(const std::string& path, const render::FoldState& folds) const {
  const auto doc = linked(path, std::nullopt);
  std::vector<render::ThreadAnchor> anchors;
  for (const auto& t : threads_->by_document(path)) {
    anchors.push_back({t.anchor.fragment, t.id});
  }
  return render::gutter_data(*doc, render::render_document(*doc, folds), anchors);
}

services::Definition Portal::definition(const std::string& symbol) const {
  return services::definition_lookup(snapshot()->corpus, symbol);
}

std::vector<services::ServiceDescriptor> Portal::services_for(const std::string& fragment) const {
  return services::available_services(snapshot()->corpus, fragment);
}

PrereqView Portal::prerequisites(const std::string& uri,
                                 const std::set<graph::EdgeKind>& kinds) const {
  const auto snap = snapshot();
  PrereqView view{graph::prerequisites(*snap->graph, uri, kinds), {}};
  auto label = [&](const std::string& iri) {
    if (const auto parts = docmodel::parse_uri(iri); parts && parts->module.empty()) {
      if (const auto* doc = snap->corpus.find_document(parts->document);
          doc != nullptr && !doc->ast.title.empty()) {
        return doc->ast.title;
      }
    }
    return graph::default_label(iri);
  };
  view.labels.emplace(uri, label(uri));
  for (const auto& p : view.result.prerequisites) view.labels.emplace(p, label(p));
  return view;
}

std::vector<triples::Binding> Portal::query(const std::string& text) const {
  const auto q = triples::parse_query(text);
  return triples::query(*snapshot()->triples, q);
}

std::vector<std::pair<std::string, std::string>> Portal::msc(const std::string& prefix) const {
  return triples::msc_browse(*snapshot()->triples, prefix);
}

std::vector<store::CommitRecord> Portal::history(const std::string& path) const {
  if (!is_document_path(path)) throw Error(ErrorCode::NotFound, "no document " + path);
  auto h = store_->history(path);
  if (h.empty()) throw Error(ErrorCode::NotFound, "no document " + path);
  return h;
}

std::string Portal::diff(const std::string& path, std::uint64_t r1, std::uint64_t r2) const {
  if (!is_document_path(path)) throw Error(ErrorCode::NotFound, "no document " + path);
  return store::format_unified(store_->diff(path, store::Revision{r1}, store::Revision{r2}));
}

std::string Portal::dump_triples() const { return snapshot()->triples->dump(); }

std::string Portal::dump_graph() const { return graph::dump_graph(*snapshot()->graph); }

bool Portal::anchor_exists(const std::string& path, std::uint64_t revision,
                           const std::string& fragment) const {
  try {
    return linked(path, revision)->find_fragment(fragment) != nullptr;
  } catch (const Error&) {
    return false;
  }
}

services::DiscussionThread Portal::open_thread(const std::string& fragment,
                                               const std::string& title,
                                               const std::string& author,
                                               const std::string& body) {
  const auto snap = snapshot();
  const auto& doc = snap->corpus.document_of_fragment(fragment);
  const auto& entry = snap->documents.at(doc.key());
  return threads_->create_thread({doc.ast.path, entry.revision, fragment}, title, author, body);
}

std::vector<services::DiscussionThread> Portal::threads_for_document(
    const std::string& path) const {
  return threads_->by_document(path);
}

render::FoldState Portal::set_fold(const std::string& session, const std::string& fragment,
                                   bool folded) {
  return folds_.set_fold(snapshot()->corpus, session, fragment, folded);
}

render::FoldState Portal::folds(const std::string& session) const {
  return folds_.get_folds(session);
}

}  // namespace planetary::portal
