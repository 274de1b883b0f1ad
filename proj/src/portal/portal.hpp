#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "docmodel/document.hpp"
#include "graph/depgraph.hpp"
#include "graph/export.hpp"
#include "json.hpp"
#include "markup/errors.hpp"
#include "markup/parser.hpp"
#include "markup/resolve.hpp"
#include "render/render.hpp"
#include "services/folds.hpp"
#include "services/services.hpp"
#include "services/threads.hpp"
#include "store/store.hpp"
#include "triples/query.hpp"
#include "triples/triple.hpp"

namespace planetary::portal {

struct PortalConfig {
  std::filesystem::path data_dir = "data";
  std::string listen = "127.0.0.1:8080";  // host:port
  std::string write_token;
  std::filesystem::path corpus_root;

  // PORTAL_DATA_DIR, PORTAL_LISTEN, PORTAL_WRITE_TOKEN over the defaults.
  static PortalConfig from_env();
};

struct ListenAddress {
  std::string host;
  int port = 0;
};
// Throws Error{InvalidArgument}.
ListenAddress parse_listen(std::string_view listen);

enum class IngestStatus { Ok, Failed };

// Ok implies no parse errors.
struct IngestReport {
  std::string path;
  std::uint64_t revision = 0;  // committed revision, or the unchanged head
  std::vector<markup::ParseError> errors;
  std::size_t triples_added = 0;
  std::size_t fragments = 0;
  IngestStatus status = IngestStatus::Failed;
};

nlohmann::ordered_json report_to_json(const IngestReport& r);

struct DocumentEntry {
  std::shared_ptr<const docmodel::LinkedDocument> doc;
  std::uint64_t revision = 0;  // revision that last changed the source
  std::vector<triples::Triple> triples;
};

// Immutable view of the corpus at one store revision.
struct Snapshot {
  std::uint64_t revision = 0;
  std::map<std::string, DocumentEntry> documents;  // by document key
  services::Corpus corpus;
  markup::SymbolRegistry registry;
  std::shared_ptr<const triples::TripleGraph> triples;
  std::shared_ptr<const graph::DepGraph> graph;
};

struct Rendered {
  std::string html;
  std::uint64_t revision = 0;  // revision of the document source shown
  std::uint64_t snapshot = 0;  // snapshot the response was computed from
};

struct PrereqView {
  graph::PrereqResult result;
  graph::Labels labels;
};

// Container layer: owns the store, the published snapshot, threads and fold
// sessions. Every semantic answer is computed by the markup, services,
// triples and graph modules.
class Portal {
 public:
  explicit Portal(PortalConfig config, store::StoreOptions options = {});
  Portal(const Portal&) = delete;
  Portal& operator=(const Portal&) = delete;

  // While alive, snapshot() on the constructing thread returns the snapshot
  // current at construction, so one read sees a single revision throughout.
  // Mutations always build on the latest snapshot, pinned or not.
  class ReadPin {
   public:
    explicit ReadPin(const Portal& portal);
    ~ReadPin();
    ReadPin(const ReadPin&) = delete;
    ReadPin& operator=(const ReadPin&) = delete;

   private:
    const Portal* previous_portal_;
    std::shared_ptr<const Snapshot> previous_;
  };

  const PortalConfig& config() const { return config_; }
  std::shared_ptr<const Snapshot> snapshot() const;
  std::uint64_t head() const { return snapshot()->revision; }

  // Throws Error{AuthFailed} when `token` does not match the write token.
  void authorize(std::string_view token) const;

  // All-or-nothing. Throws Error{InvalidPath}; parse and resolution failures
  // are reported with status Failed and leave the portal unchanged.
  IngestReport ingest(const std::string& path, const std::string& text,
                      const std::string& author, const std::string& message);
  // Validates every document against the batch as a whole, then commits all
  // of them in one revision. Nothing is committed unless every report is Ok.
  std::vector<IngestReport> ingest_batch(const std::vector<markup::SourceDocument>& docs,
                                         const std::string& author,
                                         const std::string& message);
  // Every *.stx file below `dir`, repository paths relative to it.
  static std::vector<markup::SourceDocument> read_corpus(const std::filesystem::path& dir);

  // Throws Error{NotFound} or Error{NoSuchRevision}.
  Rendered render(const std::string& path, std::optional<std::uint64_t> rev,
                  const render::FoldState& folds) const;
  render::RenderNode render_tree(const std::string& path, std::optional<std::uint64_t> rev,
                                 const render::FoldState& folds) const;
  std::string source(const std::string& path, std::optional<std::uint64_t> rev) const;
  std::shared_ptr<const docmodel::LinkedDocument> linked(
      const std::string& path, std::optional<std::uint64_t> rev) const;
  // Throws Error{UnknownFragment}.
  std::string render_fragment(const std::string& id, const render::FoldState& folds) const;
  render::GutterData gutter(const std::string& path, const render::FoldState& folds) const;

  services::Definition definition(const std::string& symbol) const;
  std::vector<services::ServiceDescriptor> services_for(const std::string& fragment) const;
  // `kinds` empty follows every edge kind. Throws Error{UnknownNode}.
  PrereqView prerequisites(const std::string& uri,
                           const std::set<graph::EdgeKind>& kinds = {}) const;
  std::vector<triples::Binding> query(const std::string& text) const;
  std::vector<std::pair<std::string, std::string>> msc(const std::string& prefix) const;

  std::vector<store::CommitRecord> history(const std::string& path) const;
  std::string diff(const std::string& path, std::uint64_t r1, std::uint64_t r2) const;

  // Canonical dumps for byte comparison.
  std::string dump_triples() const;
  std::string dump_graph() const;

  services::ThreadStore& threads() { return *threads_; }
  const services::ThreadStore& threads() const { return *threads_; }
  // Thread on a head fragment; the anchor revision is the document's.
  services::DiscussionThread open_thread(const std::string& fragment, const std::string& title,
                                         const std::string& author, const std::string& body);
  std::vector<services::DiscussionThread> threads_for_document(const std::string& path) const;

  render::FoldState set_fold(const std::string& session, const std::string& fragment,
                             bool folded);
  render::FoldState folds(const std::string& session) const;

  store::VersionedStore& store() { return *store_; }

 private:
  struct Prepared {
    std::string path;
    std::string text;
    docmodel::LinkedDocument doc;
  };

  std::shared_ptr<const Snapshot> latest() const;
  void load();
  void publish(std::shared_ptr<const Snapshot> next);
  std::shared_ptr<Snapshot> rebuild(const Snapshot& base,
                                    std::vector<std::pair<std::string, DocumentEntry>> changed) const;
  std::vector<IngestReport> validate(const std::vector<markup::SourceDocument>& docs,
                                     const Snapshot& base,
                                     std::vector<Prepared>& prepared) const;
  std::vector<IngestReport> commit_prepared(std::vector<Prepared> prepared,
                                            std::vector<IngestReport> reports,
                                            const std::string& author,
                                            const std::string& message);
  bool anchor_exists(const std::string& path, std::uint64_t revision,
                     const std::string& fragment) const;

  PortalConfig config_;
  std::unique_ptr<store::VersionedStore> store_;
  std::unique_ptr<services::ThreadStore> threads_;
  services::FoldTable folds_;
  std::mutex write_mutex_;            // serializes ingests
  mutable std::mutex snapshot_mutex_;  // guards current_ only
  std::shared_ptr<const Snapshot> current_;
};

// Normalizes a request path: appends ".stx" when missing.
std::string document_path(std::string_view path);

}  // namespace planetary::portal
