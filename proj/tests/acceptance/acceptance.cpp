// Prints one PASS/FAIL line per acceptance criterion; exits 1 on any FAIL.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "common/error.hpp"
#include "graph/depgraph.hpp"
#include "httplib.h"
#include "json.hpp"
#include "markup/parser.hpp"
#include "markup/printer.hpp"
#include "portal/portal.hpp"
#include "portal/server.hpp"
#include "render/render.hpp"
#include "services/folds.hpp"
#include "services/services.hpp"
#include "store/store.hpp"
#include "support/graph_oracle.hpp"
#include "support/query_oracle.hpp"
#include "support/store_replay.hpp"
#include "support/test_support.hpp"
#include "triples/query.hpp"

using namespace planetary;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

store::StoreOptions fast() {
  store::StoreOptions o;
  o.sync = false;
  return o;
}

void round_trip(Verdict& v) {
  const auto start = Clock::now();
  const auto sources = testing::corpus_sources();
  std::size_t failures = 0;
  for (const auto& src : sources) {
    const auto ast = testing::parse_or_throw(src);
    const auto again = markup::parse_document({src.path, markup::print_document(ast)});
    if (!markup::parse_ok(again) || std::get<docmodel::DocumentAST>(again) != ast) {
      ++failures;
      v.require(false, src.path);
    }
  }
  const double t = seconds_since(start);
  v.require(sources.size() >= 20, "fewer than 20 fixtures");
  v.require(t < 5.0, "runtime");
  v.detail << sources.size() << " documents, " << failures << " failures, " << t << " s";
}

void lookup_totality(Verdict& v) {
  services::Corpus corpus;
  for (auto& [path, doc] : testing::linked_corpus()) {
    auto key = doc.key();
    corpus.documents.emplace(key, std::make_shared<const docmodel::LinkedDocument>(std::move(doc)));
  }
  std::size_t total = 0;
  std::size_t found = 0;
  for (const auto& [key, doc] : corpus.documents) {
    render::for_each_element(render::render_document(*doc, {}), [&](const render::RenderNode& e) {
      const auto* sym = e.attr(render::kAttrSymbol);
      if (sym == nullptr) return;
      ++total;
      try {
        const auto d = services::definition_lookup(corpus, *sym);
        if (d.symbol == *sym && corpus.fragment(d.fragment).label == "definition") ++found;
        else v.require(false, *sym);
      } catch (const Error& e) {
        v.require(false, *sym + ": " + e.what());
      }
    });
  }
  v.require(total > 0, "no data-symbol attributes");
  v.require(found == total, "lookups failed");
  v.detail << found << "/" << total << " lookups";
}

void closure_oracle(Verdict& v) {
  const auto start = Clock::now();
  testing::Rng rng(0xacce0001);
  std::size_t closures = 0;
  for (int i = 0; i < 200; ++i) {
    const auto g = testing::random_digraph(rng, 25, 0.15);
    for (const auto& root : g.nodes) {
      const auto r = graph::prerequisites(g, root);
      std::set<std::string> got(r.prerequisites.begin(), r.prerequisites.end());
      std::set<std::string> want;
      for (const auto& [n, d] : testing::bfs_reach(g, root, {})) want.insert(n);
      v.require(got.size() == r.prerequisites.size() && got == want, "graph " + std::to_string(i) + " root " + root);
      ++closures;
    }
  }
  const double t = seconds_since(start);
  v.require(t < 10.0, "runtime");
  v.detail << "200 graphs, " << closures << " closures, " << t << " s";
}

void query_oracle(Verdict& v) {
  const auto start = Clock::now();
  testing::Rng rng(0xacce0002);
  std::size_t queries = 0;
  for (int i = 0; i < 100; ++i) {
    const triples::TripleGraph g(testing::random_triples(rng, 200));
    const testing::EnumerationOracle oracle(g.triples());
    for (int k = 0; k < 10; ++k) {
      const auto q = testing::random_query(rng, k % 2 == 1);
      const auto rows = triples::query(g, q);
      const auto got = testing::rows_of(q, rows);
      v.require(got.size() == rows.size() && got == oracle.answer(q), "graph " + std::to_string(i));
      ++queries;
    }
  }
  const double t = seconds_since(start);
  v.require(t < 30.0, "runtime");
  v.detail << "100 graphs, " << queries << " queries, " << t << " s";
}

void store_replay(Verdict& v) {
  testing::TempDir dir;
  {
    store::VersionedStore s(dir.path(), fast());
    const auto outcome = testing::replay_store(s, 0xacce0003, 1000);
    v.require(outcome.ok(), outcome.failures.empty() ? "replay" : outcome.failures.front());
    v.detail << outcome.operations << " operations, " << outcome.commits << " commits; ";
  }
  for (const char* point : {"after-blobs", "before-log-append", "mid-log-append", "after-log-append",
                            "after-index-update"}) {
    testing::TempDir crash_dir;
    const auto r = testing::crash_at(crash_dir.path(), point, 5);
    v.require(r.child_crashed && r.committed_intact && r.next_commit_ok && r.head_after >= 5,
              std::string("crash at ") + point);
  }
  v.detail << "5 crash points recovered";
}

void fold_involution(Verdict& v) {
  const auto linked = testing::linked_corpus();
  services::Corpus corpus;
  std::vector<const docmodel::LinkedDocument*> docs;
  for (const auto& [path, doc] : linked) {
    auto shared = std::make_shared<const docmodel::LinkedDocument>(doc);
    docs.push_back(shared.get());
    corpus.documents.emplace(doc.key(), std::move(shared));
  }
  testing::Rng rng(0xacce0004);
  services::FoldTable table;
  for (int i = 0; i < 100; ++i) {
    const auto& doc = *docs[testing::uniform(rng, 0, docs.size() - 1)];
    std::vector<std::string> ids;
    for (const auto& [id, f] : doc.fragments) ids.push_back(id);
    render::FoldState folds;
    for (std::size_t k = 0, n = testing::uniform(rng, 1, 6); k < n; ++k) {
      folds.insert(ids[testing::uniform(rng, 0, ids.size() - 1)]);
    }
    const auto session = "s" + std::to_string(i);
    for (const auto& id : folds) table.set_fold(corpus, session, id, true);
    const auto plain = render::render_document(doc, {});
    const auto folded = render::render_document(doc, table.get_folds(session));
    v.require(render::apply_folds(plain, folds) == folded, "apply_folds disagrees with render");
    v.require(render::apply_folds(folded, folds) == folded, "fold not idempotent");

    // Locality: nodes outside folded subtrees are untouched. Only foldable
    // fragments collapse.
    render::FoldState effective;
    for (const auto& id : folds) {
      if (doc.find_fragment(id)->foldable) effective.insert(id);
    }
    std::function<bool(const render::RenderNode&, const render::RenderNode&)> local =
        [&](const render::RenderNode& a, const render::RenderNode& b) {
          if (a.is_text()) return a == b;
          if (a.tag != b.tag) return false;
          const auto* id = a.attr(render::kAttrFragment);
          if (id != nullptr && effective.count(*id)) {
            return b.children.size() == 1 && b.children[0].text == render::kEllipsis &&
                   b.attr(render::kAttrFolded) != nullptr;
          }
          if (a.attrs != b.attrs || a.children.size() != b.children.size()) return false;
          for (std::size_t c = 0; c < a.children.size(); ++c) {
            if (!local(a.children[c], b.children[c])) return false;
          }
          return true;
        };
    v.require(local(plain, folded), "change outside a folded subtree");

    for (const auto& id : folds) table.set_fold(corpus, session, id, false);
    v.require(table.get_folds(session).empty(), "unfold left state behind");
    v.require(render::render_document(doc, table.get_folds(session)) == plain, "unfold is not the identity");
  }
  v.detail << "100 fold sets";
}

struct Fingerprint {
  std::uint64_t head;
  std::uint64_t store_head;
  std::string triples;
  std::string graph;
  bool operator==(const Fingerprint&) const = default;
};

Fingerprint fingerprint(portal::Portal& p) {
  return {p.head(), p.store().head().value, p.dump_triples(), p.dump_graph()};
}

void ingest_atomicity(Verdict& v) {
  testing::TempDir dir;
  portal::PortalConfig c;
  c.data_dir = dir.path();
  c.write_token = "t";
  portal::Portal p(c, fast());
  auto sources = portal::Portal::read_corpus(testing::corpus_dir());
  const auto baseline = p.ingest_batch(sources, "a", "corpus");
  bool baseline_ok = true;
  for (const auto& r : baseline) baseline_ok = baseline_ok && r.status == portal::IngestStatus::Ok;
  v.require(baseline_ok, "baseline corpus rejected");
  const auto before = fingerprint(p);
  v.require(before.head == 1 && !before.triples.empty() && !before.graph.empty(), "empty baseline");
  // Every document changes; one in the middle stops parsing.
  for (auto& src : sources) src.text += "\nA closing remark.\n";
  sources[sources.size() / 2].text += "\\begin{smodule}{dangling}\n";
  const auto reports = p.ingest_batch(sources, "a", "edit");
  bool all_failed = !reports.empty();
  for (const auto& r : reports) all_failed = all_failed && r.status == portal::IngestStatus::Failed;
  const auto after = fingerprint(p);
  v.require(all_failed, "some report succeeded");
  v.require(after.head == before.head && after.store_head == before.store_head, "head moved");
  v.require(after.triples == before.triples, "triple dump differs");
  v.require(after.graph == before.graph, "graph dump differs");
  v.detail << "head " << after.head << ", " << after.triples.size() << " triple bytes, " << after.graph.size()
           << " graph bytes unchanged";
}

// Document i imports up to two earlier documents and defines four symbols.
std::string generated_document(testing::Rng& rng, int i) {
  char key[16];
  std::snprintf(key, sizeof key, "g%04d", i);
  std::string k(key);
  std::ostringstream s;
  s << "\\title{Generated " << i << "}\n\\msc{" << (10 + i % 80) << "A" << (10 + i % 90) << "}\n\n";
  s << "Preliminary remarks for document " << i << " with enough prose to resemble a real entry.\n\n";
  s << "\\begin{smodule}{" << k << "}\n";
  std::vector<std::string> imported;
  if (i > 0) {
    for (int n = 0; n < 2; ++n) {
      char other[16];
      std::snprintf(other, sizeof other, "g%04d", static_cast<int>(testing::uniform(rng, 0, i - 1)));
      if (std::find(imported.begin(), imported.end(), other) != imported.end()) continue;
      imported.push_back(other);
      s << "\\importmodule{gen/" << other << "?" << other << "}\n";
    }
  }
  const std::vector<std::string> syms{k + "a", k + "b", k + "c", k + "d"};
  for (const auto& sym : syms) s << "\\symdef{" << sym << "}[args=2]\n";
  s << "\n";
  for (std::size_t n = 0; n < syms.size(); ++n) {
    const auto& sym = syms[n];
    const std::string used = imported.empty() ? syms[(n + 1) % syms.size()] : imported[n % imported.size()] + "a";
    s << "\\begin{definition}[for=" << sym << "]\n"
      << "The operation \\definiendum{" << sym << "}{" << sym << "} combines two elements so that\n"
      << "$\\apply{" << sym << "}{x, \\apply{" << used << "}{y, z}}$ agrees with\n"
      << "$\\apply{" << used << "}{\\apply{" << sym << "}{x, y}, z}$ for all admissible arguments.\n"
      << "It refines the notion of \\termref{" << used << "}{" << used << "} introduced earlier,\n"
      << "and the discussion below relies on this property throughout the entry.\n"
      << "\\end{definition}\n\n";
  }
  s << "\\begin{theorem}\n"
    << "For every $x$ the value $\\apply{" << syms[0] << "}{x, x}$ is determined by $\\apply{" << syms[1]
    << "}{x, x}$.\n\\end{theorem}\n";
  s << "\\end{smodule}\n";
  return s.str();
}

double median_ms(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  return xs.empty() ? 0 : xs[xs.size() / 2];
}

void end_to_end(Verdict& v) {
  testing::Rng rng(0xacce0005);
  std::vector<markup::SourceDocument> docs;
  std::size_t bytes = 0;
  for (int i = 0; i < 1000; ++i) {
    char path[32];
    std::snprintf(path, sizeof path, "gen/g%04d.stx", i);
    docs.push_back({path, generated_document(rng, i)});
    bytes += docs.back().text.size();
  }
  testing::TempDir dir;
  portal::PortalConfig c;
  c.data_dir = dir.path();
  c.write_token = "t";
  portal::Portal p(c);
  const auto start = Clock::now();
  const auto reports = p.ingest_batch(docs, "gen", "generated corpus");
  const double ingest = seconds_since(start);
  std::size_t ok = 0;
  std::string first_error;
  for (const auto& r : reports) {
    ok += r.status == portal::IngestStatus::Ok;
    if (first_error.empty() && !r.errors.empty()) first_error = r.path + ": " + r.errors[0].message;
  }
  v.require(ok == docs.size(), "generated documents rejected: " + first_error);
  v.require(ingest < 60.0, "ingest time");

  portal::Server server(p);
  const int port = server.bind("127.0.0.1", 0);
  std::thread serving([&] { server.run(); });
  httplib::Client client("127.0.0.1", port);
  client.set_keep_alive(true);
  client.set_tcp_nodelay(true);
  client.set_read_timeout(30, 0);

  auto timed = [&](auto&& call) {
    const auto t0 = Clock::now();
    const auto r = call();
    const double ms = seconds_since(t0) * 1000;
    v.require(r && r->status == 200, "request failed");
    return ms;
  };
  std::vector<double> doc_ms, prereq_ms, query_ms;
  for (int i = 0; i < 50; ++i) {
    const int n = testing::uniform(rng, 0, 999);
    char key[16];
    std::snprintf(key, sizeof key, "g%04d", n);
    const std::string k(key);
    doc_ms.push_back(timed([&] { return client.Get("/doc/gen/" + k + ".stx"); }));
    prereq_ms.push_back(timed([&] {
      return client.Get("/prereq?format=svg&uri=" + httplib::detail::encode_query_param("//gen/" + k + "#" + k + "/" + k + "a"));
    }));
    query_ms.push_back(timed([&] {
      return client.Post("/query", "SELECT ?s WHERE { <//gen/" + k + "> plnt:definesSymbol ?s }", "text/plain");
    }));
  }
  // The timed responses carry real content.
  const auto doc = client.Get("/doc/gen/g0999.stx");
  v.require(doc && doc->body.find("data-symbol=\"//gen/g0999#g0999/g0999a\"") != std::string::npos,
            "document not annotated");
  const auto svg = client.Get("/prereq?format=json&uri=" + httplib::detail::encode_query_param("//gen/g0999#g0999/g0999a"));
  const auto closure = svg ? nlohmann::json::parse(svg->body)["prerequisites"].size() : 0;
  v.require(closure > 1, "trivial prerequisite closure");
  const auto rows = client.Post("/query", "SELECT ?s WHERE { <//gen/g0999> plnt:definesSymbol ?s }", "text/plain");
  v.require(rows && nlohmann::json::parse(rows->body)["bindings"].size() == 4, "query bindings");
  server.stop();
  serving.join();
  const double d = median_ms(doc_ms), pr = median_ms(prereq_ms), q = median_ms(query_ms);
  v.require(d < 100 && pr < 100 && q < 100, "median latency");
  v.detail << docs.size() << " documents (" << bytes / docs.size() << " B avg), ingest " << ingest
           << " s; sample closure " << closure << " nodes; median /doc " << d << " ms, /prereq " << pr << " ms, /query " << q << " ms";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"parser round trip", round_trip},
      {"definition lookup totality", lookup_totality},
      {"closure oracle", closure_oracle},
      {"query engine oracle", query_oracle},
      {"versioned store replay and crash recovery", store_replay},
      {"fold involution and locality", fold_involution},
      {"ingest atomicity", ingest_atomicity},
      {"end-to-end smoke", end_to_end},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    failed += !v.ok;
    std::cout << (v.ok ? "PASS " : "FAIL ") << name << ": " << v.detail.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
