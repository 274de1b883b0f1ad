#include <regex>
#include <set>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "doctest.h"
#include "graph/depgraph.hpp"
#include "graph/export.hpp"
#include "support/corpus_oracle.hpp"
#include "support/graph_oracle.hpp"
#include "support/test_support.hpp"

using namespace planetary;
using graph::DepGraph;
using graph::EdgeKind;

namespace {

DepGraph chain() {
  DepGraph g;
  g.add_edge("A", "B", EdgeKind::Uses);
  g.add_edge("B", "C", EdgeKind::Imports);
  return g;
}

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

DepGraph corpus_graph() {
  static auto corpus = testing::linked_corpus();
  std::vector<const docmodel::LinkedDocument*> docs;
  for (const auto& [path, doc] : corpus) docs.push_back(&doc);
  return graph::build_dependency_graph(docs);
}

void check_closure(const DepGraph& g, const std::string& root, const std::set<EdgeKind>& kinds = {}) {
  auto r = graph::prerequisites(g, root, kinds);
  auto want = testing::bfs_reach(g, root, kinds);
  std::set<std::string> got(r.prerequisites.begin(), r.prerequisites.end());
  CHECK(got.size() == r.prerequisites.size());
  std::set<std::string> expected;
  for (const auto& [n, d] : want) expected.insert(n);
  REQUIRE(got == expected);
  REQUIRE(r.layers.size() == r.prerequisites.size());
  for (std::size_t i = 0; i < r.prerequisites.size(); ++i) {
    const auto& n = r.prerequisites[i];
    if (n != root) CHECK(r.layers[i] == want.at(n));
    if (i > 0) {
      CHECK(r.layers[i - 1] <= r.layers[i]);
      if (r.layers[i - 1] == r.layers[i]) CHECK(r.prerequisites[i - 1] < n);
    }
  }
  for (const auto& e : r.edges) {
    CHECK((e.from == root || got.count(e.from)));
    CHECK((e.to == root || got.count(e.to)));
    CHECK(g.edges.count(e));
  }
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("empty corpus") {
  auto g = graph::build_dependency_graph({});
  CHECK(g.nodes.empty());
  CHECK(g.edges.empty());
}

TEST_CASE("one document defining one symbol") {
  auto doc = testing::link_one("d.stx", "\\begin{smodule}{m}\\symdef{a}\\end{smodule}");
  auto g = graph::build_dependency_graph({&doc});
  std::set<graph::Edge> doc_edges;
  for (const auto& e : g.edges) {
    if (e.from == "//d") doc_edges.insert(e);
  }
  REQUIRE(doc_edges.size() == 1);
  CHECK(doc_edges.begin()->to == "//d#m/a");
  CHECK(doc_edges.begin()->kind == EdgeKind::Defines);
  CHECK(g.nodes.count("//d"));
  CHECK(g.nodes.count("//d#m/a"));
}

TEST_CASE("fixture graph counts") {
  auto g = corpus_graph();
  CHECK(g.nodes.size() == oracle::kGraphNodes);
  CHECK(g.edges.size() == oracle::kGraphEdges);
  std::size_t imports = 0, uses = 0, defines = 0;
  for (const auto& e : g.edges) {
    CHECK(g.nodes.count(e.from));
    CHECK(g.nodes.count(e.to));
    if (e.kind == EdgeKind::Imports) {
      ++imports;
      CHECK(e.from != e.to);
    }
    uses += e.kind == EdgeKind::Uses;
    defines += e.kind == EdgeKind::Defines;
  }
  CHECK(imports == oracle::kGraphImportsEdges);
  CHECK(uses == oracle::kGraphUsesEdges);
  CHECK(defines == oracle::kGraphDefinesEdges);
}

TEST_CASE("chain closure") {
  auto r = graph::prerequisites(chain(), "A");
  CHECK(r.prerequisites == std::vector<std::string>{"B", "C"});
  CHECK(r.layers == std::vector<std::size_t>{1, 2});
  CHECK(r.edges.size() == 2);
  CHECK(graph::prerequisites(chain(), "C").prerequisites.empty());
}

TEST_CASE("isolated node and unknown root") {
  DepGraph g;
  g.nodes.insert("X");
  CHECK(graph::prerequisites(g, "X").prerequisites.empty());
  try {
    graph::prerequisites(g, "Y");
    FAIL("expected UnknownNode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownNode);
  }
}

TEST_CASE("root on a cycle is its own prerequisite") {
  DepGraph g;
  g.add_edge("A", "B", EdgeKind::Uses);
  g.add_edge("B", "A", EdgeKind::Uses);
  auto r = graph::prerequisites(g, "A");
  CHECK(r.prerequisites == std::vector<std::string>{"B", "A"});
}

TEST_CASE("kind filter") {
  auto g = chain();
  CHECK(graph::prerequisites(g, "A", {EdgeKind::Imports}).prerequisites.empty());
  CHECK(graph::prerequisites(g, "A", {EdgeKind::Uses}).prerequisites == std::vector<std::string>{"B"});
}

TEST_CASE("imports self-loops are dropped") {
  DepGraph g;
  g.add_edge("A", "A", EdgeKind::Imports);
  CHECK(g.edges.empty());
  CHECK(g.nodes.count("A"));
}

TEST_CASE("closure matches the BFS oracle on random digraphs") {
  testing::Rng rng(0x6a0f0001);
  for (int i = 0; i < 200; ++i) {
    auto g = testing::random_digraph(rng, 25, 0.15);
    for (const auto& n : g.nodes) check_closure(g, n);
    std::set<EdgeKind> kinds{static_cast<EdgeKind>(testing::uniform(rng, 0, 2))};
    check_closure(g, *g.nodes.begin(), kinds);
  }
}

TEST_CASE("closure over the fixture graph") {
  auto g = corpus_graph();
  for (const auto& n : g.nodes) check_closure(g, n);
}

TEST_CASE("closure idempotence") {
  testing::Rng rng(0x6a0f0002);
  for (int i = 0; i < 100; ++i) {
    auto g = testing::random_digraph(rng, 25, 0.15);
    const auto& root = *std::next(g.nodes.begin(), testing::uniform(rng, 0, g.nodes.size() - 1));
    auto r = graph::prerequisites(g, root);
    std::set<std::string> closure(r.prerequisites.begin(), r.prerequisites.end());
    closure.insert(root);
    for (const auto& n : r.prerequisites) {
      for (const auto& m : graph::prerequisites(g, n).prerequisites) CHECK(closure.count(m));
    }
  }
}

TEST_CASE("adding an edge never shrinks a closure") {
  testing::Rng rng(0x6a0f0003);
  for (int i = 0; i < 100; ++i) {
    auto g = testing::random_digraph(rng, 25, 0.15);
    auto bigger = g;
    std::vector<std::string> nodes(g.nodes.begin(), g.nodes.end());
    bigger.add_edge(nodes[testing::uniform(rng, 0, nodes.size() - 1)],
                    nodes[testing::uniform(rng, 0, nodes.size() - 1)], EdgeKind::Uses);
    for (const auto& n : nodes) {
      auto a = graph::prerequisites(g, n).prerequisites;
      auto b = graph::prerequisites(bigger, n).prerequisites;
      std::set<std::string> sb(b.begin(), b.end());
      for (const auto& x : a) CHECK(sb.count(x));
    }
  }
}

TEST_CASE("cycle detection") {
  CHECK(graph::detect_cycles(chain()).empty());
  DepGraph g;
  g.add_edge("A", "B", EdgeKind::Uses);
  g.add_edge("B", "A", EdgeKind::Uses);
  CHECK(graph::detect_cycles(g) == std::vector<std::vector<std::string>>{{"A", "B"}});
  g.add_edge("C", "C", EdgeKind::Uses);
  CHECK(graph::detect_cycles(g) == std::vector<std::vector<std::string>>{{"A", "B"}, {"C"}});
}

TEST_CASE("cycles match pairwise reachability") {
  testing::Rng rng(0x6a0f0004);
  for (int i = 0; i < 200; ++i) {
    auto g = testing::random_digraph(rng, 25, 0.15);
    CHECK(graph::detect_cycles(g) == testing::brute_force_cycles(g));
  }
}

TEST_CASE("svg of a single node") {
  DepGraph g;
  g.nodes.insert("//d#m/a");
  auto svg = graph::export_svg(graph::prerequisites(g, "//d#m/a"), {{"//d#m/a", "a"}});
  CHECK(count_of(svg, "data-uri=") == 1);
  CHECK(count_of(svg, "<line") == 0);
}

TEST_CASE("svg of a chain has three layers") {
  auto svg = graph::export_svg(graph::prerequisites(chain(), "A"), {});
  CHECK(count_of(svg, "data-uri=") == 3);
  CHECK(count_of(svg, "<line") == 2);
  std::regex rect("data-uri=\"([A-C])\"[^>]*><title>[^<]*</title><rect x=\"\\d+\" y=\"(\\d+)\"");
  std::set<std::string> ys;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), rect); it != std::sregex_iterator(); ++it) {
    ys.insert((*it)[2]);
  }
  CHECK(ys.size() == 3);
  CHECK(svg == graph::export_svg(graph::prerequisites(chain(), "A"), {}));
}

TEST_CASE("svg parse-back over fixture closures") {
  auto g = corpus_graph();
  std::regex group("<g class=\"node[^\"]*\" data-uri=\"([^\"]+)\"");
  std::regex edge("<(line|path) [^>]*data-from=\"([^\"]+)\" data-to=\"([^\"]+)\"");
  for (const auto& n : g.nodes) {
    CAPTURE(n);
    auto r = graph::prerequisites(g, n);
    auto svg = graph::export_svg(r, {});
    std::set<std::string> uris;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), group); it != std::sregex_iterator(); ++it) {
      uris.insert((*it)[1]);
    }
    std::set<std::string> expected(r.prerequisites.begin(), r.prerequisites.end());
    expected.insert(n);
    CHECK(uris == expected);
    std::size_t root_extra = std::count(r.prerequisites.begin(), r.prerequisites.end(), n) ? 0 : 1;
    CHECK(count_of(svg, "data-uri=") == r.prerequisites.size() + root_extra);
    auto edges = std::distance(std::sregex_iterator(svg.begin(), svg.end(), edge), std::sregex_iterator());
    CHECK(static_cast<std::size_t>(edges) == r.edges.size());
  }
}

TEST_CASE("dot export and canonical dump") {
  auto dot = graph::export_dot(graph::prerequisites(chain(), "A"), {{"A", "alpha"}});
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("\"A\" -> \"B\" [label=\"uses\"]") != std::string::npos);
  CHECK(dot.find("label=\"alpha\"") != std::string::npos);
  CHECK(graph::dump_graph(chain()) == "node A\nnode B\nnode C\nedge A B uses\nedge B C imports\n");
  CHECK(graph::default_label("//nat#nat/plus") == "plus");
  CHECK(graph::default_label("//analysis/series") == "series");
}

}  // TEST_SUITE
