#include "graph/depgraph.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "common/error.hpp"

namespace planetary::graph {

using namespace docmodel;

std::string_view edge_kind_name(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Imports: return "imports";
    case EdgeKind::Uses: return "uses";
    case EdgeKind::Defines: return "defines";
  }
  return "uses";
}

std::optional<EdgeKind> edge_kind_from_name(std::string_view name) {
  if (name == "imports") return EdgeKind::Imports;
  if (name == "uses") return EdgeKind::Uses;
  if (name == "defines") return EdgeKind::Defines;
  return std::nullopt;
}

void DepGraph::add_edge(std::string from, std::string to, EdgeKind kind) {
  nodes.insert(from);
  nodes.insert(to);
  if (kind == EdgeKind::Imports && from == to) return;
  edges.insert(Edge{std::move(from), std::move(to), kind});
}

namespace {

void term_uses(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::SymbolRef && !t.uri.empty()) out.insert(t.uri);
  for (const auto& c : t.children) term_uses(c, out);
}

std::set<std::string> statement_uses(const Statement& s) {
  std::set<std::string> out;
  for (const auto& item : s.content) {
    if (const auto* r = std::get_if<TermRef>(&item)) {
      if (!r->uri.empty()) out.insert(r->uri);
    } else if (const auto* f = std::get_if<Formula>(&item)) {
      term_uses(f->term, out);
    }
  }
  return out;
}

void add_statement(DepGraph& g, const std::string& doc, const Statement& s) {
  const auto uses = statement_uses(s);
  for (const auto& u : uses) g.add_edge(doc, u, EdgeKind::Uses);
  if (s.kind != StatementKind::Definition) return;
  for (const auto& target : s.for_uris) {
    if (target.empty()) continue;
    g.add_edge(doc, target, EdgeKind::Defines);
    for (const auto& u : uses) {
      if (u != target) g.add_edge(target, u, EdgeKind::Uses);
    }
  }
}

}  // namespace

DepGraph build_dependency_graph(const std::vector<const LinkedDocument*>& corpus) {
  DepGraph g;
  for (const auto* doc : corpus) {
    const auto duri = document_uri(doc->key());
    g.nodes.insert(duri);
    for (const auto& block : doc->ast.body) {
      if (const auto* m = std::get_if<ModuleDecl>(&block)) {
        g.nodes.insert(m->uri);
        for (const auto& i : m->imports) {
          if (i.uri.empty()) continue;
          g.add_edge(duri, i.uri, EdgeKind::Imports);
          g.add_edge(m->uri, i.uri, EdgeKind::Imports);
        }
        for (const auto& s : m->symbols) {
          g.add_edge(duri, s.uri, EdgeKind::Defines);
          g.add_edge(m->uri, s.uri, EdgeKind::Defines);
        }
        for (const auto& s : m->statements) add_statement(g, duri, s);
      } else {
        add_statement(g, duri, std::get<Statement>(block));
      }
    }
  }
  return g;
}

namespace {

struct Adjacency {
  std::vector<std::string> names;  // sorted, index = id
  std::unordered_map<std::string, std::size_t> ids;
  std::vector<std::vector<std::size_t>> out;  // sorted successor ids
};

Adjacency adjacency(const DepGraph& g, const std::set<EdgeKind>& kinds) {
  Adjacency a;
  a.names.assign(g.nodes.begin(), g.nodes.end());
  for (std::size_t i = 0; i < a.names.size(); ++i) a.ids.emplace(a.names[i], i);
  a.out.resize(a.names.size());
  for (const auto& e : g.edges) {
    if (!kinds.empty() && !kinds.count(e.kind)) continue;
    a.out[a.ids.at(e.from)].push_back(a.ids.at(e.to));
  }
  for (auto& succ : a.out) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }
  return a;
}

}  // namespace

PrereqResult prerequisites(const DepGraph& g, std::string_view root,
                           const std::set<EdgeKind>& kinds) {
  const std::string root_s(root);
  if (!g.nodes.count(root_s)) {
    throw Error(ErrorCode::UnknownNode, "unknown node " + root_s);
  }
  const auto a = adjacency(g, kinds);
  const auto root_id = a.ids.at(root_s);

  PrereqResult r;
  r.root = root_s;
  std::vector<bool> seen(a.names.size(), false);
  seen[root_id] = true;
  bool root_reached = false;
  std::vector<std::size_t> layer{root_id};
  for (std::size_t depth = 1; !layer.empty(); ++depth) {
    std::set<std::string> next_names;
    for (const auto id : layer) {
      for (const auto s : a.out[id]) {
        if (s == root_id && !root_reached) {
          root_reached = true;
          next_names.insert(root_s);
        }
        if (!seen[s]) {
          seen[s] = true;
          next_names.insert(a.names[s]);
        }
      }
    }
    layer.clear();
    for (const auto& n : next_names) {
      r.prerequisites.push_back(n);
      r.layers.push_back(depth);
      if (n != root_s) layer.push_back(a.ids.at(n));
    }
  }

  std::set<std::string> members(r.prerequisites.begin(), r.prerequisites.end());
  members.insert(root_s);
  for (const auto& e : g.edges) {
    if (!kinds.empty() && !kinds.count(e.kind)) continue;
    if (members.count(e.from) && members.count(e.to)) r.edges.insert(e);
  }
  return r;
}

std::vector<std::vector<std::string>> detect_cycles(const DepGraph& g) {
  const auto a = adjacency(g, {});
  const auto n = a.names.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::string>> out;
  std::size_t counter = 0;

  // Iterative Tarjan: frames of (node, next successor position).
  std::vector<std::pair<std::size_t, std::size_t>> frames;
  for (std::size_t start = 0; start < n; ++start) {
    if (index[start] != kUnvisited) continue;
    frames.emplace_back(start, 0);
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < a.out[v].size()) {
        const auto w = a.out[v][pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const auto done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const auto parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] != index[done]) continue;
      std::vector<std::string> component;
      while (true) {
        const auto w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(a.names[w]);
        if (w == done) break;
      }
      const bool self_loop =
          std::binary_search(a.out[done].begin(), a.out[done].end(), done);
      if (component.size() >= 2 || self_loop) {
        std::sort(component.begin(), component.end());
        out.push_back(std::move(component));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace planetary::graph
