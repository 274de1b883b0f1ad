#include "portal/views.hpp"

#include "render/html.hpp"

namespace planetary::portal {

using nlohmann::ordered_json;

ordered_json bindings_to_json(const std::vector<std::string>& variables,
                              const std::vector<triples::Binding>& rows) {
  auto bindings = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json b = ordered_json::object();
    for (const auto& v : variables) {
      const auto& n = row.at(v);
      b[v] = {{"type", n.literal ? "literal" : "iri"}, {"value", n.value}};
    }
    bindings.push_back(std::move(b));
  }
  return {{"variables", variables}, {"bindings", std::move(bindings)}};
}

ordered_json prereq_to_json(const PrereqView& view) {
  auto edges = ordered_json::array();
  for (const auto& e : view.result.edges) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"kind", graph::edge_kind_name(e.kind)}});
  }
  auto nodes = ordered_json::array();
  for (std::size_t i = 0; i < view.result.prerequisites.size(); ++i) {
    const auto& n = view.result.prerequisites[i];
    nodes.push_back({{"uri", n}, {"label", view.labels.at(n)}, {"layer", view.result.layers[i]}});
  }
  return {{"root", view.result.root},
          {"label", view.labels.at(view.result.root)},
          {"prerequisites", std::move(nodes)},
          {"edges", std::move(edges)}};
}

ordered_json history_to_json(const std::vector<store::CommitRecord>& records) {
  auto out = ordered_json::array();
  for (const auto& c : records) {
    out.push_back({{"revision", c.revision.value},
                   {"timestamp", c.timestamp},
                   {"author", c.author},
                   {"message", c.message},
                   {"changed_paths", c.changed_paths}});
  }
  return out;
}

ordered_json definition_to_json(const services::Definition& d) {
  return {{"symbol", d.symbol},
          {"document", d.document},
          {"fragment", d.fragment},
          {"html", render::to_html(d.node)}};
}

ordered_json msc_to_json(const std::vector<std::pair<std::string, std::string>>& rows) {
  auto out = ordered_json::array();
  for (const auto& [doc, title] : rows) out.push_back({{"document", doc}, {"title", title}});
  return out;
}

ordered_json run_query(const Portal& portal, const std::string& text, std::uint64_t* revision) {
  const auto snap = portal.snapshot();
  const auto q = triples::parse_query(text);
  const auto rows = triples::query(*snap->triples, q);
  if (revision != nullptr) *revision = snap->revision;
  return bindings_to_json(q.select.empty() ? triples::query_variables(q) : q.select, rows);
}

}  // namespace planetary::portal
