#include "graph/export.hpp"

#include <algorithm>
#include <sstream>

#include "common/text.hpp"

namespace planetary::graph {

namespace {

constexpr int kNodeWidth = 160;
constexpr int kNodeHeight = 32;
constexpr int kHorizontalGap = 24;
constexpr int kLayerGap = 64;
constexpr int kMargin = 20;

struct Placed {
  std::string uri;
  std::size_t layer = 0;
  int x = 0;  // top-left
  int y = 0;
};

// Root alone in layer 0, then each prerequisite (root excluded) in its BFS
// layer in result order.
std::vector<Placed> layout(const PrereqResult& r) {
  std::vector<Placed> out;
  out.push_back({r.root, 0, 0, 0});
  for (std::size_t i = 0; i < r.prerequisites.size(); ++i) {
    if (r.prerequisites[i] == r.root) continue;
    out.push_back({r.prerequisites[i], r.layers.at(i), 0, 0});
  }
  std::vector<int> used;
  for (auto& p : out) {
    if (used.size() <= p.layer) used.resize(p.layer + 1, 0);
    p.x = kMargin + used[p.layer] * (kNodeWidth + kHorizontalGap);
    p.y = kMargin + static_cast<int>(p.layer) * (kNodeHeight + kLayerGap);
    ++used[p.layer];
  }
  return out;
}

std::string label_of(const Labels& labels, const std::string& uri) {
  const auto it = labels.find(uri);
  return it == labels.end() ? uri : it->second;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string default_label(std::string_view iri) {
  const auto cut = iri.find_last_of("/#");
  if (cut == std::string_view::npos || cut + 1 == iri.size()) return std::string(iri);
  return std::string(iri.substr(cut + 1));
}

std::string export_svg(const PrereqResult& result, const Labels& labels) {
  const auto nodes = layout(result);
  std::map<std::string, const Placed*> at;
  int width = 0;
  int height = 0;
  for (const auto& p : nodes) {
    at.emplace(p.uri, &p);
    width = std::max(width, p.x + kNodeWidth + kMargin);
    height = std::max(height, p.y + kNodeHeight + kMargin);
  }
  using text::xml_escape;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\" data-root=\"" << xml_escape(result.root) << "\">\n";
  svg << "<g class=\"edges\">\n";
  for (const auto& e : result.edges) {
    const auto* from = at.at(e.from);
    const auto* to = at.at(e.to);
    const int x1 = from->x + kNodeWidth / 2;
    const int y1 = from->y + kNodeHeight;
    svg << "<";
    if (from == to) {
      // Self-loop: a small arc on the right-hand side.
      const int rx = from->x + kNodeWidth;
      const int ry = from->y + kNodeHeight / 2;
      svg << "path d=\"M " << rx << ' ' << ry - 8 << " C " << rx + 24 << ' ' << ry - 20
          << ' ' << rx + 24 << ' ' << ry + 20 << ' ' << rx << ' ' << ry + 8 << "\" fill=\"none\"";
    } else {
      const int x2 = to->x + kNodeWidth / 2;
      const int y2 = to->y;
      svg << "line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
          << '"';
    }
    svg << " class=\"edge edge-" << edge_kind_name(e.kind) << "\" data-from=\""
        << xml_escape(e.from) << "\" data-to=\"" << xml_escape(e.to) << "\" data-kind=\""
        << edge_kind_name(e.kind) << "\" stroke=\"#555\"/>\n";
  }
  svg << "</g>\n";
  for (const auto& p : nodes) {
    const auto label = label_of(labels, p.uri);
    svg << "<g class=\"node" << (p.uri == result.root ? " root" : "") << "\" data-uri=\""
        << xml_escape(p.uri) << "\" data-layer=\"" << p.layer << "\">"
        << "<title>" << xml_escape(p.uri) << "</title>"
        << "<rect x=\"" << p.x << "\" y=\"" << p.y << "\" width=\"" << kNodeWidth
        << "\" height=\"" << kNodeHeight << "\" rx=\"4\" fill=\"#f4f4f8\" stroke=\"#333\"/>"
        << "<text x=\"" << p.x + kNodeWidth / 2 << "\" y=\"" << p.y + kNodeHeight / 2 + 5
        << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(label)
        << "</text></g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string dump_graph(const DepGraph& g) {
  std::string out;
  for (const auto& n : g.nodes) out += "node " + n + "\n";
  for (const auto& e : g.edges) {
    out += "edge " + e.from + " " + e.to + " " + std::string(edge_kind_name(e.kind)) + "\n";
  }
  return out;
}

std::string export_dot(const PrereqResult& result, const Labels& labels) {
  std::ostringstream dot;
  dot << "digraph prerequisites {\n  rankdir=TB;\n";
  dot << "  " << dot_quote(result.root) << " [label=" << dot_quote(label_of(labels, result.root))
      << ", shape=box, style=bold];\n";
  for (const auto& p : result.prerequisites) {
    if (p == result.root) continue;
    dot << "  " << dot_quote(p) << " [label=" << dot_quote(label_of(labels, p))
        << ", shape=box];\n";
  }
  for (const auto& e : result.edges) {
    dot << "  " << dot_quote(e.from) << " -> " << dot_quote(e.to)
        << " [label=" << dot_quote(edge_kind_name(e.kind)) << "];\n";
  }
  dot << "}\n";
  return dot.str();
}

}  // namespace planetary::graph
