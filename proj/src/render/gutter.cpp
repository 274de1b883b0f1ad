#include <algorithm>
#include <charconv>
#include <map>

#include "render/render.hpp"

namespace planetary::render {

namespace {

void map_lines(const RenderNode& node, int current,
               std::map<std::string, int>& lines,
               std::map<int, std::string>& starts) {
  if (node.is_text()) return;
  if (const auto* l = node.attr(kAttrLine)) {
    int value = 0;
    std::from_chars(l->data(), l->data() + l->size(), value);
    current = value;
    const auto* kind = node.attr(kAttrKind);
    const auto* id = node.attr(kAttrFragment);
    if (id != nullptr && kind != nullptr && *kind != "document") {
      starts.emplace(value, *id);
    }
  }
  if (const auto* id = node.attr(kAttrFragment)) lines.emplace(*id, current);
  for (const auto& c : node.children) map_lines(c, current, lines, starts);
}

}  // namespace

GutterData gutter_data(const docmodel::LinkedDocument& doc,
                       const RenderNode& rendered,
                       const std::vector<ThreadAnchor>& threads) {
  std::map<std::string, int> rendered_lines;
  std::map<int, std::string> starts;
  map_lines(rendered, 0, rendered_lines, starts);

  GutterData out;
  const int count = doc.line_count();
  out.lines.resize(static_cast<std::size_t>(count));
  for (int l = 1; l <= count; ++l) {
    auto& line = out.lines[static_cast<std::size_t>(l - 1)];
    line.line = l;
    if (const auto it = starts.find(l); it != starts.end()) {
      line.foldable = true;
      line.fold_target = it->second;
    }
  }
  for (const auto& anchor : threads) {
    int l = 0;
    if (const auto it = rendered_lines.find(anchor.fragment);
        it != rendered_lines.end()) {
      l = it->second;
    } else if (const auto* f = doc.find_fragment(anchor.fragment)) {
      // Folded away: the anchor still belongs to its block's line.
      l = f->line;
    }
    if (l < 1 || l > count) continue;
    auto& line = out.lines[static_cast<std::size_t>(l - 1)];
    line.thread_ids.push_back(anchor.thread_id);
  }
  for (auto& line : out.lines) {
    std::sort(line.thread_ids.begin(), line.thread_ids.end());
    line.thread_count = static_cast<int>(line.thread_ids.size());
  }
  return out;
}

}  // namespace planetary::render
