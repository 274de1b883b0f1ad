#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "docmodel/document.hpp"

namespace planetary::render {

// Normative attribute names shared with the browser client.
inline constexpr std::string_view kAttrFragment = "data-fragment";
inline constexpr std::string_view kAttrSymbol = "data-symbol";
inline constexpr std::string_view kAttrTermPath = "data-termpath";
inline constexpr std::string_view kAttrKind = "data-kind";
inline constexpr std::string_view kAttrFolded = "data-folded";
inline constexpr std::string_view kAttrLine = "data-line";

// U+22EF MIDLINE HORIZONTAL ELLIPSIS
inline constexpr std::string_view kEllipsis = "\xE2\x8B\xAF";

// An element (non-empty tag) or a text node (empty tag, `text` set).
struct RenderNode {
  std::string tag;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::vector<RenderNode> children;
  std::string text;

  static RenderNode element(std::string tag);
  static RenderNode text_node(std::string text);

  bool is_text() const { return tag.empty(); }
  const std::string* attr(std::string_view name) const;
  // Replaces an existing value in place or appends.
  void set_attr(std::string_view name, std::string value);
  RenderNode& add(RenderNode child);
  RenderNode& add_text(std::string text);

  friend bool operator==(const RenderNode&, const RenderNode&) = default;
};

using FoldState = std::set<std::string>;

// Annotated tree for `doc` with the fragments in `folds` collapsed. Fold IDs
// that are not fragments of `doc` are ignored.
RenderNode render_document(const docmodel::LinkedDocument& doc,
                           const FoldState& folds);

// One node per subterm, each tagged with its TermPath from the root. `base`
// is the formula's FragmentID; subterm fragments are base + "." + path.
RenderNode render_term(const docmodel::Term& term, std::string_view base);

// Nodes whose data-fragment is folded lose their children to a single
// ellipsis text and gain data-folded="true"; descendants of a folded node are
// not visited. Everything else is copied unchanged.
RenderNode apply_folds(const RenderNode& tree, const FoldState& folds);

// Depth-first visit of every element node.
template <typename F>
void for_each_element(const RenderNode& node, F&& f) {
  if (node.is_text()) return;
  f(node);
  for (const auto& c : node.children) for_each_element(c, f);
}

// Finds the element carrying data-fragment == id.
const RenderNode* find_fragment_node(const RenderNode& root,
                                     std::string_view id);

struct ThreadAnchor {
  std::string fragment;
  std::string thread_id;
};

struct GutterLine {
  int line = 0;
  bool foldable = false;
  std::optional<std::string> fold_target;
  int thread_count = 0;
  std::vector<std::string> thread_ids;

  friend bool operator==(const GutterLine&, const GutterLine&) = default;
};

struct GutterData {
  std::vector<GutterLine> lines;
};

// FoldingBar/InfoBar data: one entry per document line. A line is foldable
// when a module or statement starts on it; thread counts come from the line
// each anchor's fragment renders on. Anchors outside `doc` are ignored.
GutterData gutter_data(const docmodel::LinkedDocument& doc,
                       const RenderNode& rendered,
                       const std::vector<ThreadAnchor>& threads);

}  // namespace planetary::render
