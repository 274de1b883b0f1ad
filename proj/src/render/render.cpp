#include "render/render.hpp"

#include "common/text.hpp"
#include "docmodel/fragments.hpp"

namespace planetary::render {

using namespace docmodel;

RenderNode RenderNode::element(std::string tag) {
  RenderNode n;
  n.tag = std::move(tag);
  return n;
}

RenderNode RenderNode::text_node(std::string text) {
  RenderNode n;
  n.text = std::move(text);
  return n;
}

const std::string* RenderNode::attr(std::string_view name) const {
  for (const auto& [k, v] : attrs) {
    if (k == name) return &v;
  }
  return nullptr;
}

void RenderNode::set_attr(std::string_view name, std::string value) {
  for (auto& [k, v] : attrs) {
    if (k == name) {
      v = std::move(value);
      return;
    }
  }
  attrs.emplace_back(std::string(name), std::move(value));
}

RenderNode& RenderNode::add(RenderNode child) {
  children.push_back(std::move(child));
  return children.back();
}

RenderNode& RenderNode::add_text(std::string t) {
  return add(text_node(std::move(t)));
}

namespace {

std::string local_name(const std::string& uri, const std::string& fallback) {
  const auto slash = uri.rfind('/');
  if (uri.empty() || slash == std::string::npos || slash < 2) return fallback;
  return uri.substr(slash + 1);
}

void render_subterm(const Term& t, const std::string& base, TermPath& path,
                    RenderNode& out) {
  auto node = RenderNode::element("span");
  const auto ordinal = format_term_path(path);
  node.set_attr(kAttrFragment, path.empty() ? base : base + "." + ordinal);
  node.set_attr(kAttrKind, path.empty() ? "formula" : "subterm");
  node.set_attr(kAttrTermPath, ordinal);
  node.set_attr("class", std::string(term_kind_name(t.kind)));
  switch (t.kind) {
    case TermKind::Apply: {
      for (std::size_t i = 0; i < t.children.size(); ++i) {
        if (i == 1) node.add_text("(");
        if (i > 1) node.add_text(", ");
        path.push_back(i);
        render_subterm(t.children[i], base, path, node);
        path.pop_back();
      }
      node.add_text(t.children.size() > 1 ? ")" : "()");
      break;
    }
    case TermKind::SymbolRef:
      node.set_attr(kAttrSymbol, t.uri);
      node.add_text(local_name(t.uri, t.value));
      break;
    case TermKind::Var:
    case TermKind::Num:
    case TermKind::Text:
      node.add_text(t.value);
      break;
  }
  out.add(std::move(node));
}

class DocumentRenderer {
 public:
  explicit DocumentRenderer(const LinkedDocument& doc)
      : doc_(doc), key_(doc.key()) {}

  RenderNode run() {
    auto root = RenderNode::element("article");
    std::vector<std::size_t> ord;
    annotate(root, ord, "document");
    root.set_attr("data-path", doc_.ast.path);

    auto& header = root.add(RenderNode::element("header"));
    auto& h1 = header.add(RenderNode::element("h1"));
    h1.add_text(doc_.ast.title);
    if (!doc_.ast.msc.empty()) {
      auto& list = header.add(RenderNode::element("ul"));
      list.set_attr("class", "msc");
      for (const auto& code : doc_.ast.msc) {
        auto& li = list.add(RenderNode::element("li"));
        li.set_attr("data-msc", code);
        li.add_text(code);
      }
    }

    for (std::size_t i = 0; i < doc_.ast.body.size(); ++i) {
      ord = {i};
      const auto& block = doc_.ast.body[i];
      if (const auto* m = std::get_if<ModuleDecl>(&block)) {
        module(root, *m, ord);
      } else {
        statement(root, std::get<Statement>(block), ord);
      }
    }
    return root;
  }

 private:
  // Sets data-fragment, data-kind and (for block-level fragments) data-line
  // from the fragment map.
  void annotate(RenderNode& node, const std::vector<std::size_t>& ord,
                std::string kind) {
    const auto id = make_fragment_id(key_, ord);
    node.set_attr(kAttrFragment, id);
    node.set_attr(kAttrKind, std::move(kind));
    const auto* f = doc_.find_fragment(id);
    if (f != nullptr && (f->kind == FragmentKind::Document ||
                         f->kind == FragmentKind::Module ||
                         f->kind == FragmentKind::Statement)) {
      node.set_attr(kAttrLine, std::to_string(f->line));
    }
  }

  void module(RenderNode& parent, const ModuleDecl& m,
              std::vector<std::size_t> ord) {
    auto& section = parent.add(RenderNode::element("section"));
    annotate(section, ord, "module");
    section.set_attr("data-module", m.uri);
    auto& h2 = section.add(RenderNode::element("h2"));
    h2.add_text(m.name);
    if (!m.imports.empty()) {
      auto& box = section.add(RenderNode::element("div"));
      box.set_attr("class", "imports");
      for (const auto& i : m.imports) {
        auto& span = box.add(RenderNode::element("span"));
        span.set_attr(kAttrKind, "import");
        span.set_attr("data-module", i.uri);
        span.add_text(i.document.empty() ? i.module
                                         : i.document + "?" + i.module);
      }
    }
    if (!m.symbols.empty()) {
      auto& box = section.add(RenderNode::element("div"));
      box.set_attr("class", "symbols");
      for (const auto& s : m.symbols) {
        auto& dfn = box.add(RenderNode::element("dfn"));
        dfn.set_attr(kAttrKind, "symdecl");
        dfn.set_attr(kAttrSymbol, s.uri);
        dfn.set_attr("data-arity", std::to_string(s.arity));
        dfn.add_text(s.name);
      }
    }
    for (std::size_t j = 0; j < m.statements.size(); ++j) {
      ord.push_back(j);
      statement(section, m.statements[j], ord);
      ord.pop_back();
    }
  }

  void statement(RenderNode& parent, const Statement& s,
                 std::vector<std::size_t> ord) {
    auto& node = parent.add(RenderNode::element(
        s.kind == StatementKind::Paragraph ? "p" : "div"));
    annotate(node, ord, std::string(statement_kind_name(s.kind)));
    if (!s.for_uris.empty()) node.set_attr("data-for", text::join(s.for_uris, " "));
    std::size_t n = 0;
    for (const auto& item : s.content) {
      if (const auto* t = std::get_if<TextRun>(&item)) {
        node.add_text(t->text);
        continue;
      }
      ord.push_back(n++);
      const auto id = make_fragment_id(key_, ord);
      if (const auto* f = std::get_if<Formula>(&item)) {
        node.add(render_term(f->term, id));
      } else if (const auto* r = std::get_if<TermRef>(&item)) {
        auto& a = node.add(RenderNode::element("a"));
        annotate(a, ord, "termref");
        a.set_attr(kAttrSymbol, r->uri);
        a.add_text(r->text);
      } else if (const auto* d = std::get_if<Definiendum>(&item)) {
        auto& dfn = node.add(RenderNode::element("dfn"));
        annotate(dfn, ord, "definiendum");
        dfn.set_attr(kAttrSymbol, d->uri);
        dfn.add_text(d->text);
      }
      ord.pop_back();
    }
  }

  const LinkedDocument& doc_;
  std::string key_;
};

// The document and symbol occurrences carry fragment IDs but never fold.
bool foldable(const RenderNode& node) {
  const auto* kind = node.attr(kAttrKind);
  return kind == nullptr ||
         (*kind != "document" && *kind != "termref" && *kind != "definiendum");
}

void fold_into(const RenderNode& node, const FoldState& folds,
               RenderNode& out) {
  out.tag = node.tag;
  out.attrs = node.attrs;
  out.text = node.text;
  if (!node.is_text()) {
    const auto* id = node.attr(kAttrFragment);
    if (id != nullptr && folds.count(*id) != 0 && foldable(node)) {
      out.set_attr(kAttrFolded, "true");
      out.children.clear();
      out.add_text(std::string(kEllipsis));
      return;
    }
  }
  out.children.resize(node.children.size());
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    fold_into(node.children[i], folds, out.children[i]);
  }
}

}  // namespace

RenderNode render_term(const Term& term, std::string_view base) {
  RenderNode holder;
  TermPath path;
  render_subterm(term, std::string(base), path, holder);
  return std::move(holder.children.front());
}

RenderNode apply_folds(const RenderNode& tree, const FoldState& folds) {
  if (folds.empty()) return tree;
  RenderNode out;
  fold_into(tree, folds, out);
  return out;
}

RenderNode render_document(const LinkedDocument& doc, const FoldState& folds) {
  auto tree = DocumentRenderer(doc).run();
  FoldState valid;
  for (const auto& id : folds) {
    if (doc.find_fragment(id) != nullptr) valid.insert(id);
  }
  return apply_folds(tree, valid);
}

const RenderNode* find_fragment_node(const RenderNode& root,
                                     std::string_view id) {
  if (root.is_text()) return nullptr;
  if (const auto* v = root.attr(kAttrFragment); v != nullptr && *v == id) {
    return &root;
  }
  for (const auto& c : root.children) {
    if (const auto* hit = find_fragment_node(c, id)) return hit;
  }
  return nullptr;
}

}  // namespace planetary::render
