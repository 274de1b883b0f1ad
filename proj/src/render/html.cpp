#include "render/html.hpp"

#include "common/text.hpp"

namespace planetary::render {

namespace {

void write(const RenderNode& node, std::string& out) {
  if (node.is_text()) {
    out += text::xml_escape(node.text);
    return;
  }
  out += '<';
  out += node.tag;
  for (const auto& [name, value] : node.attrs) {
    out += ' ';
    out += name;
    out += "=\"";
    out += text::xml_escape(value);
    out += '"';
  }
  out += '>';
  for (const auto& c : node.children) write(c, out);
  out += "</";
  out += node.tag;
  out += '>';
}

}  // namespace

std::string to_html(const RenderNode& node) {
  std::string out;
  write(node, out);
  return out;
}

}  // namespace planetary::render
