#pragma once

#include <string>

#include "render/render.hpp"

namespace planetary::render {

// Serialized markup: attributes in stored order, text and attribute values
// XML-escaped, no insignificant whitespace. Deterministic.
std::string to_html(const RenderNode& node);

}  // namespace planetary::render
