#pragma once

#include <string_view>

#include "webcorpus/html/dom.hpp"

namespace webcorpus::html {

struct ParseOptions {
  // Elements deeper than this are attached as siblings at the limit, the way
  // browser parsers bound tree depth.
  std::size_t max_depth = 512;
};

// Tolerant HTML parser. Never fails: malformed markup is recovered into a
// tree following the HTML tree-construction rules that matter for element
// identity (raw-text elements, comments, implied html/head/body, void
// elements, table and select scoping, foster parenting, foreign content).
Document parse(std::string_view markup, const ParseOptions& options = {});

// Decodes character references (&amp; &#39; &#x27; and common named ones).
std::string decode_entities(std::string_view text, bool in_attribute = false);

}  // namespace webcorpus::html
