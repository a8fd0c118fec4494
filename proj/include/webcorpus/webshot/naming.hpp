#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "webcorpus/collector/taxonomy.hpp"

namespace webcorpus {

// Webshot file name: <T><C><Country>_<seq>.jpg, e.g. B2Netherlands_791.jpg.
struct WebshotName {
  Technique technique = Technique::kBrowsing;
  int category_id = 1;
  std::string country;  // spaces removed
  int seq = 1;

  bool operator==(const WebshotName&) const = default;
};

// Country name as it appears inside file names.
std::string name_country_key(std::string_view country);

// Throws Error(kInvalidArgument) for seq < 1, a category outside 1..6, or a
// country that is empty or carries path separators or control characters.
std::string make_name(Technique technique, int category_id, std::string_view country, int seq);
std::string make_name(const WebshotName& name);

// Inverse of make_name; nullopt when `file_name` does not follow the grammar
// ^[BS][1-6](.+)_([1-9][0-9]*)\.jpg$.
std::optional<WebshotName> parse_name(std::string_view file_name);

}  // namespace webcorpus
