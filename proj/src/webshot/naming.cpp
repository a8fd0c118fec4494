#include "webcorpus/webshot/naming.hpp"

#include <charconv>
#include <limits>

#include "webcorpus/error.hpp"

namespace webcorpus {

std::string name_country_key(std::string_view country) {
  std::string out;
  out.reserve(country.size());
  for (char c : country) {
    if (c != ' ') out += c;
  }
  return out;
}

std::string make_name(Technique technique, int category_id, std::string_view country, int seq) {
  if (seq < 1) throw Error(ErrorCode::kInvalidArgument, "webshot seq must be >= 1");
  if (category_id < 1 || category_id > 6) {
    throw Error(ErrorCode::kInvalidArgument,
                "category id out of range: " + std::to_string(category_id));
  }
  std::string key = name_country_key(country);
  if (key.empty()) throw Error(ErrorCode::kInvalidArgument, "empty country in webshot name");
  for (unsigned char c : key) {
    if (c == '/' || c == '\\' || c < 0x20 || c == 0x7f) {
      throw Error(ErrorCode::kInvalidArgument, "country not usable in a file name: " + key);
    }
  }
  std::string out;
  out += technique_letter(technique);
  out += static_cast<char>('0' + category_id);
  out += key;
  out += '_';
  out += std::to_string(seq);
  out += ".jpg";
  return out;
}

std::string make_name(const WebshotName& name) {
  return make_name(name.technique, name.category_id, name.country, name.seq);
}

std::optional<WebshotName> parse_name(std::string_view s) {
  constexpr std::string_view kExt = ".jpg";
  // Shortest valid name: "B1x_1.jpg".
  if (s.size() < 9 || !s.ends_with(kExt)) return std::nullopt;
  WebshotName n;
  if (s[0] == 'B') {
    n.technique = Technique::kBrowsing;
  } else if (s[0] == 'S') {
    n.technique = Technique::kSearching;
  } else {
    return std::nullopt;
  }
  if (s[1] < '1' || s[1] > '6') return std::nullopt;
  n.category_id = s[1] - '0';

  std::string_view stem = s.substr(2, s.size() - 2 - kExt.size());
  auto us = stem.rfind('_');
  if (us == std::string_view::npos || us == 0) return std::nullopt;
  std::string_view digits = stem.substr(us + 1);
  if (digits.empty() || digits.front() == '0') return std::nullopt;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  int seq = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seq);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  n.seq = seq;
  n.country = std::string(stem.substr(0, us));
  return n;
}

}  // namespace webcorpus
