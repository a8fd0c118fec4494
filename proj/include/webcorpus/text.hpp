#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace webcorpus {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool starts_with_icase(std::string_view s, std::string_view prefix);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);

// Collapses runs of ASCII whitespace to a single space and trims the ends.
std::string collapse_spaces(std::string_view s);

// Number of Unicode code points in a UTF-8 string (invalid bytes count as one).
std::size_t utf8_length(std::string_view s);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

std::string base64_decode(std::string_view in);
std::string base64_encode(std::string_view in);

std::string percent_decode(std::string_view s);
std::string percent_encode(std::string_view s);

// Formats with at most `decimals` fractional digits, trailing zeros dropped:
// 5.10 -> "5.1", 14.00 -> "14".
std::string format_trimmed(double v, int decimals = 2);

struct Url {
  std::string scheme;  // lowercase
  std::string host;    // lowercase
  int port = 0;        // 0 when absent
  std::string target;  // path + query, "/" when empty
};

// Parses an absolute http/https URL; nullopt for anything else.
std::optional<Url> parse_http_url(std::string_view s);
bool is_absolute_http_url(std::string_view s);

// Value of a query parameter, percent-decoded.
std::optional<std::string> query_param(std::string_view target,
                                       std::string_view key);

}  // namespace webcorpus
