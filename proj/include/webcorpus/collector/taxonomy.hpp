#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace webcorpus {

enum class Continent { kAfrica, kAmericas, kAsia, kEurope, kOceania };
enum class Technique { kBrowsing, kSearching };

std::string_view to_string(Continent c);
std::optional<Continent> parse_continent(std::string_view s);

std::string_view to_string(Technique t);
char technique_letter(Technique t);  // 'B' / 'S'
// Accepts "Browsing"/"Searching" in any case, or the single letters.
std::optional<Technique> parse_technique(std::string_view s);

struct Country {
  std::string name;
  std::string cc_tld;  // no leading dot, lowercase
  Continent continent = Continent::kEurope;
  // Directory region segment when it is not derivable from the continent
  // (for example "South_America"). Empty means use the continent mapping.
  std::string region;
};

// Throws Error(kEmptyCountryCode) for a blank code, Error(kInvalidArgument)
// for any other broken Country invariant.
void validate(const Country& country);

struct Category {
  int id;
  std::string_view label;    // ArtsEntertainment, also the image folder name
  std::string_view title;    // "Arts and Entertainment"
  std::string_view slug;     // directory path segment
  std::span<const std::string_view> keywords;
};

// The six categories in id order.
std::span<const Category> categories();
// Throws Error(kInvalidArgument) for ids outside 1..6.
const Category& category(int id);
std::optional<int> category_id_by_label(std::string_view label);

// Countries file: UTF-8, one `name<TAB>cc_tld<TAB>continent[<TAB>region]`
// record per line. Blank lines and lines starting with '#' are skipped.
std::vector<Country> parse_countries(std::string_view text);
std::vector<Country> read_countries_file(const std::filesystem::path& path);

}  // namespace webcorpus
