#include "webcorpus/collector/taxonomy.hpp"

#include "webcorpus/csv.hpp"
#include "webcorpus/error.hpp"
#include "webcorpus/text.hpp"

namespace webcorpus {
namespace {

constexpr std::string_view kArtsKeywords[] = {"arts",       "entertainment", "dance",
                                              "museums",    "theatre",       "literature",
                                              "artists",    "galleries"};
constexpr std::string_view kBusinessKeywords[] = {
    "business",     "economy",   "marketing", "computers", "internet",
    "construction", "financial", "industry",  "shopping",  "restaurant"};
constexpr std::string_view kEducationKeywords[] = {"education", "academy", "university",
                                                   "college", "school"};
constexpr std::string_view kGovernmentKeywords[] = {"government", "military", "presidency"};
constexpr std::string_view kNewsKeywords[] = {"news",  "media",      "magazine",
                                              "radio", "television", "newspaper"};
constexpr std::string_view kScienceKeywords[] = {"science", "environment", "archaeology"};

const std::array<Category, 6> kCategories = {{
    {1, "ArtsEntertainment", "Arts and Entertainment", "Arts-and-Entertainment", kArtsKeywords},
    {2, "BusinessEconomy", "Business and Economy", "Business-and-Economy", kBusinessKeywords},
    {3, "Education", "Education", "Education", kEducationKeywords},
    {4, "Government", "Government", "Government", kGovernmentKeywords},
    {5, "NewsMedia", "News and Media", "News-and-Media", kNewsKeywords},
    {6, "ScienceEnvironment", "Science and Environment", "Science-and-Environment",
     kScienceKeywords},
}};

}  // namespace

std::string_view to_string(Continent c) {
  switch (c) {
    case Continent::kAfrica: return "Africa";
    case Continent::kAmericas: return "Americas";
    case Continent::kAsia: return "Asia";
    case Continent::kEurope: return "Europe";
    case Continent::kOceania: return "Oceania";
  }
  return "";
}

std::optional<Continent> parse_continent(std::string_view s) {
  s = trim(s);
  for (auto c : {Continent::kAfrica, Continent::kAmericas, Continent::kAsia,
                 Continent::kEurope, Continent::kOceania}) {
    if (iequals(s, to_string(c))) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Technique t) {
  return t == Technique::kBrowsing ? "Browsing" : "Searching";
}

char technique_letter(Technique t) { return t == Technique::kBrowsing ? 'B' : 'S'; }

std::optional<Technique> parse_technique(std::string_view s) {
  s = trim(s);
  if (iequals(s, "browsing") || s == "B") return Technique::kBrowsing;
  if (iequals(s, "searching") || s == "S") return Technique::kSearching;
  return std::nullopt;
}

void validate(const Country& country) {
  if (trim(country.name).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "country name is empty");
  }
  const auto& tld = country.cc_tld;
  if (trim(tld).empty()) {
    throw Error(ErrorCode::kEmptyCountryCode, "empty country code for " + country.name);
  }
  bool ok = tld.size() >= 2 && tld.size() <= 3;
  for (char c : tld) ok = ok && c >= 'a' && c <= 'z';
  if (!ok) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid country code '" + tld + "' for " + country.name);
  }
}

std::span<const Category> categories() { return kCategories; }

const Category& category(int id) {
  if (id < 1 || id > 6) {
    throw Error(ErrorCode::kInvalidArgument, "category id out of range: " + std::to_string(id));
  }
  return kCategories[static_cast<std::size_t>(id - 1)];
}

std::optional<int> category_id_by_label(std::string_view label) {
  for (const auto& c : kCategories) {
    if (iequals(c.label, label)) return c.id;
  }
  return std::nullopt;
}

std::vector<Country> parse_countries(std::string_view text) {
  std::vector<Country> out;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() < 3 || fields.size() > 4) {
      throw Error(ErrorCode::kParse, "countries file line " + std::to_string(line_no) +
                                         ": expected name<TAB>cc_tld<TAB>continent");
    }
    Country c;
    c.name = std::string(trim(fields[0]));
    std::string_view tld = trim(fields[1]);
    if (!tld.empty() && tld.front() == '.') tld.remove_prefix(1);
    c.cc_tld = to_lower(tld);
    auto continent = parse_continent(fields[2]);
    if (!continent) {
      throw Error(ErrorCode::kParse, "countries file line " + std::to_string(line_no) +
                                         ": unknown continent '" + fields[2] + "'");
    }
    c.continent = *continent;
    if (fields.size() == 4) c.region = std::string(trim(fields[3]));
    validate(c);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Country> read_countries_file(const std::filesystem::path& path) {
  return parse_countries(read_file(path));
}

}  // namespace webcorpus
