#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webcorpus/collector/taxonomy.hpp"
#include "webcorpus/csv.hpp"

namespace webcorpus {

struct UrlRecord {
  std::string url;
  std::string country;
  Continent continent = Continent::kEurope;
  int category_id = 1;
  Technique technique = Technique::kSearching;

  bool operator==(const UrlRecord&) const = default;
};

// `site:<cc_tld> kw1 OR kw2 ... OR kwN ext:html`, single-spaced.
// Throws Error(kEmptyCountryCode) when the code is blank.
std::string build_search_query(const Country& country, const Category& category);

// Continent -> directory region segment. A country's own `region` field
// overrides the table.
class RegionTable {
 public:
  // Africa, Asia, Europe, Oceania map to themselves. Americas has no single
  // directory node, so those countries need an explicit region.
  static RegionTable defaults();

  void set(Continent continent, std::string region);
  void erase(Continent continent);
  // Throws Error(kUnknownRegion).
  std::string region_for(const Country& country) const;

 private:
  std::map<Continent, std::string> regions_;
};

// https://botw.org/top/Regional/<Region>/<Country>/<Slug>/ with spaces in the
// country name replaced by '_'.
std::string build_directory_url(const Country& country, const Category& category,
                                const RegionTable& regions = RegionTable::defaults());

// Source of results pages for both techniques. Implementations must be safe
// to call from several threads at once.
class ResultsBackend {
 public:
  virtual ~ResultsBackend() = default;
  // Results page for a search query. Throws Error(kBackendUnavailable) or
  // Error(kQuotaExceeded).
  virtual std::string search(std::string_view query, int limit) = 0;
  // Directory listing page. Throws Error(kBackendUnavailable).
  virtual std::string directory(std::string_view url) = 0;
};

// Canned pages stored as DIR/<fixture_key(key)>.html where key is the query
// string or the directory URL.
class FixtureBackend : public ResultsBackend {
 public:
  explicit FixtureBackend(std::filesystem::path dir);
  std::string search(std::string_view query, int limit) override;
  std::string directory(std::string_view url) override;

  std::filesystem::path path_for(std::string_view key) const;

 private:
  std::string load(std::string_view key) const;
  std::filesystem::path dir_;
};

std::string fixture_key(std::string_view key);

struct LiveBackendOptions {
  // {query} is replaced by the percent-encoded query, {limit} by the limit.
  std::string search_template = "https://www.google.com/search?q={query}&num={limit}";
  std::chrono::milliseconds timeout{30000};
  std::string user_agent;  // empty: library default
};

class LiveBackend : public ResultsBackend {
 public:
  explicit LiveBackend(LiveBackendOptions options = {});
  std::string search(std::string_view query, int limit) override;
  std::string directory(std::string_view url) override;

 private:
  std::string get(const std::string& url);
  LiveBackendOptions options_;
};

// Anchors nested under an element matching any `exclude` selector are
// skipped. Selectors are simple: `tag`, `.class`, `#id` or `tag.class`.
// Hosts are matched by suffix; `name.*` matches `name` under any TLD.
struct LinkRules {
  std::vector<std::string> exclude;
  std::vector<std::string> excluded_hosts;

  static LinkRules defaults();
};

// Outbound result links in document order, exact-string de-duplicated.
// Redirect wrappers of the form /url?q=<target> are unwrapped.
std::vector<std::string> parse_result_links(std::string_view document,
                                            const LinkRules& rules = LinkRules::defaults());

struct CollectOptions {
  int limit = 100;  // links kept per (country, category) pair
  int max_in_flight = 1;
  LinkRules rules = LinkRules::defaults();
  RegionTable regions = RegionTable::defaults();
};

struct PairFailure {
  std::string country;
  int category_id;
  std::string message;
};

struct CollectResult {
  std::vector<UrlRecord> records;
  std::vector<PairFailure> failures;
};

// Walks countries x categories. Per-pair failures are logged and collected;
// URLs already emitted earlier in the run are dropped. Throws
// Error(kEmptyInput) when either list is empty.
CollectResult collect(std::span<const Country> countries, std::span<const int> category_ids,
                      Technique technique, ResultsBackend& backend,
                      const CollectOptions& options = {});

inline constexpr std::string_view kUrlListHeader = "url,country,continent,category_id,technique";

// Appends to `path`, writing the header first when the file is new or empty.
void append_url_list(const std::filesystem::path& path, std::span<const UrlRecord> records);
std::vector<UrlRecord> read_url_list(const std::filesystem::path& path);
// Rows of an already-parsed table carrying the url list columns.
std::vector<UrlRecord> url_records_from_table(const CsvTable& table);

}  // namespace webcorpus
