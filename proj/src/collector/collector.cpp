#include "webcorpus/collector/collector.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <unordered_set>
#include <variant>

#include <spdlog/spdlog.h>

#include "webcorpus/error.hpp"
#include "webcorpus/html/parser.hpp"
#include "webcorpus/net/http_client.hpp"
#include "webcorpus/text.hpp"

namespace webcorpus {

std::string build_search_query(const Country& country, const Category& category) {
  if (trim(country.cc_tld).empty()) {
    throw Error(ErrorCode::kEmptyCountryCode, "empty country code for '" + country.name + "'");
  }
  std::string tld(trim(country.cc_tld));
  if (tld.front() == '.') tld.erase(0, 1);
  std::string q = "site:" + to_lower(tld);
  for (std::size_t i = 0; i < category.keywords.size(); ++i) {
    q += i == 0 ? " " : " OR ";
    q += category.keywords[i];
  }
  q += " ext:html";
  return collapse_spaces(q);
}

RegionTable RegionTable::defaults() {
  RegionTable t;
  t.set(Continent::kAfrica, "Africa");
  t.set(Continent::kAsia, "Asia");
  t.set(Continent::kEurope, "Europe");
  t.set(Continent::kOceania, "Oceania");
  return t;
}

void RegionTable::set(Continent continent, std::string region) {
  regions_[continent] = std::move(region);
}

void RegionTable::erase(Continent continent) { regions_.erase(continent); }

std::string RegionTable::region_for(const Country& country) const {
  if (!trim(country.region).empty()) return std::string(trim(country.region));
  auto it = regions_.find(country.continent);
  if (it == regions_.end()) {
    throw Error(ErrorCode::kUnknownRegion,
                "no directory region for continent " + std::string(to_string(country.continent)) +
                    " (country " + country.name + ")");
  }
  return it->second;
}

std::string build_directory_url(const Country& country, const Category& category,
                                const RegionTable& regions) {
  std::string name(trim(country.name));
  if (name.empty()) throw Error(ErrorCode::kInvalidArgument, "country name is empty");
  std::replace(name.begin(), name.end(), ' ', '_');
  return "https://botw.org/top/Regional/" + regions.region_for(country) + "/" + name + "/" +
         std::string(category.slug) + "/";
}

// --- backends ---------------------------------------------------------------

std::string fixture_key(std::string_view key) { return hex64(fnv1a64(key)); }

FixtureBackend::FixtureBackend(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path FixtureBackend::path_for(std::string_view key) const {
  return dir_ / (fixture_key(key) + ".html");
}

std::string FixtureBackend::load(std::string_view key) const {
  auto path = path_for(key);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kBackendUnavailable,
                "no fixture for '" + std::string(key) + "' (" + path.string() + ")");
  }
  return read_file(path);
}

std::string FixtureBackend::search(std::string_view query, int limit) {
  if (limit < 1) throw Error(ErrorCode::kInvalidArgument, "limit must be >= 1");
  return load(query);
}

std::string FixtureBackend::directory(std::string_view url) { return load(url); }

LiveBackend::LiveBackend(LiveBackendOptions options) : options_(std::move(options)) {}

std::string LiveBackend::get(const std::string& url) {
  net::HttpRequest req;
  req.url = url;
  req.timeout = options_.timeout;
  if (!options_.user_agent.empty()) req.user_agent = options_.user_agent;
  auto result = net::perform(req);
  if (auto* failure = std::get_if<net::TransportFailure>(&result)) {
    throw Error(ErrorCode::kBackendUnavailable, url + ": " + failure->message);
  }
  auto& response = std::get<net::HttpResponse>(result);
  if (response.status == 429) {
    throw Error(ErrorCode::kQuotaExceeded, url + ": HTTP 429");
  }
  if (response.status >= 400) {
    throw Error(ErrorCode::kBackendUnavailable,
                url + ": HTTP " + std::to_string(response.status));
  }
  return std::move(response.body);
}

std::string LiveBackend::search(std::string_view query, int limit) {
  if (limit < 1) throw Error(ErrorCode::kInvalidArgument, "limit must be >= 1");
  std::string url = options_.search_template;
  auto replace = [&url](std::string_view token, const std::string& value) {
    for (auto pos = url.find(token); pos != std::string::npos;
         pos = url.find(token, pos + value.size())) {
      url.replace(pos, token.size(), value);
    }
  };
  replace("{query}", percent_encode(query));
  replace("{limit}", std::to_string(limit));
  return get(url);
}

std::string LiveBackend::directory(std::string_view url) { return get(std::string(url)); }

// --- link extraction --------------------------------------------------------

LinkRules LinkRules::defaults() {
  return LinkRules{
      {"nav", "header", "footer", ".ad", ".ads", "#ads", ".advert", ".sponsored"},
      {"google.*", "googleusercontent.com", "botw.org", "gstatic.com"},
  };
}

namespace {

struct SimpleSelector {
  std::string tag;
  std::string cls;
  std::string id;

  bool matches(const html::Node& n) const {
    if (n.type != html::Node::Type::kElement) return false;
    if (!tag.empty() && n.name != tag) return false;
    if (!cls.empty() && !html::has_class(n, cls)) return false;
    if (!id.empty()) {
      const std::string* v = n.attribute("id");
      if (!v || *v != id) return false;
    }
    return true;
  }
};

SimpleSelector parse_selector(std::string_view s) {
  s = trim(s);
  SimpleSelector sel;
  if (s.starts_with('#')) {
    sel.id = std::string(s.substr(1));
    return sel;
  }
  auto dot = s.find('.');
  sel.tag = to_lower(s.substr(0, dot));
  if (dot != std::string_view::npos) sel.cls = std::string(s.substr(dot + 1));
  return sel;
}

bool host_excluded(std::string_view host, const std::vector<std::string>& patterns) {
  for (const auto& raw : patterns) {
    std::string p = to_lower(raw);
    if (p.size() > 2 && p.ends_with(".*")) {
      // name.* : some label equal to `name` followed by at least one more label.
      std::string base = p.substr(0, p.size() - 2) + ".";
      for (std::size_t pos = host.find(base); pos != std::string_view::npos;
           pos = host.find(base, pos + 1)) {
        bool at_label = pos == 0 || host[pos - 1] == '.';
        if (at_label && pos + base.size() < host.size()) return true;
      }
    } else if (host == p || (host.size() > p.size() && host.ends_with(p) &&
                             host[host.size() - p.size() - 1] == '.')) {
      return true;
    }
  }
  return false;
}

// Unwraps /url?q=<target> (relative or on any host) into the target.
std::string unwrap_redirect(const std::string& href) {
  std::string_view h = href;
  std::string_view path;
  if (h.starts_with("/url?")) {
    path = h;
  } else if (auto url = parse_http_url(h); url && url->target.starts_with("/url?")) {
    auto t = h.find("/url?");
    path = h.substr(t);
  } else {
    return href;
  }
  for (const char* key : {"q", "url"}) {
    if (auto v = query_param(path, key); v && is_absolute_http_url(*v)) return *v;
  }
  return href;
}

}  // namespace

std::vector<std::string> parse_result_links(std::string_view document, const LinkRules& rules) {
  std::vector<SimpleSelector> excluded;
  for (const auto& s : rules.exclude) {
    if (!trim(s).empty()) excluded.push_back(parse_selector(s));
  }
  auto doc = html::parse(document);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  doc.for_each_element([&](const html::Node& n) {
    if (n.name != "a" || n.ns != html::Namespace::kHtml) return;
    const std::string* href = n.attribute("href");
    if (!href) return;
    for (const html::Node* p = &n; p; p = p->parent) {
      for (const auto& sel : excluded) {
        if (sel.matches(*p)) return;
      }
    }
    std::string target = unwrap_redirect(std::string(trim(*href)));
    auto url = parse_http_url(target);
    if (!url || url->host.empty()) return;
    if (host_excluded(url->host, rules.excluded_hosts)) return;
    if (seen.insert(target).second) out.push_back(std::move(target));
  });
  return out;
}

// --- collect ----------------------------------------------------------------

namespace {

std::vector<std::string> fetch_pair(const Country& country, const Category& category,
                                    Technique technique, ResultsBackend& backend,
                                    const CollectOptions& options) {
  std::string page = technique == Technique::kSearching
                         ? backend.search(build_search_query(country, category), options.limit)
                         : backend.directory(build_directory_url(country, category,
                                                                 options.regions));
  auto links = parse_result_links(page, options.rules);
  if (links.size() > static_cast<std::size_t>(options.limit)) links.resize(options.limit);
  return links;
}

}  // namespace

CollectResult collect(std::span<const Country> countries, std::span<const int> category_ids,
                      Technique technique, ResultsBackend& backend,
                      const CollectOptions& options) {
  if (countries.empty()) throw Error(ErrorCode::kEmptyInput, "no countries to collect");
  if (category_ids.empty()) throw Error(ErrorCode::kEmptyInput, "no categories to collect");
  if (options.limit < 1) throw Error(ErrorCode::kInvalidArgument, "limit must be >= 1");
  for (int id : category_ids) category(id);

  struct Pair {
    const Country* country;
    const Category* category;
  };
  std::vector<Pair> pairs;
  for (const auto& c : countries) {
    for (int id : category_ids) pairs.push_back({&c, &category(id)});
  }

  using Outcome = std::variant<std::vector<std::string>, std::string>;
  auto run = [&](const Pair& p) -> Outcome {
    try {
      return fetch_pair(*p.country, *p.category, technique, backend, options);
    } catch (const std::exception& e) {
      return std::string(e.what());
    }
  };

  CollectResult result;
  std::unordered_set<std::string> seen;
  auto consume = [&](const Pair& p, Outcome outcome) {
    if (auto* message = std::get_if<std::string>(&outcome)) {
      spdlog::warn("collect {} / {}: {}", p.country->name, p.category->label, *message);
      result.failures.push_back({p.country->name, p.category->id, *message});
      return;
    }
    auto& links = std::get<std::vector<std::string>>(outcome);
    spdlog::info("collect {} / {}: {} links", p.country->name, p.category->label, links.size());
    for (auto& url : links) {
      if (!seen.insert(url).second) continue;
      result.records.push_back(
          {std::move(url), p.country->name, p.country->continent, p.category->id, technique});
    }
  };

  const std::size_t window = static_cast<std::size_t>(std::max(1, options.max_in_flight));
  if (window == 1) {
    for (const auto& p : pairs) consume(p, run(p));
    return result;
  }
  for (std::size_t begin = 0; begin < pairs.size(); begin += window) {
    std::size_t end = std::min(pairs.size(), begin + window);
    std::vector<std::future<Outcome>> inflight;
    for (std::size_t i = begin; i < end; ++i) {
      inflight.push_back(std::async(std::launch::async, run, std::cref(pairs[i])));
    }
    for (std::size_t i = begin; i < end; ++i) consume(pairs[i], inflight[i - begin].get());
  }
  return result;
}

// --- url list IO ------------------------------------------------------------

void append_url_list(const std::filesystem::path& path, std::span<const UrlRecord> records) {
  std::error_code ec;
  bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for append");
  if (fresh) out << kUrlListHeader << '\n';
  for (const auto& r : records) {
    out << csv_line({r.url, r.country, std::string(to_string(r.continent)),
                     std::to_string(r.category_id), std::string(to_string(r.technique))});
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::vector<UrlRecord> url_records_from_table(const CsvTable& table) {
  std::size_t url_col = table.require_column("url");
  std::size_t country_col = table.require_column("country");
  std::size_t continent_col = table.require_column("continent");
  std::size_t category_col = table.require_column("category_id");
  std::size_t technique_col = table.require_column("technique");
  std::vector<UrlRecord> out;
  out.reserve(table.rows.size());
  std::size_t line = 1;
  for (const auto& row : table.rows) {
    ++line;
    auto fail = [&](const std::string& what) {
      return Error(ErrorCode::kParse, "row " + std::to_string(line) + ": " + what);
    };
    UrlRecord r;
    r.url = std::string(trim(row[url_col]));
    if (!is_absolute_http_url(r.url)) throw fail("not an absolute http(s) url: " + r.url);
    r.country = row[country_col];
    auto continent = parse_continent(row[continent_col]);
    if (!continent) throw fail("unknown continent '" + row[continent_col] + "'");
    r.continent = *continent;
    try {
      r.category_id = std::stoi(row[category_col]);
    } catch (const std::exception&) {
      throw fail("bad category_id '" + row[category_col] + "'");
    }
    if (r.category_id < 1 || r.category_id > 6) throw fail("category_id out of range");
    auto technique = parse_technique(row[technique_col]);
    if (!technique) throw fail("unknown technique '" + row[technique_col] + "'");
    r.technique = *technique;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<UrlRecord> read_url_list(const std::filesystem::path& path) {
  return url_records_from_table(read_csv_file(path));
}

}  // namespace webcorpus
