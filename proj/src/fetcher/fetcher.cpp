#include "webcorpus/fetcher/fetcher.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <spdlog/spdlog.h>

#include "webcorpus/html/parser.hpp"
#include "webcorpus/net/http_client.hpp"
#include "webcorpus/text.hpp"

namespace webcorpus {

std::string_view to_string(FetchFailure::Kind kind) {
  switch (kind) {
    case FetchFailure::Kind::kTimeout: return "Timeout";
    case FetchFailure::Kind::kHttpStatus: return "HttpStatus";
    case FetchFailure::Kind::kTlsError: return "TlsError";
    case FetchFailure::Kind::kConnectionError: return "ConnectionError";
  }
  return "";
}

std::string FetchFailure::describe() const {
  std::string out(to_string(kind));
  if (kind == Kind::kHttpStatus) out += "(" + std::to_string(http_status) + ")";
  if (!message.empty()) out += ": " + message;
  return out;
}

FetchResult fetch(const std::string& url, const FetchOptions& options) {
  if (!is_absolute_http_url(url)) {
    return FetchFailure{FetchFailure::Kind::kConnectionError, 0, "not an absolute url: " + url};
  }
  net::HttpRequest req;
  req.url = url;
  req.timeout = options.timeout;
  req.max_redirects = options.max_redirects;
  if (!options.user_agent.empty()) req.user_agent = options.user_agent;

  auto result = net::perform(req);
  if (auto* failure = std::get_if<net::TransportFailure>(&result)) {
    FetchFailure::Kind kind = FetchFailure::Kind::kConnectionError;
    if (failure->kind == net::TransportError::kTimeout) kind = FetchFailure::Kind::kTimeout;
    if (failure->kind == net::TransportError::kTls) kind = FetchFailure::Kind::kTlsError;
    return FetchFailure{kind, 0, failure->message};
  }
  auto& response = std::get<net::HttpResponse>(result);
  if (response.status >= 400 || response.status < 200) {
    return FetchFailure{FetchFailure::Kind::kHttpStatus, response.status, {}};
  }
  if (response.status >= 300) {
    // A 3xx that survived redirect following: the cap was hit or there was no Location.
    return FetchFailure{FetchFailure::Kind::kHttpStatus, response.status,
                        "unresolved redirect"};
  }
  FetchedPage page;
  page.bytes = static_cast<std::int64_t>(response.body.size());
  page.html = std::move(response.body);
  page.time_ms = response.elapsed_ms;
  page.final_url = std::move(response.effective_url);
  return page;
}

namespace {

bool has_stylesheet_rel(const html::Node& link) {
  const std::string* rel = link.attribute("rel");
  if (!rel) return false;
  for (const auto& token : split_whitespace(*rel)) {
    if (iequals(token, "stylesheet")) return true;
  }
  return false;
}

}  // namespace

StructuralCounts extract_metrics(std::string_view html) {
  StructuralCounts c;
  auto doc = html::parse(html);
  doc.for_each_element([&c](const html::Node& n) {
    const std::string& name = n.name;
    if (name == "img") {
      ++c.images;
    } else if (name == "script") {
      if (n.has_attribute("src")) ++c.script_files;
    } else if (name == "link") {
      if (has_stylesheet_rel(n)) ++c.css_files;
    } else if (name == "table") {
      ++c.tables;
    } else if (name == "iframe") {
      ++c.iframes;
    } else if (name == "style") {
      ++c.style_tags;
    }
  });
  return c;
}

PageMetrics PageMetrics::from(const FetchedPage& page, const StructuralCounts& counts) {
  PageMetrics m;
  m.time_ms = std::max(0.0, page.time_ms);
  m.bytes = page.bytes;
  m.images = counts.images;
  m.script_files = counts.script_files;
  m.css_files = counts.css_files;
  m.tables = counts.tables;
  m.iframes = counts.iframes;
  m.style_tags = counts.style_tags;
  return m;
}

bool PageMetrics::is_sentinel() const {
  return time_ms == kSentinel && bytes == kSentinel && images == kSentinel &&
         script_files == kSentinel && css_files == kSentinel && tables == kSentinel &&
         iframes == kSentinel && style_tags == kSentinel;
}

bool PageMetrics::is_complete() const {
  return time_ms >= 0 && bytes >= 0 && images >= 0 && script_files >= 0 && css_files >= 0 &&
         tables >= 0 && iframes >= 0 && style_tags >= 0;
}

PageMetrics measure(const UrlRecord& record, const FetchOptions& options) {
  try {
    auto result = fetch(record.url, options);
    if (auto* failure = std::get_if<FetchFailure>(&result)) {
      spdlog::warn("fetch {}: {}", record.url, failure->describe());
      return PageMetrics::sentinel();
    }
    const auto& page = std::get<FetchedPage>(result);
    return PageMetrics::from(page, extract_metrics(page.html));
  } catch (const std::exception& e) {
    spdlog::error("fetch {}: {}", record.url, e.what());
    return PageMetrics::sentinel();
  }
}

std::vector<PageMetrics> measure_all(std::span<const UrlRecord> records,
                                     const FetchOptions& options, int workers) {
  std::vector<PageMetrics> out(records.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      out[i] = measure(records[i], options);
    }
  };
  std::size_t n = std::min<std::size_t>(std::max(1, workers), records.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(work);
  if (n > 0) work();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace webcorpus
