#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "webcorpus/collector/collector.hpp"

namespace webcorpus {

struct FetchOptions {
  std::chrono::milliseconds timeout{30000};
  long max_redirects = 5;
  std::string user_agent;  // empty: library default
};

struct FetchedPage {
  std::string html;
  double time_ms = 0;
  std::int64_t bytes = 0;  // body length after content decoding
  std::string final_url;
};

struct FetchFailure {
  enum class Kind { kTimeout, kHttpStatus, kTlsError, kConnectionError };
  Kind kind;
  long http_status = 0;  // set for kHttpStatus
  std::string message;

  std::string describe() const;
};

std::string_view to_string(FetchFailure::Kind kind);

using FetchResult = std::variant<FetchedPage, FetchFailure>;

// Any status >= 400 is a failure, as is running out of redirects.
FetchResult fetch(const std::string& url, const FetchOptions& options = {});

struct StructuralCounts {
  std::int64_t images = 0;
  std::int64_t script_files = 0;  // <script src=...> only
  std::int64_t css_files = 0;     // <link> with a "stylesheet" rel token
  std::int64_t tables = 0;
  std::int64_t iframes = 0;
  std::int64_t style_tags = 0;

  bool operator==(const StructuralCounts&) const = default;
};

// Counts elements of the recovered DOM tree. Pure and reentrant.
StructuralCounts extract_metrics(std::string_view html);

inline constexpr std::int64_t kSentinel = -1;

struct PageMetrics {
  double time_ms = kSentinel;
  std::int64_t bytes = kSentinel;
  std::int64_t images = kSentinel;
  std::int64_t script_files = kSentinel;
  std::int64_t css_files = kSentinel;
  std::int64_t tables = kSentinel;
  std::int64_t iframes = kSentinel;
  std::int64_t style_tags = kSentinel;

  static PageMetrics sentinel() { return {}; }
  static PageMetrics from(const FetchedPage& page, const StructuralCounts& counts);

  bool is_sentinel() const;  // all eight fields are -1
  bool is_complete() const;  // all eight fields are >= 0
  // Either fully sentineled or fully non-negative.
  bool is_consistent() const { return is_sentinel() || is_complete(); }
  bool operator==(const PageMetrics&) const = default;
};

// Never throws for per-URL problems: failures are logged and yield
// PageMetrics::sentinel().
PageMetrics measure(const UrlRecord& record, const FetchOptions& options = {});

// Measures on up to `workers` threads; results are in input order.
std::vector<PageMetrics> measure_all(std::span<const UrlRecord> records,
                                     const FetchOptions& options = {}, int workers = 8);

}  // namespace webcorpus
