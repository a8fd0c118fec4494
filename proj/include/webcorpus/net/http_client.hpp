#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace webcorpus::net {

inline constexpr const char* kDefaultUserAgent =
    "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 (KHTML, like Gecko) "
    "Chrome/120.0 Safari/537.36";

struct HttpRequest {
  std::string method = "GET";
  std::string url;
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
  std::chrono::milliseconds timeout{30000};
  long max_redirects = 5;  // 0 disables redirect following
  std::string user_agent = kDefaultUserAgent;
};

struct HttpResponse {
  long status = 0;
  std::string body;  // decoded (Content-Encoding already removed)
  std::string effective_url;
  double elapsed_ms = 0;  // request issued -> body complete
};

enum class TransportError { kTimeout, kTls, kConnection };

struct TransportFailure {
  TransportError kind;
  std::string message;
};

using HttpResult = std::variant<HttpResponse, TransportFailure>;

// Blocking request on a private easy handle; safe to call from many threads.
HttpResult perform(const HttpRequest& request);

}  // namespace webcorpus::net
