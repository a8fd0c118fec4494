#include "webcorpus/webshot/capture.hpp"

#include <algorithm>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "webcorpus/error.hpp"
#include "webcorpus/net/http_client.hpp"
#include "webcorpus/text.hpp"
#include "webcorpus/webshot/image.hpp"

namespace webcorpus {

using json = nlohmann::json;

std::string_view to_string(CaptureFailure::Kind kind) {
  switch (kind) {
    case CaptureFailure::Kind::kTimeout: return "Timeout";
    case CaptureFailure::Kind::kNavigationError: return "NavigationError";
    case CaptureFailure::Kind::kProtocolError: return "ProtocolError";
  }
  return "";
}

namespace {

constexpr const char* kPageExtentScript =
    "var d = document.documentElement, b = document.body || d;"
    "return [Math.max(d.scrollWidth, b.scrollWidth), Math.max(d.scrollHeight, b.scrollHeight)];";

// Thrown inside capture() and turned into a CaptureFailure at the boundary.
struct Failed {
  CaptureFailure failure;
};

}  // namespace

struct WebDriverSession::Reply {
  long status = 0;
  json value;
  std::string error;  // W3C error code, empty on success
  std::string message;
};

std::string WebDriverSession::default_capabilities() {
  return R"({"alwaysMatch":{"goog:chromeOptions":{"args":["--headless=new","--hide-scrollbars"]},)"
         R"("moz:firefoxOptions":{"args":["-headless"]}}})";
}

WebDriverSession::Reply WebDriverSession::call(const std::string& method, const std::string& path,
                                               const std::string& body) {
  net::HttpRequest req;
  req.method = method;
  req.url = endpoint_ + path;
  req.body = body;
  req.max_redirects = 0;
  req.user_agent.clear();
  req.timeout = options_.timeout + std::chrono::seconds(5);
  if (method != "GET" && method != "DELETE") {
    req.headers.emplace_back("Content-Type", "application/json; charset=utf-8");
  }
  auto result = net::perform(req);
  if (auto* failure = std::get_if<net::TransportFailure>(&result)) {
    auto kind = failure->kind == net::TransportError::kTimeout
                    ? CaptureFailure::Kind::kTimeout
                    : CaptureFailure::Kind::kProtocolError;
    throw Failed{{kind, "webdriver " + method + " " + path + ": " + failure->message}};
  }
  auto& response = std::get<net::HttpResponse>(result);
  Reply reply;
  reply.status = response.status;
  json doc = json::parse(response.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("value")) {
    throw Failed{{CaptureFailure::Kind::kProtocolError,
                  "webdriver " + path + ": malformed reply (HTTP " +
                      std::to_string(response.status) + ")"}};
  }
  reply.value = std::move(doc["value"]);
  if (reply.value.is_object() && reply.value.contains("error") &&
      reply.value["error"].is_string()) {
    reply.error = reply.value["error"].get<std::string>();
    if (reply.value.contains("message") && reply.value["message"].is_string()) {
      reply.message = reply.value["message"].get<std::string>();
    }
  } else if (response.status >= 400) {
    reply.error = "unknown error";
  }
  return reply;
}

WebDriverSession::WebDriverSession(std::string endpoint, CaptureOptions options,
                                   std::string capabilities_json)
    : endpoint_(std::move(endpoint)), options_(options) {
  while (endpoint_.ends_with('/')) endpoint_.pop_back();
  if (options_.viewport.width < 1 || options_.viewport.height < 1 || options_.max_height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "viewport and max height must be positive");
  }
  if (options_.jpeg_quality < 1 || options_.jpeg_quality > 100) {
    throw Error(ErrorCode::kInvalidArgument, "JPEG quality must be in 1..100");
  }
  json caps = json::parse(capabilities_json, nullptr, false);
  if (caps.is_discarded()) throw Error(ErrorCode::kInvalidArgument, "capabilities are not JSON");
  try {
    Reply r = call("POST", "/session", json{{"capabilities", caps}}.dump());
    if (!r.error.empty()) {
      throw Error(ErrorCode::kBackendUnavailable,
                  "webdriver refused session: " + r.error + " " + r.message);
    }
    if (!r.value.is_object() || !r.value.contains("sessionId") ||
        !r.value["sessionId"].is_string()) {
      throw Error(ErrorCode::kBackendUnavailable, "webdriver reply has no sessionId");
    }
    session_id_ = r.value["sessionId"].get<std::string>();
    long ms = static_cast<long>(options_.timeout.count());
    Reply t = call("POST", "/session/" + session_id_ + "/timeouts",
                   json{{"pageLoad", ms}, {"script", ms}}.dump());
    if (!t.error.empty()) spdlog::warn("webdriver timeouts: {} {}", t.error, t.message);
  } catch (const Failed& f) {
    throw Error(ErrorCode::kBackendUnavailable, f.failure.message);
  }
}

WebDriverSession::~WebDriverSession() {
  if (session_id_.empty()) return;
  try {
    call("DELETE", "/session/" + session_id_, "");
  } catch (...) {
    // Best effort; the driver reaps abandoned sessions itself.
  }
}

CaptureResult WebDriverSession::capture(const std::string& url) {
  const std::string base = "/session/" + session_id_;
  auto expect_ok = [](const Reply& r, const std::string& what) {
    if (r.error.empty()) return;
    throw Failed{{CaptureFailure::Kind::kProtocolError, what + ": " + r.error + " " + r.message}};
  };
  try {
    if (!is_absolute_http_url(url)) {
      return CaptureFailure{CaptureFailure::Kind::kNavigationError, "not an absolute url: " + url};
    }
    const Viewport& vp = options_.viewport;
    expect_ok(call("POST", base + "/window/rect",
                   json{{"width", vp.width}, {"height", vp.height}}.dump()),
              "set window rect");

    Reply nav = call("POST", base + "/url", json{{"url", url}}.dump());
    if (nav.error == "timeout") {
      return CaptureFailure{CaptureFailure::Kind::kTimeout, nav.message};
    }
    if (!nav.error.empty()) {
      return CaptureFailure{CaptureFailure::Kind::kNavigationError, nav.error + " " + nav.message};
    }

    Reply extent = call("POST", base + "/execute/sync",
                        json{{"script", kPageExtentScript}, {"args", json::array()}}.dump());
    expect_ok(extent, "measure page");
    if (!extent.value.is_array() || extent.value.size() != 2 || !extent.value[1].is_number()) {
      throw Failed{{CaptureFailure::Kind::kProtocolError, "page extent reply is not [w, h]"}};
    }
    int content_height = static_cast<int>(extent.value[1].get<double>());
    int height = std::clamp(content_height, vp.height, std::max(vp.height, options_.max_height));
    if (height != vp.height) {
      expect_ok(call("POST", base + "/window/rect",
                     json{{"width", vp.width}, {"height", height}}.dump()),
                "resize to page height");
    }

    Reply shot = call("GET", base + "/screenshot", "");
    expect_ok(shot, "screenshot");
    if (!shot.value.is_string()) {
      throw Failed{{CaptureFailure::Kind::kProtocolError, "screenshot reply is not a string"}};
    }
    RgbImage image = decode_png(base64_decode(shot.value.get<std::string>()));
    if (image.height > options_.max_height) {
      image.height = options_.max_height;
      image.pixels.resize(static_cast<std::size_t>(image.width) * image.height * 3);
    }
    Capture out;
    out.jpeg = encode_jpeg(image, options_.jpeg_quality);
    ImageSize size = jpeg_size(out.jpeg);
    out.width = size.width;
    out.height = size.height;
    return out;
  } catch (const Failed& f) {
    return f.failure;
  } catch (const Error& e) {
    return CaptureFailure{CaptureFailure::Kind::kProtocolError, e.what()};
  } catch (const json::exception& e) {
    return CaptureFailure{CaptureFailure::Kind::kProtocolError, e.what()};
  }
}

}  // namespace webcorpus
