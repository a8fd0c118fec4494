#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace webcorpus {

struct Viewport {
  int width = 992;
  int height = 744;
};

struct CaptureOptions {
  Viewport viewport;
  std::chrono::milliseconds timeout{60000};
  int max_height = 50000;
  int jpeg_quality = 90;
};

struct Capture {
  std::string jpeg;
  int width = 0;   // read back from the encoded JPEG
  int height = 0;
};

struct CaptureFailure {
  enum class Kind { kTimeout, kNavigationError, kProtocolError };
  Kind kind;
  std::string message;
};

std::string_view to_string(CaptureFailure::Kind kind);

using CaptureResult = std::variant<Capture, CaptureFailure>;

// One browser able to render a page into a full-height image. A single
// endpoint handles one capture at a time.
class CaptureEndpoint {
 public:
  virtual ~CaptureEndpoint() = default;
  virtual CaptureResult capture(const std::string& url) = 0;
};

// W3C WebDriver client. The constructor opens a session and throws
// Error(kBackendUnavailable) when the driver cannot be reached or refuses;
// the destructor deletes the session.
class WebDriverSession : public CaptureEndpoint {
 public:
  // `capabilities_json` is sent as the "capabilities" member of New Session.
  WebDriverSession(std::string endpoint, CaptureOptions options,
                   std::string capabilities_json = default_capabilities());
  ~WebDriverSession() override;
  WebDriverSession(const WebDriverSession&) = delete;
  WebDriverSession& operator=(const WebDriverSession&) = delete;

  CaptureResult capture(const std::string& url) override;

  const std::string& session_id() const { return session_id_; }

  // Headless Chrome and Firefox flags; other drivers ignore the vendor keys.
  static std::string default_capabilities();

 private:
  struct Reply;
  Reply call(const std::string& method, const std::string& path, const std::string& body);

  std::string endpoint_;
  CaptureOptions options_;
  std::string session_id_;
};

}  // namespace webcorpus
