#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <thread>

#include <httplib.h>

namespace webcorpus::testing {

// Loopback HTTP server on an ephemeral port, running on its own thread for
// the lifetime of the object.
class PageServer {
 public:
  PageServer();
  ~PageServer();
  PageServer(const PageServer&) = delete;
  PageServer& operator=(const PageServer&) = delete;

  httplib::Server& server() { return *server_; }
  int port() const { return port_; }
  std::string url(const std::string& path) const;

  // Serves `body` with status 200 and the given content type.
  void page(const std::string& path, std::string body,
            std::string content_type = "text/html");
  void status(const std::string& path, int code, std::string body = "error");
  void slow(const std::string& path, std::chrono::milliseconds delay, std::string body);
  void redirect(const std::string& path, const std::string& target);

  // Starts serving. Routes may be added before or after.
  void start();

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

// A loopback port with nothing listening on it.
int closed_port();

}  // namespace webcorpus::testing
