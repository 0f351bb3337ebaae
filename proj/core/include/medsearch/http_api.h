#pragma once

#include <map>
#include <memory>
#include <string>

#include "medsearch/search.h"

namespace medsearch {

/// JSON wire form of a search response:
/// {"total","page","page_size","results":[{"pmid","title","abstract",
///  "authors","journal","year","score"}]}
std::string to_json(const SearchResponse& response);

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Transport-free request handling, shared by the HTTP server and tests.
class ApiHandler {
 public:
  explicit ApiHandler(SearchService& service) : service_(service) {}

  /// GET /api/search with q, tab (default reviews) and page (default 1).
  ApiResponse search(const std::map<std::string, std::string>& params) const;
  /// GET /api/health.
  ApiResponse health() const;

 private:
  SearchService& service_;
};

/// cpp-httplib server exposing ApiHandler under /api.
class HttpServer {
 public:
  explicit HttpServer(SearchService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds host:port (port 0 picks a free one) and returns the bound port.
  /// Throws std::runtime_error when the bind fails.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  void listen();
  void stop();
  /// Blocks until the server accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace medsearch
