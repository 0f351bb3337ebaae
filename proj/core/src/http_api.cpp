#include "medsearch/http_api.h"

#include <charconv>
#include <stdexcept>

#include "httplib.h"
#include "json.hpp"

namespace medsearch {

using nlohmann::json;

namespace {

ApiResponse error_response(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

}  // namespace

std::string to_json(const SearchResponse& response) {
  json results = json::array();
  for (const auto& r : response.results) {
    results.push_back({{"pmid", r.pmid},
                       {"title", r.title},
                       {"abstract", r.abstract},
                       {"authors", r.author_abbrevs},
                       {"journal", r.journal_iso_abbrev},
                       {"year", r.year},
                       {"score", r.relevance}});
  }
  return json{{"total", response.total_cached},
              {"page", response.page},
              {"page_size", response.page_size},
              {"results", std::move(results)}}
      .dump();
}

ApiResponse ApiHandler::search(const std::map<std::string, std::string>& params) const {
  const auto q = params.find("q");
  if (q == params.end() || q->second.find_first_not_of(" \t\r\n") == std::string::npos) {
    return error_response(400, "empty query");
  }

  SearchRequest request;
  request.query = q->second;
  if (const auto tab = params.find("tab"); tab != params.end() && !tab->second.empty()) {
    const auto category = parse_category(tab->second);
    if (!category) return error_response(400, "unknown tab '" + tab->second + "'; expected reviews, guidelines or studies");
    request.category = *category;
  }
  if (const auto page = params.find("page"); page != params.end() && !page->second.empty()) {
    const auto& s = page->second;
    int n = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc() || p != s.data() + s.size() || n < 1) {
      return error_response(400, "page must be a positive integer");
    }
    request.page = n;
  }

  try {
    return {200, to_json(service_.search(request))};
  } catch (const EmptyQueryError& e) {
    return error_response(400, e.what());
  } catch (const InputError& e) {
    return error_response(400, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

ApiResponse ApiHandler::health() const {
  const auto snap = service_.snapshot();
  return {200, json{{"status", "ok"}, {"index_version", snap->version()}, {"doc_count", snap->corpus().size()}}.dump()};
}

struct HttpServer::Impl {
  explicit Impl(SearchService& service) : handler(service) {
    auto reply = [](httplib::Response& res, const ApiResponse& api) {
      res.status = api.status;
      res.set_content(api.body, "application/json");
    };
    server.Get("/api/search", [this, reply](const httplib::Request& req, httplib::Response& res) {
      std::map<std::string, std::string> params;
      for (const auto& [k, v] : req.params) params.emplace(k, v);  // first value per key
      reply(res, handler.search(params));
    });
    server.Get("/api/health", [this, reply](const httplib::Request&, httplib::Response& res) {
      reply(res, handler.health());
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) res.set_content(json{{"error", httplib::status_message(res.status)}}.dump(), "application/json");
    });
  }

  httplib::Server server;
  ApiHandler handler;
};

HttpServer::HttpServer(SearchService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + " to any port");
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace medsearch
