#include "medsearch/service_config.h"

#include <charconv>
#include <cstdlib>

#include "binary_io.h"
#include "json.hpp"
#include "medsearch/errors.h"

namespace medsearch {

using nlohmann::json;

ServiceConfig ServiceConfig::from_json_file(const std::filesystem::path& path) {
  json root;
  try {
    root = json::parse(detail::read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  if (!root.is_object()) throw ConfigError(path.string() + ": expected a JSON object");

  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_relative() ? base / fp : fp;
  };

  ServiceConfig cfg;
  try {
    if (root.contains("store")) cfg.paths.store = resolve(root["store"].get<std::string>());
    if (root.contains("lexicon")) cfg.paths.lexicon = resolve(root["lexicon"].get<std::string>());
    if (root.contains("matrix")) cfg.paths.matrix = resolve(root["matrix"].get<std::string>());
    if (root.contains("index")) cfg.paths.index = resolve(root["index"].get<std::string>());
    if (root.contains("boosts")) cfg.boost_file = resolve(root["boosts"].get<std::string>());
    if (root.contains("stopwords")) cfg.stopword_file = resolve(root["stopwords"].get<std::string>());
    cfg.host = root.value("host", cfg.host);
    cfg.port = root.value("port", cfg.port);
    cfg.page_size = root.value("page_size", cfg.page_size);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return cfg;
}

void ServiceConfig::apply_environment(const std::function<const char*(const char*)>& getenv) {
  auto get = [&](const char* name) -> const char* { return getenv ? getenv(name) : std::getenv(name); };
  auto number = [&](const char* name, auto& out) {
    if (const char* v = get(name); v && *v) {
      const std::string_view s(v);
      auto value = out;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
      if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(std::string(name) + " is not a number");
      out = value;
    }
  };
  if (const char* v = get("MEDSEARCH_STORE"); v && *v) paths.store = v;
  if (const char* v = get("MEDSEARCH_LEXICON"); v && *v) paths.lexicon = v;
  if (const char* v = get("MEDSEARCH_MATRIX"); v && *v) paths.matrix = v;
  if (const char* v = get("MEDSEARCH_INDEX"); v && *v) paths.index = v;
  if (const char* v = get("MEDSEARCH_HOST"); v && *v) host = v;
  if (const char* v = get("MEDSEARCH_BOOSTS"); v && *v) boost_file = v;
  if (const char* v = get("MEDSEARCH_STOPWORDS"); v && *v) stopword_file = v;
  number("MEDSEARCH_PORT", port);
  number("MEDSEARCH_PAGE_SIZE", page_size);
}

void ServiceConfig::validate() const {
  std::string problems;
  for (const auto& p : paths.missing()) problems += "\n  missing snapshot file: '" + p.string() + "'";
  if (boost_file && !std::filesystem::exists(*boost_file)) {
    problems += "\n  missing boost file: '" + boost_file->string() + "'";
  }
  if (stopword_file && !std::filesystem::exists(*stopword_file)) {
    problems += "\n  missing stopword file: '" + stopword_file->string() + "'";
  }
  if (port < 0 || port > 65535) problems += "\n  port out of range: " + std::to_string(port);
  if (page_size == 0) problems += "\n  page_size must be >= 1";
  if (!problems.empty()) throw ConfigError("invalid service configuration:" + problems);
}

SearchOptions ServiceConfig::search_options() const {
  SearchOptions options;
  options.page_size = page_size;
  if (boost_file) options.boosts = BoostTable::load(*boost_file);
  return options;
}

TextPipeline ServiceConfig::text_pipeline() const {
  if (stopword_file) return TextPipeline(StopwordList::load(*stopword_file));
  return TextPipeline();
}

}  // namespace medsearch
