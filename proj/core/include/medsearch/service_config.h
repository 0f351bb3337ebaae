#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "medsearch/search.h"
#include "medsearch/snapshot.h"

namespace medsearch {

struct ServiceConfig {
  SnapshotPaths paths;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t page_size = kDefaultPageSize;
  std::optional<std::filesystem::path> boost_file;
  std::optional<std::filesystem::path> stopword_file;

  /// Reads a JSON object with keys store, lexicon, matrix, index, host,
  /// port, page_size, boosts, stopwords. Relative paths resolve against the
  /// file's directory.
  static ServiceConfig from_json_file(const std::filesystem::path& path);

  /// Overrides fields from MEDSEARCH_STORE, MEDSEARCH_LEXICON,
  /// MEDSEARCH_MATRIX, MEDSEARCH_INDEX, MEDSEARCH_HOST, MEDSEARCH_PORT,
  /// MEDSEARCH_PAGE_SIZE, MEDSEARCH_BOOSTS and MEDSEARCH_STOPWORDS.
  /// `getenv` is injectable for tests.
  void apply_environment(const std::function<const char*(const char*)>& getenv = {});

  /// Throws ConfigError listing each missing snapshot file or a bad port/page size.
  void validate() const;

  SearchOptions search_options() const;
  TextPipeline text_pipeline() const;
};

}  // namespace medsearch
