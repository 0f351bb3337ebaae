#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "medsearch/cache.h"
#include "medsearch/errors.h"
#include "medsearch/ranking.h"
#include "medsearch/snapshot.h"

namespace medsearch {

inline constexpr std::size_t kDefaultPageSize = 10;

struct SearchRequest {
  std::string query;
  PublicationCategory category = PublicationCategory::Reviews;
  int page = 1;
};

struct DisplayResult {
  Pmid pmid = 0;
  std::string title;
  std::string abstract;
  std::vector<std::string> author_abbrevs;
  std::string journal_iso_abbrev;
  int year = 0;
  double relevance = 0.0;

  bool operator==(const DisplayResult&) const = default;
};

struct SearchResponse {
  std::size_t total_cached = 0;
  int page = 1;
  std::size_t page_size = kDefaultPageSize;
  std::vector<DisplayResult> results;

  bool operator==(const SearchResponse&) const = default;
};

struct SearchOptions {
  std::size_t page_size = kDefaultPageSize;
  BoostTable boosts;
  /// Year used for the age penalty; the system clock's year when unset.
  std::optional<int> current_year;
};

/// Items [(page-1)*page_size, page*page_size). Throws InputError if page < 1.
template <typename T>
std::vector<T> paginate(std::span<const T> items, int page, std::size_t page_size = kDefaultPageSize) {
  if (page < 1) throw InputError("page must be >= 1");
  if (page_size == 0) throw InputError("page_size must be >= 1");
  const std::size_t begin = static_cast<std::size_t>(page - 1) * page_size;
  if (begin >= items.size()) return {};
  const std::size_t end = std::min(items.size(), begin + page_size);
  return {items.begin() + static_cast<std::ptrdiff_t>(begin), items.begin() + static_cast<std::ptrdiff_t>(end)};
}

int current_calendar_year();

/// Cache key for a query: its normalized, stopword-free tokens.
CacheKey make_cache_key(const TextPipeline& pipeline, std::string_view query, PublicationCategory category);

/// Retrieval, filtering, categorization and scoring for one category,
/// truncated to the top kTopK. Throws EmptyQueryError when no tokens remain
/// after stopword removal.
std::vector<ScoredResult> rank_query(const SearchSnapshot& snapshot, std::string_view query,
                                     PublicationCategory category, const BoostTable& boosts, int current_year);

/// The full request path: ranked list (from cache when warm), then the page.
SearchResponse execute_search(const SearchRequest& request, const SearchSnapshot& snapshot,
                              const SearchOptions& options, ResultCache* cache = nullptr);

/// Holds the published snapshot and the cache shared by request handlers.
class SearchService {
 public:
  SearchService(std::shared_ptr<const SearchSnapshot> snapshot, SearchOptions options = {});

  /// Swaps in a new snapshot; cache entries of older versions stop matching.
  void publish(std::shared_ptr<const SearchSnapshot> snapshot);
  std::shared_ptr<const SearchSnapshot> snapshot() const;

  SearchResponse search(const SearchRequest& request);

  const SearchOptions& options() const { return options_; }
  ResultCache& cache() { return cache_; }

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const SearchSnapshot> snapshot_;
  SearchOptions options_;
  ResultCache cache_;
};

}  // namespace medsearch
