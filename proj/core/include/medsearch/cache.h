#pragma once

#include <chrono>
#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "medsearch/ranking.h"
#include "medsearch/types.h"

namespace medsearch {

struct CachedResult {
  Pmid pmid = 0;
  double relevance = 0.0;

  bool operator==(const CachedResult&) const = default;
};

struct CacheEntry {
  std::string snapshot_version;
  std::vector<CachedResult> results;  // relevance order, at most kTopK
  std::chrono::system_clock::time_point created;
};

struct CacheKey {
  std::string normalized_query;  // normalized tokens joined by single spaces
  PublicationCategory category = PublicationCategory::Reviews;

  bool operator==(const CacheKey&) const = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& key) const;
};

/// Top-k lists per (normalized query, category). Thread-safe; last writer
/// wins per key. Entries from another snapshot version read as misses.
class ResultCache {
 public:
  std::optional<CacheEntry> get(const CacheKey& key, const std::string& current_version) const;
  void put(const CacheKey& key, CacheEntry entry);
  void clear();
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<CacheKey, CacheEntry, CacheKeyHash> entries_;
};

}  // namespace medsearch
