#include "medsearch/cache.h"

#include <functional>

namespace medsearch {

std::size_t CacheKeyHash::operator()(const CacheKey& key) const {
  const auto h = std::hash<std::string>{}(key.normalized_query);
  return h ^ (static_cast<std::size_t>(key.category) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

std::optional<CacheEntry> ResultCache::get(const CacheKey& key, const std::string& current_version) const {
  std::lock_guard lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end() || it->second.snapshot_version != current_version) return std::nullopt;
  return it->second;
}

void ResultCache::put(const CacheKey& key, CacheEntry entry) {
  std::lock_guard lock(mutex_);
  entries_.insert_or_assign(key, std::move(entry));
}

void ResultCache::clear() {
  std::lock_guard lock(mutex_);
  entries_.clear();
}

std::size_t ResultCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace medsearch
