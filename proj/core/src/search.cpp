#include "medsearch/search.h"

#include <algorithm>
#include <chrono>

namespace medsearch {
namespace {

constexpr int kMinPublicationYear = 1990;

bool is_english(std::string_view language) {
  return language.size() == 3 && std::tolower(static_cast<unsigned char>(language[0])) == 'e' &&
         std::tolower(static_cast<unsigned char>(language[1])) == 'n' &&
         std::tolower(static_cast<unsigned char>(language[2])) == 'g';
}

bool contains_all(std::span<const Tid> sorted_terms, std::span<const Tid> sorted_query) {
  return std::includes(sorted_terms.begin(), sorted_terms.end(), sorted_query.begin(), sorted_query.end());
}

}  // namespace

int current_calendar_year() {
  using namespace std::chrono;
  const year_month_day today{floor<days>(system_clock::now())};
  return static_cast<int>(today.year());
}

CacheKey make_cache_key(const TextPipeline& pipeline, std::string_view query, PublicationCategory category) {
  CacheKey key;
  key.category = category;
  for (const auto& t : pipeline.normalized_tokens(query)) {
    if (!key.normalized_query.empty()) key.normalized_query.push_back(' ');
    key.normalized_query += t;
  }
  return key;
}

std::vector<ScoredResult> rank_query(const SearchSnapshot& snapshot, std::string_view query,
                                     PublicationCategory category, const BoostTable& boosts, int current_year) {
  const auto& lexicon = snapshot.lexicon();
  const auto tokens = snapshot.pipeline().normalized_tokens(query);
  if (tokens.empty()) throw EmptyQueryError();

  // Closed lexicon: unknown tokens drop out of the query.
  std::vector<Tid> query_tids;
  for (const auto& t : tokens) {
    if (auto tid = lexicon.find(t)) query_tids.push_back(*tid);
  }
  if (query_tids.empty()) return {};
  std::vector<Tid> required(query_tids);
  std::sort(required.begin(), required.end());
  required.erase(std::unique(required.begin(), required.end()), required.end());

  const auto query_vector = embed_weighted(query_tids, snapshot.matrix(), lexicon);
  const Tid rarest = rarest_token(required, lexicon);

  std::vector<Candidate> candidates;
  for (Pmid pmid : snapshot.index().lookup(rarest)) {
    if (!contains_all(snapshot.index().terms_of(pmid), required)) continue;
    const auto* doc = snapshot.corpus().find(pmid);
    const auto* features = snapshot.features(pmid);
    if (!doc || !features) continue;
    const auto& rec = doc->record;
    if (!is_english(rec.language) || rec.is_erratum || rec.is_retracted) continue;
    if (rec.pub_date.year < kMinPublicationYear) continue;
    if (categorize(rec.pub_types) != category) continue;

    Candidate c;
    c.pmid = pmid;
    c.pub_year = rec.pub_date.year;
    c.raw.semantic = cosine(query_vector, features->title_vector);
    c.raw.title_count = contains_all(features->title_terms, required) ? 1.0 : 0.0;
    c.raw.date = date_score(rec.pub_date);
    c.raw.journal = doc->jif;
    candidates.push_back(c);
  }

  return top_k(score_category(candidates, category, boosts[category], current_year));
}

SearchResponse execute_search(const SearchRequest& request, const SearchSnapshot& snapshot,
                              const SearchOptions& options, ResultCache* cache) {
  if (request.page < 1) throw InputError("page must be >= 1");
  const auto key = make_cache_key(snapshot.pipeline(), request.query, request.category);
  if (key.normalized_query.empty()) throw EmptyQueryError();

  // The age penalty depends on the year, so entries expire with it too.
  const int year = options.current_year.value_or(current_calendar_year());
  const std::string version = snapshot.version() + "/" + std::to_string(year);

  std::optional<CacheEntry> entry;
  if (cache) entry = cache->get(key, version);
  if (!entry) {
    CacheEntry fresh;
    fresh.snapshot_version = version;
    fresh.created = std::chrono::system_clock::now();
    for (const auto& r : rank_query(snapshot, request.query, request.category, options.boosts, year)) {
      fresh.results.push_back({r.pmid, r.relevance});
    }
    if (cache) cache->put(key, fresh);
    entry = std::move(fresh);
  }

  SearchResponse response;
  response.total_cached = entry->results.size();
  response.page = request.page;
  response.page_size = options.page_size;
  for (const auto& hit : paginate<CachedResult>(entry->results, request.page, options.page_size)) {
    const auto* doc = snapshot.corpus().find(hit.pmid);
    if (!doc) continue;
    const auto& rec = doc->record;
    response.results.push_back({rec.pmid, rec.title, rec.abstract, rec.authors, rec.journal_iso_abbrev,
                                rec.pub_date.year, hit.relevance});
  }
  return response;
}

SearchService::SearchService(std::shared_ptr<const SearchSnapshot> snapshot, SearchOptions options)
    : snapshot_(std::move(snapshot)), options_(std::move(options)) {}

void SearchService::publish(std::shared_ptr<const SearchSnapshot> snapshot) {
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(snapshot);
}

std::shared_ptr<const SearchSnapshot> SearchService::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

SearchResponse SearchService::search(const SearchRequest& request) {
  const auto snap = snapshot();
  return execute_search(request, *snap, options_, &cache_);
}

}  // namespace medsearch
