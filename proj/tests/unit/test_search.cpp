#include <random>
#include <set>

#include "doctest.h"
#include "medsearch/errors.h"
#include "medsearch/search.h"
#include "support/fixtures.h"
#include "support/reference_adapter.h"

using namespace medsearch;
using testing::make_document;
using PC = PublicationCategory;

namespace {

constexpr int kYear = 2024;

std::shared_ptr<const SearchSnapshot> small_snapshot() {
  const std::set<std::string> review = {"Review"};
  testing::SyntheticCorpus corpus;
  corpus.journals = {{"Test Journal", "Test J", true, 5.0}};
  corpus.documents = {
      make_document(1, "Thrombolysis in acute stroke", "", {2015, 3, 2}, review, 5.0),
      make_document(2, "Thrombolysis outcomes", "stroke units", {2010, std::nullopt, std::nullopt}, review, 5.0),
      make_document(3, "Stroke rehabilitation", "thrombolysis was not used", {2019, 6, 1}, review, 5.0),
      make_document(4, "Carotid stenting", "stroke prevention", {2008, 1, 9}, review, 5.0),
      make_document(5, "Atrial fibrillation", "anticoagulation", {2012, 2, 2}, review, 5.0),
      make_document(6, "Heart failure", "", {2001, 5, 5}, review, 5.0),
      make_document(7, "Statins", "", {2003, 7, 7}, {"Journal Article"}, 5.0),
      make_document(8, "Hypertension", "", {2004, 8, 8}, {"Practice Guideline"}, 5.0),
      make_document(9, "Diabetes", "", {2005, 9, 9}, review, 5.0),
      make_document(10, "Obesity", "", {2006, 10, 10}, review, 5.0),
  };
  return testing::make_snapshot(testing::make_store(corpus), 8, 1);
}

std::vector<std::pair<Pmid, double>> pairs(const std::vector<ScoredResult>& rs) {
  std::vector<std::pair<Pmid, double>> out;
  for (const auto& r : rs) out.emplace_back(r.pmid, r.relevance);
  return out;
}

std::set<Pmid> pmids(const std::vector<ScoredResult>& rs) {
  std::set<Pmid> out;
  for (const auto& r : rs) out.insert(r.pmid);
  return out;
}

}  // namespace

TEST_CASE("pagination") {
  std::vector<int> items(25);
  for (int i = 0; i < 25; ++i) items[static_cast<std::size_t>(i)] = i;
  CHECK(paginate<int>(items, 1).front() == 0);
  CHECK(paginate<int>(items, 1).size() == 10);
  CHECK(paginate<int>(items, 3) == std::vector<int>{20, 21, 22, 23, 24});
  CHECK(paginate<int>(items, 4).empty());
  CHECK(paginate<int>(items, 2, 7) == std::vector<int>{7, 8, 9, 10, 11, 12, 13});
  CHECK_THROWS_AS(paginate<int>(items, 0), InputError);
  CHECK_THROWS_AS(paginate<int>(items, -1), InputError);
}

TEST_CASE("single-token query over a hand-built corpus") {
  const auto snap = small_snapshot();
  const auto got = rank_query(*snap, "thrombolysis", PC::Reviews, BoostTable(), kYear);
  CHECK(pmids(got) == std::set<Pmid>{1, 2, 3});
  for (std::size_t i = 1; i < got.size(); ++i) CHECK(got[i - 1].relevance >= got[i].relevance);
  // document 3 mentions the token only in its abstract
  CHECK(got.back().pmid == 3);
  CHECK(got.back().relevance == 0.0);

  const auto reference = testing::reference_for(*snap);
  const auto expected = reference->search("thrombolysis", "reviews", kYear);
  REQUIRE(expected.has_value());
  CHECK(testing::compare_ranked(pairs(got), *expected, 1e-9) == "");
}

TEST_CASE("query semantics") {
  const auto snap = small_snapshot();
  SUBCASE("unknown token yields nothing") {
    CHECK(rank_query(*snap, "zebrafish", PC::Reviews, BoostTable(), kYear).empty());
  }
  SUBCASE("every token must be present") {
    const auto got = rank_query(*snap, "thrombolysis stroke", PC::Reviews, BoostTable(), kYear);
    CHECK(pmids(got) == std::set<Pmid>{1, 2, 3});
    const auto narrower = rank_query(*snap, "stroke units", PC::Reviews, BoostTable(), kYear);
    CHECK(pmids(narrower) == std::set<Pmid>{2});
  }
  SUBCASE("stopword-only query is an empty-query error") {
    CHECK_THROWS_AS(rank_query(*snap, "the of and", PC::Reviews, BoostTable(), kYear), EmptyQueryError);
    CHECK_THROWS_AS(rank_query(*snap, "  ", PC::Reviews, BoostTable(), kYear), EmptyQueryError);
  }
  SUBCASE("categories partition results") {
    CHECK(pmids(rank_query(*snap, "statins", PC::Studies, BoostTable(), kYear)) == std::set<Pmid>{7});
    CHECK(rank_query(*snap, "statins", PC::Reviews, BoostTable(), kYear).empty());
    CHECK(pmids(rank_query(*snap, "hypertension", PC::Guidelines, BoostTable(), kYear)) == std::set<Pmid>{8});
  }
}

TEST_CASE("documents failing a filter never appear") {
  const std::set<std::string> review = {"Review"};
  testing::SyntheticCorpus corpus;
  corpus.journals = {{"Test Journal", "Test J", true, 5.0}};
  corpus.documents = {make_document(1, "sepsis bundle", "", {2015, 1, 5}, review, 5.0),
                      make_document(2, "sepsis bundle", "", {1989, 12, 31}, review, 5.0),
                      make_document(3, "sepsis bundle", "", {2015, 1, 5}, review, 5.0),
                      make_document(4, "sepsis bundle", "", {2015, 1, 5}, review, 5.0),
                      make_document(5, "sepsis bundle", "", {2015, 1, 5}, review, 5.0),
                      make_document(6, "sepsis bundle", "", {1990, 1, 1}, review, 5.0),
                      make_document(7, "sepsis bundle", "", {2015, 1, 5}, review, 5.0),
                      make_document(8, "renal failure", "", {2015, 1, 5}, review, 5.0),
                      make_document(9, "renal transplant", "", {2016, 1, 5}, review, 5.0)};
  corpus.documents[2].record.language = "fre";
  corpus.documents[3].record.is_erratum = true;
  corpus.documents[4].record.is_retracted = true;
  corpus.documents[6].record.language = "ENG";
  const auto snap = testing::make_snapshot(testing::make_store(corpus), 8, 2);
  const auto got = rank_query(*snap, "sepsis", PC::Reviews, BoostTable(), kYear);
  // 1990-01-01 passes the year filter but its zero date score zeroes its relevance.
  CHECK(pmids(got) == std::set<Pmid>{1, 6, 7});
  CHECK(got.back().pmid == 6);
  CHECK(got.back().relevance == 0.0);
}

TEST_CASE("execute_search matches the reference on random corpora") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 4; ++round) {
    const auto corpus = testing::make_corpus({.documents = 400}, rng());
    const auto snap = testing::make_snapshot(testing::make_store(corpus), 12, rng());
    const auto reference = testing::reference_for(*snap);
    for (int q = 0; q < 40; ++q) {
      const auto query = testing::random_query(corpus, rng);
      const auto category = kAllCategories[rng() % 3];
      const auto expected = reference->search(query, std::string(to_string(category)), kYear);
      if (!expected) {
        CHECK_THROWS_AS(rank_query(*snap, query, category, BoostTable(), kYear), EmptyQueryError);
        continue;
      }
      const auto got = rank_query(*snap, query, category, BoostTable(), kYear);
      INFO("query: " << query);
      CHECK(testing::compare_ranked(pairs(got), *expected, 1e-9) == "");
    }
  }
}

TEST_CASE("responses carry display fields from the corpus") {
  const auto snap = small_snapshot();
  SearchOptions options;
  options.current_year = kYear;
  const auto resp = execute_search({"thrombolysis", PC::Reviews, 1}, *snap, options);
  CHECK(resp.total_cached == 3);
  CHECK(resp.page == 1);
  CHECK(resp.page_size == 10);
  REQUIRE(resp.results.size() == 3);
  const auto& top = resp.results[0];
  const auto* doc = snap->corpus().find(top.pmid);
  REQUIRE(doc);
  CHECK(top.title == doc->record.title);
  CHECK(top.journal_iso_abbrev == doc->record.journal_iso_abbrev);
  CHECK(top.year == doc->record.pub_date.year);
  CHECK(top.author_abbrevs == doc->record.authors);

  CHECK(execute_search({"thrombolysis", PC::Reviews, 2}, *snap, options).results.empty());
  CHECK_THROWS_AS(execute_search({"thrombolysis", PC::Reviews, 0}, *snap, options), InputError);
  CHECK_THROWS_AS(execute_search({"the", PC::Reviews, 1}, *snap, options), EmptyQueryError);
  const auto none = execute_search({"zebrafish", PC::Reviews, 1}, *snap, options);
  CHECK(none.total_cached == 0);
  CHECK(none.results.empty());
}

TEST_CASE("pages concatenate to the ranked list") {
  const auto corpus = testing::make_corpus({.documents = 3000, .vocabulary = 40}, 5);
  const auto snap = testing::make_snapshot(testing::make_store(corpus), 8, 5);
  SearchOptions options;
  options.current_year = kYear;
  options.page_size = 7;
  ResultCache cache;
  for (const char* q : {"w0", "w1", "w0 w2"}) {
    for (auto category : kAllCategories) {
      const auto ranked = rank_query(*snap, q, category, options.boosts, kYear);
      std::vector<std::pair<Pmid, double>> pages;
      for (int page = 1;; ++page) {
        const auto resp = execute_search({q, category, page}, *snap, options, &cache);
        CHECK(resp.total_cached == ranked.size());
        if (resp.results.empty()) break;
        CHECK(resp.results.size() <= options.page_size);
        for (const auto& r : resp.results) pages.emplace_back(r.pmid, r.relevance);
      }
      CHECK(pages == pairs(ranked));
    }
  }
  CHECK(rank_query(*snap, "w0", PC::Studies, options.boosts, kYear).size() == kTopK);
}

TEST_CASE("cache keys follow the text pipeline") {
  TextPipeline pipeline;
  CHECK(make_cache_key(pipeline, "Stroke", PC::Reviews) == make_cache_key(pipeline, "stroke", PC::Reviews));
  CHECK(make_cache_key(pipeline, "  the stroke. ", PC::Reviews) == make_cache_key(pipeline, "stroke", PC::Reviews));
  CHECK_FALSE(make_cache_key(pipeline, "stroke", PC::Reviews) == make_cache_key(pipeline, "stroke", PC::Studies));
  CHECK_FALSE(make_cache_key(pipeline, "WHO", PC::Reviews) == make_cache_key(pipeline, "who", PC::Reviews));
}

TEST_CASE("result cache") {
  ResultCache cache;
  const CacheKey key{"stroke", PC::Reviews};
  CacheEntry entry{"v1", {{3, 2.5}, {1, 1.0}}, std::chrono::system_clock::now()};
  cache.put(key, entry);
  const auto hit = cache.get(key, "v1");
  REQUIRE(hit.has_value());
  CHECK(hit->results == entry.results);
  CHECK_FALSE(cache.get(key, "v2").has_value());
  CHECK_FALSE(cache.get({"stroke", PC::Studies}, "v1").has_value());
  cache.put(key, {"v1", {{9, 1.0}}, std::chrono::system_clock::now()});
  CHECK(cache.get(key, "v1")->results == std::vector<CachedResult>{{9, 1.0}});
  CHECK(cache.size() == 1);
  cache.clear();
  CHECK(cache.size() == 0);
}

TEST_CASE("warm and cold responses are identical") {
  const auto corpus = testing::make_corpus({.documents = 600}, 6);
  const auto snap = testing::make_snapshot(testing::make_store(corpus), 8, 6);
  SearchOptions options;
  options.current_year = kYear;
  ResultCache cache;
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    const SearchRequest req{testing::random_query(corpus, rng), kAllCategories[rng() % 3], 1 + int(rng() % 3)};
    try {
      const auto cold = execute_search(req, *snap, options);
      CHECK(execute_search(req, *snap, options, &cache) == cold);
      CHECK(execute_search(req, *snap, options, &cache) == cold);
    } catch (const EmptyQueryError&) {
    }
  }
  CHECK(cache.size() > 0);
}

TEST_CASE("publishing a new snapshot invalidates cached lists") {
  auto corpus = testing::make_corpus({.documents = 300}, 8);
  SearchOptions options;
  options.current_year = kYear;
  SearchService service(testing::make_snapshot(testing::make_store(corpus), 8, 8), options);
  const SearchRequest req{"w0", PC::Studies, 1};
  const auto before = service.search(req);
  const auto old_version = service.snapshot()->version();

  // A new document that dominates every dimension for the query.
  auto doc = make_document(999999, "w0", "", {2024, 1, 1}, {"Journal Article"}, 1000.0,
                           corpus.journals.front().journal_name);
  corpus.journals.front().jif = 1000.0;
  corpus.documents.push_back(doc);
  service.publish(testing::make_snapshot(testing::make_store(corpus), 8, 8));
  CHECK(service.snapshot()->version() != old_version);
  const auto after = service.search(req);
  CHECK(after.total_cached == before.total_cached + 1);
  const auto ranked = rank_query(*service.snapshot(), "w0", PC::Studies, options.boosts, kYear);
  CHECK(std::any_of(ranked.begin(), ranked.end(), [](const ScoredResult& r) { return r.pmid == 999999; }));
}

TEST_CASE("snapshot version is a content fingerprint") {
  const auto corpus = testing::make_corpus({.documents = 100}, 10);
  const auto store = testing::make_store(corpus);
  const auto a = testing::make_snapshot(store, 8, 1);
  const auto b = testing::make_snapshot(store, 8, 1);
  const auto c = testing::make_snapshot(store, 8, 2);
  CHECK(a->version() == b->version());
  CHECK(a->version() != c->version());
  CHECK(a->version().size() == 16);
}
