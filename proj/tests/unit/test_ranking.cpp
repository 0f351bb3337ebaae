#include <random>

#include "doctest.h"
#include "medsearch/errors.h"
#include "medsearch/ranking.h"
#include "oracle/reference.h"
#include "support/fixtures.h"

using namespace medsearch;
using PC = PublicationCategory;

namespace {

Candidate candidate(Pmid pmid, double semantic, double count, double date, double jif, int year) {
  return {pmid, {semantic, count, date, jif}, year};
}

std::vector<Candidate> random_candidates(std::size_t n, std::mt19937_64& rng, double zero_rate = 0.0) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < n; ++i) {
    Candidate c = candidate(static_cast<Pmid>(100 + i * 3), u(rng) * 2 - 1, 1.0, 1 + u(rng) * 12000,
                            0.1 + u(rng) * 60, 1990 + static_cast<int>(rng() % 35));
    if (u(rng) < zero_rate) {
      switch (rng() % 4) {
        case 0: c.raw.semantic = 0; break;
        case 1: c.raw.title_count = 0; break;
        case 2: c.raw.date = 0; break;
        default: c.raw.journal = 0;
      }
    }
    out.push_back(c);
  }
  return out;
}

std::vector<oracle::RawRow> rows_of(std::span<const Candidate> cs) {
  std::vector<oracle::RawRow> rows;
  for (const auto& c : cs) {
    oracle::RawRow r;
    r.pmid = c.pmid;
    r.raw[0] = c.raw.semantic;
    r.raw[1] = c.raw.title_count;
    r.raw[2] = c.raw.date;
    r.raw[3] = c.raw.journal;
    r.year = c.pub_year;
    rows.push_back(r);
  }
  return rows;
}

double relevance_of(const std::vector<ScoredResult>& results, Pmid pmid) {
  for (const auto& r : results) {
    if (r.pmid == pmid) return r.relevance;
  }
  FAIL("pmid missing from results");
  return 0;
}

std::size_t rank_of(const std::vector<ScoredResult>& results, Pmid pmid) {
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].pmid == pmid) return i;
  }
  FAIL("pmid missing from results");
  return 0;
}

}  // namespace

TEST_CASE("category names") {
  for (auto c : kAllCategories) CHECK(parse_category(to_string(c)) == c);
  CHECK(parse_category("Guidelines") == PC::Guidelines);
  CHECK_FALSE(parse_category("letters").has_value());
}

TEST_CASE("categorize") {
  CHECK(categorize({"Practice Guideline", "Journal Article"}) == PC::Guidelines);
  CHECK(categorize({"Review"}) == PC::Reviews);
  CHECK(categorize({"Randomized Controlled Trial"}) == PC::Studies);
  CHECK(categorize({"Systematic Review", "Meta-Analysis"}) == PC::Reviews);
  CHECK(categorize({"Review", "Guideline"}) == PC::Guidelines);
  CHECK(categorize({"Consensus Development Conference"}) == PC::Guidelines);
  CHECK(categorize({"Consensus Development Conference, NIH"}) == PC::Guidelines);
  CHECK(categorize({"Journal Article"}) == PC::Studies);
}

TEST_CASE("default boosts") {
  CHECK(default_boosts(PC::Reviews) == BoostingFactors{4, 3, 1, 2});
  CHECK(default_boosts(PC::Guidelines) == BoostingFactors{6, 8, 1, 4});
  CHECK(default_boosts(PC::Studies) == BoostingFactors{3, 5, 1, 1});
  const BoostTable table;
  for (auto c : kAllCategories) CHECK(table[c] == default_boosts(c));
}

TEST_CASE("boost table configuration") {
  const auto t = BoostTable::parse("# category,cosine,count,date,journal\nstudies, 1, 2, 3, 4.5\n");
  CHECK(t[PC::Studies] == BoostingFactors{1, 2, 3, 4.5});
  CHECK(t[PC::Reviews] == default_boosts(PC::Reviews));
  CHECK_THROWS_AS(BoostTable::parse("studies,1,2,3,0\n"), ConfigError);
  CHECK_THROWS_AS(BoostTable::parse("studies,1,2,3\n"), ConfigError);
  CHECK_THROWS_AS(BoostTable::parse("letters,1,2,3,4\n"), ConfigError);
  CHECK_THROWS_AS(BoostTable::parse("studies,1,2,3,4\nstudies,1,2,3,4\n"), ConfigError);
  CHECK_THROWS_AS(BoostTable::parse("studies,1,x,3,4\n"), ConfigError);
  BoostTable table;
  CHECK_THROWS_AS(table.set(PC::Reviews, {1, -1, 1, 1}), ConfigError);
  CHECK_THROWS_AS(BoostTable::load("/nonexistent/boosts.csv"), ConfigError);
}

TEST_CASE("min-max normalization") {
  CHECK(min_max_normalize(std::vector<double>{0, 5, 10}) == std::vector<double>{0, 0.5, 1});
  CHECK(min_max_normalize(std::vector<double>{7, 7, 7}) == std::vector<double>{1, 1, 1});
  CHECK(min_max_normalize(std::vector<double>{3}) == std::vector<double>{1});
  CHECK(min_max_normalize(std::vector<double>{-1, 1}) == std::vector<double>{0, 1});
}

TEST_CASE("top_k") {
  std::vector<int> many(700);
  CHECK(top_k(many).size() == 500);
  CHECK(top_k(std::vector<int>(12)).size() == 12);
  CHECK(top_k(std::vector<int>{}).empty());
}

TEST_CASE("any zero raw subscore zeroes relevance") {
  const auto boosts = default_boosts(PC::Reviews);
  const std::vector<Candidate> cs = {
      candidate(1, 0.9, 1, 9000, 0.0, 2015),  // unranked journal
      candidate(2, 0.9, 0, 9000, 30.0, 2015),
      candidate(3, 0.0, 1, 9000, 30.0, 2015),
      candidate(4, 0.9, 1, 0.0, 30.0, 2015),
      candidate(5, 0.5, 1, 8000, 10.0, 2015),
      candidate(6, 0.1, 1, 100, 1.0, 2015),
  };
  const auto results = score_category(cs, PC::Reviews, boosts, 2020);
  for (Pmid p : {1, 2, 3, 4}) CHECK(relevance_of(results, p) == 0.0);
  CHECK(relevance_of(results, 5) > 0.0);
  CHECK(relevance_of(results, 6) > 0.0);
  // Zeroed candidates stay out of the pools: 5 and 6 span every range alone.
  CHECK(relevance_of(results, 5) == 4.0 + 3.0 + 1.0 + 2.0);
  CHECK(relevance_of(results, 6) == 3.0);
  CHECK(results[0].pmid == 5);
  CHECK(results[1].pmid == 6);
}

TEST_CASE("zero-rule candidates never outrank positive ones") {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 200; ++round) {
    const auto cs = random_candidates(1 + rng() % 40, rng, 0.3);
    const auto results = score_category(cs, PC::Studies, default_boosts(PC::Studies), 2024);
    bool seen_zero = false;
    for (const auto& r : results) {
      if (r.raw.any_zero()) {
        CHECK(r.relevance == 0.0);
        seen_zero = true;
      } else {
        CHECK(r.relevance > 0.0);
        CHECK_FALSE(seen_zero);
      }
    }
  }
}

TEST_CASE("age penalty is exactly a tenth and starts after twenty years") {
  const auto boosts = default_boosts(PC::Reviews);
  SUBCASE("1995 versus 2017 in 2019") {
    const std::vector<Candidate> cs = {candidate(1, 0.5, 1, 5000, 10, 1995), candidate(2, 0.5, 1, 5000, 10, 2017)};
    const auto results = score_category(cs, PC::Reviews, boosts, 2019);
    CHECK(relevance_of(results, 1) == 0.1 * relevance_of(results, 2));
  }
  SUBCASE("boundary") {
    const std::vector<Candidate> cs = {candidate(1, 0.5, 1, 5000, 10, 1999), candidate(2, 0.5, 1, 5000, 10, 1998),
                                       candidate(3, 0.5, 1, 5000, 10, 2019)};
    const auto results = score_category(cs, PC::Reviews, boosts, 2019);
    CHECK(relevance_of(results, 1) == relevance_of(results, 3));
    CHECK(relevance_of(results, 2) == 0.1 * relevance_of(results, 3));
  }
}

TEST_CASE("ties go to the larger PMID") {
  const std::vector<Candidate> cs = {candidate(10, 0.5, 1, 5000, 10, 2015), candidate(30, 0.5, 1, 5000, 10, 2015),
                                     candidate(20, 0.5, 1, 5000, 10, 2015)};
  const auto results = score_category(cs, PC::Studies, default_boosts(PC::Studies), 2020);
  CHECK(results[0].pmid == 30);
  CHECK(results[1].pmid == 20);
  CHECK(results[2].pmid == 10);
}

TEST_CASE("score_category matches the reference scorer") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 300; ++round) {
    const auto category = kAllCategories[rng() % 3];
    const auto cs = random_candidates(1 + rng() % 60, rng, 0.15);
    const auto results = score_category(cs, category, default_boosts(category), 2024);
    const auto expected =
        oracle::rank_rows(rows_of(cs), oracle::table_boosts(std::string(to_string(category))), 2024);
    REQUIRE(results.size() == expected.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
      CHECK(results[i].pmid == expected[i].pmid);
      CHECK(std::abs(results[i].relevance - expected[i].relevance) <= 1e-9);
      for (double n : results[i].normalized) {
        CHECK(n >= 0.0);
        CHECK(n <= 1.0);
      }
    }
  }
}

TEST_CASE("raising one raw subscore never lowers that candidate's rank") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 1);
  for (int round = 0; round < 300; ++round) {
    auto cs = random_candidates(2 + rng() % 30, rng, 0.1);
    const auto category = kAllCategories[rng() % 3];
    const auto boosts = default_boosts(category);
    const auto target = rng() % cs.size();
    const auto before = rank_of(score_category(cs, category, boosts, 2024), cs[target].pmid);
    auto& raw = cs[target].raw;
    switch (rng() % 3) {
      case 0: raw.semantic += u(rng) * (1 - raw.semantic); break;
      case 1: raw.date += u(rng) * 3000; break;
      default: raw.journal += u(rng) * 20;
    }
    const auto after = rank_of(score_category(cs, category, boosts, 2024), cs[target].pmid);
    CHECK(after <= before);
  }
}

TEST_CASE("scaling every JIF keeps the order") {
  std::mt19937_64 rng(14);
  for (int round = 0; round < 100; ++round) {
    auto cs = random_candidates(2 + rng() % 50, rng, 0.1);
    const auto base = score_category(cs, PC::Guidelines, default_boosts(PC::Guidelines), 2024);
    const double alpha = std::exp(std::uniform_real_distribution<double>(-3, 3)(rng));
    for (auto& c : cs) c.raw.journal *= alpha;
    const auto scaled = score_category(cs, PC::Guidelines, default_boosts(PC::Guidelines), 2024);
    REQUIRE(base.size() == scaled.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(base[i].relevance == doctest::Approx(scaled[i].relevance).epsilon(1e-12));
      if (i + 1 < base.size() && std::abs(base[i].relevance - base[i + 1].relevance) > 1e-9) {
        CHECK(base[i].pmid == scaled[i].pmid);
      }
    }
  }
}

TEST_CASE("empty candidate list") {
  CHECK(score_category({}, PC::Reviews, default_boosts(PC::Reviews), 2024).empty());
}
