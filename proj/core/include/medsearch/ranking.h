#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medsearch/date.h"
#include "medsearch/types.h"

namespace medsearch {

enum class PublicationCategory { Reviews = 0, Guidelines = 1, Studies = 2 };

inline constexpr std::array<PublicationCategory, 3> kAllCategories = {
    PublicationCategory::Reviews, PublicationCategory::Guidelines, PublicationCategory::Studies};

/// "reviews", "guidelines", "studies".
std::string_view to_string(PublicationCategory category);
std::optional<PublicationCategory> parse_category(std::string_view name);

/// Guidelines > Reviews > Studies precedence over MEDLINE publication types.
PublicationCategory categorize(const std::set<std::string>& pub_types);

struct BoostingFactors {
  double title_cosine = 0.0;
  double title_count = 0.0;
  double date = 0.0;
  double journal = 0.0;

  bool operator==(const BoostingFactors&) const = default;
};

/// Per-category boosts: Reviews (4,3,1,2), Guidelines (6,8,1,4), Studies (3,5,1,1).
BoostingFactors default_boosts(PublicationCategory category);

class BoostTable {
 public:
  BoostTable();
  const BoostingFactors& operator[](PublicationCategory c) const {
    return factors_[static_cast<std::size_t>(c)];
  }
  /// Throws ConfigError unless all four factors are > 0.
  void set(PublicationCategory c, const BoostingFactors& factors);

  /// CSV "category,title_cosine,title_count,date,journal"; '#' comments.
  /// Unlisted categories keep their defaults.
  static BoostTable parse(std::string_view text);
  static BoostTable load(const std::filesystem::path& path);

  bool operator==(const BoostTable&) const = default;

 private:
  std::array<BoostingFactors, 3> factors_;
};

struct RawSubscores {
  double semantic = 0.0;     // query-title cosine
  double title_count = 0.0;  // 1 iff the title holds every query token
  double date = 0.0;         // days since 1990-01-01
  double journal = 0.0;      // JIF

  bool any_zero() const { return semantic == 0.0 || title_count == 0.0 || date == 0.0 || journal == 0.0; }
};

struct Candidate {
  Pmid pmid = 0;
  RawSubscores raw;
  int pub_year = 0;
};

struct ScoredResult {
  Pmid pmid = 0;
  PublicationCategory category = PublicationCategory::Studies;
  RawSubscores raw;
  std::array<double, 4> normalized{};  // semantic, title_count, date, journal
  double relevance = 0.0;
  int pub_year = 0;
};

inline constexpr std::size_t kTopK = 500;
inline constexpr int kPenaltyAgeYears = 20;
inline constexpr double kAgePenalty = 0.1;

double date_score(const PartialDate& pub_date);

/// (x - min) / (max - min); all ones when max == min.
std::vector<double> min_max_normalize(std::span<const double> values);

/// Zero rule on raw subscores, min-max over the survivors, boosted sum, the
/// age penalty, then relevance descending with larger PMID first on ties.
std::vector<ScoredResult> score_category(std::span<const Candidate> candidates, PublicationCategory category,
                                         const BoostingFactors& boosts, int current_year);

template <typename T>
std::vector<T> top_k(std::vector<T> results, std::size_t k = kTopK) {
  if (results.size() > k) results.resize(k);
  return results;
}

}  // namespace medsearch
