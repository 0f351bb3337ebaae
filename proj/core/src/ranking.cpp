#include "medsearch/ranking.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "binary_io.h"
#include "medsearch/errors.h"

namespace medsearch {

std::string_view to_string(PublicationCategory category) {
  switch (category) {
    case PublicationCategory::Reviews: return "reviews";
    case PublicationCategory::Guidelines: return "guidelines";
    case PublicationCategory::Studies: return "studies";
  }
  return "studies";
}

std::optional<PublicationCategory> parse_category(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto c : kAllCategories) {
    if (to_string(c) == lower) return c;
  }
  return std::nullopt;
}

PublicationCategory categorize(const std::set<std::string>& pub_types) {
  static const std::set<std::string> kGuidelineTypes = {"Guideline", "Practice Guideline",
                                                        "Consensus Development Conference",
                                                        "Consensus Development Conference, NIH"};
  static const std::set<std::string> kReviewTypes = {"Review", "Systematic Review"};
  auto any_of = [&](const std::set<std::string>& labels) {
    return std::any_of(pub_types.begin(), pub_types.end(), [&](const std::string& t) { return labels.contains(t); });
  };
  if (any_of(kGuidelineTypes)) return PublicationCategory::Guidelines;
  if (any_of(kReviewTypes)) return PublicationCategory::Reviews;
  return PublicationCategory::Studies;
}

BoostingFactors default_boosts(PublicationCategory category) {
  switch (category) {
    case PublicationCategory::Reviews: return {4.0, 3.0, 1.0, 2.0};
    case PublicationCategory::Guidelines: return {6.0, 8.0, 1.0, 4.0};
    case PublicationCategory::Studies: return {3.0, 5.0, 1.0, 1.0};
  }
  return {3.0, 5.0, 1.0, 1.0};
}

BoostTable::BoostTable() {
  for (auto c : kAllCategories) factors_[static_cast<std::size_t>(c)] = default_boosts(c);
}

void BoostTable::set(PublicationCategory c, const BoostingFactors& f) {
  for (double v : {f.title_cosine, f.title_count, f.date, f.journal}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError("boosting factors for " + std::string(to_string(c)) + " must be finite and > 0");
    }
  }
  factors_[static_cast<std::size_t>(c)] = f;
}

BoostTable BoostTable::parse(std::string_view text) {
  BoostTable table;
  std::set<PublicationCategory> seen;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<std::string> fields(1);
    for (char c : line) {
      if (c == ',') fields.emplace_back();
      else if (!std::isspace(static_cast<unsigned char>(c))) fields.back().push_back(c);
    }
    if (fields.size() == 1 && fields[0].empty()) continue;
    const auto where = "boost file line " + std::to_string(line_no);
    if (fields.size() != 5) throw ConfigError(where + ": expected category and four factors");
    const auto category = parse_category(fields[0]);
    if (!category) throw ConfigError(where + ": unknown category '" + fields[0] + "'");
    if (!seen.insert(*category).second) throw ConfigError(where + ": duplicate category '" + fields[0] + "'");
    std::array<double, 4> v{};
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& f = fields[i + 1];
      const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v[i]);
      if (ec != std::errc() || p != f.data() + f.size()) throw ConfigError(where + ": bad number '" + f + "'");
    }
    table.set(*category, {v[0], v[1], v[2], v[3]});
  }
  return table;
}

BoostTable BoostTable::load(const std::filesystem::path& path) {
  try {
    return parse(detail::read_file(path));
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
}

double date_score(const PartialDate& pub_date) { return static_cast<double>(days_since_1990(pub_date)); }

std::vector<double> min_max_normalize(std::span<const double> values) {
  if (values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo, max = *hi;
  std::vector<double> out(values.size(), 1.0);
  if (max == min) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - min) / (max - min);
  return out;
}

std::vector<ScoredResult> score_category(std::span<const Candidate> candidates, PublicationCategory category,
                                         const BoostingFactors& boosts, int current_year) {
  std::vector<ScoredResult> results;
  results.reserve(candidates.size());
  std::vector<std::size_t> survivors;
  for (const auto& c : candidates) {
    ScoredResult r;
    r.pmid = c.pmid;
    r.category = category;
    r.raw = c.raw;
    r.pub_year = c.pub_year;
    if (!c.raw.any_zero()) survivors.push_back(results.size());
    results.push_back(r);
  }

  if (!survivors.empty()) {
    const std::array<double RawSubscores::*, 4> dims = {&RawSubscores::semantic, &RawSubscores::title_count,
                                                        &RawSubscores::date, &RawSubscores::journal};
    std::vector<double> pool(survivors.size());
    for (std::size_t d = 0; d < dims.size(); ++d) {
      for (std::size_t i = 0; i < survivors.size(); ++i) pool[i] = results[survivors[i]].raw.*dims[d];
      const auto norm = min_max_normalize(pool);
      for (std::size_t i = 0; i < survivors.size(); ++i) results[survivors[i]].normalized[d] = norm[i];
    }
    for (std::size_t idx : survivors) {
      auto& r = results[idx];
      double relevance = boosts.title_cosine * r.normalized[0] + boosts.title_count * r.normalized[1] +
                         boosts.date * r.normalized[2] + boosts.journal * r.normalized[3];
      if (current_year - r.pub_year > kPenaltyAgeYears) relevance *= kAgePenalty;
      r.relevance = relevance;
    }
  }

  std::sort(results.begin(), results.end(), [](const ScoredResult& a, const ScoredResult& b) {
    if (a.relevance != b.relevance) return a.relevance > b.relevance;
    return a.pmid > b.pmid;
  });
  return results;
}

}  // namespace medsearch
