#pragma once

#include <optional>
#include <string>

namespace medsearch {

/// Publication date as MEDLINE records it: year always, month and day sometimes.
struct PartialDate {
  int year = 0;
  std::optional<int> month;  // 1-12
  std::optional<int> day;    // 1-31, only with month

  bool operator==(const PartialDate&) const = default;
};

constexpr int kMinYear = 1800;
constexpr int kMaxYear = 2100;

/// Checks the PartialDate invariants; returns an explanation when violated.
std::optional<std::string> validate(const PartialDate& date);

/// Days from 1990-01-01 to the estimated date. A missing month is taken as
/// July and a missing day as the 15th; out-of-range days clamp to month end.
long days_since_1990(const PartialDate& date);

}  // namespace medsearch
