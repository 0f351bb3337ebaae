#include "medsearch/date.h"

#include <algorithm>
#include <chrono>

namespace medsearch {

std::optional<std::string> validate(const PartialDate& date) {
  if (date.year < kMinYear || date.year > kMaxYear) return "year out of range: " + std::to_string(date.year);
  if (date.month && (*date.month < 1 || *date.month > 12)) return "month out of range";
  if (date.day && !date.month) return "day without month";
  if (date.day && (*date.day < 1 || *date.day > 31)) return "day out of range";
  return std::nullopt;
}

long days_since_1990(const PartialDate& date) {
  using namespace std::chrono;
  const auto y = year{date.year};
  const auto m = month{static_cast<unsigned>(date.month.value_or(7))};
  const unsigned month_end = static_cast<unsigned>(year_month_day_last{y, month_day_last{m}}.day());
  const auto d = day{std::min(static_cast<unsigned>(date.day.value_or(15)), month_end)};
  const sys_days estimated{y / m / d};
  const sys_days epoch{year{1990} / January / 1};
  return (estimated - epoch).count();
}

}  // namespace medsearch
