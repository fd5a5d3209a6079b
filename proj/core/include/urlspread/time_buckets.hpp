#ifndef URLSPREAD_TIME_BUCKETS_HPP
#define URLSPREAD_TIME_BUCKETS_HPP

#include <cstdint>
#include <string>

namespace urlspread {

// All bucketing is UTC. Weeks are anchored at Monday 00:00 UTC.
inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr std::int64_t kSecondsPerWeek = 7 * kSecondsPerDay;

// 0 = Monday .. 6 = Sunday. The epoch (1970-01-01) fell on a Thursday.
inline int day_of_week(std::int64_t unix_seconds) {
  std::int64_t day = unix_seconds / kSecondsPerDay;
  if (unix_seconds % kSecondsPerDay < 0) --day;
  return static_cast<int>((((day + 3) % 7) + 7) % 7);
}

// Unix seconds of the Monday 00:00 UTC that starts this timestamp's week.
inline std::int64_t week_start(std::int64_t unix_seconds) {
  std::int64_t day = unix_seconds / kSecondsPerDay;
  if (unix_seconds % kSecondsPerDay < 0) --day;
  const std::int64_t monday = day - day_of_week(unix_seconds);
  return monday * kSecondsPerDay;
}

inline int hour_of_day(std::int64_t unix_seconds) {
  std::int64_t s = unix_seconds % kSecondsPerDay;
  if (s < 0) s += kSecondsPerDay;
  return static_cast<int>(s / 3600);
}

// 0 = Monday 00:00 .. 167 = Sunday 23:00.
inline int hour_of_week(std::int64_t unix_seconds) {
  return day_of_week(unix_seconds) * 24 + hour_of_day(unix_seconds);
}

// "YYYY-MM-DD" for a timestamp's UTC calendar date.
std::string iso_date(std::int64_t unix_seconds);

}  // namespace urlspread

#endif
