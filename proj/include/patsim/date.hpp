#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace patsim {

struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;

  /// ISO-8601 calendar date, "YYYY-MM-DD".
  std::string iso() const;
};

/// Parses "YYYY-MM-DD"; a trailing time part ("T..." or " ...") is ignored.
/// Returns nullopt for anything that is not a valid calendar date.
std::optional<Date> parse_iso_date(std::string_view text);

}  // namespace patsim
