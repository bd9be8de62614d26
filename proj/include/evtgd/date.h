// Copyright 2026 The evtgd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EVTGD_DATE_H_
#define EVTGD_DATE_H_

#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace evtgd {

// Calendar day, stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch)
      : days_(days_since_epoch) {}

  static Date FromYmd(int year, unsigned month, unsigned day);

  // Strict "YYYY-MM-DD". Returns nullopt for anything else, including
  // well-formed strings naming a day that does not exist.
  static std::optional<Date> Parse(std::string_view text);

  std::string ToString() const;
  constexpr std::int32_t days() const { return days_; }

  constexpr Date operator+(std::int32_t n) const { return Date(days_ + n); }
  constexpr Date operator-(std::int32_t n) const { return Date(days_ - n); }
  constexpr std::int32_t operator-(Date other) const {
    return days_ - other.days_;
  }

  constexpr auto operator<=>(const Date &) const = default;

 private:
  std::int32_t days_ = 0;
};

}  // namespace evtgd

#endif  // EVTGD_DATE_H_
