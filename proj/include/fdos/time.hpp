// Copyright 2026 The fdos-pon Authors
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

#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace fdos {

// All time arithmetic is exact integer nanoseconds. Durations are signed so
// that epoch-relative offsets of past events can be negative.
using Duration = std::chrono::nanoseconds;

struct SimClock {
  using rep = std::int64_t;
  using period = std::nano;
  using duration = Duration;
  using time_point = std::chrono::time_point<SimClock, Duration>;
  static constexpr bool is_steady = true;
};

using TimePoint = SimClock::time_point;

constexpr Duration kZero{0};

inline constexpr Duration from_us(std::int64_t us) { return std::chrono::microseconds(us); }
inline constexpr Duration from_ms(std::int64_t ms) { return std::chrono::milliseconds(ms); }

inline constexpr double to_ms(Duration d) { return static_cast<double>(d.count()) / 1e6; }

// Floor and ceiling of a / b for b > 0, correct for negative numerators.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && (a > 0)) ++q;
  return q;
}

constexpr std::int64_t floor_div(Duration a, Duration b) { return floor_div(a.count(), b.count()); }
constexpr std::int64_t ceil_div(Duration a, Duration b) { return ceil_div(a.count(), b.count()); }

// Overflow-checked accumulation for objective values and weights.
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in accumulation");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in product");
  return r;
}

}  // namespace fdos
