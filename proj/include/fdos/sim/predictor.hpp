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

// Per-ONU arrival streams with look-ahead, and the two buffer fill-up time
// predictors (exact trace look-ahead and an exponentially weighted rate).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>

#include "fdos/traffic.hpp"

namespace fdos::sim {

// Lazily generated arrival sequence; arrivals can be inspected before they
// are consumed.
class ArrivalStream {
 public:
  ArrivalStream() = default;  // no traffic
  ArrivalStream(const TrafficConfig& cfg, std::uint64_t stream) : gen_(std::in_place, cfg, stream) {}

  bool has_traffic() const { return gen_.has_value(); }

  const Arrival* peek(std::size_t k) {
    if (!gen_) return nullptr;
    while (ahead_.size() <= k) ahead_.push_back(gen_->next_arrival());
    return &ahead_[k];
  }

  Arrival pop() {
    peek(0);
    Arrival a = ahead_.front();
    ahead_.pop_front();
    return a;
  }

 private:
  std::optional<TrafficGenerator> gen_;
  std::deque<Arrival> ahead_;
};

// Time until the backlog reaches `threshold_bytes` with no service, read off
// the future arrivals; capped at `horizon`.
inline Duration oracle_fill_time(ArrivalStream& s, TimePoint now, std::int64_t queue_bytes,
                                 std::int64_t threshold_bytes, Duration horizon) {
  if (queue_bytes >= threshold_bytes) return kZero;
  std::int64_t total = queue_bytes;
  for (std::size_t k = 0;; ++k) {
    const Arrival* a = s.peek(k);
    if (a == nullptr || a->time - now > horizon) return horizon;
    total += a->bytes;
    if (total >= threshold_bytes) return std::max(kZero, a->time - now);
  }
}

// Arrival-rate estimate from an exponentially decayed byte count.
class EwmaRate {
 public:
  explicit EwmaRate(Duration half_life = from_ms(10)) : half_life_ns_(static_cast<double>(half_life.count())) {}

  void observe(TimePoint t, int bytes) {
    decay_to(t);
    mass_ += bytes;
  }

  // Bytes per nanosecond at time t.
  double rate(TimePoint t) {
    decay_to(t);
    return mass_ * std::log(2.0) / half_life_ns_;
  }

 private:
  void decay_to(TimePoint t) {
    if (t > last_) {
      mass_ *= std::exp2(-static_cast<double>((t - last_).count()) / half_life_ns_);
      last_ = t;
    }
  }

  double half_life_ns_;
  double mass_ = 0.0;
  TimePoint last_{};
};

// (B_th - Q) / rate, capped at `horizon`; a zero rate predicts the horizon.
inline Duration ewma_fill_time(double queue_bits, double threshold_bits, double rate_bps, Duration horizon) {
  if (queue_bits >= threshold_bits) return kZero;
  if (!(rate_bps > 0.0)) return horizon;
  const double ns = (threshold_bits - queue_bits) / rate_bps * 1e9;
  if (ns >= static_cast<double>(horizon.count())) return horizon;
  return Duration(std::llround(ns));
}

}  // namespace fdos::sim
