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

// Self-similar upstream traffic: each ONU aggregates independent ON/OFF
// sources whose ON and OFF periods are Pareto distributed. While ON a source
// emits fixed-size packets at its peak share; the ON-time phase carries over
// between bursts so the long-run rate is exact.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "fdos/errors.hpp"
#include "fdos/rng.hpp"
#include "fdos/time.hpp"

namespace fdos {

struct TrafficConfig {
  int num_sources = 16;
  double hurst = 0.8;
  double peak_rate_bps = 100e6;   // aggregate rate with every source ON
  int packet_bytes = 1500;
  double load = 0.5;              // mean rate as a fraction of the peak rate
  std::uint64_t seed = 1;
  Duration mean_on = from_ms(10);
  std::optional<double> shape;    // Pareto alpha; default 3 - 2H
  Duration truncation = std::chrono::seconds(10);

  double alpha() const { return shape.value_or(3.0 - 2.0 * hurst); }
  double mean_rate_bps() const { return load * peak_rate_bps; }

  void validate() const {
    if (!(load > 0.0)) throw ValidationError("traffic load must be > 0");
    if (load > 1.0) throw ValidationError("traffic load must be <= 1");
    if (num_sources < 1) throw ValidationError("need at least one ON/OFF source");
    if (packet_bytes < 1) throw ValidationError("packet size must be positive");
    if (!(peak_rate_bps > 0.0)) throw ValidationError("peak rate must be positive");
    const double a = alpha();
    if (!(a > 1.0 && a < 2.0)) throw ValidationError("Pareto shape must lie in (1, 2)");
    if (mean_on <= kZero) throw ValidationError("mean ON period must be positive");
  }
};

struct Arrival {
  TimePoint time;
  int bytes;
};

// Pareto sampler whose samples are capped at `cap`; the scale is chosen so the
// mean of the capped variable equals `mean`.
class TruncatedPareto {
 public:
  TruncatedPareto(double mean_s, double alpha, double cap_s) : alpha_(alpha), cap_(cap_s) {
    if (mean_s >= cap_s) throw ValidationError("Pareto mean must be below the truncation cap");
    auto capped_mean = [&](double xm) {
      return xm * alpha / (alpha - 1.0) - std::pow(xm, alpha) * std::pow(cap_s, 1.0 - alpha) / (alpha - 1.0);
    };
    double lo = 0.0, hi = mean_s;  // capped mean is increasing in the scale on [0, cap]
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (capped_mean(mid) < mean_s ? lo : hi) = mid;
    }
    scale_ = 0.5 * (lo + hi);
  }

  double sample(CounterRng& rng) const {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    return std::min(cap_, scale_ / std::pow(u, 1.0 / alpha_));
  }

  double scale() const { return scale_; }

 private:
  double alpha_;
  double cap_;
  double scale_ = 0.0;
};

class ParetoOnOffSource {
 public:
  ParetoOnOffSource(const TrafficConfig& cfg, std::uint64_t stream)
      : rng_(cfg.seed, stream),
        on_(to_s(cfg.mean_on), cfg.alpha(), to_s(cfg.truncation)),
        off_(to_s(cfg.mean_on) * (1.0 - cfg.load) / cfg.load, cfg.alpha(), to_s(cfg.truncation)) {
    const double rate = cfg.peak_rate_bps / cfg.num_sources;
    interval_ = Duration(std::llround(cfg.packet_bytes * 8.0 * 1e9 / rate));
    // Random phase: start inside an OFF period.
    period_end_ = TimePoint(seconds(off_.sample(rng_) * rng_.uniform()));
  }

  // Time of the next packet emitted by this source.
  TimePoint next() {
    for (;;) {
      if (on_now_) {
        const TimePoint emit = cursor_ + (interval_ - credit_);
        if (emit <= period_end_) {
          credit_ = kZero;
          cursor_ = emit;
          return emit;
        }
        credit_ += period_end_ - cursor_;
        cursor_ = period_end_;
        period_end_ = cursor_ + seconds(off_.sample(rng_));
        on_now_ = false;
      } else {
        cursor_ = period_end_;
        period_end_ = cursor_ + seconds(on_.sample(rng_));
        on_now_ = true;
      }
    }
  }

 private:
  static double to_s(Duration d) { return static_cast<double>(d.count()) / 1e9; }
  static Duration seconds(double s) { return Duration(std::max<std::int64_t>(1, std::llround(s * 1e9))); }

  CounterRng rng_;
  TruncatedPareto on_;
  TruncatedPareto off_;
  Duration interval_{};
  TimePoint cursor_{};
  TimePoint period_end_{};
  Duration credit_{};  // ON time accumulated towards the next packet
  bool on_now_ = false;
};

// Aggregate arrival process of one ONU.
class TrafficGenerator {
 public:
  TrafficGenerator(const TrafficConfig& cfg, std::uint64_t onu_stream) : packet_bytes_(cfg.packet_bytes) {
    cfg.validate();
    for (int k = 0; k < cfg.num_sources; ++k) {
      sources_.emplace_back(cfg, (onu_stream << 16) + static_cast<std::uint64_t>(k));
      pending_.push_back(sources_.back().next());
    }
  }

  // Next arrival; timestamps are non-decreasing.
  Arrival next_arrival() {
    std::size_t best = 0;
    for (std::size_t k = 1; k < pending_.size(); ++k)
      if (pending_[k] < pending_[best]) best = k;
    const TimePoint t = pending_[best];
    pending_[best] = sources_[best].next();
    return Arrival{t, packet_bytes_};
  }

 private:
  int packet_bytes_;
  std::vector<ParetoOnOffSource> sources_;
  std::vector<TimePoint> pending_;
};

// CSV trace of (arrival_ns, bytes, onu_id).
inline void write_trace_header(std::ostream& os) { os << "arrival_ns,bytes,onu_id\n"; }

inline void write_trace_row(std::ostream& os, const Arrival& a, int onu) {
  os << a.time.time_since_epoch().count() << ',' << a.bytes << ',' << onu << '\n';
}

}  // namespace fdos
