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

// Discrete-event EPON upstream simulator.
//
// OLT: interleaved polling (one outstanding GATE per ONU, bursts packed back
// to back with a guard gap), limited-scheme grants, and optionally the
// FDOS-driven wake-up scheduler run at the start of every polling cycle.
// A cycle starts whenever ONU 0 is scheduled. Sleeping ONUs keep being polled
// with report-only grants so they can report as soon as they wake.
//
// ONU: OSMP-EO. Rule 1 every T_m while sleeping; Rule 2 at each REPORT once
// the backlog present at wake-up has been sent. The sleep REPORT carries the
// chosen mode and the predicted fill-up time. Awake ONUs doze except during
// their own burst (plus guard on either side); waking is charged at full power.
//
// OLT-side times are instants at the OLT; ONU-side times are instants at the
// ONU. A message between them takes T_rtt / 2.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <vector>

#include "fdos/fdos.hpp"
#include "fdos/sim/config.hpp"
#include "fdos/sim/ledger.hpp"
#include "fdos/sim/predictor.hpp"
#include "fdos/windows.hpp"

namespace fdos::sim {

class Simulator {
 public:
  explicit Simulator(SimConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    timing_ = OsmpTiming::from(cfg_);
    max_cycle_bytes_ = cfg_.max_cycle_bytes();
    const int n = cfg_.num_onus;
    onus_.resize(n);
    views_.resize(n);
    for (int i = 0; i < n; ++i) {
      if (cfg_.load > 0.0) onus_[i].arrivals = ArrivalStream(cfg_.onu_traffic(), static_cast<std::uint64_t>(i));
      onus_[i].ewma = EwmaRate(cfg_.ewma_half_life);
    }
    caps_.assign(n, 0);
  }

  MetricsReport run() {
    const int n = cfg_.num_onus;
    end_ = TimePoint(cfg_.runtime);
    for (int i = 0; i < n; ++i) schedule_poll(i, TimePoint{});
    while (!events_.empty()) {
      Event ev = events_.top();
      if (ev.time > end_) break;
      if (cfg_.max_events > 0 && metrics_.events >= cfg_.max_events) {
        metrics_.truncated = true;
        end_ = ev.time;
        break;
      }
      ++metrics_.events;
      events_.pop();
      now_ = ev.time;
      dispatch(ev);
    }
    return finish();
  }

 private:
  enum class Kind { GateArrive, WakeMsgArrive, WindowEnd, Rule1Check, WakeComplete, TxDone, Transmit };

  static int priority(Kind k) {
    switch (k) {
      case Kind::GateArrive:
      case Kind::WakeMsgArrive:
      case Kind::WindowEnd: return 0;
      case Kind::Rule1Check:
      case Kind::WakeComplete:
      case Kind::TxDone: return 1;
      case Kind::Transmit: return 2;
    }
    return 3;
  }

  struct Event {
    TimePoint time;
    int prio;
    int onu;
    std::uint64_t seq;
    Kind kind;
    std::uint64_t tag = 0;     // poll id or timer generation
    std::int64_t grant = 0;
    TimePoint burst{};         // ONU-side burst start

    bool operator>(const Event& o) const {
      if (time != o.time) return time > o.time;
      if (prio != o.prio) return prio > o.prio;
      if (onu != o.onu) return onu > o.onu;
      return seq > o.seq;
    }
  };

  struct Packet {
    TimePoint arrival;
    int bytes;
    std::uint64_t seq;
  };

  enum class Phase { Awake, Sleeping, Waking };

  struct Onu {
    Phase phase = Phase::Awake;
    SleepMode sleep_mode = SleepMode::DeepSleep;
    SleepMode charged = SleepMode::Doze;
    TimePoint charged_since{};
    EnergyLedger energy;
    ArrivalStream arrivals;
    EwmaRate ewma;
    std::deque<Packet> queue;
    std::int64_t queue_bytes = 0;
    std::uint64_t next_seq = 1;
    std::uint64_t drain_marker = 0;  // last packet present when the ONU finished waking
    bool armed = true;               // Rule 2 may run
    std::uint64_t timer_gen = 0;
    TimePoint last_report_sent{};
    std::optional<SleepMode> sleep_after_tx;
  };

  struct Report {
    std::uint64_t poll = 0;
    TimePoint arrival{};
    std::int64_t bytes = 0;
    bool sleep = false;
    SleepMode mode = SleepMode::DeepSleep;
    Duration fill_time{};
  };

  // What the OLT knows about one ONU.
  struct View {
    bool asleep = false;
    SleepMode mode = SleepMode::DeepSleep;
    Duration fill_time{};
    TimePoint last_report{};
    std::optional<TimePoint> wake_sent;
    std::optional<TimePoint> last_gate;
    std::int64_t reported_bytes = 0;
    std::uint64_t poll = 0;
    std::optional<Report> mailbox;
    Duration max_gap{};
  };

  void push(TimePoint t, int onu, Kind k, std::uint64_t tag = 0, std::int64_t grant = 0, TimePoint burst = {}) {
    events_.push(Event{t, priority(k), onu, ++seq_, k, tag, grant, burst});
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case Kind::GateArrive: on_gate(ev); break;
      case Kind::WakeMsgArrive: on_wake_msg(ev.onu); break;
      case Kind::WindowEnd: on_window_end(ev.onu, ev.tag); break;
      case Kind::Rule1Check: on_rule1(ev.onu, ev.tag); break;
      case Kind::WakeComplete: on_wake_complete(ev.onu, ev.tag); break;
      case Kind::TxDone: on_tx_done(ev.onu); break;
      case Kind::Transmit: on_transmit(ev); break;
    }
  }

  // ---- ONU side ----

  void charge(Onu& o, SleepMode m, TimePoint t) {
    t = std::min(t, end_);
    if (t > o.charged_since) o.energy.add(o.charged, t - o.charged_since);
    o.charged_since = std::max(o.charged_since, t);
    o.charged = m;
  }

  // Moves arrivals up to t into the buffer, dropping what does not fit.
  void advance(int i, TimePoint t) {
    Onu& o = onus_[i];
    if (!o.arrivals.has_traffic()) return;
    t = std::min(t, end_);
    const std::int64_t cap = cfg_.buffer_bytes();
    for (;;) {
      const Arrival* a = o.arrivals.peek(0);
      if (a->time > t) break;
      const Arrival x = o.arrivals.pop();
      ++delays_.arrived;
      o.ewma.observe(x.time, x.bytes);
      if (o.queue_bytes + x.bytes > cap) {
        ++delays_.dropped;
        continue;
      }
      o.queue.push_back(Packet{x.time, x.bytes, o.next_seq++});
      o.queue_bytes += x.bytes;
    }
  }

  Duration predict(int i, TimePoint t) {
    Onu& o = onus_[i];
    if (cfg_.predictor == Predictor::Oracle || !o.arrivals.has_traffic()) {
      if (!o.arrivals.has_traffic())
        return o.queue_bytes >= cfg_.threshold_bytes() ? kZero : cfg_.predict_horizon;
      return oracle_fill_time(o.arrivals, t, o.queue_bytes, cfg_.threshold_bytes(), cfg_.predict_horizon);
    }
    return ewma_fill_time(static_cast<double>(o.queue_bytes) * 8.0, static_cast<double>(cfg_.threshold_bits),
                          o.ewma.rate(t) * 8e9, cfg_.predict_horizon);
  }

  void on_gate(const Event& ev) {
    Onu& o = onus_[ev.onu];
    if (o.phase != Phase::Awake) return;
    const TimePoint on_at = std::max(now_, ev.burst - cfg_.guard);
    push(on_at, ev.onu, Kind::Transmit, ev.tag, ev.grant, ev.burst);
  }

  void on_transmit(const Event& ev) {
    const int i = ev.onu;
    Onu& o = onus_[i];
    charge(o, SleepMode::Active, now_);
    const Duration half_rtt = cfg_.rtt_of(i) / 2;
    const TimePoint s = ev.burst;
    advance(i, s);
    std::int64_t sent = 0;
    while (!o.queue.empty() && sent + o.queue.front().bytes <= ev.grant) {
      const Packet p = o.queue.front();
      o.queue.pop_front();
      o.queue_bytes -= p.bytes;
      sent += p.bytes;
      const TimePoint at_olt = s + cfg_.tx_time(sent) + half_rtt;
      if (at_olt <= end_)
        delays_.record(at_olt - p.arrival);
      else
        ++metrics_.in_flight_at_end;
    }
    if (!o.armed && (o.queue.empty() || o.queue.front().seq > o.drain_marker)) o.armed = true;
    const TimePoint report_at = s + cfg_.tx_time(sent);
    advance(i, report_at);
    Report r;
    r.poll = ev.tag;
    r.arrival = report_at + cfg_.tx_time(cfg_.report_bytes) + half_rtt;
    r.bytes = o.queue_bytes;
    o.sleep_after_tx.reset();
    if (o.armed) {
      const Duration fill = predict(i, report_at);
      const SleepMode m = rule2(fill, timing_);
      if (m != SleepMode::Active) {
        r.sleep = true;
        r.mode = m;
        r.fill_time = fill;
        o.sleep_after_tx = m;
      }
    }
    o.last_report_sent = report_at;
    views_[i].mailbox = r;
    push(report_at + cfg_.tx_time(cfg_.report_bytes) + cfg_.guard, i, Kind::TxDone);
  }

  void on_tx_done(int i) {
    Onu& o = onus_[i];
    if (o.sleep_after_tx) {
      o.phase = Phase::Sleeping;
      o.sleep_mode = *o.sleep_after_tx;
      o.sleep_after_tx.reset();
      charge(o, o.sleep_mode, now_);
      push(now_ + cfg_.decision_period, i, Kind::Rule1Check, ++o.timer_gen);
    } else {
      charge(o, SleepMode::Doze, now_);
    }
  }

  void on_rule1(int i, std::uint64_t gen) {
    Onu& o = onus_[i];
    if (gen != o.timer_gen || o.phase != Phase::Sleeping) return;
    advance(i, now_);
    Duration fill = predict(i, now_);
    if (cfg_.onu_dereg_guard) fill = std::min(fill, o.last_report_sent + cfg_.dereg_time - now_);
    if (rule1(o.sleep_mode, fill, timing_) == o.sleep_mode) {
      push(now_ + cfg_.decision_period, i, Kind::Rule1Check, gen);
      return;
    }
    ++metrics_.self_wakes;
    start_wake(i);
  }

  void start_wake(int i) {
    Onu& o = onus_[i];
    o.phase = Phase::Waking;
    charge(o, SleepMode::Active, now_);
    push(now_ + cfg_.power.wake(o.sleep_mode), i, Kind::WakeComplete, ++o.timer_gen);
  }

  void on_wake_msg(int i) {
    if (onus_[i].phase == Phase::Sleeping) start_wake(i);
  }

  void on_wake_complete(int i, std::uint64_t gen) {
    Onu& o = onus_[i];
    if (gen != o.timer_gen || o.phase != Phase::Waking) return;
    o.phase = Phase::Awake;
    charge(o, SleepMode::Doze, now_);
    advance(i, now_);
    o.drain_marker = o.next_seq - 1;
    o.armed = o.queue.empty();
  }

  // ---- OLT side ----

  void on_window_end(int i, std::uint64_t poll) {
    View& v = views_[i];
    if (v.mailbox && v.mailbox->poll == poll) {
      const Report r = *v.mailbox;
      v.mailbox.reset();
      const Duration gap = r.arrival - v.last_report;
      v.max_gap = std::max(v.max_gap, gap);
      if (gap > cfg_.dereg_time) ++metrics_.dereg_events;
      v.last_report = r.arrival;
      v.wake_sent.reset();
      v.reported_bytes = r.bytes;
      v.asleep = r.sleep;
      if (r.sleep) {
        v.mode = r.mode;
        v.fill_time = r.fill_time;
      }
    }
    schedule_poll(i, now_);
  }

  void schedule_poll(int i, TimePoint tau) {
    if (i == 0) start_cycle(tau);
    View& v = views_[i];
    std::int64_t grant = 0;
    if (!v.asleep) {
      if (cfg_.scheduler == Scheduler::OsmpEoOnly)
        grant = grant_size(v.reported_bytes, cfg_.num_onus, max_cycle_bytes_, true);
      else
        grant = std::min(v.reported_bytes, caps_[i]);
    }
    const Duration rtt = cfg_.rtt_of(i);
    const TimePoint start = std::max(channel_free_, tau + rtt);
    if (start < last_window_end_ + cfg_.guard && last_window_end_ > TimePoint{}) ++metrics_.gate_overlaps;
    const TimePoint end = start + cfg_.tx_time(grant + cfg_.report_bytes);
    last_window_end_ = end;
    channel_free_ = end + cfg_.guard;
    v.last_gate = tau;
    v.poll = ++poll_seq_;
    push(tau + rtt / 2, i, Kind::GateArrive, v.poll, grant, start - rtt / 2);
    push(end, i, Kind::WindowEnd, v.poll);
  }

  void start_cycle(TimePoint t) {
    if (metrics_.cycles > 0) cycle_time_sum_ += t - last_cycle_start_;
    last_cycle_start_ = t;
    ++metrics_.cycles;
    int active = 0;
    for (const auto& v : views_) active += v.asleep ? 0 : 1;
    for (int i = 0; i < cfg_.num_onus; ++i)
      caps_[i] = views_[i].asleep ? 0 : grant_size(max_cycle_bytes_, active, max_cycle_bytes_, true);
    plan_wakeups(t);
  }

  // Window for an asleep ONU; an empty window caused only by the
  // minimum-sleep bound optionally falls back to the safety bounds alone.
  bool relaxable(const OnuScheduleState& s, const WindowConfig& wcfg) const {
    if (!cfg_.relax_min_sleep || s.wake_sent) return false;
    OnuScheduleState r = s;
    r.min_sleep_threshold = kZero;
    try {
      window(r, wcfg);
      return true;
    } catch (const InfeasibleWindow&) {
      return false;
    }
  }

  OnuScheduleState schedule_state(int i, TimePoint t) const {
    const View& v = views_[i];
    OnuScheduleState s;
    s.onu_id = i;
    s.rtt = cfg_.rtt_of(i);
    s.sleep_mode = v.mode;
    s.last_report = v.last_report - t;
    s.reported_fill_time = v.fill_time;
    if (v.wake_sent) s.wake_sent = *v.wake_sent - t;
    if (v.last_gate) s.last_gate = *v.last_gate - t;
    s.min_sleep_threshold = cfg_.min_sleep_threshold(v.mode);
    return s;
  }

  void send_wake(int i, TimePoint at) {
    views_[i].wake_sent = at;
    ++metrics_.wake_messages;
    push(at + cfg_.rtt_of(i) / 2, i, Kind::WakeMsgArrive);
  }

  void plan_wakeups(TimePoint t) {
    std::vector<OnuScheduleState> states;
    bool actionable = false;
    const WindowConfig wcfg{cfg_.max_cycle, cfg_.dereg_time, cfg_.power};
    for (int i = 0; i < cfg_.num_onus; ++i) {
      if (!views_[i].asleep) continue;
      states.push_back(schedule_state(i, t));
      auto& s = states.back();
      if (!s.wake_sent) {
        try {
          window(s, wcfg);
        } catch (const InfeasibleWindow&) {
          if (relaxable(s, wcfg)) s.min_sleep_threshold = kZero;
        }
      }
      if (s.wake_sent) continue;
      try {
        const auto w = window(s, wcfg);
        if (w.lb() <= last_sendable_slot(cfg_.power.wake(s.sleep_mode), s.rtt, cfg_.max_cycle)) actionable = true;
      } catch (const InfeasibleWindow&) {
        actionable = true;
      }
    }
    // Without an unforced sleeper that could get a message this epoch the
    // assignment has no effect, so it is not computed.
    if (!actionable) return;
    const auto built = build_problem(states, wcfg);
    if (cfg_.scheduler == Scheduler::OsmpEoOnly) {
      // Reference fairness: every sleeper wakes in the last slot of its window.
      if (built.problem) {
        Assignment latest;
        for (const auto& w : built.windows) latest.slot_of.push_back(w.ub());
        record_jain(latest, *built.problem);
      }
      return;
    }
    for (int id : built.immediate_wake) {
      if (views_[id].wake_sent) continue;
      ++metrics_.immediate_wakes;
      send_wake(id, t);
    }
    if (!built.problem) return;
    const auto& p = *built.problem;
    // Windows only move when the epoch crosses a slot boundary, so most
    // consecutive cycles pose the same instance.
    if (!cached_problem_ || cached_problem_->onu_ids != p.onu_ids || cached_problem_->arcs != p.arcs) {
      ++metrics_.fdos_runs;
      cached_assignment_ = fdos(p).assignment;
      cached_problem_ = p;
    }
    const Assignment& assignment = cached_assignment_;
    record_jain(assignment, p);
    for (int row = 0; row < p.num_onus(); ++row) {
      const int id = p.onu_ids[row];
      if (views_[id].wake_sent) continue;
      const WakePlan plan = plan_wakeup(assignment.slot_of[row], cfg_.power.wake(views_[id].mode),
                                        cfg_.rtt_of(id), cfg_.max_cycle);
      if (!plan.send) continue;
      if (plan.late) ++metrics_.late_wakes;
      send_wake(id, t + plan.offset);
    }
  }

  void record_jain(const Assignment& a, const AssignmentProblem& p) {
    const auto counts = slot_counts(a, p);
    jain_sum_ += jain_index(counts).value();
    ++jain_samples_;
  }

  MetricsReport finish() {
    MetricsReport& m = metrics_;
    const int n = cfg_.num_onus;
    for (int i = 0; i < n; ++i) {
      Onu& o = onus_[i];
      advance(i, end_);
      charge(o, o.charged, end_);
      m.queued_at_end += static_cast<std::int64_t>(o.queue.size());
      const Duration open_gap = end_ - views_[i].last_report;
      if (open_gap > cfg_.dereg_time) ++m.dereg_events;
      m.max_report_gap = std::max({m.max_report_gap, views_[i].max_gap, open_gap});
      m.per_onu.push_back(o.energy);
    }
    m.scheduler = cfg_.scheduler;
    m.predictor = cfg_.predictor;
    m.load = cfg_.load;
    m.num_onus = n;
    m.rtt = cfg_.default_rtt;
    m.threshold_bits = cfg_.threshold_bits;
    m.runtime = end_ - TimePoint{};  // shorter than configured when truncated
    m.energy_joules = 0.0;
    for (const auto& l : m.per_onu) m.energy_joules += l.joules(cfg_.power);
    const double always_on = n * cfg_.power.power(SleepMode::Active) * static_cast<double>(m.runtime.count()) * 1e-9;
    m.energy_efficiency = 1.0 - m.energy_joules / always_on;
    m.avg_delay_ns = delays_.mean_ns();
    m.drops = delays_.dropped;
    m.arrivals = delays_.arrived;
    m.delivered = delays_.delivered;
    m.mean_jain = jain_samples_ ? jain_sum_ / jain_samples_ : 0.0;
    m.mean_cycle_ns = m.cycles > 1 ? static_cast<double>(cycle_time_sum_.count()) / (m.cycles - 1) : 0.0;
    return m;
  }

  SimConfig cfg_;
  OsmpTiming timing_{};
  std::int64_t max_cycle_bytes_ = 0;
  std::vector<Onu> onus_;
  std::vector<View> views_;
  std::vector<std::int64_t> caps_;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
  std::uint64_t seq_ = 0;
  std::uint64_t poll_seq_ = 0;
  TimePoint now_{};
  TimePoint end_{};
  TimePoint channel_free_{};
  TimePoint last_window_end_{};
  TimePoint last_cycle_start_{};
  Duration cycle_time_sum_{};
  std::optional<AssignmentProblem> cached_problem_;
  Assignment cached_assignment_;
  double jain_sum_ = 0.0;
  std::int64_t jain_samples_ = 0;
  DelayLedger delays_;
  MetricsReport metrics_;
};

inline MetricsReport run(const SimConfig& cfg) { return Simulator(cfg).run(); }

}  // namespace fdos::sim
