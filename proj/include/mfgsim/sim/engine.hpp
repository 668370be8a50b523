/*
 * Copyright (C) 2026 The mfgsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef MFGSIM__SIM__ENGINE_HPP
#define MFGSIM__SIM__ENGINE_HPP

#include <mfgsim/sim/rng.hpp>
#include <mfgsim/sim/time.hpp>

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace mfgsim::sim {

using EventId = std::uint64_t;
using ResourceId = std::size_t;

/// Reduced non-negative fraction.
struct Fraction
{
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction reduced(std::int64_t num, std::int64_t den);
  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / den; }
  std::string text() const;

  bool operator==(const Fraction&) const = default;
};

struct TraceRecord
{
  std::int64_t t_us = 0;
  std::string ev;
  std::string who;
  std::string res;

  bool operator==(const TraceRecord&) const = default;
};

struct ResourceStats
{
  std::string name;
  std::int64_t capacity = 1;

  /// Sum over holders of held time, in µs, up to the horizon.
  std::int64_t busy_us = 0;

  /// busy_us / (capacity * horizon).
  Fraction utilization;

  /// Integral of queue length over time, in µs; mean = this / horizon.
  std::int64_t queue_area_us = 0;
  Fraction mean_queue;

  std::int64_t acquisitions = 0;
  std::int64_t releases = 0;
  std::int64_t holders_at_end = 0;
  std::int64_t max_queue = 0;
};

struct LevelStats
{
  std::string name;
  std::int64_t final_value = 0;
  std::int64_t area_us = 0;
  Fraction mean;

  /// (t_us, value) at every change, starting with the initial value at 0.
  std::vector<std::pair<std::int64_t, std::int64_t>> series;
};

struct RunStats
{
  std::int64_t horizon_us = 0;
  std::int64_t end_us = 0;
  std::uint64_t events = 0;
  std::vector<ResourceStats> resources;
  std::map<std::string, std::int64_t> counters;
  std::vector<LevelStats> levels;
};

/// Columns: metric,entity,value,exact. `exact` holds the reduced fraction for
/// rational metrics and repeats the integer otherwise.
std::string to_csv(const RunStats& stats);

/// Single-threaded discrete-event kernel. Events fire in (time, priority,
/// seq) order; lower priority fires first and seq is the insertion counter.
class Engine
{
public:
  using Action = std::function<void()>;
  using Grant = std::function<void()>;

  explicit Engine(std::uint64_t seed);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  SimTime now() const { return _now; }
  std::uint64_t seed() const { return _seed; }
  bool finished() const { return _finished; }

  /// Named stream, created on first use from (seed, label).
  RngStream& stream(const std::string& label);

  /// Throws ScheduleInPast if `at` precedes the clock, EngineFinished after
  /// run_until returned.
  EventId schedule(SimTime at, int priority, std::string tag, Action action);
  EventId schedule_in(SimTime delay, int priority, std::string tag, Action action);

  //----------------------------------------------------------------------------
  ResourceId add_resource(const std::string& name, std::int64_t capacity);
  const std::string& resource_name(ResourceId id) const;

  /// Grants immediately when a unit is free, otherwise queues FIFO. `on_grant`
  /// runs synchronously at grant time.
  void request(ResourceId id, const std::string& who, Grant on_grant);

  /// Frees the unit held by `who` and hands it to the next waiter, if any.
  void release(ResourceId id, const std::string& who);

  std::int64_t in_use(ResourceId id) const;
  std::size_t queue_length(ResourceId id) const;

  /// Names of holders and waiters of every resource with waiters.
  std::vector<std::string> blocked_waits() const;

  //----------------------------------------------------------------------------
  void count(const std::string& name, std::int64_t delta = 1);
  std::int64_t counter(const std::string& name) const;

  /// Time-weighted integer level, e.g. WIP.
  void set_level(const std::string& name, std::int64_t value);

  //----------------------------------------------------------------------------
  void set_tracing(bool on) { _tracing = on; }
  void trace(const std::string& ev, const std::string& who, const std::string& res = "");
  const std::vector<TraceRecord>& trace_records() const { return _trace; }

  /// One `{"t_us":..,"ev":..,"who":..,"res":..}` object per line.
  std::string trace_jsonl() const;

  /// SHA-256 of trace_jsonl().
  std::string trace_hash() const;

  //----------------------------------------------------------------------------
  /// Pops events until the list is empty or the next event lies after
  /// `horizon`; statistics are closed at the horizon. Throws EngineFinished
  /// on a second call and ActionPanic if an action throws.
  RunStats run_until(SimTime horizon);

  std::size_t pending_events() const { return _fel.size(); }

private:
  struct Event
  {
    SimTime at;
    int priority = 0;
    std::uint64_t seq = 0;
    std::string tag;
    Action action;
  };

  struct Later
  {
    bool operator()(const std::shared_ptr<Event>& a, const std::shared_ptr<Event>& b) const
    {
      if (a->at != b->at)
        return a->at > b->at;
      if (a->priority != b->priority)
        return a->priority > b->priority;
      return a->seq > b->seq;
    }
  };

  struct Waiter
  {
    std::string who;
    Grant on_grant;
  };

  struct Resource
  {
    std::string name;
    std::int64_t capacity = 1;
    std::multiset<std::string> holders;
    std::deque<Waiter> queue;
    std::int64_t busy_us = 0;
    std::int64_t queue_area_us = 0;
    std::int64_t last_change_us = 0;
    std::int64_t acquisitions = 0;
    std::int64_t releases = 0;
    std::int64_t max_queue = 0;
  };

  struct Level
  {
    std::int64_t value = 0;
    std::int64_t area_us = 0;
    std::int64_t last_change_us = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> series;
  };

  void accrue(Resource& r);
  void accrue(Level& l);
  void grant(Resource& r, Waiter w);

  std::uint64_t _seed;
  SimTime _now;
  std::uint64_t _next_seq = 0;
  std::uint64_t _events = 0;
  bool _finished = false;
  bool _tracing = true;

  std::priority_queue<std::shared_ptr<Event>, std::vector<std::shared_ptr<Event>>, Later> _fel;
  std::map<std::string, RngStream> _streams;
  std::vector<Resource> _resources;
  std::map<std::string, std::int64_t> _counters;
  std::map<std::string, Level> _levels;
  std::vector<TraceRecord> _trace;
};

} // namespace mfgsim::sim

#endif // MFGSIM__SIM__ENGINE_HPP
