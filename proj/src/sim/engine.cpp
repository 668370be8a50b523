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

#include <mfgsim/error.hpp>
#include <mfgsim/library.hpp>
#include <mfgsim/sim/engine.hpp>

#include <nlohmann/json.hpp>

#include <numeric>
#include <sstream>

namespace mfgsim::sim {

//==============================================================================
Fraction Fraction::reduced(std::int64_t num, std::int64_t den)
{
  if (den <= 0 || num == 0)
    return Fraction{0, 1};
  const std::int64_t g = std::gcd(num, den);
  return Fraction{num / g, den / g};
}

std::string Fraction::text() const
{
  return std::to_string(num) + "/" + std::to_string(den);
}

//==============================================================================
std::string to_csv(const RunStats& stats)
{
  std::ostringstream out;
  out << "metric,entity,value,exact\n";
  const auto integer = [&](const std::string& metric, const std::string& entity, std::int64_t v)
    {
      out << metric << "," << entity << "," << v << "," << v << "\n";
    };
  const auto rational = [&](const std::string& metric, const std::string& entity, Fraction f)
    {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", f.value());
      out << metric << "," << entity << "," << buf << "," << f.text() << "\n";
    };

  integer("horizon_us", "", stats.horizon_us);
  integer("events", "", static_cast<std::int64_t>(stats.events));
  for (const auto& r : stats.resources)
  {
    integer("capacity", r.name, r.capacity);
    integer("busy_us", r.name, r.busy_us);
    rational("utilization", r.name, r.utilization);
    rational("mean_queue", r.name, r.mean_queue);
    integer("max_queue", r.name, r.max_queue);
    integer("acquisitions", r.name, r.acquisitions);
    integer("releases", r.name, r.releases);
    integer("holders_at_end", r.name, r.holders_at_end);
  }
  for (const auto& [name, v] : stats.counters)
    integer("count", name, v);
  for (const auto& l : stats.levels)
  {
    integer("level_final", l.name, l.final_value);
    rational("level_mean", l.name, l.mean);
  }
  return out.str();
}

//==============================================================================
Engine::Engine(std::uint64_t seed)
: _seed(seed)
{
}

RngStream& Engine::stream(const std::string& label)
{
  auto it = _streams.find(label);
  if (it == _streams.end())
    it = _streams.emplace(label, RngStream(_seed, label)).first;
  return it->second;
}

//==============================================================================
EventId Engine::schedule(SimTime at, int priority, std::string tag, Action action)
{
  if (_finished)
    throw Error(ErrorCode::EngineFinished, "engine has already run");
  if (at < _now)
  {
    throw Error(ErrorCode::ScheduleInPast, "cannot schedule '" + tag + "' at "
      + std::to_string(at.us) + " us, clock is " + std::to_string(_now.us) + " us");
  }
  auto ev = std::make_shared<Event>();
  ev->at = at;
  ev->priority = priority;
  ev->seq = _next_seq++;
  ev->tag = std::move(tag);
  ev->action = std::move(action);
  const EventId id = ev->seq;
  _fel.push(std::move(ev));
  return id;
}

EventId Engine::schedule_in(SimTime delay, int priority, std::string tag, Action action)
{
  return schedule(_now + delay, priority, std::move(tag), std::move(action));
}

//==============================================================================
ResourceId Engine::add_resource(const std::string& name, std::int64_t capacity)
{
  if (capacity < 1)
    throw Error(ErrorCode::InvalidArgument, "resource '" + name + "' needs capacity >= 1");
  Resource r;
  r.name = name;
  r.capacity = capacity;
  r.last_change_us = _now.us;
  _resources.push_back(std::move(r));
  return _resources.size() - 1;
}

const std::string& Engine::resource_name(ResourceId id) const
{
  return _resources.at(id).name;
}

void Engine::accrue(Resource& r)
{
  const std::int64_t dt = _now.us - r.last_change_us;
  r.busy_us += dt * static_cast<std::int64_t>(r.holders.size());
  r.queue_area_us += dt * static_cast<std::int64_t>(r.queue.size());
  r.last_change_us = _now.us;
}

void Engine::accrue(Level& l)
{
  l.area_us += (_now.us - l.last_change_us) * l.value;
  l.last_change_us = _now.us;
}

void Engine::grant(Resource& r, Waiter w)
{
  r.holders.insert(w.who);
  ++r.acquisitions;
  trace("acquire", w.who, r.name);
  if (w.on_grant)
    w.on_grant();
}

void Engine::request(ResourceId id, const std::string& who, Grant on_grant)
{
  Resource& r = _resources.at(id);
  accrue(r);
  if (static_cast<std::int64_t>(r.holders.size()) < r.capacity && r.queue.empty())
  {
    grant(r, Waiter{who, std::move(on_grant)});
    return;
  }
  r.queue.push_back(Waiter{who, std::move(on_grant)});
  r.max_queue = std::max<std::int64_t>(r.max_queue, static_cast<std::int64_t>(r.queue.size()));
  trace("wait", who, r.name);
}

void Engine::release(ResourceId id, const std::string& who)
{
  Resource& r = _resources.at(id);
  const auto it = r.holders.find(who);
  if (it == r.holders.end())
    throw Error(ErrorCode::InvalidArgument, "'" + who + "' does not hold '" + r.name + "'");
  accrue(r);
  r.holders.erase(it);
  ++r.releases;
  trace("release", who, r.name);

  if (!r.queue.empty())
  {
    Waiter next = std::move(r.queue.front());
    r.queue.pop_front();
    grant(r, std::move(next));
  }
}

std::int64_t Engine::in_use(ResourceId id) const
{
  return static_cast<std::int64_t>(_resources.at(id).holders.size());
}

std::size_t Engine::queue_length(ResourceId id) const
{
  return _resources.at(id).queue.size();
}

std::vector<std::string> Engine::blocked_waits() const
{
  std::vector<std::string> out;
  for (const auto& r : _resources)
  {
    for (const auto& w : r.queue)
    {
      std::string holders;
      for (const auto& h : r.holders)
        holders += (holders.empty() ? "" : ",") + h;
      out.push_back(w.who + " waits for " + r.name + " held by " + holders);
    }
  }
  return out;
}

//==============================================================================
void Engine::count(const std::string& name, std::int64_t delta)
{
  _counters[name] += delta;
}

std::int64_t Engine::counter(const std::string& name) const
{
  const auto it = _counters.find(name);
  return it == _counters.end() ? 0 : it->second;
}

void Engine::set_level(const std::string& name, std::int64_t value)
{
  auto [it, inserted] = _levels.try_emplace(name);
  Level& l = it->second;
  if (inserted)
  {
    l.last_change_us = 0;
    l.series.emplace_back(0, 0);
  }
  accrue(l);
  if (l.value == value)
    return;
  l.value = value;
  if (!l.series.empty() && l.series.back().first == _now.us)
    l.series.back().second = value;
  else
    l.series.emplace_back(_now.us, value);
}

//==============================================================================
void Engine::trace(const std::string& ev, const std::string& who, const std::string& res)
{
  if (_tracing)
    _trace.push_back(TraceRecord{_now.us, ev, who, res});
}

std::string Engine::trace_jsonl() const
{
  std::string out;
  for (const auto& r : _trace)
  {
    nlohmann::ordered_json line = {
      {"t_us", r.t_us}, {"ev", r.ev}, {"who", r.who}, {"res", r.res},
    };
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string Engine::trace_hash() const
{
  return sha256_hex(trace_jsonl());
}

//==============================================================================
RunStats Engine::run_until(SimTime horizon)
{
  if (_finished)
    throw Error(ErrorCode::EngineFinished, "engine has already run");
  if (horizon < _now)
    throw Error(ErrorCode::ScheduleInPast, "horizon lies before the clock");

  while (!_fel.empty() && _fel.top()->at <= horizon)
  {
    const std::shared_ptr<Event> ev = _fel.top();
    _fel.pop();
    _now = ev->at;
    ++_events;
    try
    {
      ev->action();
    }
    catch (const std::exception& e)
    {
      _finished = true;
      throw Error(ErrorCode::ActionPanic, "action '" + ev->tag + "' failed at "
        + std::to_string(_now.us) + " us after " + std::to_string(_events)
        + " events: " + e.what());
    }
  }

  _now = horizon;
  _finished = true;

  RunStats stats;
  stats.horizon_us = horizon.us;
  stats.end_us = _now.us;
  stats.events = _events;
  stats.counters = _counters;
  for (auto& r : _resources)
  {
    accrue(r);
    ResourceStats s;
    s.name = r.name;
    s.capacity = r.capacity;
    s.busy_us = r.busy_us;
    s.utilization = Fraction::reduced(r.busy_us, r.capacity * horizon.us);
    s.queue_area_us = r.queue_area_us;
    s.mean_queue = Fraction::reduced(r.queue_area_us, horizon.us);
    s.acquisitions = r.acquisitions;
    s.releases = r.releases;
    s.holders_at_end = static_cast<std::int64_t>(r.holders.size());
    s.max_queue = r.max_queue;
    stats.resources.push_back(std::move(s));
  }
  for (auto& [name, l] : _levels)
  {
    accrue(l);
    LevelStats s;
    s.name = name;
    s.final_value = l.value;
    s.area_us = l.area_us;
    s.mean = Fraction::reduced(l.area_us, horizon.us);
    s.series = l.series;
    stats.levels.push_back(std::move(s));
  }
  return stats;
}

} // namespace mfgsim::sim
