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
#include <mfgsim/manufacturing.hpp>

#include <cmath>
#include <deque>
#include <limits>

namespace mfgsim::mfg {
namespace {

// Event priorities; lower fires first at equal times.
constexpr int prio_flow = 0;
constexpr int prio_release = 1;
constexpr int prio_retrieve = 2;

struct Transfer
{
  std::int64_t id = 0;
  std::string origin;
  std::string dest;
  std::int64_t parts = 0;
  SimTime ready;
};

struct Agv
{
  std::string name;
  std::string at;    // unit name (abstract) or node name (detailed)
  std::string home;
  double speed_mps = 0.0;
  SimTime load_time;
  SimTime unload_time;
  bool busy = false;
  SimTime busy_since;
  std::int64_t busy_us = 0;
  std::optional<sim::ResourceId> held_crossing;
};

struct Line
{
  MachiningLineSpec spec;
  sim::ResourceId machine = 0;
  std::int64_t backlog = 0;
  std::int64_t input = 0;
  std::int64_t output = 0;
  bool busy = false;
  bool blocked = false;
};

class PlantSim
{
public:
  PlantSim(const ExecutableScenario& sc, std::uint64_t seed, SimTime horizon, bool trace)
  : _sc(sc),
    _eng(seed),
    _horizon(horizon)
  {
    _eng.set_tracing(trace);
    _rep.model_name = sc.model_name;
    _rep.scenario_name = sc.scenario_name;
    _rep.mode = sc.mode;
    _rep.seed = seed;
    _rep.horizon = horizon;
    _rep.fleet = sc.fleet;

    for (const auto& spec : sc.machining_lines)
    {
      Line l;
      l.spec = spec;
      l.machine = _eng.add_resource(spec.name, 1);
      _lines.emplace(spec.name, l);
      _rep.released[spec.name] = 0;
    }
    _assy_machine = _eng.add_resource(sc.assembly_line.name, 1);
    for (const auto& [src, n] : sc.assembly_line.needs)
    {
      _assy_input[src] = 0;
      _assy_reserved[src] = 0;
      _assy_parts += n;
    }
    _crane = _eng.add_resource(sc.warehouse.name, 1);

    for (const auto& r : sc.routes)
      _route[r.from] = r.to;

    if (sc.abstract_transfer)
    {
      const auto& t = *sc.abstract_transfer;
      for (std::int64_t i = 0; i < sc.fleet; ++i)
      {
        Agv a;
        a.name = t.fleet + "#" + std::to_string(i + 1);
        a.at = t.home;
        a.home = t.home;
        a.speed_mps = t.speed_mps;
        a.load_time = t.load_time;
        a.unload_time = t.unload_time;
        _agvs.push_back(a);
      }
    }
    else
    {
      const auto& t = *sc.detailed_transfer;
      for (const auto& [name, node] : t.nodes)
      {
        if (node.kind == NodeKind::Crossing)
          _crossings[name] = _eng.add_resource(name, 1);
      }
      for (std::int64_t i = 0; i < sc.fleet; ++i)
      {
        const VehicleSpec& v = t.agvs[static_cast<std::size_t>(i)];
        Agv a;
        a.name = v.name;
        a.at = v.home;
        a.home = v.home;
        a.speed_mps = v.speed_mps;
        a.load_time = v.load_time;
        a.unload_time = v.unload_time;
        _agvs.push_back(a);
      }
    }
    for (const auto& a : _agvs)
      _rep.agv_busy_us[a.name] = 0;
  }

  SimReport run()
  {
    for (const auto& d : derive_demand(_sc))
      _rep.transfers_demanded += d.per_hour * static_cast<double>(_horizon.us) / 3.6e9;

    for (const auto& r : _sc.releases)
      schedule_release(r);
    for (const auto& r : _sc.retrievals)
      schedule_retrieval(r.interval, r.interval);
    _eng.set_level("wip", 0);

    _rep.stats = _eng.run_until(_horizon);

    if (_eng.pending_events() == 0)
    {
      const auto waits = _eng.blocked_waits();
      if (!waits.empty())
      {
        std::string message = "event list empty with waiting requests:";
        for (const auto& w : waits)
          message += "\n  " + w;
        throw Error(ErrorCode::DeadlockDetected, message);
      }
    }

    for (auto& a : _agvs)
    {
      if (a.busy)
        a.busy_us += _horizon.us - a.busy_since.us;
      _rep.agv_busy_us[a.name] = a.busy_us;
    }

    _rep.wip_total = 0;
    for (const auto& [loc, n] : _wip)
    {
      if (n != 0)
        _rep.wip[loc] = n;
      _rep.wip_total += n;
    }
    _rep.trace_jsonl = _eng.trace_jsonl();
    _rep.trace_hash = _eng.trace_hash();
    return std::move(_rep);
  }

private:
  //----------------------------------------------------------------------------
  void move(const std::string& from, const std::string& to, std::int64_t parts)
  {
    if (!from.empty())
      _wip[from] -= parts;
    if (!to.empty())
      _wip[to] += parts;
    _wip_level += (to.empty() ? 0 : parts) - (from.empty() ? 0 : parts);
    _eng.set_level("wip", _wip_level);
  }

  //----------------------------------------------------------------------------
  void schedule_release(const ReleaseSchedule& r)
  {
    switch (r.kind)
    {
      case ReleaseKind::Batch:
        _eng.schedule(r.offset, prio_release, "release " + r.unit, [this, r]
          {
            for (std::int64_t i = 0; i < r.count; ++i)
              release_part(r.unit);
          });
        break;
      case ReleaseKind::Every:
        _eng.schedule(r.offset, prio_release, "release " + r.unit, [this, r]
          {
            release_part(r.unit);
            next_periodic(r);
          });
        break;
      case ReleaseKind::Exponential:
        _eng.schedule(r.offset + draw_gap(r), prio_release, "release " + r.unit, [this, r]
          {
            release_part(r.unit);
            next_exponential(r);
          });
        break;
    }
  }

  void next_periodic(const ReleaseSchedule& r)
  {
    _eng.schedule_in(r.interval, prio_release, "release " + r.unit, [this, r]
      {
        release_part(r.unit);
        next_periodic(r);
      });
  }

  SimTime draw_gap(const ReleaseSchedule& r)
  {
    const double us = _eng.stream("demand").exponential(static_cast<double>(r.interval.us));
    return SimTime{std::max<std::int64_t>(1, std::llround(us))};
  }

  void next_exponential(const ReleaseSchedule& r)
  {
    _eng.schedule_in(draw_gap(r), prio_release, "release " + r.unit, [this, r]
      {
        release_part(r.unit);
        next_exponential(r);
      });
  }

  void release_part(const std::string& unit)
  {
    Line& l = _lines.at(unit);
    ++_rep.released[unit];
    ++_rep.parts_released;
    _eng.count("released:" + unit);
    _eng.trace("release", "part", unit);
    ++l.backlog;
    move("", unit + ".backlog", 1);
    admit(l);
  }

  //----------------------------------------------------------------------------
  void admit(Line& l)
  {
    while (l.backlog > 0 && l.input < l.spec.in_buffer)
    {
      --l.backlog;
      ++l.input;
      move(l.spec.name + ".backlog", l.spec.name + ".input", 1);
    }
    start(l);
  }

  void start(Line& l)
  {
    if (l.busy || l.input == 0)
      return;
    l.busy = true;
    --l.input;
    move(l.spec.name + ".input", l.spec.name + ".machine", 1);
    const std::string name = l.spec.name;
    _eng.request(l.machine, name, nullptr);
    _eng.trace("start", name, name);
    _eng.schedule_in(l.spec.cycle_time, prio_flow, "finish " + name, [this, name]
      {
        Line& line = _lines.at(name);
        _eng.trace("finish", name, name);
        if (line.output < line.spec.out_buffer)
          place(line);
        else
          line.blocked = true;
      });
    admit(l);
  }

  void place(Line& l)
  {
    const std::string& name = l.spec.name;
    ++l.output;
    l.busy = false;
    l.blocked = false;
    move(name + ".machine", name + ".output", 1);
    _eng.release(l.machine, name);
    _eng.count("processed:" + name);
    new_transfer(name, 1);
    start(l);
  }

  //----------------------------------------------------------------------------
  void assy_try_start()
  {
    const auto& spec = _sc.assembly_line;
    if (_assy_busy)
      return;
    for (const auto& [src, n] : spec.needs)
    {
      if (_assy_input[src] < n)
        return;
    }
    _assy_busy = true;
    for (const auto& [src, n] : spec.needs)
      _assy_input[src] -= n;
    move(spec.name + ".input", spec.name + ".machine", _assy_parts);
    _eng.request(_assy_machine, spec.name, nullptr);
    _eng.trace("start", spec.name, spec.name);
    _eng.schedule_in(spec.assembly_time, prio_flow, "finish " + spec.name, [this]
      {
        _eng.trace("finish", _sc.assembly_line.name, _sc.assembly_line.name);
        if (_assy_output < _sc.assembly_line.out_buffer)
          assy_place();
        else
          _assy_blocked = true;
      });
    reserve_pending(spec.name);
  }

  void assy_place()
  {
    const auto& name = _sc.assembly_line.name;
    ++_assy_output;
    _assy_busy = false;
    _assy_blocked = false;
    move(name + ".machine", name + ".output", _assy_parts);
    _eng.release(_assy_machine, name);
    _eng.count("processed:" + name);
    new_transfer(name, _assy_parts);
    assy_try_start();
  }

  /// The origin's output buffer gives up one unit to a loading AGV.
  void take_from(const std::string& origin, std::int64_t parts, const std::string& agv)
  {
    move(origin + ".output", agv, parts);
    if (origin == _sc.assembly_line.name)
    {
      --_assy_output;
      if (_assy_blocked)
        assy_place();
      return;
    }
    Line& l = _lines.at(origin);
    --l.output;
    if (l.blocked)
      place(l);
  }

  //----------------------------------------------------------------------------
  void new_transfer(const std::string& origin, std::int64_t parts)
  {
    Transfer t;
    t.id = ++_next_transfer;
    t.origin = origin;
    t.dest = _route.at(origin);
    t.parts = parts;
    t.ready = _eng.now();
    ++_rep.transfers_requested;
    _eng.trace("request", "T" + std::to_string(t.id), origin);
    _awaiting_space[t.dest].push_back(t);
    reserve_pending(t.dest);
  }

  bool has_space(const Transfer& t) const
  {
    if (t.dest == _sc.assembly_line.name)
    {
      return _assy_input.at(t.origin) + _assy_reserved.at(t.origin)
        < _sc.assembly_line.in_buffer;
    }
    return _wh_inventory + _wh_reserved < _sc.warehouse.capacity;
  }

  /// Destination space is reserved in request order; a transfer enters the
  /// dispatch queue only once it holds a reservation.
  void reserve_pending(const std::string& dest)
  {
    auto& queue = _awaiting_space[dest];
    bool progressed = false;
    for (auto it = queue.begin(); it != queue.end();)
    {
      if (!has_space(*it))
      {
        ++it;
        continue;
      }
      if (dest == _sc.assembly_line.name)
        ++_assy_reserved[it->origin];
      else
        ++_wh_reserved;
      _dispatch.push_back(*it);
      it = queue.erase(it);
      progressed = true;
    }
    if (progressed)
      dispatch();
  }

  //----------------------------------------------------------------------------
  SimTime distance(const Agv& a, const std::string& unit) const
  {
    if (_sc.abstract_transfer)
      return _sc.abstract_transfer->travel_time(a.at, unit);
    const auto& t = *_sc.detailed_transfer;
    const std::string node = t.node_of(unit);
    if (node == a.at)
      return SimTime{};
    const RoutePathSpec* path = t.route_between(a.at, node);
    return path ? leg_time(t, *path, a.speed_mps)
                : SimTime{std::numeric_limits<std::int64_t>::max()};
  }

  void dispatch()
  {
    while (!_dispatch.empty())
    {
      const Transfer& t = _dispatch.front();
      Agv* best = nullptr;
      SimTime best_d;
      for (auto& a : _agvs)
      {
        if (a.busy)
          continue;
        const SimTime d = distance(a, t.origin);
        if (!best || d < best_d)
        {
          best = &a;
          best_d = d;
        }
      }
      if (!best)
        return;
      Transfer job = t;
      _dispatch.pop_front();
      run_job(*best, job);
    }
  }

  void run_job(Agv& a, const Transfer& t)
  {
    a.busy = true;
    a.busy_since = _eng.now();
    const std::string tid = "T" + std::to_string(t.id);
    _eng.trace("dispatch", a.name, tid);
    Agv* agv = &a;

    travel(agv, t.origin, [this, agv, t, tid]
      {
        _eng.trace("load", agv->name, t.origin);
        _eng.schedule_in(agv->load_time, prio_flow, "load " + tid, [this, agv, t]
          {
            take_from(t.origin, t.parts, agv->name);
            travel(agv, t.dest, [this, agv, t]
              {
                _eng.trace("unload", agv->name, t.dest);
                _eng.schedule_in(agv->unload_time, prio_flow, "unload", [this, agv, t]
                  {
                    deliver(*agv, t);
                    travel(agv, agv->home, [this, agv]
                      {
                        agv->busy = false;
                        agv->busy_us += _eng.now().us - agv->busy_since.us;
                        _eng.trace("idle", agv->name, agv->at);
                        dispatch();
                      });
                  });
              });
          });
      });
  }

  void deliver(Agv& a, const Transfer& t)
  {
    ++_rep.transfers_delivered;
    _rep.latency_sum_us += _eng.now().us - t.ready.us;
    _eng.count("delivered:" + t.origin + "->" + t.dest);

    if (t.dest == _sc.assembly_line.name)
    {
      move(a.name, t.dest + ".input", t.parts);
      --_assy_reserved[t.origin];
      ++_assy_input[t.origin];
      assy_try_start();
      return;
    }

    const std::string id = "U" + std::to_string(t.id);
    move(a.name, t.dest + ".queue", t.parts);
    const std::int64_t parts = t.parts;
    _eng.request(_crane, id, [this, id, parts]
      {
        _eng.schedule_in(_sc.warehouse.store_time, prio_flow, "store " + id, [this, id, parts]
          {
            _eng.release(_crane, id);
            --_wh_reserved;
            ++_wh_inventory;
            move(_sc.warehouse.name + ".queue", "", parts);
            _rep.parts_completed += parts;
            if (parts == _assy_parts)
              ++_rep.assemblies_completed;
            _eng.count("stored:" + _sc.warehouse.name);
            _eng.trace("store", id, _sc.warehouse.name);
          });
      });
  }

  //----------------------------------------------------------------------------
  void schedule_retrieval(SimTime at, SimTime interval)
  {
    _eng.schedule(at, prio_retrieve, "retrieve", [this, interval]
      {
        const std::string id = "R" + std::to_string(++_next_retrieval);
        _eng.request(_crane, id, [this, id]
          {
            _eng.schedule_in(_sc.warehouse.retrieve_time, prio_flow, "retrieve " + id, [this, id]
              {
                _eng.release(_crane, id);
                if (_wh_inventory > 0)
                {
                  --_wh_inventory;
                  ++_rep.retrievals;
                  _eng.trace("retrieve", id, _sc.warehouse.name);
                  reserve_pending(_sc.warehouse.name);
                }
              });
          });
        schedule_retrieval(_eng.now() + interval, interval);
      });
  }

  //----------------------------------------------------------------------------
  /// Moves the AGV to the place serving `unit` (or to its home) and calls
  /// `done` on arrival, dwell included.
  void travel(Agv* a, const std::string& unit, std::function<void()> done)
  {
    if (_sc.abstract_transfer)
    {
      const SimTime t = _sc.abstract_transfer->travel_time(a->at, unit);
      _eng.trace("depart", a->name, a->at);
      _eng.schedule_in(t, prio_flow, "arrive " + a->name, [this, a, unit, done]
        {
          a->at = unit;
          _eng.trace("arrive", a->name, unit);
          done();
        });
      return;
    }

    const auto& tr = *_sc.detailed_transfer;
    const std::string target = unit == a->home ? unit : tr.node_of(unit);
    if (target == a->at)
    {
      done();
      return;
    }
    const RoutePathSpec* path = tr.route_between(a->at, target);
    if (!path)
      throw Error(ErrorCode::InvalidScenario, "no route data from '" + a->at + "' to '" + target + "'");
    _eng.trace("depart", a->name, a->at);
    step(a, path, 0, std::move(done));
  }

  /// AGV stands at path->nodes[i].
  void step(Agv* a, const RoutePathSpec* path, std::size_t i, std::function<void()> done)
  {
    const auto& tr = *_sc.detailed_transfer;
    const std::string& node = path->nodes[i];
    a->at = node;

    if (a->held_crossing)
    {
      _eng.release(*a->held_crossing, a->name);
      a->held_crossing.reset();
    }

    if (i + 1 == path->nodes.size())
    {
      _eng.trace("arrive", a->name, node);
      const NodeSpec& n = tr.nodes.at(node);
      if (n.kind == NodeKind::Stop && n.dwell.us > 0)
      {
        _eng.trace("dwell", a->name, node);
        _eng.schedule_in(n.dwell, prio_flow, "dwell " + a->name, std::move(done));
      }
      else
      {
        done();
      }
      return;
    }

    const auto traverse = [this, a, path, i, done]
      {
        const EdgeSpec& e = *_sc.detailed_transfer->edge_between(path->nodes[i], path->nodes[i + 1]);
        _eng.trace("enter", a->name, e.name);
        _eng.schedule_in(traversal_time(e, a->speed_mps), prio_flow, "traverse " + e.name,
          [this, a, path, i, done] { step(a, path, i + 1, done); });
      };

    const auto crossing = _crossings.find(node);
    if (crossing == _crossings.end())
    {
      traverse();
      return;
    }
    if (_eng.queue_length(crossing->second) > 0 || _eng.in_use(crossing->second) > 0)
      ++_rep.crossing_waits;
    const sim::ResourceId res = crossing->second;
    _eng.request(res, a->name, [a, res, traverse]
      {
        a->held_crossing = res;
        traverse();
      });
  }

  const ExecutableScenario& _sc;
  sim::Engine _eng;
  SimTime _horizon;
  SimReport _rep;

  std::map<std::string, Line> _lines;
  sim::ResourceId _assy_machine = 0;
  std::map<std::string, std::int64_t> _assy_input;
  std::map<std::string, std::int64_t> _assy_reserved;
  std::int64_t _assy_parts = 0;
  std::int64_t _assy_output = 0;
  bool _assy_busy = false;
  bool _assy_blocked = false;

  sim::ResourceId _crane = 0;
  std::int64_t _wh_inventory = 0;
  std::int64_t _wh_reserved = 0;

  std::map<std::string, std::string> _route;
  std::map<std::string, std::deque<Transfer>> _awaiting_space;
  std::deque<Transfer> _dispatch;
  std::vector<Agv> _agvs;
  std::map<std::string, sim::ResourceId> _crossings;

  std::map<std::string, std::int64_t> _wip;
  std::int64_t _wip_level = 0;
  std::int64_t _next_transfer = 0;
  std::int64_t _next_retrieval = 0;
};

} // anonymous namespace

//==============================================================================
SimReport simulate(
  const ExecutableScenario& scenario,
  std::uint64_t seed,
  SimTime horizon,
  const SimOptions& options)
{
  if (horizon.us <= 0)
    throw Error(ErrorCode::InvalidScenario, "horizon must be positive");
  if (scenario.fleet < 1)
    throw Error(ErrorCode::InvalidScenario, "the transfer system has no AGVs");
  PlantSim sim(scenario, seed, horizon, options.trace);
  return sim.run();
}

} // namespace mfgsim::mfg
