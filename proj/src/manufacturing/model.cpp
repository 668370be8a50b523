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

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace mfgsim::mfg {
namespace {

[[noreturn]] void invalid(const std::string& message)
{
  throw Error(ErrorCode::InvalidScenario, message);
}

std::vector<const EntitySpec*> of_sort(
  const InformationModel& model, const SortSystem& system, const std::string& sort)
{
  std::vector<const EntitySpec*> out;
  const SortRef ref{model.sort_set(), sort};
  if (!system.contains(ref))
    return out;
  for (const auto& [name, e] : model.entities())
  {
    if (e.has_result_sort_at_most(system, ref))
      out.push_back(&e);
  }
  return out;
}

const Attribute& need(const EntitySpec& e, const std::string& name)
{
  const Attribute* a = e.find_attribute(name);
  if (!a)
  {
    throw Error(ErrorCode::MissingComponent,
      "entity '" + e.name + "' lacks attribute '" + name + "'");
  }
  return *a;
}

double number_of(const EntitySpec& e, const std::string& attr, const Value& v, Unit unit)
{
  if (!v.is_number() || v.as_number().unit != unit)
  {
    invalid(e.name + "." + attr + " must be a number in '"
      + std::string(to_string(unit)) + "'");
  }
  return v.as_number().value;
}

double number(const EntitySpec& e, const std::string& attr, Unit unit)
{
  return number_of(e, attr, need(e, attr).value, unit);
}

SimTime duration(const EntitySpec& e, const std::string& attr)
{
  try
  {
    return sim::seconds_exact(number(e, attr, Unit::Second));
  }
  catch (const Error& err)
  {
    if (err.code() == ErrorCode::InvalidScenario)
      throw;
    invalid(e.name + "." + attr + ": " + err.what());
  }
}

std::int64_t count(const EntitySpec& e, const std::string& attr)
{
  const Value& v = need(e, attr).value;
  if (!v.is_number()
    || (v.as_number().unit != Unit::Count && v.as_number().unit != Unit::None))
  {
    invalid(e.name + "." + attr + " must be a count");
  }
  const double d = v.as_number().value;
  if (d != std::floor(d) || d < 0 || d > 1e15)
    invalid(e.name + "." + attr + " must be a whole non-negative count");
  return static_cast<std::int64_t>(d);
}

std::string ref(const EntitySpec& e, const std::string& attr)
{
  const Value& v = need(e, attr).value;
  if (!v.is_ref())
    invalid(e.name + "." + attr + " must be an entity reference");
  return v.as_ref().target;
}

std::vector<std::string> ref_list(const EntitySpec& e, const std::string& attr)
{
  const Value& v = need(e, attr).value;
  if (!v.is_list())
    invalid(e.name + "." + attr + " must be a list of entity references");
  std::vector<std::string> out;
  for (const auto& item : v.as_list())
  {
    if (!item.is_ref())
      invalid(e.name + "." + attr + " must be a list of entity references");
    out.push_back(item.as_ref().target);
  }
  return out;
}

const EntitySpec& exactly_one(
  const InformationModel& model, const SortSystem& system, const std::string& sort)
{
  const auto found = of_sort(model, system, sort);
  if (found.empty())
    throw Error(ErrorCode::MissingComponent, "model has no " + sort);
  if (found.size() > 1)
    invalid("model has more than one " + sort);
  return *found.front();
}

//==============================================================================
AbstractTransfer abstract_transfer(const InformationModel& model, const SortSystem& system)
{
  AbstractTransfer t;
  const EntitySpec& route = exactly_one(model, system, "RouteModel");
  const EntitySpec& fleet = exactly_one(model, system, "AGVFleet");

  t.route = route.name;
  t.stations = ref_list(route, "stations");
  const Value& travel = need(route, "travel").value;
  if (!travel.is_list() || travel.as_list().size() != t.stations.size())
    invalid(route.name + ".travel must be a square matrix over its stations");
  for (const auto& row : travel.as_list())
  {
    if (!row.is_list() || row.as_list().size() != t.stations.size())
      invalid(route.name + ".travel must be a square matrix over its stations");
    std::vector<SimTime> times;
    for (const auto& cell : row.as_list())
    {
      const double s = number_of(route, "travel", cell, Unit::Second);
      try
      {
        times.push_back(sim::seconds_exact(s));
      }
      catch (const Error& err)
      {
        invalid(route.name + ".travel: " + err.what());
      }
    }
    t.travel.push_back(std::move(times));
  }
  for (std::size_t i = 0; i < t.stations.size(); ++i)
  {
    if (t.travel[i][i].us != 0)
      invalid(route.name + ".travel must have a zero diagonal");
  }

  t.fleet = fleet.name;
  t.agv_count = count(fleet, "count");
  t.speed_mps = number(fleet, "speed", Unit::MetrePerSecond);
  t.load_time = duration(fleet, "load_time");
  t.unload_time = duration(fleet, "unload_time");
  t.home = ref(fleet, "home");
  if (!model.has_entity(t.home))
    throw Error(ErrorCode::MissingComponent, "home station '" + t.home + "' is not in the model");
  const Value& dispatch = need(model.entity(t.home), "dispatch").value;
  t.dispatch = dispatch.is_text() ? dispatch.as_text() : "";
  if (std::find(t.stations.begin(), t.stations.end(), t.home) == t.stations.end())
    invalid("home station '" + t.home + "' is not one of " + route.name + "'s stations");
  return t;
}

DetailedTransfer detailed_transfer(const InformationModel& model, const SortSystem& system)
{
  DetailedTransfer t;
  for (const EntitySpec* e : of_sort(model, system, "HomeStation"))
    t.nodes[e->name] = NodeSpec{e->name, NodeKind::Home, SimTime{}, ""};
  for (const EntitySpec* e : of_sort(model, system, "StopStation"))
    t.nodes[e->name] = NodeSpec{e->name, NodeKind::Stop, duration(*e, "dwell"), ref(*e, "serves")};
  for (const EntitySpec* e : of_sort(model, system, "Crossing"))
    t.nodes[e->name] = NodeSpec{e->name, NodeKind::Crossing, SimTime{}, ""};

  const auto edge_base = [&](const EntitySpec& e, EdgeKind kind)
    {
      EdgeSpec edge;
      edge.name = e.name;
      edge.kind = kind;
      edge.from = ref(e, "from");
      edge.to = ref(e, "to");
      edge.length_m = number(e, "length", Unit::Metre);
      if (t.nodes.count(edge.from) == 0 || t.nodes.count(edge.to) == 0)
        invalid("track '" + e.name + "' does not join two route nodes");
      if (!(edge.length_m > 0))
        invalid("track '" + e.name + "' must have a positive length");
      return edge;
    };
  for (const EntitySpec* e : of_sort(model, system, "StraightTrack"))
  {
    EdgeSpec edge = edge_base(*e, EdgeKind::Straight);
    edge.speed_limit_mps = number(*e, "speed_limit", Unit::MetrePerSecond);
    if (!(edge.speed_limit_mps > 0))
      invalid("track '" + e->name + "' must have a positive speed limit");
    t.edges.push_back(edge);
  }
  for (const EntitySpec* e : of_sort(model, system, "Curve"))
  {
    EdgeSpec edge = edge_base(*e, EdgeKind::Curve);
    edge.speed_factor = number(*e, "speed_factor", Unit::None);
    if (!(edge.speed_factor > 0 && edge.speed_factor <= 1))
      invalid("curve '" + e->name + "' needs a speed factor in (0, 1]");
    t.edges.push_back(edge);
  }

  for (const EntitySpec* e : of_sort(model, system, "RouteData"))
  {
    RoutePathSpec path{e->name, ref_list(*e, "path")};
    if (path.nodes.size() < 2)
      invalid("route '" + e->name + "' needs at least two nodes");
    if (path.nodes.front() != ref(*e, "from") || path.nodes.back() != ref(*e, "to"))
      invalid("route '" + e->name + "' path does not run from its 'from' to its 'to' node");
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
    {
      if (!t.edge_between(path.nodes[i], path.nodes[i + 1]))
      {
        invalid("route '" + e->name + "' is not a connected walk: no track between '"
          + path.nodes[i] + "' and '" + path.nodes[i + 1] + "'");
      }
    }
    t.routes.push_back(std::move(path));
  }

  for (const EntitySpec* e : of_sort(model, system, "AGV"))
  {
    VehicleSpec v;
    v.name = e->name;
    v.speed_mps = number(*e, "speed", Unit::MetrePerSecond);
    v.home = ref(*e, "home");
    v.load_time = duration(*e, "load_time");
    v.unload_time = duration(*e, "unload_time");
    if (!(v.speed_mps > 0))
      invalid("AGV '" + v.name + "' must have a positive speed");
    const auto node = t.nodes.find(v.home);
    if (node == t.nodes.end() || node->second.kind != NodeKind::Home)
      invalid("AGV '" + v.name + "' home is not a home station");
    t.agvs.push_back(std::move(v));
  }
  if (t.agvs.empty())
    throw Error(ErrorCode::MissingComponent, "detailed transfer has no AGV");
  return t;
}

std::string mode_name(TransferMode mode)
{
  return std::string(to_string(mode));
}

} // anonymous namespace

//==============================================================================
SimTime AbstractTransfer::travel_time(const std::string& from, const std::string& to) const
{
  const auto index = [&](const std::string& s)
    {
      const auto it = std::find(stations.begin(), stations.end(), s);
      if (it == stations.end())
        invalid("station '" + s + "' is not on route '" + route + "'");
      return static_cast<std::size_t>(it - stations.begin());
    };
  return travel[index(from)][index(to)];
}

const EdgeSpec* DetailedTransfer::edge_between(const std::string& a, const std::string& b) const
{
  for (const auto& e : edges)
  {
    if ((e.from == a && e.to == b) || (e.from == b && e.to == a))
      return &e;
  }
  return nullptr;
}

const RoutePathSpec* DetailedTransfer::route_between(
  const std::string& from, const std::string& to) const
{
  for (const auto& r : routes)
  {
    if (r.nodes.front() == from && r.nodes.back() == to)
      return &r;
  }
  return nullptr;
}

std::string DetailedTransfer::node_of(const std::string& unit) const
{
  const auto direct = nodes.find(unit);
  if (direct != nodes.end() && direct->second.kind == NodeKind::Home)
    return unit;
  for (const auto& [name, n] : nodes)
  {
    if (n.kind == NodeKind::Stop && n.serves == unit)
      return name;
  }
  invalid("no stop station serves '" + unit + "'");
}

SimTime traversal_time(const EdgeSpec& edge, double speed_mps)
{
  const double v = edge.kind == EdgeKind::Straight
    ? std::min(speed_mps, edge.speed_limit_mps)
    : speed_mps * edge.speed_factor;
  const double us = edge.length_m / v * 1e6;
  const double nearest = std::round(us);
  if (std::abs(us - nearest) <= 1e-9 * std::max(1.0, us))
    return SimTime{static_cast<std::int64_t>(nearest)};
  return SimTime{static_cast<std::int64_t>(std::ceil(us))};
}

SimTime leg_time(const DetailedTransfer& transfer, const RoutePathSpec& path, double speed_mps)
{
  SimTime total;
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
    total += traversal_time(*transfer.edge_between(path.nodes[i], path.nodes[i + 1]), speed_mps);
  const auto last = transfer.nodes.find(path.nodes.back());
  if (last != transfer.nodes.end() && last->second.kind == NodeKind::Stop)
    total += last->second.dwell;
  return total;
}

ExecutableScenario with_fleet(const ExecutableScenario& scenario, std::int64_t n)
{
  if (n < 1)
    invalid("fleet size must be at least 1");
  if (scenario.detailed_transfer
    && n > static_cast<std::int64_t>(scenario.detailed_transfer->agvs.size()))
  {
    invalid("detailed model declares only "
      + std::to_string(scenario.detailed_transfer->agvs.size()) + " AGVs");
  }
  ExecutableScenario copy = scenario;
  copy.fleet = n;
  if (copy.abstract_transfer)
    copy.abstract_transfer->agv_count = n;
  return copy;
}

//==============================================================================
InformationModel compose_model(
  const Workspace& workspace, const ScenarioConfig& config, TransferMode mode)
{
  const std::optional<std::string>& transfer_name =
    mode == TransferMode::Abstract ? config.abstract_model : config.detailed_model;
  if (!transfer_name)
  {
    throw Error(ErrorCode::ModeMismatch, "scenario '" + config.name + "' has no "
      + mode_name(mode) + " transfer model");
  }

  const InformationModel& plant = workspace.model(config.plant_model);
  const InformationModel& transfer = workspace.model(*transfer_name);
  if (plant.sort_set() != transfer.sort_set())
  {
    throw Error(ErrorCode::SortSystemMismatch, "models '" + plant.name() + "' and '"
      + transfer.name() + "' use different sort sets");
  }

  InformationModel merged(config.plant_model + "_" + mode_name(mode), plant.sort_set());
  for (const auto* part : {&plant, &transfer})
  {
    for (const auto& [name, e] : part->entities())
    {
      if (merged.has_entity(name))
        throw Error(ErrorCode::NameClash, "entity '" + name + "' defined by both models");
      merged.define_entity(e);
    }
  }

  std::function<void(Value&)> internalize = [&](Value& v)
    {
      if (v.is_ref())
      {
        EntityRef r = v.as_ref();
        if (r.external && merged.has_entity(r.target))
          v = Value(EntityRef{r.target, false});
      }
      else if (v.is_list())
      {
        ValueList list = v.as_list();
        for (auto& item : list)
          internalize(item);
        v = Value(std::move(list));
      }
    };
  for (auto& [name, e] : merged.entities())
  {
    for (auto& a : e.attributes)
      internalize(a.value);
  }
  return merged;
}

//==============================================================================
std::vector<Violation> mode_violations(
  const InformationModel& model, TransferMode mode, const SortSystem& system)
{
  static const std::vector<std::string> abstract_parts = {"RouteModel", "HomeStation", "AGVFleet"};
  static const std::vector<std::string> detailed_parts = {
    "StraightTrack", "StopStation", "RouteData", "HomeStation", "AGV"};

  std::vector<Violation> out;
  for (const auto& sort : mode == TransferMode::Abstract ? abstract_parts : detailed_parts)
  {
    if (of_sort(model, system, sort).empty())
    {
      out.push_back(Violation{"mode:" + mode_name(mode), model.name(), sort, "missing",
        mode_name(mode) + " transfer mode needs a " + sort + " entity"});
    }
  }
  return out;
}

//==============================================================================
ExecutableScenario instantiate(
  const InformationModel& model,
  const Ontology& profile,
  const ScenarioConfig& config,
  const SortSystem& system,
  const Alphabet& alphabet)
{
  const ViolationReport report = verify_model(model, profile, system, alphabet);
  if (!report.empty())
  {
    throw Error(ErrorCode::VerificationFailed, "model '" + model.name()
      + "' violates '" + profile.name + "':\n" + to_text(report));
  }

  const auto mode_issues = mode_violations(model, config.mode, system);
  if (!mode_issues.empty())
  {
    std::string message = "model '" + model.name() + "' cannot run in "
      + mode_name(config.mode) + " mode:";
    for (const auto& v : mode_issues)
      message += " " + v.item;
    throw Error(ErrorCode::ModeMismatch, message);
  }

  if (config.horizon.us <= 0)
    invalid("horizon must be positive");

  ExecutableScenario sc;
  sc.model_name = config.plant_model;
  sc.scenario_name = config.name;
  sc.mode = config.mode;
  sc.horizon = config.horizon;
  sc.seed = config.seed;

  for (const EntitySpec* e : of_sort(model, system, "MachiningLine"))
  {
    MachiningLineSpec line{e->name, duration(*e, "cycle_time"),
      count(*e, "in_buffer"), count(*e, "out_buffer")};
    if (line.cycle_time.us <= 0 || line.in_buffer < 1 || line.out_buffer < 1)
      invalid("machining line '" + e->name + "' needs a positive cycle time and buffers");
    sc.machining_lines.push_back(line);
  }
  if (sc.machining_lines.empty())
    throw Error(ErrorCode::MissingComponent, "model has no MachiningLine");

  const EntitySpec& assy = exactly_one(model, system, "AssemblyLine");
  sc.assembly_line = AssemblyLineSpec{assy.name, duration(assy, "assembly_time"),
    count(assy, "in_buffer"), count(assy, "out_buffer"), {}};
  if (sc.assembly_line.assembly_time.us <= 0 || sc.assembly_line.in_buffer < 1
    || sc.assembly_line.out_buffer < 1)
  {
    invalid("assembly line '" + assy.name + "' needs a positive assembly time and buffers");
  }

  const EntitySpec& wh = exactly_one(model, system, "Warehouse");
  sc.warehouse = WarehouseSpec{wh.name, duration(wh, "store_time"),
    duration(wh, "retrieve_time"), count(wh, "capacity")};
  if (sc.warehouse.store_time.us <= 0 || sc.warehouse.retrieve_time.us <= 0
    || sc.warehouse.capacity < 1)
  {
    invalid("warehouse '" + wh.name + "' needs positive times and capacity");
  }

  std::set<std::string> lines;
  for (const auto& l : sc.machining_lines)
    lines.insert(l.name);

  for (const auto& n : config.needs)
  {
    if (n.assembly != sc.assembly_line.name)
      invalid("'needs' names unknown assembly line '" + n.assembly + "'");
    if (lines.count(n.source) == 0)
      invalid("'needs' names unknown machining line '" + n.source + "'");
    if (n.count < 1)
      invalid("'needs' count must be at least 1");
    sc.assembly_line.needs[n.source] += n.count;
  }

  sc.releases = config.releases;
  for (const auto& r : sc.releases)
  {
    if (lines.count(r.unit) == 0)
      invalid("release names unknown machining line '" + r.unit + "'");
    if (r.kind != ReleaseKind::Batch && r.interval.us <= 0)
      invalid("release interval for '" + r.unit + "' must be positive");
    if (r.kind == ReleaseKind::Batch && r.count < 0)
      invalid("batch size for '" + r.unit + "' must be non-negative");
  }

  sc.routes = config.routes;
  std::set<std::string> routed;
  for (const auto& r : sc.routes)
  {
    const bool from_ok = lines.count(r.from) > 0 || r.from == sc.assembly_line.name;
    const bool to_ok = r.to == sc.assembly_line.name || r.to == sc.warehouse.name;
    if (!from_ok || !to_ok || r.from == r.to)
      invalid("unsupported route " + r.from + " -> " + r.to);
    if (!routed.insert(r.from).second)
      invalid("unit '" + r.from + "' is routed twice");
    if (r.from == sc.assembly_line.name && r.to != sc.warehouse.name)
      invalid("the assembly line must route to the warehouse");
    if (r.to == sc.assembly_line.name && sc.assembly_line.needs.count(r.from) == 0
      && !config.needs.empty())
    {
      invalid("'" + r.from + "' feeds the assembly line without a 'needs' entry");
    }
  }
  for (const auto& l : sc.machining_lines)
  {
    if (routed.count(l.name) == 0)
      invalid("machining line '" + l.name + "' has no route");
  }
  if (routed.count(sc.assembly_line.name) == 0)
    invalid("assembly line '" + sc.assembly_line.name + "' has no route");

  // Default bill of materials: one part from each line feeding the assembly.
  if (config.needs.empty())
  {
    for (const auto& r : sc.routes)
    {
      if (r.to == sc.assembly_line.name)
        sc.assembly_line.needs[r.from] = 1;
    }
  }
  if (sc.assembly_line.needs.empty())
    invalid("no machining line feeds the assembly line");

  sc.retrievals = config.retrievals;
  for (const auto& r : sc.retrievals)
  {
    if (r.unit != sc.warehouse.name)
      invalid("retrieval names unknown warehouse '" + r.unit + "'");
    if (r.interval.us <= 0)
      invalid("retrieval interval must be positive");
  }

  std::vector<std::pair<std::string, std::string>> legs;
  if (config.mode == TransferMode::Abstract)
  {
    sc.abstract_transfer = abstract_transfer(model, system);
    const auto& t = *sc.abstract_transfer;
    for (const auto& r : sc.routes)
    {
      t.travel_time(t.home, r.from);
      t.travel_time(r.from, r.to);
      t.travel_time(r.to, t.home);
    }
    sc.fleet = t.agv_count;
  }
  else
  {
    sc.detailed_transfer = detailed_transfer(model, system);
    const auto& t = *sc.detailed_transfer;
    for (const auto& v : t.agvs)
    {
      for (const auto& r : sc.routes)
      {
        legs.emplace_back(v.home, t.node_of(r.from));
        legs.emplace_back(t.node_of(r.from), t.node_of(r.to));
        legs.emplace_back(t.node_of(r.to), v.home);
      }
    }
    for (const auto& [from, to] : legs)
    {
      if (from != to && !t.route_between(from, to))
        invalid("no route data from '" + from + "' to '" + to + "'");
    }
    sc.fleet = static_cast<std::int64_t>(t.agvs.size());
  }

  if (config.fleet)
    return with_fleet(sc, *config.fleet);
  if (sc.fleet < 1)
    invalid("the transfer system has no AGVs");
  return sc;
}

ExecutableScenario instantiate(
  const Workspace& workspace,
  const std::string& scenario,
  std::optional<TransferMode> mode,
  const std::string& profile)
{
  ScenarioConfig config = workspace.scenario(scenario);
  if (mode)
    config.mode = *mode;
  const InformationModel model = compose_model(workspace, config, config.mode);
  return instantiate(model, workspace.ontology(profile), config,
    workspace.sorts, workspace.alphabet);
}

//==============================================================================
std::vector<PairDemand> derive_demand(const ExecutableScenario& sc)
{
  const double horizon_h = static_cast<double>(sc.horizon.us) / 3.6e9;

  std::map<std::string, double> line_rate;
  for (const auto& l : sc.machining_lines)
  {
    double released = 0.0;
    for (const auto& r : sc.releases)
    {
      if (r.unit != l.name)
        continue;
      if (r.kind == ReleaseKind::Batch)
        released += horizon_h > 0 ? static_cast<double>(r.count) / horizon_h : 0.0;
      else
        released += 3.6e9 / static_cast<double>(r.interval.us);
    }
    line_rate[l.name] = std::min(released, 3.6e9 / static_cast<double>(l.cycle_time.us));
  }

  const auto& a = sc.assembly_line;
  double assy_rate = 3.6e9 / static_cast<double>(a.assembly_time.us);
  for (const auto& [src, n] : a.needs)
    assy_rate = std::min(assy_rate, line_rate[src] / static_cast<double>(n));

  std::vector<PairDemand> out;
  for (const auto& r : sc.routes)
  {
    double rate = 0.0;
    if (r.from == a.name)
      rate = assy_rate;
    else if (r.to == a.name)
      rate = assy_rate * static_cast<double>(a.needs.at(r.from));
    else
      rate = line_rate[r.from];
    out.push_back(PairDemand{r.from, r.to, rate});
  }
  return out;
}

//==============================================================================
double CapacityEstimate::total_per_hour() const
{
  double total = 0.0;
  for (const auto& p : pairs)
    total += p.per_hour;
  return total;
}

double CapacityEstimate::implied_throughput(std::int64_t fleet) const
{
  if (offered_load <= 0.0)
    return 0.0;
  return total_per_hour() * std::min(1.0, static_cast<double>(fleet) / offered_load);
}

double CapacityEstimate::utilization(std::int64_t fleet) const
{
  if (fleet <= 0)
    return 0.0;
  return std::min(1.0, offered_load / static_cast<double>(fleet));
}

double CapacityEstimate::mean_latency_s() const
{
  double weighted = 0.0;
  const double total = total_per_hour();
  if (total <= 0.0)
    return 0.0;
  for (const auto& p : pairs)
    weighted += p.per_hour * static_cast<double>(p.latency.us) / 1e6;
  return weighted / total;
}

CapacityEstimate estimate_transfer_capacity(
  const ExecutableScenario& scenario, const std::vector<PairDemand>& demand)
{
  if (!scenario.abstract_transfer)
  {
    throw Error(ErrorCode::ModeMismatch,
      "capacity estimation needs the abstract transfer mode");
  }
  const AbstractTransfer& t = *scenario.abstract_transfer;

  CapacityEstimate est;
  est.model_name = scenario.model_name;
  for (const auto& d : demand)
  {
    if (d.per_hour < 0.0)
      throw Error(ErrorCode::InvalidArgument, "demand must be non-negative");
    PairEstimate p;
    p.from = d.from;
    p.to = d.to;
    p.per_hour = d.per_hour;
    p.latency = t.travel_time(t.home, d.from) + t.load_time + t.travel_time(d.from, d.to)
      + t.unload_time;
    p.busy = p.latency + t.travel_time(d.to, t.home);
    est.offered_load += d.per_hour * static_cast<double>(p.busy.us) / 3.6e9;
    est.pairs.push_back(p);
  }

  // Loads that are whole numbers up to rounding noise do not round up.
  const double nearest = std::round(est.offered_load);
  const double load = std::abs(est.offered_load - nearest) < 1e-9 ? nearest : est.offered_load;
  est.required_agvs = static_cast<std::int64_t>(std::ceil(load));
  est.utilization_at_required =
    est.required_agvs > 0 ? est.offered_load / static_cast<double>(est.required_agvs) : 0.0;
  return est;
}

std::string to_text(const CapacityEstimate& e)
{
  std::ostringstream out;
  char buf[160];
  out << "model " << e.model_name << "\n";
  out << "pair                 per_hour    busy_s  latency_s\n";
  for (const auto& p : e.pairs)
  {
    std::snprintf(buf, sizeof(buf), "%-20s %8.3f %9.3f %10.3f\n",
      (p.from + "->" + p.to).c_str(), p.per_hour,
      static_cast<double>(p.busy.us) / 1e6, static_cast<double>(p.latency.us) / 1e6);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "offered_load %.6f\nrequired_agvs %lld\n"
    "utilization_at_required %.6f\n", e.offered_load,
    static_cast<long long>(e.required_agvs), e.utilization_at_required);
  out << buf;
  return out.str();
}

} // namespace mfgsim::mfg
