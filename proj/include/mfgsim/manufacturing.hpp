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

#ifndef MFGSIM__MANUFACTURING_HPP
#define MFGSIM__MANUFACTURING_HPP

#include <mfgsim/ontology.hpp>
#include <mfgsim/scenario.hpp>
#include <mfgsim/sim/engine.hpp>
#include <mfgsim/workspace.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mfgsim::mfg {

using sim::SimTime;

struct MachiningLineSpec
{
  std::string name;
  SimTime cycle_time;
  std::int64_t in_buffer = 1;
  std::int64_t out_buffer = 1;
};

struct AssemblyLineSpec
{
  std::string name;
  SimTime assembly_time;
  std::int64_t in_buffer = 1;
  std::int64_t out_buffer = 1;

  /// Parts consumed per cycle, keyed by source line.
  std::map<std::string, std::int64_t> needs;
};

struct WarehouseSpec
{
  std::string name;
  SimTime store_time;
  SimTime retrieve_time;
  std::int64_t capacity = 1;
};

/// Route model, home station and AGV fleet of the abstract mode.
struct AbstractTransfer
{
  std::string route;
  std::vector<std::string> stations;
  std::vector<std::vector<SimTime>> travel; // [from][to], over `stations`
  std::string home;
  std::string dispatch;
  std::string fleet;
  std::int64_t agv_count = 0;
  double speed_mps = 0.0;
  SimTime load_time;
  SimTime unload_time;

  /// Throws InvalidScenario for stations outside the matrix.
  SimTime travel_time(const std::string& from, const std::string& to) const;
};

enum class NodeKind
{
  Home,
  Stop,
  Crossing,
};

struct NodeSpec
{
  std::string name;
  NodeKind kind = NodeKind::Stop;
  SimTime dwell;

  /// Plant unit a stop station serves; empty otherwise.
  std::string serves;
};

enum class EdgeKind
{
  Straight,
  Curve,
};

struct EdgeSpec
{
  std::string name;
  EdgeKind kind = EdgeKind::Straight;
  std::string from;
  std::string to;
  double length_m = 0.0;
  double speed_limit_mps = 0.0; // straight tracks
  double speed_factor = 1.0;    // curves, in (0, 1]
};

struct RoutePathSpec
{
  std::string name;
  std::vector<std::string> nodes;
};

struct VehicleSpec
{
  std::string name;
  double speed_mps = 0.0;
  std::string home;
  SimTime load_time;
  SimTime unload_time;
};

/// Track graph of the detailed mode. Edges are traversable both ways.
struct DetailedTransfer
{
  std::map<std::string, NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  std::vector<RoutePathSpec> routes;
  std::vector<VehicleSpec> agvs;

  const EdgeSpec* edge_between(const std::string& a, const std::string& b) const;

  /// Route whose path starts at `from` and ends at `to`; the first declared
  /// one wins. Nullptr if none.
  const RoutePathSpec* route_between(const std::string& from, const std::string& to) const;

  /// Node of the stop station serving `unit`, or the home node for the home.
  std::string node_of(const std::string& unit) const;
};

/// Traversal time of `edge` at vehicle speed `speed_mps`: length divided by
/// min(speed, limit) on straights or speed * factor on curves, rounded up
/// to whole microseconds. Quotients within 1e-9 relative of a whole
/// microsecond count as exact.
SimTime traversal_time(const EdgeSpec& edge, double speed_mps);

/// Sum of traversals along `path` plus the dwell at its last node.
SimTime leg_time(const DetailedTransfer& transfer, const RoutePathSpec& path, double speed_mps);

struct ExecutableScenario
{
  std::string model_name;
  std::string scenario_name;
  TransferMode mode = TransferMode::Abstract;

  std::vector<MachiningLineSpec> machining_lines;
  AssemblyLineSpec assembly_line;
  WarehouseSpec warehouse;
  std::optional<AbstractTransfer> abstract_transfer;
  std::optional<DetailedTransfer> detailed_transfer;

  std::vector<ReleaseSchedule> releases;
  std::vector<RoutingEntry> routes;
  std::vector<RetrievalSchedule> retrievals;
  SimTime horizon;
  std::uint64_t seed = 0;

  /// AGVs in service: the abstract fleet count, or the first `fleet`
  /// vehicles in name order.
  std::int64_t fleet = 0;
};

/// Returns a copy running `n` AGVs. Throws InvalidScenario if the detailed
/// model declares fewer than `n` vehicles or `n` < 1.
ExecutableScenario with_fleet(const ExecutableScenario& scenario, std::int64_t n);

//==============================================================================
/// Merges the scenario's plant model with its transfer model for `mode`.
/// External references that resolve in the merged model become internal.
/// Throws ModeMismatch if the scenario names no model for `mode`, NotFound
/// for unknown models, NameClash on duplicate entity names.
InformationModel compose_model(
  const Workspace& workspace, const ScenarioConfig& config, TransferMode mode);

/// Transfer components `mode` needs but `model` lacks, as violations with
/// commitment "mode:<mode>", entity = model name, item = missing sort.
std::vector<Violation> mode_violations(
  const InformationModel& model, TransferMode mode, const SortSystem& system);

/// The vertical interface. Requires an empty verify_model report
/// (VerificationFailed otherwise, with the report text in the message).
/// Throws MissingComponent, ModeMismatch, InvalidScenario.
ExecutableScenario instantiate(
  const InformationModel& model,
  const Ontology& profile,
  const ScenarioConfig& config,
  const SortSystem& system,
  const Alphabet& alphabet = {});

/// compose_model + instantiate with the workspace's ontology `profile`.
/// `mode` defaults to the scenario's own.
ExecutableScenario instantiate(
  const Workspace& workspace,
  const std::string& scenario,
  std::optional<TransferMode> mode = std::nullopt,
  const std::string& profile = "mfg_profile");

//==============================================================================
struct PairDemand
{
  std::string from;
  std::string to;
  double per_hour = 0.0;
};

/// Transfers per hour on every routed pair at the steady flow the release
/// schedules and line cycle times allow.
std::vector<PairDemand> derive_demand(const ExecutableScenario& scenario);

struct PairEstimate
{
  std::string from;
  std::string to;
  double per_hour = 0.0;

  /// travel(home, from) + load + travel(from, to) + unload + travel(to, home)
  SimTime busy;

  /// Request-to-delivery time of an idle AGV: busy without the return leg.
  SimTime latency;
};

struct CapacityEstimate
{
  std::string model_name;
  std::vector<PairEstimate> pairs;

  /// Offered load in AGV-equivalents: sum of per_hour * busy / 3600 s.
  double offered_load = 0.0;
  std::int64_t required_agvs = 0;

  /// offered_load / required_agvs, or 0 without demand.
  double utilization_at_required = 0.0;

  double total_per_hour() const;

  /// Deliverable transfers per hour with `fleet` AGVs.
  double implied_throughput(std::int64_t fleet) const;
  double utilization(std::int64_t fleet) const;

  /// Demand-weighted mean latency in seconds.
  double mean_latency_s() const;
};

/// required_agvs = ceil(sum of demand * busy / 3600 s). Throws ModeMismatch
/// for a detailed scenario.
CapacityEstimate estimate_transfer_capacity(
  const ExecutableScenario& scenario, const std::vector<PairDemand>& demand);

std::string to_text(const CapacityEstimate& estimate);

//==============================================================================
struct SimOptions
{
  bool trace = true;
};

struct SimReport
{
  std::string model_name;
  std::string scenario_name;
  TransferMode mode = TransferMode::Abstract;
  std::uint64_t seed = 0;
  SimTime horizon;
  std::int64_t fleet = 0;

  sim::RunStats stats;
  std::string trace_jsonl;
  std::string trace_hash;

  std::map<std::string, std::int64_t> released;  // per machining line
  std::int64_t parts_released = 0;
  std::int64_t parts_completed = 0;
  std::int64_t assemblies_completed = 0;
  std::int64_t retrievals = 0;
  std::map<std::string, std::int64_t> wip;       // parts per location
  std::int64_t wip_total = 0;

  /// Demand the schedules would have generated over the horizon.
  double transfers_demanded = 0.0;
  std::int64_t transfers_requested = 0;
  std::int64_t transfers_delivered = 0;
  std::int64_t latency_sum_us = 0;

  std::map<std::string, std::int64_t> agv_busy_us;
  std::int64_t crossing_waits = 0;

  bool conserved() const { return parts_released == parts_completed + wip_total; }
  double throughput_per_hour() const;
  double mean_latency_s() const;
  double agv_utilization() const;
};

/// Runs one engine. Throws DeadlockDetected if the event list empties while
/// resource requests are still waiting.
SimReport simulate(
  const ExecutableScenario& scenario,
  std::uint64_t seed,
  SimTime horizon,
  const SimOptions& options = {});

/// Columns: metric,entity,value,unit.
std::string to_csv(const SimReport& report);

//==============================================================================
struct ComparisonRow
{
  std::string metric;
  std::string unit;
  double abstract_value = 0.0;
  double detailed_value = 0.0;
  double gap = 0.0; // |a - d| / |d|, 0 if both are 0
  bool flagged = false;
};

struct ComparisonReport
{
  std::string model_name;
  double threshold = 0.1;
  std::vector<ComparisonRow> rows;

  bool any_flagged() const;
};

/// Throughput, AGV utilization and transfer latency of the estimate at the
/// report's fleet size against the simulated values. Throws ModelMismatch.
ComparisonReport compare_modes(
  const CapacityEstimate& estimate, const SimReport& detailed, double threshold = 0.1);

std::string to_text(const ComparisonReport& report);
std::string to_csv(const ComparisonReport& report);

} // namespace mfgsim::mfg

#endif // MFGSIM__MANUFACTURING_HPP
