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

#ifndef MFGSIM__SCENARIO_HPP
#define MFGSIM__SCENARIO_HPP

#include <mfgsim/sim/time.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mfgsim {

enum class TransferMode
{
  Abstract,
  Detailed,
};

std::string_view to_string(TransferMode mode);
std::optional<TransferMode> transfer_mode_from_string(std::string_view text);

enum class ReleaseKind
{
  Every,       // fixed interarrival
  Batch,       // `count` parts at `at`
  Exponential, // exponential interarrival with mean `interval`, stream "demand"
};

struct ReleaseSchedule
{
  std::string unit;
  ReleaseKind kind = ReleaseKind::Every;
  sim::SimTime interval;
  sim::SimTime offset;
  std::int64_t count = 0;

  bool operator==(const ReleaseSchedule&) const = default;
};

struct RoutingEntry
{
  std::string from;
  std::string to;

  bool operator==(const RoutingEntry&) const = default;
};

struct AssemblyNeed
{
  std::string assembly;
  std::string source;
  std::int64_t count = 1;

  bool operator==(const AssemblyNeed&) const = default;
};

struct RetrievalSchedule
{
  std::string unit;
  sim::SimTime interval;

  bool operator==(const RetrievalSchedule&) const = default;
};

/// Everything needed to turn information models into a runnable scenario:
/// which models to compose, the transfer mode, demand and routing.
struct ScenarioConfig
{
  std::string name;
  std::string plant_model;
  std::optional<std::string> abstract_model;
  std::optional<std::string> detailed_model;
  TransferMode mode = TransferMode::Abstract;
  sim::SimTime horizon = sim::SimTime::from_seconds(8 * 3600);
  std::uint64_t seed = 0;

  /// Overrides the number of AGVs (abstract: fleet count, detailed: the
  /// first N declared vehicles).
  std::optional<std::int64_t> fleet;

  std::vector<ReleaseSchedule> releases;
  std::vector<RoutingEntry> routes;
  std::vector<AssemblyNeed> needs;
  std::vector<RetrievalSchedule> retrievals;

  bool operator==(const ScenarioConfig&) const = default;
};

} // namespace mfgsim

#endif // MFGSIM__SCENARIO_HPP
