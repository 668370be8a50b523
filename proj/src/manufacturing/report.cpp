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

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace mfgsim::mfg {
namespace {

std::string num(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

} // anonymous namespace

//==============================================================================
double SimReport::throughput_per_hour() const
{
  return horizon.us > 0
    ? static_cast<double>(transfers_delivered) * 3.6e9 / static_cast<double>(horizon.us)
    : 0.0;
}

double SimReport::mean_latency_s() const
{
  return transfers_delivered > 0
    ? static_cast<double>(latency_sum_us) / static_cast<double>(transfers_delivered) / 1e6
    : 0.0;
}

double SimReport::agv_utilization() const
{
  std::int64_t busy = 0;
  for (const auto& [name, us] : agv_busy_us)
    busy += us;
  const double capacity = static_cast<double>(fleet) * static_cast<double>(horizon.us);
  return capacity > 0 ? static_cast<double>(busy) / capacity : 0.0;
}

//==============================================================================
std::string to_csv(const SimReport& r)
{
  std::ostringstream out;
  out << "metric,entity,value,unit\n";
  const auto row = [&](const std::string& metric, const std::string& entity,
    const std::string& value, const std::string& unit)
    {
      out << metric << "," << entity << "," << value << "," << unit << "\n";
    };

  row("scenario", r.scenario_name, r.model_name, "name");
  row("mode", "all", std::string(to_string(r.mode)), "name");
  row("seed", "all", std::to_string(r.seed), "count");
  row("horizon", "all", std::to_string(r.horizon.us), "us");
  row("fleet", "all", std::to_string(r.fleet), "count");

  for (const auto& [line, n] : r.released)
    row("parts_released", line, std::to_string(n), "count");
  row("parts_released", "all", std::to_string(r.parts_released), "count");
  row("parts_completed", "all", std::to_string(r.parts_completed), "count");
  row("assemblies_completed", "all", std::to_string(r.assemblies_completed), "count");
  row("retrievals", "all", std::to_string(r.retrievals), "count");
  for (const auto& [loc, n] : r.wip)
    row("wip", loc, std::to_string(n), "count");
  row("wip", "all", std::to_string(r.wip_total), "count");
  row("conservation", "all", r.conserved() ? "1" : "0", "bool");

  row("transfers_demanded", "all", num(r.transfers_demanded), "count");
  row("transfers_requested", "all", std::to_string(r.transfers_requested), "count");
  row("transfers_delivered", "all", std::to_string(r.transfers_delivered), "count");
  row("transfer_throughput", "all", num(r.throughput_per_hour()), "per_hour");
  row("transfer_latency_mean", "all", num(r.mean_latency_s()), "s");
  row("crossing_waits", "all", std::to_string(r.crossing_waits), "count");

  for (const auto& [agv, us] : r.agv_busy_us)
  {
    const auto f = sim::Fraction::reduced(us, r.horizon.us);
    row("agv_utilization", agv, num(f.value()), "fraction");
    row("agv_utilization_exact", agv, f.text(), "fraction");
  }
  row("agv_utilization", "all", num(r.agv_utilization()), "fraction");

  for (const auto& res : r.stats.resources)
  {
    row("utilization", res.name, num(res.utilization.value()), "fraction");
    row("utilization_exact", res.name, res.utilization.text(), "fraction");
    row("mean_queue", res.name, num(res.mean_queue.value()), "count");
    row("acquisitions", res.name, std::to_string(res.acquisitions), "count");
  }
  for (const auto& [name, v] : r.stats.counters)
    row("counter", name, std::to_string(v), "count");
  row("events", "all", std::to_string(r.stats.events), "count");
  row("trace_sha256", "all", r.trace_hash, "hex");
  return out.str();
}

//==============================================================================
bool ComparisonReport::any_flagged() const
{
  for (const auto& row : rows)
  {
    if (row.flagged)
      return true;
  }
  return false;
}

ComparisonReport compare_modes(
  const CapacityEstimate& estimate, const SimReport& detailed, double threshold)
{
  if (estimate.model_name != detailed.model_name)
  {
    throw Error(ErrorCode::ModelMismatch, "estimate is for '" + estimate.model_name
      + "' but the simulation ran '" + detailed.model_name + "'");
  }
  if (!(threshold >= 0))
    throw Error(ErrorCode::InvalidArgument, "threshold must be non-negative");

  ComparisonReport report;
  report.model_name = estimate.model_name;
  report.threshold = threshold;

  const auto add = [&](std::string metric, std::string unit, double a, double d)
    {
      ComparisonRow row{std::move(metric), std::move(unit), a, d, 0.0, false};
      if (a != d)
        row.gap = d != 0.0 ? std::abs(a - d) / std::abs(d) : std::numeric_limits<double>::infinity();
      row.flagged = row.gap > threshold;
      report.rows.push_back(std::move(row));
    };

  add("throughput", "per_hour", estimate.implied_throughput(detailed.fleet),
    detailed.throughput_per_hour());
  add("agv_utilization", "fraction", estimate.utilization(detailed.fleet),
    detailed.agv_utilization());
  add("transfer_latency", "s", estimate.mean_latency_s(), detailed.mean_latency_s());
  return report;
}

std::string to_text(const ComparisonReport& r)
{
  std::ostringstream out;
  char buf[200];
  out << "model " << r.model_name << ", threshold " << num(r.threshold) << "\n";
  std::snprintf(buf, sizeof(buf), "%-18s %-9s %12s %12s %9s %s\n",
    "metric", "unit", "abstract", "detailed", "gap", "flag");
  out << buf;
  for (const auto& row : r.rows)
  {
    std::snprintf(buf, sizeof(buf), "%-18s %-9s %12.4f %12.4f %9.4f %s\n",
      row.metric.c_str(), row.unit.c_str(), row.abstract_value, row.detailed_value,
      row.gap, row.flagged ? "GAP" : "ok");
    out << buf;
  }
  return out.str();
}

std::string to_csv(const ComparisonReport& r)
{
  std::ostringstream out;
  out << "metric,unit,abstract,detailed,gap,flagged\n";
  for (const auto& row : r.rows)
  {
    out << row.metric << "," << row.unit << "," << num(row.abstract_value) << ","
        << num(row.detailed_value) << "," << num(row.gap) << ","
        << (row.flagged ? 1 : 0) << "\n";
  }
  return out.str();
}

} // namespace mfgsim::mfg
