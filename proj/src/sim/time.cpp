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
#include <mfgsim/sim/time.hpp>

#include <charconv>
#include <cmath>
#include <limits>

namespace mfgsim::sim {

namespace {

struct UnitScale
{
  std::string_view suffix;
  std::int64_t us;
};

// Longest suffix first so "ms" is not read as "m" + garbage.
constexpr UnitScale scales[] = {
  {"us", 1},
  {"ms", 1'000},
  {"h", 3'600'000'000},
  {"m", 60'000'000},
  {"s", 1'000'000},
};

} // anonymous namespace

//==============================================================================
std::optional<SimTime> parse_duration(std::string_view text)
{
  std::size_t digits = 0;
  while (digits < text.size() && text[digits] >= '0' && text[digits] <= '9')
    ++digits;
  if (digits == 0)
    return std::nullopt;

  const std::string_view suffix = text.substr(digits);
  for (const auto& scale : scales)
  {
    if (suffix != scale.suffix)
      continue;

    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + digits, value);
    if (ec != std::errc() || ptr != text.data() + digits)
      return std::nullopt;
    if (value > std::numeric_limits<std::int64_t>::max() / scale.us)
      return std::nullopt;
    return SimTime{value * scale.us};
  }
  return std::nullopt;
}

//==============================================================================
std::string format_duration(SimTime t)
{
  constexpr UnitScale by_size[] = {
    {"h", 3'600'000'000},
    {"m", 60'000'000},
    {"s", 1'000'000},
    {"ms", 1'000},
    {"us", 1},
  };
  if (t.us == 0)
    return "0s";
  for (const auto& scale : by_size)
  {
    if (t.us % scale.us == 0)
      return std::to_string(t.us / scale.us) + std::string(scale.suffix);
  }
  return std::to_string(t.us) + "us";
}

//==============================================================================
SimTime seconds_exact(double seconds)
{
  if (!std::isfinite(seconds) || seconds < 0.0)
  {
    throw Error(ErrorCode::InvalidArgument,
      "duration " + std::to_string(seconds) + " s is not a non-negative number");
  }

  const long double scaled = static_cast<long double>(seconds) * 1'000'000.0L;
  const long double rounded = std::nearbyint(scaled);
  // A decimal literal such as 0.1 is not exact in binary; accept it when the
  // product lands within float noise of a whole microsecond.
  const long double tolerance = std::fmax(1e-6L, 1e-12L * rounded);
  if (std::fabs(scaled - rounded) > tolerance)
  {
    throw Error(ErrorCode::InvalidArgument,
      "duration " + std::to_string(seconds)
      + " s is not representable at microsecond resolution");
  }
  if (rounded > static_cast<long double>(std::numeric_limits<std::int64_t>::max()))
    throw Error(ErrorCode::InvalidArgument, "duration out of range");
  return SimTime{static_cast<std::int64_t>(rounded)};
}

} // namespace mfgsim::sim
