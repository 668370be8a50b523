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

#ifndef MFGSIM__SIM__TIME_HPP
#define MFGSIM__SIM__TIME_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mfgsim::sim {

/// Simulation time in integer microseconds.
struct SimTime
{
  std::int64_t us = 0;

  static constexpr SimTime from_us(std::int64_t v) { return SimTime{v}; }
  static constexpr SimTime from_seconds(std::int64_t s) { return SimTime{s * 1'000'000}; }

  auto operator<=>(const SimTime&) const = default;
  bool operator==(const SimTime&) const = default;

  SimTime operator+(SimTime o) const { return SimTime{us + o.us}; }
  SimTime operator-(SimTime o) const { return SimTime{us - o.us}; }
  SimTime& operator+=(SimTime o) { us += o.us; return *this; }
};

/// Strict duration grammar: decimal integer immediately followed by one of
/// us, ms, s, m, h. Anything else (signs, fractions, spaces) is rejected.
std::optional<SimTime> parse_duration(std::string_view text);

/// Largest unit that represents the value exactly, e.g. 28800000000 -> "8h".
std::string format_duration(SimTime t);

/// Converts a seconds quantity to microseconds. Throws InvalidArgument if
/// the value is negative, not finite, or not a whole number of microseconds.
SimTime seconds_exact(double seconds);

} // namespace mfgsim::sim

#endif // MFGSIM__SIM__TIME_HPP
