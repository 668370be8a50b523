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

#ifndef MFGSIM__SIM__RNG_HPP
#define MFGSIM__SIM__RNG_HPP

#include <cstdint>
#include <string_view>

namespace mfgsim::sim {

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view text);

/// Counter-based stream. Draw i is splitmix64(key + (i + 1) * golden), where
/// key = fnv1a64(label) ^ splitmix64(seed) and golden = 0x9e3779b97f4a7c15.
/// The state is just (key, counter), so any draw can be recomputed.
class RngStream
{
public:
  RngStream(std::uint64_t seed, std::string_view label);

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 bits of resolution.
  double next_double();

  /// Exponential with the given mean, by inversion.
  double exponential(double mean);

  std::uint64_t key() const { return _key; }
  std::uint64_t counter() const { return _counter; }

private:
  std::uint64_t _key;
  std::uint64_t _counter = 0;
};

} // namespace mfgsim::sim

#endif // MFGSIM__SIM__RNG_HPP
