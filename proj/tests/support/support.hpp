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

#ifndef MFGSIM_TESTS__SUPPORT_HPP
#define MFGSIM_TESTS__SUPPORT_HPP

#include <mfgsim/abstraction.hpp>
#include <mfgsim/dsl.hpp>
#include <mfgsim/entity.hpp>
#include <mfgsim/ontology.hpp>
#include <mfgsim/sorts.hpp>
#include <mfgsim/workspace.hpp>

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mfgsim::testing {

/// Thin wrapper so generators read naturally.
class Gen
{
public:
  explicit Gen(std::uint64_t seed) : _eng(seed) {}

  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(_eng); }
  bool chance(double p) { return std::bernoulli_distribution(p)(_eng); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(range(0, static_cast<int>(n) - 1)); }

  template<typename C>
  const auto& pick(const C& c)
  {
    auto it = c.begin();
    std::advance(it, static_cast<long>(index(c.size())));
    return *it;
  }

  std::mt19937_64& engine() { return _eng; }

private:
  std::mt19937_64 _eng;
};

/// Directed graph of declared subsort edges with reachability by search.
/// The independent reference for the sort kernel.
class OrderOracle
{
public:
  explicit OrderOracle(std::size_t n) : _up(n) {}

  void add_edge(std::size_t sub, std::size_t super) { _up[sub].insert(super); }

  /// Reflexive-transitive reachability along declared edges.
  bool reaches(std::size_t from, std::size_t to) const;

  /// True if adding sub < super would close a cycle (or is a self-edge).
  bool would_cycle(std::size_t sub, std::size_t super) const { return reaches(super, sub); }

  std::size_t size() const { return _up.size(); }

private:
  std::vector<std::set<std::size_t>> _up;
};

std::string sort_name(std::size_t i);

/// Random acyclic sort set "S0".."Sn-1" where edges only go to higher
/// indices. Returns the oracle alongside.
OrderOracle random_dag(Gen& g, SortSystem& system, const std::string& set,
  std::size_t n, double edge_p);

/// Sorts t1 of `set` with t <= t1, per the oracle.
std::vector<std::string> up_set(const OrderOracle& o, std::size_t t);
std::vector<std::string> down_set(const OrderOracle& o, std::size_t t);

//==============================================================================
/// Random entity whose attributes sit at sorts of `set` (and sometimes of
/// `other`), with rules and an optional functor over its attributes.
EntitySpec random_entity(Gen& g, const SortSystem& system, const std::string& name,
  const std::string& set, const std::string& other);

/// Abstracting map over every sort of `set`; each sort goes to a random
/// sort above it. Some entries merge.
SortMap random_abstracting_map(Gen& g, const OrderOracle& o, const std::string& set);
SortMap random_refining_map(Gen& g, const OrderOracle& o, const std::string& set);
SortMap identity_map(const SortSystem& system, const std::string& set, MapDirection dir);

//==============================================================================
struct BruteLattice
{
  std::set<Concept> concepts;
  /// (sub extent, super extent) covering pairs.
  std::set<std::pair<std::set<std::string>, std::set<std::string>>> edges;
};

/// Enumerates X'' for every object subset X and derives covers by search.
BruteLattice brute_force_lattice(const FormalContext& context);

//==============================================================================
/// Random but parser-representable workspace.
Workspace random_workspace(Gen& g);

/// Checks that a span lies inside `text` and that line/column agree with
/// the byte offset. Returns an empty string when fine.
std::string span_problem(const dsl::SourceSpan& span, const std::string& text);

//==============================================================================
std::filesystem::path source_dir();
std::filesystem::path pilot_path();

/// Loads the shipped pilot workspace; throws if it does not parse.
Workspace load_pilot();

} // namespace mfgsim::testing

#endif // MFGSIM_TESTS__SUPPORT_HPP
