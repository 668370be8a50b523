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

#ifndef MFGSIM__SORTS_HPP
#define MFGSIM__SORTS_HPP

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mfgsim {

/// True if the token matches [A-Za-z_][A-Za-z0-9_-]*.
bool is_identifier(std::string_view token);

/// A sort is always named relative to the sort set that declares it. Two
/// sort sets may both declare a sort called "Speed"; those are distinct sorts.
struct SortRef
{
  std::string set;
  std::string name;

  auto operator<=>(const SortRef&) const = default;
  bool operator==(const SortRef&) const = default;
};

std::string to_string(const SortRef& ref);

//==============================================================================
/// A named set of sorts with its own subsort partial order.
///
/// Only the declared (Hasse-style) edges are stored as the value; the strict
/// up-closure of every sort is maintained alongside so that queries and cycle
/// checks are lookups. Self-edges are rejected; reflexivity lives in
/// is_subsort().
class SortSet
{
public:
  using Edge = std::pair<std::string, std::string>; // (sub, super)

  SortSet() = default;
  explicit SortSet(std::string name);

  const std::string& name() const { return _name; }

  /// Adding a sort that already exists is a no-op.
  SortSet& add_sort(const std::string& sort);

  /// Throws UnknownSort if either sort is absent, CycleIntroduced if the edge
  /// would make the order non-antisymmetric (including sub == super).
  SortSet& declare_subsort(const std::string& sub, const std::string& super);

  bool contains(const std::string& sort) const;

  /// Reflexive-transitive closure query. Throws UnknownSort.
  bool is_subsort(const std::string& t, const std::string& t1) const;

  /// Declared supersorts of `sort` (no closure), in name order.
  std::vector<std::string> direct_supersorts(const std::string& sort) const;

  const std::set<std::string>& sorts() const { return _sorts; }
  const std::set<Edge>& edges() const { return _edges; }

  bool operator==(const SortSet& other) const
  {
    return _name == other._name && _sorts == other._sorts
      && _edges == other._edges;
  }

private:
  std::string _name;
  std::set<std::string> _sorts;
  std::set<Edge> _edges;
  std::map<std::string, std::set<std::string>> _strict_up;
};

//==============================================================================
class SortSystem
{
public:
  using RankEdge = std::pair<std::string, std::string>; // (below, above)

  /// Throws DuplicateSortSet or InvalidIdentifier.
  SortSet& declare_sort_set(const std::string& name);

  bool has_sort_set(const std::string& name) const;

  /// Throws UnknownSortSet.
  const SortSet& sort_set(const std::string& name) const;
  SortSet& sort_set(const std::string& name);

  /// Convenience forwarding to SortSet::declare_subsort.
  void declare_subsort(
    const std::string& set, const std::string& sub, const std::string& super);

  /// Sorts of different sets are never comparable; asking about a sort that
  /// the named set does not contain throws UnknownSort.
  bool is_subsort(
    const std::string& set, const std::string& t, const std::string& t1) const;

  /// Both refs must live in the same set to be comparable. Returns false for
  /// refs into different sets; throws if either ref names something unknown.
  bool is_subsort(const SortRef& t, const SortRef& t1) const;

  bool contains(const SortRef& ref) const;

  /// Throws UnknownSortSet, CycleIntroduced.
  void rank_sort_sets(const std::string& below, const std::string& above);

  /// Strict: a set is never ranked below itself.
  bool is_ranked_below(const std::string& below, const std::string& above) const;

  const std::map<std::string, SortSet>& sort_sets() const { return _sets; }
  const std::set<RankEdge>& rank_edges() const { return _rank_edges; }

  bool operator==(const SortSystem& other) const
  {
    return _sets == other._sets && _rank_edges == other._rank_edges;
  }

private:
  std::map<std::string, SortSet> _sets;
  std::set<RankEdge> _rank_edges;
  std::map<std::string, std::set<std::string>> _rank_up;
};

//==============================================================================
/// The terminological alphabet: every symbol may carry many sorts, possibly
/// drawn from several sort sets.
class Alphabet
{
public:
  /// Merges `assignments` into the symbol's existing sorts. Throws
  /// UnknownSort / UnknownSortSet without modifying anything.
  Alphabet& assign_symbol_sorts(
    const SortSystem& system,
    const std::string& symbol,
    const std::set<SortRef>& assignments);

  const std::set<SortRef>& sorts_of(const std::string& symbol) const;

  const std::map<std::string, std::set<SortRef>>& symbols() const
  {
    return _symbols;
  }

  bool operator==(const Alphabet&) const = default;

private:
  std::map<std::string, std::set<SortRef>> _symbols;
};

} // namespace mfgsim

#endif // MFGSIM__SORTS_HPP
