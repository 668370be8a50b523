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
#include <mfgsim/sorts.hpp>

namespace mfgsim {

//==============================================================================
std::string_view to_string(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::DuplicateSortSet: return "DuplicateSortSet";
    case ErrorCode::UnknownSortSet: return "UnknownSortSet";
    case ErrorCode::UnknownSort: return "UnknownSort";
    case ErrorCode::CycleIntroduced: return "CycleIntroduced";
    case ErrorCode::InvalidIdentifier: return "InvalidIdentifier";
    case ErrorCode::DuplicateEntity: return "DuplicateEntity";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::ModelNotWellFormed: return "ModelNotWellFormed";
    case ErrorCode::SortSystemMismatch: return "SortSystemMismatch";
    case ErrorCode::UnknownConcept: return "UnknownConcept";
    case ErrorCode::NotAbstracting: return "NotAbstracting";
    case ErrorCode::NotRefining: return "NotRefining";
    case ErrorCode::UnmappedSort: return "UnmappedSort";
    case ErrorCode::OrphanAttribute: return "OrphanAttribute";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::NameClash: return "NameClash";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::ParseFailed: return "ParseFailed";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::CorruptManifest: return "CorruptManifest";
    case ErrorCode::HashMismatch: return "HashMismatch";
    case ErrorCode::LockHeld: return "LockHeld";
    case ErrorCode::ScheduleInPast: return "ScheduleInPast";
    case ErrorCode::ActionPanic: return "ActionPanic";
    case ErrorCode::EngineFinished: return "EngineFinished";
    case ErrorCode::DeadlockDetected: return "DeadlockDetected";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::MissingComponent: return "MissingComponent";
    case ErrorCode::ModeMismatch: return "ModeMismatch";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

//==============================================================================
bool is_identifier(std::string_view token)
{
  if (token.empty())
    return false;

  const auto alpha = [](char c)
  {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  const auto digit = [](char c) { return c >= '0' && c <= '9'; };

  if (!alpha(token.front()))
    return false;

  for (const char c : token.substr(1))
  {
    if (!alpha(c) && !digit(c) && c != '-')
      return false;
  }
  return true;
}

//==============================================================================
std::string to_string(const SortRef& ref)
{
  return ref.set + "::" + ref.name;
}

namespace {

void require_identifier(const std::string& token)
{
  if (!is_identifier(token))
    throw Error(ErrorCode::InvalidIdentifier, "invalid identifier '" + token + "'");
}

} // anonymous namespace

//==============================================================================
SortSet::SortSet(std::string name)
: _name(std::move(name))
{
  require_identifier(_name);
}

//==============================================================================
SortSet& SortSet::add_sort(const std::string& sort)
{
  require_identifier(sort);
  if (_sorts.insert(sort).second)
    _strict_up[sort];
  return *this;
}

//==============================================================================
SortSet& SortSet::declare_subsort(const std::string& sub, const std::string& super)
{
  for (const auto* s : {&sub, &super})
  {
    if (!contains(*s))
    {
      throw Error(ErrorCode::UnknownSort,
        "sort '" + *s + "' is not in sort set '" + _name + "'");
    }
  }

  if (sub == super || _strict_up.at(super).count(sub) > 0)
  {
    throw Error(ErrorCode::CycleIntroduced,
      "declaring " + sub + " < " + super + " in '" + _name
      + "' would introduce a cycle");
  }

  if (!_edges.insert({sub, super}).second)
    return *this;

  std::set<std::string> gained = _strict_up.at(super);
  gained.insert(super);
  for (auto& [sort, up] : _strict_up)
  {
    if (sort == sub || up.count(sub) > 0)
      up.insert(gained.begin(), gained.end());
  }
  return *this;
}

//==============================================================================
bool SortSet::contains(const std::string& sort) const
{
  return _sorts.count(sort) > 0;
}

//==============================================================================
bool SortSet::is_subsort(const std::string& t, const std::string& t1) const
{
  const auto it = _strict_up.find(t);
  if (it == _strict_up.end() || !contains(t1))
  {
    throw Error(ErrorCode::UnknownSort,
      "sort '" + (contains(t) ? t1 : t) + "' is not in sort set '"
      + _name + "'");
  }
  return t == t1 || it->second.count(t1) > 0;
}

//==============================================================================
std::vector<std::string> SortSet::direct_supersorts(const std::string& sort) const
{
  std::vector<std::string> supers;
  for (const auto& [sub, super] : _edges)
  {
    if (sub == sort)
      supers.push_back(super);
  }
  return supers;
}

//==============================================================================
SortSet& SortSystem::declare_sort_set(const std::string& name)
{
  require_identifier(name);
  if (_sets.count(name) > 0)
  {
    throw Error(ErrorCode::DuplicateSortSet,
      "sort set '" + name + "' is already declared");
  }
  _rank_up[name];
  return _sets.emplace(name, SortSet(name)).first->second;
}

//==============================================================================
bool SortSystem::has_sort_set(const std::string& name) const
{
  return _sets.count(name) > 0;
}

//==============================================================================
const SortSet& SortSystem::sort_set(const std::string& name) const
{
  const auto it = _sets.find(name);
  if (it == _sets.end())
    throw Error(ErrorCode::UnknownSortSet, "unknown sort set '" + name + "'");
  return it->second;
}

//==============================================================================
SortSet& SortSystem::sort_set(const std::string& name)
{
  const auto it = _sets.find(name);
  if (it == _sets.end())
    throw Error(ErrorCode::UnknownSortSet, "unknown sort set '" + name + "'");
  return it->second;
}

//==============================================================================
void SortSystem::declare_subsort(
  const std::string& set, const std::string& sub, const std::string& super)
{
  sort_set(set).declare_subsort(sub, super);
}

//==============================================================================
bool SortSystem::is_subsort(
  const std::string& set, const std::string& t, const std::string& t1) const
{
  return sort_set(set).is_subsort(t, t1);
}

//==============================================================================
bool SortSystem::is_subsort(const SortRef& t, const SortRef& t1) const
{
  const SortSet& lhs = sort_set(t.set);
  const SortSet& rhs = sort_set(t1.set);
  if (!lhs.contains(t.name))
    throw Error(ErrorCode::UnknownSort, "unknown sort '" + to_string(t) + "'");
  if (!rhs.contains(t1.name))
    throw Error(ErrorCode::UnknownSort, "unknown sort '" + to_string(t1) + "'");

  if (t.set != t1.set)
    return false;
  return lhs.is_subsort(t.name, t1.name);
}

//==============================================================================
bool SortSystem::contains(const SortRef& ref) const
{
  const auto it = _sets.find(ref.set);
  return it != _sets.end() && it->second.contains(ref.name);
}

//==============================================================================
void SortSystem::rank_sort_sets(const std::string& below, const std::string& above)
{
  for (const auto* s : {&below, &above})
  {
    if (!has_sort_set(*s))
      throw Error(ErrorCode::UnknownSortSet, "unknown sort set '" + *s + "'");
  }

  if (below == above || _rank_up.at(above).count(below) > 0)
  {
    throw Error(ErrorCode::CycleIntroduced,
      "ranking " + below + " < " + above + " would introduce a cycle");
  }

  if (!_rank_edges.insert({below, above}).second)
    return;

  std::set<std::string> gained = _rank_up.at(above);
  gained.insert(above);
  for (auto& [set, up] : _rank_up)
  {
    if (set == below || up.count(below) > 0)
      up.insert(gained.begin(), gained.end());
  }
}

//==============================================================================
bool SortSystem::is_ranked_below(
  const std::string& below, const std::string& above) const
{
  const auto it = _rank_up.find(below);
  if (it == _rank_up.end())
    throw Error(ErrorCode::UnknownSortSet, "unknown sort set '" + below + "'");
  if (!has_sort_set(above))
    throw Error(ErrorCode::UnknownSortSet, "unknown sort set '" + above + "'");
  return it->second.count(above) > 0;
}

//==============================================================================
Alphabet& Alphabet::assign_symbol_sorts(
  const SortSystem& system,
  const std::string& symbol,
  const std::set<SortRef>& assignments)
{
  require_identifier(symbol);
  for (const auto& ref : assignments)
  {
    if (!system.has_sort_set(ref.set))
      throw Error(ErrorCode::UnknownSortSet, "unknown sort set '" + ref.set + "'");
    if (!system.contains(ref))
      throw Error(ErrorCode::UnknownSort, "unknown sort '" + to_string(ref) + "'");
  }

  _symbols[symbol].insert(assignments.begin(), assignments.end());
  return *this;
}

//==============================================================================
const std::set<SortRef>& Alphabet::sorts_of(const std::string& symbol) const
{
  static const std::set<SortRef> empty;
  const auto it = _symbols.find(symbol);
  return it == _symbols.end() ? empty : it->second;
}

} // namespace mfgsim
