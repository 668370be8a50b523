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

#ifndef MFGSIM__ENTITY_HPP
#define MFGSIM__ENTITY_HPP

#include <mfgsim/rule.hpp>
#include <mfgsim/sorts.hpp>
#include <mfgsim/value.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mfgsim {

enum class EntityKind
{
  Object,
  Operation,
  Situation,
  Process,
};

std::string_view to_string(EntityKind kind);
std::optional<EntityKind> entity_kind_from_string(std::string_view text);

/// How an entity's attributes relate to the domain of its functor functions.
/// Metadata only: aggregate and compose mark many-to-one attribute mappings
/// for abstraction.
enum class FunctorMode
{
  Aggregate,
  Compose,
  Derive,
  Identity,
};

std::string_view to_string(FunctorMode mode);
std::optional<FunctorMode> functor_mode_from_string(std::string_view text);

struct Attribute
{
  std::string name;
  SortRef sort;
  Value value;

  bool operator==(const Attribute&) const = default;
};

struct FunctorFunction
{
  std::string name;
  std::vector<std::string> domain_attrs;
  SortRef codomain;
  std::optional<Expr> body;

  bool operator==(const FunctorFunction&) const = default;
};

struct Functor
{
  FunctorMode mode = FunctorMode::Identity;
  std::vector<FunctorFunction> functions;

  bool operator==(const Functor&) const = default;
};

/// An information entity: attributes, result sort sequence, functor and
/// application rules.
struct EntitySpec
{
  std::string name;
  EntityKind kind = EntityKind::Object;
  std::vector<Attribute> attributes;
  std::vector<SortRef> result_sort;
  std::optional<Functor> functor;
  std::vector<Rule> rules;

  const Attribute* find_attribute(const std::string& attr) const;

  /// True if any sort of the result sequence is <= `sort`.
  bool has_result_sort_at_most(const SortSystem& system, const SortRef& sort) const;

  bool operator==(const EntitySpec&) const = default;
};

class InformationModel
{
public:
  InformationModel() = default;
  InformationModel(std::string name, std::string sort_set)
  : _name(std::move(name)),
    _sort_set(std::move(sort_set))
  {
  }

  const std::string& name() const { return _name; }
  void set_name(std::string name) { _name = std::move(name); }

  /// The primary sort set; unqualified sort names in the DSL resolve here.
  const std::string& sort_set() const { return _sort_set; }
  void set_sort_set(std::string set) { _sort_set = std::move(set); }

  /// Stores the entity without checking anything but name uniqueness.
  /// Throws DuplicateEntity.
  InformationModel& define_entity(EntitySpec spec);

  /// Throws UnknownEntity.
  const EntitySpec& entity(const std::string& name) const;
  bool has_entity(const std::string& name) const;

  const std::map<std::string, EntitySpec>& entities() const { return _entities; }
  std::map<std::string, EntitySpec>& entities() { return _entities; }

  bool operator==(const InformationModel&) const = default;

private:
  std::string _name;
  std::string _sort_set;
  std::map<std::string, EntitySpec> _entities;
};

//==============================================================================
enum class Severity
{
  Error,
  Warning,
  Note,
};

std::string_view to_string(Severity severity);

struct Diagnostic
{
  Severity severity = Severity::Error;
  std::string code;
  std::string entity;
  std::string path;
  std::string rule_id;
  std::string message;

  auto operator<=>(const Diagnostic&) const = default;
  bool operator==(const Diagnostic&) const = default;
};

struct Report
{
  std::vector<Diagnostic> diagnostics;

  bool has_errors() const;
  std::size_t error_count() const;
  bool empty() const { return diagnostics.empty(); }
};

/// One line per diagnostic: `severity: entity[.path]: code: message`.
std::string format_report(const Report& report);

/// Structural checks of every entity against the sort system and alphabet.
/// Output is sorted, so it does not depend on definition order.
Report check_wellformed(
  const InformationModel& model,
  const SortSystem& system,
  const Alphabet& alphabet = {});

struct RuleReport
{
  std::string entity;
  std::vector<RuleResult> results;

  bool all_pass() const;
};

/// Throws UnknownEntity.
RuleReport evaluate_rules(
  const InformationModel& model,
  const SortSystem& system,
  const std::string& entity);

//==============================================================================
struct StructureEdge
{
  std::string from;
  std::string to;
  std::string label;

  auto operator<=>(const StructureEdge&) const = default;
  bool operator==(const StructureEdge&) const = default;
};

struct StructureGraph
{
  std::vector<std::string> nodes;
  std::vector<StructureEdge> edges;
};

/// One node per entity and one edge per (non-external) entity reference.
/// Throws ModelNotWellFormed if check_wellformed reports errors.
StructureGraph structure_graph(
  const InformationModel& model, const SortSystem& system);

std::string to_dot(const StructureGraph& graph, const std::string& name);

} // namespace mfgsim

#endif // MFGSIM__ENTITY_HPP
