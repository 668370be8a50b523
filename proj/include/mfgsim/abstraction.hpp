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

#ifndef MFGSIM__ABSTRACTION_HPP
#define MFGSIM__ABSTRACTION_HPP

#include <mfgsim/entity.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mfgsim {

enum class MapDirection
{
  Abstracting,
  Refining,
};

struct SortMapEntry
{
  std::string from;
  std::string to;

  /// Name of the produced attribute. Empty keeps the original name, or for
  /// merging entries defaults to the lowercased target sort name.
  std::string target_attribute;

  /// Aggregate or Compose merges every attribute mapped onto the same target
  /// attribute into one collection-valued attribute.
  std::optional<FunctorMode> merge;

  bool operator==(const SortMapEntry&) const = default;
};

/// Sort-to-sort rewriting within one sort set. Abstracting maps go up the
/// subsort order (t <= t1), refining maps go down (t2 <= t).
struct SortMap
{
  std::string name;
  std::string sort_set;
  MapDirection direction = MapDirection::Abstracting;
  std::vector<SortMapEntry> entries;

  const SortMapEntry* find(const std::string& from) const;

  bool operator==(const SortMap&) const = default;
};

/// Throws NotAbstracting / NotRefining if some pair points the wrong way,
/// UnknownSort / UnknownSortSet for unknown names.
void validate_sort_map(const SortMap& map, const SortSystem& system);

std::string default_merge_name(const std::string& target_sort);

struct AttributeExpansion
{
  std::string entity;
  std::string attribute;
  std::vector<Attribute> replacements;

  bool operator==(const AttributeExpansion&) const = default;
};

/// Per-attribute replacement lists used by refinement.
struct Expansion
{
  std::string name;
  std::string sort_set;
  std::vector<AttributeExpansion> entries;

  bool operator==(const Expansion&) const = default;
};

struct TransformResult
{
  EntitySpec entity;

  /// "rule-needs-review" notes for rules that mention attributes the
  /// transformation renamed or merged away. Rules themselves are untouched.
  std::vector<Diagnostic> notes;
};

/// Rewrites every attribute at sort t of the map's sort set to t1 = map(t).
/// Name, result sort and rules are preserved. Attributes from other sort
/// sets pass through. Throws NotAbstracting, UnmappedSort, NameClash.
TransformResult abstract_entity(
  const EntitySpec& entity, const SortMap& map, const SortSystem& system);

/// Replaces attributes per `expansion` and rewrites remaining sorts through
/// the map (unmapped sorts stay). Every produced attribute must sit below
/// some original attribute's sort. Throws NotRefining, OrphanAttribute,
/// UnknownAttribute, NameClash.
TransformResult refine_entity(
  const EntitySpec& entity,
  const SortMap& map,
  const Expansion& expansion,
  const SortSystem& system);

/// Passes iff names, result sorts and rules agree and every concrete
/// attribute at t has an abstract attribute at some t1 with t <= t1.
Report check_abstraction_pair(
  const EntitySpec& concrete, const EntitySpec& abstract, const SortSystem& system);

/// Dual condition: every refined attribute at t2 has an original attribute at
/// some t with t2 <= t.
Report check_refinement_pair(
  const EntitySpec& refined, const EntitySpec& original, const SortSystem& system);

struct ModelTransformResult
{
  InformationModel model;
  std::vector<Diagnostic> notes;
};

/// Entity-by-entity lifting of abstract_entity / refine_entity.
ModelTransformResult abstract_model(
  const InformationModel& model, const SortMap& map, const SortSystem& system);

ModelTransformResult refine_model(
  const InformationModel& model,
  const SortMap& map,
  const Expansion& expansion,
  const SortSystem& system);

/// Keeps entities whose result sort meets the view sort set, and of those
/// only attributes declared in the view. References to dropped entities
/// become external. Throws UnknownSortSet.
InformationModel project_view(
  const InformationModel& model,
  const std::string& view_sort_set,
  const SortSystem& system);

//==============================================================================
struct AttributePath
{
  std::string entity;
  std::string attribute;

  auto operator<=>(const AttributePath&) const = default;
  bool operator==(const AttributePath&) const = default;
};

std::string to_string(const AttributePath& path);

struct ModeMappingEntry
{
  AttributePath abstract_path;
  std::vector<AttributePath> detailed_paths;
  std::optional<FunctorMode> mode;

  bool operator==(const ModeMappingEntry&) const = default;
};

/// Attribute-level correspondence between an abstract-mode model and a
/// detailed-mode model of the same component.
struct ModeMapping
{
  std::string name;
  std::vector<ModeMappingEntry> entries;

  bool operator==(const ModeMapping&) const = default;
};

/// Errors: unresolved paths, detailed attributes not below their abstract
/// counterpart, abstract entities no entry covers. Warnings: detailed
/// entities no entry mentions.
Report coordinate_modes(
  const InformationModel& abstract_model,
  const InformationModel& detailed_model,
  const ModeMapping& mapping,
  const SortSystem& system);

} // namespace mfgsim

#endif // MFGSIM__ABSTRACTION_HPP
