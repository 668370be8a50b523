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

#include <mfgsim/abstraction.hpp>
#include <mfgsim/error.hpp>

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

namespace mfgsim {

//==============================================================================
const SortMapEntry* SortMap::find(const std::string& from) const
{
  for (const auto& e : entries)
  {
    if (e.from == from)
      return &e;
  }
  return nullptr;
}

//==============================================================================
std::string default_merge_name(const std::string& target_sort)
{
  std::string name = target_sort;
  std::transform(name.begin(), name.end(), name.begin(),
    [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return name;
}

//==============================================================================
void validate_sort_map(const SortMap& map, const SortSystem& system)
{
  const SortSet& set = system.sort_set(map.sort_set);
  for (const auto& e : map.entries)
  {
    const bool ok = map.direction == MapDirection::Abstracting
      ? set.is_subsort(e.from, e.to)
      : set.is_subsort(e.to, e.from);
    if (ok)
      continue;

    if (map.direction == MapDirection::Abstracting)
    {
      throw Error(ErrorCode::NotAbstracting,
        "map '" + map.name + "': " + e.from + " -> " + e.to
        + " does not go up the subsort order");
    }
    throw Error(ErrorCode::NotRefining,
      "map '" + map.name + "': " + e.from + " -> " + e.to
      + " does not go down the subsort order");
  }
}

namespace {

void require_unique_names(const EntitySpec& e)
{
  std::set<std::string> names;
  for (const auto& a : e.attributes)
  {
    if (!names.insert(a.name).second)
    {
      throw Error(ErrorCode::NameClash,
        "entity '" + e.name + "': transformation produces attribute '" + a.name
        + "' twice");
    }
  }
}

/// Re-points functor domains through `renamed` (old name -> new names) and
/// emits review notes for rules that mention renamed attributes.
void carry_functor_and_rules(
  const EntitySpec& original,
  const std::map<std::string, std::vector<std::string>>& renamed,
  TransformResult& result)
{
  if (original.functor)
  {
    Functor f = *original.functor;
    for (auto& fn : f.functions)
    {
      std::vector<std::string> domain;
      for (const auto& d : fn.domain_attrs)
      {
        const auto it = renamed.find(d);
        const std::vector<std::string> targets =
          it == renamed.end() ? std::vector<std::string>{d} : it->second;
        for (const auto& t : targets)
        {
          if (std::find(domain.begin(), domain.end(), t) == domain.end())
            domain.push_back(t);
        }
      }
      fn.domain_attrs = std::move(domain);
    }
    result.entity.functor = std::move(f);
  }

  for (const auto& rule : original.rules)
  {
    for (const auto& attr : referenced_attributes(rule.expr))
    {
      const auto it = renamed.find(attr);
      if (it == renamed.end())
        continue;
      if (it->second.size() == 1 && it->second.front() == attr)
        continue;

      std::string targets;
      for (const auto& t : it->second)
        targets += (targets.empty() ? "" : ", ") + t;
      result.notes.push_back(Diagnostic{Severity::Note, "rule-needs-review",
        original.name, attr, rule.id,
        "rule needs manual review: '" + attr + "' is now represented by "
        + targets});
    }
  }
}

bool at_most(const SortSystem& system, const SortRef& t, const SortRef& t1)
{
  return t.set == t1.set && system.contains(t) && system.contains(t1)
    && system.is_subsort(t, t1);
}

} // anonymous namespace

//==============================================================================
TransformResult abstract_entity(
  const EntitySpec& entity, const SortMap& map, const SortSystem& system)
{
  if (map.direction != MapDirection::Abstracting)
  {
    throw Error(ErrorCode::NotAbstracting,
      "map '" + map.name + "' is a refining map");
  }
  validate_sort_map(map, system);

  TransformResult result;
  result.entity = entity;
  result.entity.attributes.clear();
  result.entity.functor.reset();

  std::map<std::string, std::vector<std::string>> renamed;
  std::map<std::string, std::size_t> merged_slot;

  for (const auto& a : entity.attributes)
  {
    if (a.sort.set != map.sort_set)
    {
      result.entity.attributes.push_back(a);
      renamed[a.name] = {a.name};
      continue;
    }

    const SortMapEntry* entry = map.find(a.sort.name);
    if (!entry)
    {
      throw Error(ErrorCode::UnmappedSort,
        "entity '" + entity.name + "': attribute '" + a.name + "' has sort '"
        + a.sort.name + "' which map '" + map.name + "' does not cover");
    }

    const SortRef target{map.sort_set, entry->to};
    if (entry->merge)
    {
      const std::string name = entry->target_attribute.empty()
        ? default_merge_name(entry->to) : entry->target_attribute;

      const auto slot = merged_slot.find(name);
      if (slot == merged_slot.end())
      {
        merged_slot[name] = result.entity.attributes.size();
        result.entity.attributes.push_back(
          Attribute{name, target, Value(ValueList{a.value})});
      }
      else
      {
        Attribute& merged = result.entity.attributes[slot->second];
        if (merged.sort != target)
        {
          throw Error(ErrorCode::NameClash,
            "entity '" + entity.name + "': merged attribute '" + name
            + "' would carry two different sorts");
        }
        std::get<ValueList>(merged.value.data).push_back(a.value);
      }
      renamed[a.name] = {name};
    }
    else
    {
      const std::string name = entry->target_attribute.empty()
        ? a.name : entry->target_attribute;
      result.entity.attributes.push_back(Attribute{name, target, a.value});
      renamed[a.name] = {name};
    }
  }

  require_unique_names(result.entity);
  carry_functor_and_rules(entity, renamed, result);
  return result;
}

//==============================================================================
TransformResult refine_entity(
  const EntitySpec& entity,
  const SortMap& map,
  const Expansion& expansion,
  const SortSystem& system)
{
  if (map.direction != MapDirection::Refining)
  {
    throw Error(ErrorCode::NotRefining,
      "map '" + map.name + "' is an abstracting map");
  }
  validate_sort_map(map, system);

  std::map<std::string, const AttributeExpansion*> expanded;
  for (const auto& x : expansion.entries)
  {
    if (x.entity != entity.name)
      continue;
    if (!entity.find_attribute(x.attribute))
    {
      throw Error(ErrorCode::UnknownAttribute,
        "expansion '" + expansion.name + "' names attribute '" + x.attribute
        + "' which entity '" + entity.name + "' lacks");
    }
    expanded[x.attribute] = &x;
  }

  const auto covered = [&](const SortRef& produced)
  {
    return std::any_of(entity.attributes.begin(), entity.attributes.end(),
      [&](const Attribute& a) { return at_most(system, produced, a.sort); });
  };

  TransformResult result;
  result.entity = entity;
  result.entity.attributes.clear();
  result.entity.functor.reset();

  std::map<std::string, std::vector<std::string>> renamed;

  for (const auto& a : entity.attributes)
  {
    const auto x = expanded.find(a.name);
    if (x != expanded.end())
    {
      std::vector<std::string> names;
      for (const auto& r : x->second->replacements)
      {
        if (!covered(r.sort))
        {
          throw Error(ErrorCode::OrphanAttribute,
            "entity '" + entity.name + "': produced attribute '" + r.name
            + "' at sort '" + to_string(r.sort)
            + "' is not below any original attribute sort");
        }
        result.entity.attributes.push_back(r);
        names.push_back(r.name);
      }
      renamed[a.name] = std::move(names);
      continue;
    }

    const SortMapEntry* entry =
      a.sort.set == map.sort_set ? map.find(a.sort.name) : nullptr;
    if (!entry)
    {
      result.entity.attributes.push_back(a);
      renamed[a.name] = {a.name};
      continue;
    }

    const std::string name = entry->target_attribute.empty()
      ? a.name : entry->target_attribute;
    result.entity.attributes.push_back(
      Attribute{name, SortRef{map.sort_set, entry->to}, a.value});
    renamed[a.name] = {name};
  }

  require_unique_names(result.entity);
  carry_functor_and_rules(entity, renamed, result);
  return result;
}

namespace {

void check_invariant_parts(
  const EntitySpec& lhs, const EntitySpec& rhs, Report& report)
{
  const auto add = [&](std::string code, std::string message)
  {
    report.diagnostics.push_back(Diagnostic{Severity::Error, std::move(code),
      lhs.name, "", "", std::move(message)});
  };

  if (lhs.name != rhs.name)
    add("name-mismatch", "paired entities are '" + lhs.name + "' and '" + rhs.name + "'");
  if (lhs.result_sort != rhs.result_sort)
    add("result-sort-mismatch", "result sorts differ");
  if (lhs.rules != rhs.rules)
    add("rules-mismatch", "application rules differ");
}

} // anonymous namespace

//==============================================================================
Report check_abstraction_pair(
  const EntitySpec& concrete, const EntitySpec& abstract, const SortSystem& system)
{
  Report report;
  check_invariant_parts(concrete, abstract, report);

  for (const auto& a : concrete.attributes)
  {
    const bool ok = std::any_of(
      abstract.attributes.begin(), abstract.attributes.end(),
      [&](const Attribute& b) { return at_most(system, a.sort, b.sort); });
    if (!ok)
    {
      report.diagnostics.push_back(Diagnostic{Severity::Error,
        "uncovered-attribute", concrete.name, a.name, "",
        "no abstract attribute at a sort >= " + to_string(a.sort)});
    }
  }
  return report;
}

//==============================================================================
Report check_refinement_pair(
  const EntitySpec& refined, const EntitySpec& original, const SortSystem& system)
{
  Report report;
  check_invariant_parts(refined, original, report);

  for (const auto& c : refined.attributes)
  {
    const bool ok = std::any_of(
      original.attributes.begin(), original.attributes.end(),
      [&](const Attribute& a) { return at_most(system, c.sort, a.sort); });
    if (!ok)
    {
      report.diagnostics.push_back(Diagnostic{Severity::Error,
        "orphan-attribute", refined.name, c.name, "",
        "no original attribute at a sort >= " + to_string(c.sort)});
    }
  }
  return report;
}

//==============================================================================
ModelTransformResult abstract_model(
  const InformationModel& model, const SortMap& map, const SortSystem& system)
{
  ModelTransformResult result{InformationModel(model.name(), model.sort_set()), {}};
  for (const auto& [name, entity] : model.entities())
  {
    TransformResult r = abstract_entity(entity, map, system);
    result.model.define_entity(std::move(r.entity));
    result.notes.insert(result.notes.end(), r.notes.begin(), r.notes.end());
  }
  return result;
}

//==============================================================================
ModelTransformResult refine_model(
  const InformationModel& model,
  const SortMap& map,
  const Expansion& expansion,
  const SortSystem& system)
{
  for (const auto& x : expansion.entries)
  {
    if (!model.has_entity(x.entity))
    {
      throw Error(ErrorCode::UnknownEntity,
        "expansion '" + expansion.name + "' names unknown entity '" + x.entity + "'");
    }
  }

  ModelTransformResult result{InformationModel(model.name(), model.sort_set()), {}};
  for (const auto& [name, entity] : model.entities())
  {
    TransformResult r = refine_entity(entity, map, expansion, system);
    result.model.define_entity(std::move(r.entity));
    result.notes.insert(result.notes.end(), r.notes.begin(), r.notes.end());
  }
  return result;
}

//==============================================================================
InformationModel project_view(
  const InformationModel& model,
  const std::string& view_sort_set,
  const SortSystem& system)
{
  const SortSet& view = system.sort_set(view_sort_set);
  const auto in_view = [&](const SortRef& s)
  {
    return s.set == view_sort_set && view.contains(s.name);
  };

  std::set<std::string> kept;
  for (const auto& [name, entity] : model.entities())
  {
    if (std::any_of(entity.result_sort.begin(), entity.result_sort.end(), in_view))
      kept.insert(name);
  }

  const std::function<void(Value&)> externalize = [&](Value& v)
  {
    if (v.is_ref())
    {
      auto& ref = std::get<EntityRef>(v.data);
      if (kept.count(ref.target) == 0)
        ref.external = true;
    }
    else if (v.is_list())
    {
      for (auto& item : std::get<ValueList>(v.data))
        externalize(item);
    }
  };

  InformationModel out(model.name(), view_sort_set);
  for (const auto& name : kept)
  {
    const EntitySpec& original = model.entity(name);
    EntitySpec e;
    e.name = original.name;
    e.kind = original.kind;

    for (const auto& b : original.result_sort)
    {
      if (in_view(b))
        e.result_sort.push_back(b);
    }

    std::set<std::string> attrs;
    for (const auto& a : original.attributes)
    {
      if (!in_view(a.sort))
        continue;
      Attribute copy = a;
      externalize(copy.value);
      attrs.insert(copy.name);
      e.attributes.push_back(std::move(copy));
    }

    if (original.functor)
    {
      Functor f{original.functor->mode, {}};
      for (const auto& fn : original.functor->functions)
      {
        if (!in_view(fn.codomain))
          continue;
        FunctorFunction copy = fn;
        copy.domain_attrs.clear();
        for (const auto& d : fn.domain_attrs)
        {
          if (attrs.count(d) > 0)
            copy.domain_attrs.push_back(d);
        }
        if (copy.body)
        {
          const auto used = referenced_attributes(*copy.body);
          if (!std::includes(attrs.begin(), attrs.end(), used.begin(), used.end()))
            copy.body.reset();
        }
        if (!copy.domain_attrs.empty())
          f.functions.push_back(std::move(copy));
      }
      if (!f.functions.empty())
        e.functor = std::move(f);
    }

    for (const auto& rule : original.rules)
    {
      const auto used = referenced_attributes(rule.expr);
      const auto sorts = referenced_sorts(rule.expr);
      if (std::includes(attrs.begin(), attrs.end(), used.begin(), used.end())
        && std::all_of(sorts.begin(), sorts.end(), in_view))
      {
        e.rules.push_back(rule);
      }
    }

    out.define_entity(std::move(e));
  }
  return out;
}

//==============================================================================
std::string to_string(const AttributePath& path)
{
  return path.entity + "." + path.attribute;
}

//==============================================================================
Report coordinate_modes(
  const InformationModel& abstract_model,
  const InformationModel& detailed_model,
  const ModeMapping& mapping,
  const SortSystem& system)
{
  Report report;
  const auto add = [&](Severity sev, std::string code, std::string entity,
    std::string path, std::string msg)
  {
    report.diagnostics.push_back(Diagnostic{sev, std::move(code),
      std::move(entity), std::move(path), "", std::move(msg)});
  };

  const auto resolve = [](const InformationModel& m, const AttributePath& p)
    -> const Attribute*
  {
    if (!m.has_entity(p.entity))
      return nullptr;
    return m.entity(p.entity).find_attribute(p.attribute);
  };

  std::set<std::string> covered_abstract;
  std::set<std::string> mentioned_detailed;

  for (const auto& entry : mapping.entries)
  {
    const Attribute* abstract_attr = resolve(abstract_model, entry.abstract_path);
    if (!abstract_attr)
    {
      add(Severity::Error, "unresolved-path", entry.abstract_path.entity,
        entry.abstract_path.attribute,
        "abstract path " + to_string(entry.abstract_path) + " does not resolve in '"
        + abstract_model.name() + "'");
    }
    else
    {
      covered_abstract.insert(entry.abstract_path.entity);
    }

    for (const auto& dp : entry.detailed_paths)
    {
      mentioned_detailed.insert(dp.entity);
      const Attribute* detailed_attr = resolve(detailed_model, dp);
      if (!detailed_attr)
      {
        add(Severity::Error, "unresolved-path", dp.entity, dp.attribute,
          "detailed path " + to_string(dp) + " does not resolve in '"
          + detailed_model.name() + "'");
        continue;
      }
      if (abstract_attr && !at_most(system, detailed_attr->sort, abstract_attr->sort))
      {
        add(Severity::Error, "not-abstracting", dp.entity, dp.attribute,
          to_string(dp) + " at " + to_string(detailed_attr->sort)
          + " is not below " + to_string(entry.abstract_path) + " at "
          + to_string(abstract_attr->sort));
      }
    }
  }

  for (const auto& [name, entity] : abstract_model.entities())
  {
    if (covered_abstract.count(name) == 0)
    {
      add(Severity::Error, "uncovered-entity", name, "",
        "abstract entity uncovered: " + name);
    }
  }

  for (const auto& [name, entity] : detailed_model.entities())
  {
    if (mentioned_detailed.count(name) == 0)
    {
      add(Severity::Warning, "unmapped-detailed-entity", name, "",
        "detailed entity has no abstract counterpart: " + name);
    }
  }

  std::stable_sort(report.diagnostics.begin(), report.diagnostics.end(),
    [](const Diagnostic& a, const Diagnostic& b) { return a.severity < b.severity; });
  return report;
}

} // namespace mfgsim
