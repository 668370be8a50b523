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

#include <mfgsim/entity.hpp>
#include <mfgsim/error.hpp>

#include <algorithm>
#include <sstream>

namespace mfgsim {

//==============================================================================
std::string_view to_string(EntityKind kind)
{
  switch (kind)
  {
    case EntityKind::Object: return "object";
    case EntityKind::Operation: return "operation";
    case EntityKind::Situation: return "situation";
    case EntityKind::Process: return "process";
  }
  return "object";
}

//==============================================================================
std::optional<EntityKind> entity_kind_from_string(std::string_view text)
{
  if (text == "object") return EntityKind::Object;
  if (text == "operation") return EntityKind::Operation;
  if (text == "situation") return EntityKind::Situation;
  if (text == "process") return EntityKind::Process;
  return std::nullopt;
}

//==============================================================================
std::string_view to_string(FunctorMode mode)
{
  switch (mode)
  {
    case FunctorMode::Aggregate: return "aggregate";
    case FunctorMode::Compose: return "compose";
    case FunctorMode::Derive: return "derive";
    case FunctorMode::Identity: return "identity";
  }
  return "identity";
}

//==============================================================================
std::optional<FunctorMode> functor_mode_from_string(std::string_view text)
{
  if (text == "aggregate") return FunctorMode::Aggregate;
  if (text == "compose") return FunctorMode::Compose;
  if (text == "derive") return FunctorMode::Derive;
  if (text == "identity") return FunctorMode::Identity;
  return std::nullopt;
}

//==============================================================================
std::string_view to_string(Severity severity)
{
  switch (severity)
  {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
  }
  return "error";
}

//==============================================================================
const Attribute* EntitySpec::find_attribute(const std::string& attr) const
{
  for (const auto& a : attributes)
  {
    if (a.name == attr)
      return &a;
  }
  return nullptr;
}

//==============================================================================
bool EntitySpec::has_result_sort_at_most(
  const SortSystem& system, const SortRef& sort) const
{
  if (!system.contains(sort))
    return false;

  return std::any_of(result_sort.begin(), result_sort.end(),
    [&](const SortRef& b)
    {
      return b.set == sort.set && system.contains(b)
        && system.is_subsort(b, sort);
    });
}

//==============================================================================
InformationModel& InformationModel::define_entity(EntitySpec spec)
{
  if (_entities.count(spec.name) > 0)
  {
    throw Error(ErrorCode::DuplicateEntity,
      "entity '" + spec.name + "' is already defined in model '" + _name + "'");
  }
  auto name = spec.name;
  _entities.emplace(std::move(name), std::move(spec));
  return *this;
}

//==============================================================================
const EntitySpec& InformationModel::entity(const std::string& name) const
{
  const auto it = _entities.find(name);
  if (it == _entities.end())
  {
    throw Error(ErrorCode::UnknownEntity,
      "no entity '" + name + "' in model '" + _name + "'");
  }
  return it->second;
}

//==============================================================================
bool InformationModel::has_entity(const std::string& name) const
{
  return _entities.count(name) > 0;
}

//==============================================================================
bool Report::has_errors() const
{
  return error_count() > 0;
}

//==============================================================================
std::size_t Report::error_count() const
{
  return static_cast<std::size_t>(std::count_if(
    diagnostics.begin(), diagnostics.end(),
    [](const Diagnostic& d) { return d.severity == Severity::Error; }));
}

//==============================================================================
std::string format_report(const Report& report)
{
  std::ostringstream out;
  for (const auto& d : report.diagnostics)
  {
    out << to_string(d.severity) << ": " << d.entity;
    if (!d.path.empty())
      out << "." << d.path;
    out << ": " << d.code;
    if (!d.rule_id.empty())
      out << " [" << d.rule_id << "]";
    if (!d.message.empty())
      out << ": " << d.message;
    out << "\n";
  }
  return out.str();
}

namespace {

//==============================================================================
class WellformednessChecker
{
public:
  WellformednessChecker(
    const InformationModel& model,
    const SortSystem& system,
    const Alphabet& alphabet)
  : _model(model),
    _system(system),
    _alphabet(alphabet)
  {
  }

  Report run()
  {
    if (!_system.has_sort_set(_model.sort_set()))
    {
      add(Severity::Error, "unknown-sort-set", "", "", "",
        "model '" + _model.name() + "' names unknown sort set '"
        + _model.sort_set() + "'");
    }

    for (const auto& [name, entity] : _model.entities())
      check_entity(entity);

    std::sort(_report.diagnostics.begin(), _report.diagnostics.end(),
      [](const Diagnostic& a, const Diagnostic& b)
      {
        return std::tie(a.entity, a.path, a.code, a.rule_id, a.severity, a.message)
          < std::tie(b.entity, b.path, b.code, b.rule_id, b.severity, b.message);
      });
    return std::move(_report);
  }

private:
  void add(
    Severity severity,
    std::string code,
    std::string entity,
    std::string path,
    std::string rule_id,
    std::string message)
  {
    _report.diagnostics.push_back(Diagnostic{
      severity, std::move(code), std::move(entity), std::move(path),
      std::move(rule_id), std::move(message)});
  }

  void check_sort(const EntitySpec& e, const SortRef& ref, const std::string& path)
  {
    if (!_system.contains(ref))
    {
      add(Severity::Error, "unknown-sort", e.name, path, "",
        "sort '" + to_string(ref) + "' is not declared");
    }
  }

  void check_entity(const EntitySpec& e)
  {
    if (e.result_sort.empty())
    {
      add(Severity::Error, "empty-result-sort", e.name, "result_sort", "",
        "an entity needs at least one result sort");
    }
    for (std::size_t i = 0; i < e.result_sort.size(); ++i)
      check_sort(e, e.result_sort[i], "result_sort[" + std::to_string(i) + "]");

    check_alphabet(e);

    std::set<std::string> names;
    for (const auto& a : e.attributes)
    {
      if (!names.insert(a.name).second)
      {
        add(Severity::Error, "duplicate-attr", e.name, a.name, "",
          "attribute declared more than once");
      }
      check_sort(e, a.sort, a.name);
      check_refs(e, a.name, a.value);
    }

    if (e.functor)
      check_functor(e, *e.functor, names);

    for (const auto& rule : e.rules)
    {
      for (const auto& attr : referenced_attributes(rule.expr))
      {
        if (names.count(attr) == 0)
        {
          add(Severity::Error, "rule-unknown-attr", e.name, attr, rule.id,
            "rule references undeclared attribute '" + attr + "'");
        }
      }
      for (const auto& sort : referenced_sorts(rule.expr))
        check_sort(e, sort, "rule " + rule.id);
    }
  }

  void check_alphabet(const EntitySpec& e)
  {
    const auto& symbol_sorts = _alphabet.sorts_of(e.name);
    if (symbol_sorts.empty())
      return;

    for (const auto& b : e.result_sort)
    {
      if (symbol_sorts.count(b) == 0)
      {
        add(Severity::Error, "alphabet-mismatch", e.name, "result_sort", "",
          "symbol '" + e.name + "' does not carry sort '" + to_string(b) + "'");
      }
    }
  }

  void check_refs(const EntitySpec& e, const std::string& path, const Value& v)
  {
    if (v.is_ref())
    {
      const EntityRef& ref = v.as_ref();
      if (!ref.external && !_model.has_entity(ref.target))
      {
        add(Severity::Error, "dangling-ref", e.name, path, "",
          "reference to undefined entity '" + ref.target + "'");
      }
    }
    else if (v.is_list())
    {
      const auto& list = v.as_list();
      for (std::size_t i = 0; i < list.size(); ++i)
        check_refs(e, path + "[" + std::to_string(i) + "]", list[i]);
    }
  }

  void check_functor(
    const EntitySpec& e, const Functor& f, const std::set<std::string>& attrs)
  {
    if (f.functions.empty())
    {
      add(Severity::Error, "empty-functor", e.name, "functor", "",
        "a functor includes at least one function");
    }

    for (const auto& fn : f.functions)
    {
      const std::string path = "functor." + fn.name;
      check_sort(e, fn.codomain, path);

      if (fn.domain_attrs.empty())
      {
        add(Severity::Error, "empty-domain", e.name, path, "",
          "function domain is empty");
        continue;
      }

      std::vector<std::string> outside;
      for (const auto& d : fn.domain_attrs)
      {
        if (attrs.count(d) == 0)
          outside.push_back(d);
      }

      if (outside.size() == fn.domain_attrs.size())
      {
        add(Severity::Error, "functor-overlap", e.name, path, "",
          "function domain shares no attribute with the entity");
      }
      else if (!outside.empty())
      {
        std::string list;
        for (const auto& o : outside)
          list += (list.empty() ? "" : ", ") + o;
        add(Severity::Warning, "functor-domain-not-subset", e.name, path, "",
          "domain names attributes the entity lacks: " + list);
      }
    }
  }

  const InformationModel& _model;
  const SortSystem& _system;
  const Alphabet& _alphabet;
  Report _report;
};

} // anonymous namespace

//==============================================================================
Report check_wellformed(
  const InformationModel& model,
  const SortSystem& system,
  const Alphabet& alphabet)
{
  return WellformednessChecker(model, system, alphabet).run();
}

//==============================================================================
bool RuleReport::all_pass() const
{
  return std::all_of(results.begin(), results.end(),
    [](const RuleResult& r) { return r.outcome == RuleOutcome::Pass; });
}

//==============================================================================
RuleReport evaluate_rules(
  const InformationModel& model,
  const SortSystem& system,
  const std::string& entity)
{
  const EntitySpec& e = model.entity(entity);
  RuleReport report;
  report.entity = entity;
  for (const auto& rule : e.rules)
    report.results.push_back(evaluate_rule(rule, e, system));
  return report;
}

//==============================================================================
StructureGraph structure_graph(
  const InformationModel& model, const SortSystem& system)
{
  const Report wf = check_wellformed(model, system);
  if (wf.has_errors())
  {
    throw Error(ErrorCode::ModelNotWellFormed,
      "model '" + model.name() + "' is not well-formed:\n" + format_report(wf));
  }

  StructureGraph graph;
  for (const auto& [name, entity] : model.entities())
  {
    graph.nodes.push_back(name);
    for (const auto& a : entity.attributes)
    {
      for_each_ref(a.value, [&](const EntityRef& ref)
        {
          if (!ref.external)
            graph.edges.push_back({name, ref.target, a.name});
        });
    }
  }
  return graph;
}

//==============================================================================
std::string to_dot(const StructureGraph& graph, const std::string& name)
{
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n";
  for (const auto& n : graph.nodes)
    out << "  \"" << n << "\";\n";
  for (const auto& e : graph.edges)
  {
    out << "  \"" << e.from << "\" -> \"" << e.to << "\" [label=\""
        << e.label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

} // namespace mfgsim
