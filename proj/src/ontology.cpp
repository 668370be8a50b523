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
#include <mfgsim/ontology.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace mfgsim {

//==============================================================================
const Commitment* Ontology::find(const std::string& id) const
{
  for (const auto& c : commitments)
  {
    if (c.id == id)
      return &c;
  }
  return nullptr;
}

//==============================================================================
Report validate_ontology(const Ontology& ontology, const SortSystem& system)
{
  Report report;
  const auto add = [&](std::string code, std::string commitment, std::string msg)
  {
    report.diagnostics.push_back(Diagnostic{
      Severity::Error, std::move(code), ontology.name, std::move(commitment), "",
      std::move(msg)});
  };

  if (!system.has_sort_set(ontology.sort_set))
    add("unknown-sort-set", "", "unknown sort set '" + ontology.sort_set + "'");

  std::set<std::string> ids;
  for (const auto& c : ontology.commitments)
  {
    if (!ids.insert(c.id).second)
      add("duplicate-commitment", c.id, "commitment id used twice");

    if (!system.contains(c.applies_to))
      add("unknown-sort", c.id, "unknown sort '" + to_string(c.applies_to) + "'");

    for (const auto& req : c.required_attributes)
    {
      if (!system.contains(req.sort))
        add("unknown-sort", c.id, "unknown sort '" + to_string(req.sort) + "'");
    }
  }
  return report;
}

//==============================================================================
std::string to_text(const ViolationReport& report)
{
  std::ostringstream out;
  for (const auto& v : report.violations)
  {
    out << v.commitment << ": " << v.entity << ": " << v.item << ": " << v.kind;
    if (!v.message.empty())
      out << ": " << v.message;
    out << "\n";
  }
  return out.str();
}

//==============================================================================
std::string to_json(const ViolationReport& report)
{
  nlohmann::ordered_json doc;
  doc["verified"] = report.empty();
  doc["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : report.violations)
  {
    doc["violations"].push_back({
      {"commitment", v.commitment},
      {"entity", v.entity},
      {"item", v.item},
      {"kind", v.kind},
      {"message", v.message},
    });
  }
  return doc.dump(2) + "\n";
}

namespace {

bool sort_at_most(const SortSystem& system, const SortRef& t, const SortRef& t1)
{
  return t.set == t1.set && system.contains(t) && system.contains(t1)
    && system.is_subsort(t, t1);
}

bool satisfies(
  const SortSystem& system, const Attribute& a, const RequiredAttribute& req)
{
  return sort_at_most(system, a.sort, req.sort)
    && (!req.ref_only || is_reference_like(a.value));
}

void check_commitment(
  const Commitment& c,
  const EntitySpec& e,
  const SortSystem& system,
  std::vector<Violation>& out)
{
  for (const auto& req : c.required_attributes)
  {
    if (req.is_wildcard())
    {
      const bool found = std::any_of(e.attributes.begin(), e.attributes.end(),
        [&](const Attribute& a) { return satisfies(system, a, req); });
      if (!found && req.required)
      {
        out.push_back({c.id, e.name, "*:" + req.sort.name, "missing",
          std::string("needs an ") + (req.ref_only ? "entity reference" : "attribute")
          + " of sort <= " + to_string(req.sort)});
      }
      continue;
    }

    const Attribute* a = e.find_attribute(req.name);
    if (!a)
    {
      if (req.required)
      {
        out.push_back({c.id, e.name, req.name, "missing",
          "required attribute of sort <= " + to_string(req.sort) + " is absent"});
      }
      continue;
    }

    if (!sort_at_most(system, a->sort, req.sort))
    {
      out.push_back({c.id, e.name, req.name, "wrong-sort",
        "declared at " + to_string(a->sort) + ", expected <= "
        + to_string(req.sort)});
    }
    else if (req.ref_only && !is_reference_like(a->value))
    {
      out.push_back({c.id, e.name, req.name, "not-a-reference",
        "expected an entity reference"});
    }
  }

  for (const auto& rule : c.rules)
  {
    const RuleResult r = evaluate_rule(rule, e, system);
    if (r.outcome == RuleOutcome::Pass)
      continue;
    out.push_back({c.id, e.name, "rule:" + rule.id,
      r.outcome == RuleOutcome::TypeError ? "rule-type-error" : "rule-failed",
      r.message});
  }
}

} // anonymous namespace

//==============================================================================
ViolationReport verify_model(
  const InformationModel& model,
  const Ontology& ontology,
  const SortSystem& system,
  const Alphabet& alphabet)
{
  if (ontology.sort_set != model.sort_set())
  {
    throw Error(ErrorCode::SortSystemMismatch,
      "ontology '" + ontology.name + "' is built on sort set '"
      + ontology.sort_set + "' but model '" + model.name() + "' uses '"
      + model.sort_set() + "'");
  }

  ViolationReport report;
  for (const auto& d : check_wellformed(model, system, alphabet).diagnostics)
  {
    if (d.severity != Severity::Error)
      continue;
    report.violations.push_back(
      {"wf:" + d.code, d.entity, d.path, "not-well-formed", d.message});
  }

  for (const auto& c : ontology.commitments)
  {
    for (const auto& [name, entity] : model.entities())
    {
      if (entity.has_result_sort_at_most(system, c.applies_to))
        check_commitment(c, entity, system, report.violations);
    }
  }

  std::sort(report.violations.begin(), report.violations.end());
  return report;
}

//==============================================================================
FormalContext FormalContext::from_model(const InformationModel& model)
{
  FormalContext ctx;
  std::set<SortRef> attrs;
  for (const auto& [name, entity] : model.entities())
  {
    ctx.objects.push_back(name);
    for (const auto& a : entity.attributes)
      attrs.insert(a.sort);
  }
  ctx.attributes.assign(attrs.begin(), attrs.end());

  for (const auto& [name, entity] : model.entities())
  {
    std::vector<bool> row(ctx.attributes.size(), false);
    for (const auto& a : entity.attributes)
    {
      const auto it = std::lower_bound(
        ctx.attributes.begin(), ctx.attributes.end(), a.sort);
      row[static_cast<std::size_t>(it - ctx.attributes.begin())] = true;
    }
    ctx.incidence.push_back(std::move(row));
  }
  return ctx;
}

namespace {

using Bits = std::vector<bool>;

/// Derivation operators of the formal context.
class Derivation
{
public:
  explicit Derivation(const FormalContext& ctx)
  : _ctx(ctx)
  {
  }

  std::size_t objects() const { return _ctx.objects.size(); }
  std::size_t attributes() const { return _ctx.attributes.size(); }

  Bits extent_of(const Bits& intent) const
  {
    Bits extent(objects(), true);
    for (std::size_t g = 0; g < objects(); ++g)
    {
      for (std::size_t m = 0; m < attributes(); ++m)
      {
        if (intent[m] && !_ctx.incidence[g][m])
        {
          extent[g] = false;
          break;
        }
      }
    }
    return extent;
  }

  Bits intent_of(const Bits& extent) const
  {
    Bits intent(attributes(), true);
    for (std::size_t g = 0; g < objects(); ++g)
    {
      if (!extent[g])
        continue;
      for (std::size_t m = 0; m < attributes(); ++m)
      {
        if (!_ctx.incidence[g][m])
          intent[m] = false;
      }
    }
    return intent;
  }

  Bits closure(const Bits& intent) const
  {
    return intent_of(extent_of(intent));
  }

  Concept to_concept(const Bits& intent) const
  {
    Concept c;
    const Bits extent = extent_of(intent);
    for (std::size_t g = 0; g < objects(); ++g)
    {
      if (extent[g])
        c.extent.insert(_ctx.objects[g]);
    }
    for (std::size_t m = 0; m < attributes(); ++m)
    {
      if (intent[m])
        c.intent.insert(_ctx.attributes[m]);
    }
    return c;
  }

private:
  const FormalContext& _ctx;
};

bool is_strict_subset(const std::set<std::string>& a, const std::set<std::string>& b)
{
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // anonymous namespace

//==============================================================================
ConceptualLattice build_conceptual_lattice(const FormalContext& context)
{
  const Derivation d(context);
  const std::size_t m = d.attributes();

  // Next-closure: enumerate closed intents in lectic order.
  std::vector<Bits> intents;
  Bits current = d.closure(Bits(m, false));
  intents.push_back(current);

  const auto is_full = [](const Bits& b)
  {
    return std::all_of(b.begin(), b.end(), [](bool x) { return x; });
  };

  while (!is_full(current))
  {
    bool advanced = false;
    for (std::size_t i = m; i-- > 0;)
    {
      if (current[i])
        continue;

      Bits candidate(m, false);
      for (std::size_t j = 0; j < i; ++j)
        candidate[j] = current[j];
      candidate[i] = true;
      const Bits next = d.closure(candidate);

      bool lectic = true;
      for (std::size_t j = 0; j < i; ++j)
      {
        if (next[j] != current[j])
        {
          lectic = false;
          break;
        }
      }

      if (lectic)
      {
        current = next;
        intents.push_back(current);
        advanced = true;
        break;
      }
    }
    if (!advanced)
      break;
  }

  ConceptualLattice lattice;
  for (const auto& intent : intents)
    lattice.concepts.push_back(d.to_concept(intent));

  std::sort(lattice.concepts.begin(), lattice.concepts.end(),
    [](const Concept& a, const Concept& b)
    {
      if (a.intent.size() != b.intent.size())
        return a.intent.size() < b.intent.size();
      return a.intent < b.intent;
    });

  const std::size_t n = lattice.concepts.size();
  for (std::size_t sub = 0; sub < n; ++sub)
  {
    for (std::size_t super = 0; super < n; ++super)
    {
      const auto& lo = lattice.concepts[sub].extent;
      const auto& hi = lattice.concepts[super].extent;
      if (!is_strict_subset(lo, hi))
        continue;

      bool covered = true;
      for (std::size_t mid = 0; mid < n && covered; ++mid)
      {
        const auto& me = lattice.concepts[mid].extent;
        if (is_strict_subset(lo, me) && is_strict_subset(me, hi))
          covered = false;
      }
      if (covered)
        lattice.hasse_edges.emplace_back(sub, super);
    }
  }
  std::sort(lattice.hasse_edges.begin(), lattice.hasse_edges.end());
  return lattice;
}

//==============================================================================
ConceptualLattice build_conceptual_lattice(
  const InformationModel& model, const SortSystem& system)
{
  const Report wf = check_wellformed(model, system);
  if (wf.has_errors())
  {
    throw Error(ErrorCode::ModelNotWellFormed,
      "model '" + model.name() + "' is not well-formed:\n" + format_report(wf));
  }
  return build_conceptual_lattice(FormalContext::from_model(model));
}

//==============================================================================
bool lattice_subsumes(
  const ConceptualLattice& lattice, std::size_t general, std::size_t specific)
{
  const std::size_t n = lattice.concepts.size();
  if (general >= n || specific >= n)
  {
    throw Error(ErrorCode::UnknownConcept,
      "concept index out of range (lattice has " + std::to_string(n)
      + " concepts)");
  }

  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{specific};
  seen[specific] = true;
  while (!stack.empty())
  {
    const std::size_t c = stack.back();
    stack.pop_back();
    if (c == general)
      return true;
    for (const auto& [sub, super] : lattice.hasse_edges)
    {
      if (sub == c && !seen[super])
      {
        seen[super] = true;
        stack.push_back(super);
      }
    }
  }
  return false;
}

namespace {

template<typename Range, typename Fn>
std::string join(const Range& range, Fn&& fn)
{
  std::string out;
  for (const auto& x : range)
    out += (out.empty() ? "" : ", ") + fn(x);
  return out;
}

std::string identity(const std::string& s) { return s; }

std::string sort_label(const SortRef& r) { return to_string(r); }

} // anonymous namespace

//==============================================================================
std::string to_dot(const ConceptualLattice& lattice, const std::string& name)
{
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < lattice.concepts.size(); ++i)
  {
    const auto& c = lattice.concepts[i];
    out << "  c" << i << " [label=\"{" << join(c.extent, identity) << "}\\n{"
        << join(c.intent, sort_label) << "}\"];\n";
  }
  for (const auto& [sub, super] : lattice.hasse_edges)
    out << "  c" << sub << " -> c" << super << ";\n";
  out << "}\n";
  return out.str();
}

//==============================================================================
std::string to_text(const ConceptualLattice& lattice)
{
  std::ostringstream out;
  for (std::size_t i = 0; i < lattice.concepts.size(); ++i)
  {
    const auto& c = lattice.concepts[i];
    out << "c" << i << ": extent {" << join(c.extent, identity)
        << "} intent {" << join(c.intent, sort_label) << "}\n";
  }
  for (const auto& [sub, super] : lattice.hasse_edges)
    out << "c" << sub << " < c" << super << "\n";
  return out.str();
}

} // namespace mfgsim
