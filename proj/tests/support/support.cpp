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

#include "support.hpp"

#include <mfgsim/error.hpp>

#include <algorithm>
#include <functional>

#ifndef MFGSIM_SOURCE_DIR
#error "MFGSIM_SOURCE_DIR must be defined"
#endif

namespace mfgsim::testing {

//==============================================================================
bool OrderOracle::reaches(std::size_t from, std::size_t to) const
{
  std::vector<bool> seen(_up.size(), false);
  std::vector<std::size_t> stack{from};
  while (!stack.empty())
  {
    const std::size_t at = stack.back();
    stack.pop_back();
    if (at == to)
      return true;
    if (seen[at])
      continue;
    seen[at] = true;
    for (const auto next : _up[at])
      stack.push_back(next);
  }
  return false;
}

std::string sort_name(std::size_t i)
{
  return "S" + std::to_string(i);
}

OrderOracle random_dag(Gen& g, SortSystem& system, const std::string& set,
  std::size_t n, double edge_p)
{
  SortSet& s = system.has_sort_set(set) ? system.sort_set(set) : system.declare_sort_set(set);
  OrderOracle o(n);
  for (std::size_t i = 0; i < n; ++i)
    s.add_sort(sort_name(i));
  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = i + 1; j < n; ++j)
    {
      if (g.chance(edge_p))
      {
        s.declare_subsort(sort_name(i), sort_name(j));
        o.add_edge(i, j);
      }
    }
  }
  return o;
}

std::vector<std::string> up_set(const OrderOracle& o, std::size_t t)
{
  std::vector<std::string> out;
  for (std::size_t j = 0; j < o.size(); ++j)
  {
    if (o.reaches(t, j))
      out.push_back(sort_name(j));
  }
  return out;
}

std::vector<std::string> down_set(const OrderOracle& o, std::size_t t)
{
  std::vector<std::string> out;
  for (std::size_t j = 0; j < o.size(); ++j)
  {
    if (o.reaches(j, t))
      out.push_back(sort_name(j));
  }
  return out;
}

//==============================================================================
namespace {

SortRef random_sort(Gen& g, const SortSystem& system, const std::string& set)
{
  const auto& sorts = system.sort_set(set).sorts();
  return SortRef{set, g.pick(sorts)};
}

Value random_number(Gen& g)
{
  static const double samples[] = {0.0, 1.0, 2.5, -3.0, 0.1, 60.0, 1e-7, 12345.678, 1.5e12, -0.25};
  static const Unit units[] = {Unit::None, Unit::Metre, Unit::MetrePerSecond, Unit::Second,
    Unit::Count};
  return Value::number(samples[g.index(std::size(samples))], units[g.index(std::size(units))]);
}

Value random_value(Gen& g, int depth, const std::vector<std::string>& targets)
{
  switch (g.range(0, depth > 0 ? 4 : 3))
  {
    case 0: return random_number(g);
    case 1:
    {
      static const char* texts[] = {"", "nearest-idle", "a \"quoted\" word", "tab\there",
        "line\nbreak", "back\\slash"};
      return Value::text(texts[g.index(std::size(texts))]);
    }
    case 2: return Value(g.chance(0.5));
    case 3:
      if (targets.empty())
        return random_number(g);
      return Value(EntityRef{g.pick(targets), g.chance(0.3)});
    default:
    {
      ValueList list;
      const int n = g.range(0, 3);
      for (int i = 0; i < n; ++i)
        list.push_back(random_value(g, depth - 1, targets));
      return Value(std::move(list));
    }
  }
}

Expr random_expr(Gen& g, int depth, const std::vector<std::string>& attrs,
  const SortSystem& system, const std::string& set)
{
  const auto attr = [&] { return attrs.empty() ? std::string("a0") : g.pick(attrs); };
  if (depth == 0 || g.chance(0.25))
  {
    switch (g.range(0, 4))
    {
      case 0: return Expr::attr(attr());
      case 1: return Expr::has(attr());
      case 2: return Expr::sort_at_most(attr(), random_sort(g, system, set));
      case 3: return Expr::lit(random_number(g));
      default: return Expr::lit(g.chance(0.5) ? Value(g.chance(0.5)) : Value::text("x"));
    }
  }
  static const ExprOp binaries[] = {ExprOp::And, ExprOp::Or, ExprOp::Eq, ExprOp::Ne,
    ExprOp::Lt, ExprOp::Le, ExprOp::Gt, ExprOp::Ge, ExprOp::Add, ExprOp::Sub, ExprOp::Mul,
    ExprOp::Div};
  switch (g.range(0, 5))
  {
    case 0: return Expr::unary(ExprOp::Not, random_expr(g, depth - 1, attrs, system, set));
    case 1: return Expr::unary(ExprOp::Negate, random_expr(g, depth - 1, attrs, system, set));
    default:
      return Expr::binary(binaries[g.index(std::size(binaries))],
        random_expr(g, depth - 1, attrs, system, set),
        random_expr(g, depth - 1, attrs, system, set));
  }
}

} // anonymous namespace

//==============================================================================
EntitySpec random_entity(Gen& g, const SortSystem& system, const std::string& name,
  const std::string& set, const std::string& other)
{
  EntitySpec e;
  e.name = name;
  e.kind = static_cast<EntityKind>(g.range(0, 3));
  e.result_sort.push_back(random_sort(g, system, set));
  if (!other.empty() && g.chance(0.3))
    e.result_sort.push_back(random_sort(g, system, other));

  const int n = g.range(0, 6);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i)
  {
    Attribute a;
    a.name = "a" + std::to_string(i);
    a.sort = (!other.empty() && g.chance(0.2)) ? random_sort(g, system, other)
                                                : random_sort(g, system, set);
    a.value = random_value(g, 1, {});
    names.push_back(a.name);
    e.attributes.push_back(std::move(a));
  }

  if (!names.empty() && g.chance(0.4))
  {
    Functor f;
    f.mode = static_cast<FunctorMode>(g.range(0, 3));
    FunctorFunction fn;
    fn.name = "f0";
    fn.domain_attrs.push_back(g.pick(names));
    if (g.chance(0.5))
    {
      const std::string second = g.pick(names);
      if (second != fn.domain_attrs.front())
        fn.domain_attrs.push_back(second);
    }
    fn.codomain = random_sort(g, system, set);
    f.functions.push_back(std::move(fn));
    e.functor = std::move(f);
  }

  const int rules = g.range(0, 2);
  for (int i = 0; i < rules; ++i)
    e.rules.push_back(Rule{"r" + std::to_string(i), random_expr(g, 2, names, system, set)});
  return e;
}

SortMap random_abstracting_map(Gen& g, const OrderOracle& o, const std::string& set)
{
  SortMap m;
  m.name = "up";
  m.sort_set = set;
  m.direction = MapDirection::Abstracting;
  for (std::size_t t = 0; t < o.size(); ++t)
  {
    SortMapEntry e;
    e.from = sort_name(t);
    e.to = g.pick(up_set(o, t));
    if (g.chance(0.2))
      e.merge = g.chance(0.5) ? FunctorMode::Aggregate : FunctorMode::Compose;
    m.entries.push_back(std::move(e));
  }
  return m;
}

SortMap random_refining_map(Gen& g, const OrderOracle& o, const std::string& set)
{
  SortMap m;
  m.name = "down";
  m.sort_set = set;
  m.direction = MapDirection::Refining;
  for (std::size_t t = 0; t < o.size(); ++t)
  {
    if (!g.chance(0.7))
      continue;
    m.entries.push_back(SortMapEntry{sort_name(t), g.pick(down_set(o, t)), "", std::nullopt});
  }
  return m;
}

SortMap identity_map(const SortSystem& system, const std::string& set, MapDirection dir)
{
  SortMap m;
  m.name = "id";
  m.sort_set = set;
  m.direction = dir;
  for (const auto& s : system.sort_set(set).sorts())
    m.entries.push_back(SortMapEntry{s, s, "", std::nullopt});
  return m;
}

//==============================================================================
BruteLattice brute_force_lattice(const FormalContext& ctx)
{
  const std::size_t n = ctx.objects.size();
  const std::size_t m = ctx.attributes.size();

  const auto intent_of = [&](const std::vector<bool>& objs)
  {
    std::vector<bool> attrs(m, true);
    for (std::size_t o = 0; o < n; ++o)
    {
      if (!objs[o])
        continue;
      for (std::size_t a = 0; a < m; ++a)
        attrs[a] = attrs[a] && ctx.incidence[o][a];
    }
    return attrs;
  };
  const auto extent_of = [&](const std::vector<bool>& attrs)
  {
    std::vector<bool> objs(n, true);
    for (std::size_t o = 0; o < n; ++o)
    {
      for (std::size_t a = 0; a < m; ++a)
      {
        if (attrs[a] && !ctx.incidence[o][a])
          objs[o] = false;
      }
    }
    return objs;
  };

  BruteLattice out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
  {
    std::vector<bool> objs(n);
    for (std::size_t o = 0; o < n; ++o)
      objs[o] = (mask >> o) & 1;
    const auto intent = intent_of(objs);
    const auto extent = extent_of(intent);
    Concept c;
    for (std::size_t o = 0; o < n; ++o)
    {
      if (extent[o])
        c.extent.insert(ctx.objects[o]);
    }
    for (std::size_t a = 0; a < m; ++a)
    {
      if (intent[a])
        c.intent.insert(ctx.attributes[a]);
    }
    out.concepts.insert(std::move(c));
  }

  const auto strict_subset = [](const std::set<std::string>& a, const std::set<std::string>& b)
  {
    return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  for (const auto& lo : out.concepts)
  {
    for (const auto& hi : out.concepts)
    {
      if (!strict_subset(lo.extent, hi.extent))
        continue;
      const bool covered = std::none_of(out.concepts.begin(), out.concepts.end(),
        [&](const Concept& mid)
        {
          return strict_subset(lo.extent, mid.extent) && strict_subset(mid.extent, hi.extent);
        });
      if (covered)
        out.edges.insert({lo.extent, hi.extent});
    }
  }
  return out;
}

//==============================================================================
namespace {

sim::SimTime random_duration(Gen& g)
{
  static const std::int64_t samples[] = {1, 999, 1'000, 1'500'000, 30'000'000, 120'000'000,
    3'600'000'000, 28'800'000'000, 7};
  return sim::SimTime{samples[g.index(std::size(samples))]};
}

std::string lower(std::string s)
{
  for (auto& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

} // anonymous namespace

Workspace random_workspace(Gen& g)
{
  Workspace ws;
  std::vector<std::string> sets;
  std::vector<OrderOracle> oracles;
  const int set_count = g.range(1, 3);
  for (int i = 0; i < set_count; ++i)
  {
    const std::string name = "set" + std::to_string(i);
    sets.push_back(name);
    oracles.push_back(random_dag(g, ws.sorts, name, static_cast<std::size_t>(g.range(1, 6)), 0.35));
  }
  for (int i = 0; i < set_count; ++i)
  {
    for (int j = i + 1; j < set_count; ++j)
    {
      if (g.chance(0.4))
        ws.sorts.rank_sort_sets(sets[i], sets[j]);
    }
  }
  const auto any_sort = [&] {
    const std::string& set = g.pick(sets);
    return SortRef{set, g.pick(ws.sorts.sort_set(set).sorts())};
  };

  const int symbols = g.range(0, 3);
  for (int i = 0; i < symbols; ++i)
  {
    std::set<SortRef> sorts{any_sort()};
    if (g.chance(0.5))
      sorts.insert(any_sort());
    ws.alphabet.assign_symbol_sorts(ws.sorts, "sym" + std::to_string(i), sorts);
  }

  const int ontologies = g.range(0, 2);
  for (int i = 0; i < ontologies; ++i)
  {
    Ontology o;
    o.name = "onto" + std::to_string(i);
    o.sort_set = g.pick(sets);
    if (g.chance(0.5))
      o.provenance = "generated \"case\"";
    const int commitments = g.range(0, 3);
    for (int c = 0; c < commitments; ++c)
    {
      Commitment cm;
      cm.id = "c" + std::to_string(c);
      cm.applies_to = SortRef{o.sort_set, g.pick(ws.sorts.sort_set(o.sort_set).sorts())};
      const int reqs = g.range(0, 3);
      std::vector<std::string> names;
      for (int r = 0; r < reqs; ++r)
      {
        RequiredAttribute req;
        req.name = g.chance(0.2) ? std::string(RequiredAttribute::any) : "a" + std::to_string(r);
        req.sort = any_sort();
        req.required = g.chance(0.8);
        req.ref_only = g.chance(0.3);
        names.push_back(req.name == RequiredAttribute::any ? "a9" : req.name);
        cm.required_attributes.push_back(std::move(req));
      }
      const int rules = g.range(0, 2);
      for (int r = 0; r < rules; ++r)
        cm.rules.push_back(Rule{"k" + std::to_string(r), random_expr(g, 2, names, ws.sorts, o.sort_set)});
      if (g.chance(0.5))
        cm.rationale = "why " + std::to_string(c);
      o.commitments.push_back(std::move(cm));
    }
    ws.ontologies.emplace(o.name, std::move(o));
  }

  std::vector<std::string> model_names;
  const int models = g.range(0, 3);
  for (int i = 0; i < models; ++i)
  {
    const std::string set = g.pick(sets);
    const std::string other = sets.size() > 1 ? sets[(std::find(sets.begin(), sets.end(), set)
      - sets.begin() + 1) % sets.size()] : std::string();
    InformationModel m("m" + std::to_string(i), set);
    const int entities = g.range(0, 4);
    std::vector<std::string> targets;
    for (int e = 0; e < entities; ++e)
      targets.push_back("E" + std::to_string(e));
    for (int e = 0; e < entities; ++e)
    {
      EntitySpec spec = random_entity(g, ws.sorts, targets[static_cast<std::size_t>(e)], set, other);
      for (auto& a : spec.attributes)
        a.value = random_value(g, 2, targets);
      if (spec.functor && g.chance(0.5))
      {
        std::vector<std::string> names;
        for (const auto& a : spec.attributes)
          names.push_back(a.name);
        spec.functor->functions.front().body = random_expr(g, 2, names, ws.sorts, set);
      }
      m.define_entity(std::move(spec));
    }
    model_names.push_back(m.name());
    ws.models.emplace(m.name(), std::move(m));
  }

  const int maps = g.range(0, 2);
  for (int i = 0; i < maps; ++i)
  {
    const std::size_t k = g.index(sets.size());
    SortMap m = g.chance(0.5) ? random_abstracting_map(g, oracles[k], sets[k])
                              : random_refining_map(g, oracles[k], sets[k]);
    m.name = "map" + std::to_string(i);
    for (auto& e : m.entries)
    {
      if (g.chance(0.2))
        e.target_attribute = "t" + lower(e.to);
      if (m.direction == MapDirection::Refining)
        e.merge.reset();
    }
    ws.sort_maps.emplace(m.name, std::move(m));
  }

  const int expansions = g.range(0, 2);
  for (int i = 0; i < expansions; ++i)
  {
    Expansion x;
    x.name = "x" + std::to_string(i);
    x.sort_set = g.pick(sets);
    const int entries = g.range(0, 2);
    for (int k = 0; k < entries; ++k)
    {
      AttributeExpansion ae;
      ae.entity = "E" + std::to_string(k);
      ae.attribute = "a" + std::to_string(g.range(0, 3));
      const int reps = g.range(1, 2);
      for (int r = 0; r < reps; ++r)
      {
        ae.replacements.push_back(Attribute{ae.attribute + "_" + std::to_string(r),
          any_sort(), random_value(g, 1, {})});
      }
      x.entries.push_back(std::move(ae));
    }
    ws.expansions.emplace(x.name, std::move(x));
  }

  const int mappings = g.range(0, 2);
  for (int i = 0; i < mappings; ++i)
  {
    ModeMapping mm;
    mm.name = "mm" + std::to_string(i);
    const int entries = g.range(0, 3);
    for (int k = 0; k < entries; ++k)
    {
      ModeMappingEntry e;
      e.abstract_path = AttributePath{"E" + std::to_string(k), "a" + std::to_string(g.range(0, 3))};
      const int paths = g.range(1, 3);
      for (int p = 0; p < paths; ++p)
        e.detailed_paths.push_back(AttributePath{"D" + std::to_string(p), "b" + std::to_string(p)});
      if (g.chance(0.6))
        e.mode = static_cast<FunctorMode>(g.range(0, 3));
      mm.entries.push_back(std::move(e));
    }
    ws.mode_mappings.emplace(mm.name, std::move(mm));
  }

  if (!model_names.empty())
  {
    const int scenarios = g.range(0, 2);
    for (int i = 0; i < scenarios; ++i)
    {
      ScenarioConfig sc;
      sc.name = "sc" + std::to_string(i);
      sc.plant_model = g.pick(model_names);
      if (g.chance(0.6))
        sc.abstract_model = g.pick(model_names);
      if (g.chance(0.6))
        sc.detailed_model = g.pick(model_names);
      sc.mode = g.chance(0.5) ? TransferMode::Abstract : TransferMode::Detailed;
      sc.horizon = random_duration(g);
      sc.seed = g.chance(0.2) ? std::numeric_limits<std::uint64_t>::max()
                              : static_cast<std::uint64_t>(g.range(0, 1000));
      if (g.chance(0.5))
        sc.fleet = g.range(1, 9);
      const int releases = g.range(0, 3);
      for (int r = 0; r < releases; ++r)
      {
        ReleaseSchedule rs;
        rs.unit = "U" + std::to_string(r);
        rs.kind = static_cast<ReleaseKind>(g.range(0, 2));
        if (rs.kind == ReleaseKind::Batch)
        {
          rs.count = g.range(1, 100);
          rs.offset = g.chance(0.5) ? sim::SimTime{} : random_duration(g);
        }
        else
        {
          rs.interval = random_duration(g);
          if (g.chance(0.5))
            rs.offset = random_duration(g);
        }
        sc.releases.push_back(rs);
      }
      if (g.chance(0.7))
        sc.routes.push_back(RoutingEntry{"U0", "U1"});
      if (g.chance(0.5))
        sc.needs.push_back(AssemblyNeed{"U1", "U0", g.range(1, 3)});
      if (g.chance(0.5))
        sc.retrievals.push_back(RetrievalSchedule{"W", random_duration(g)});
      ws.scenarios.emplace(sc.name, std::move(sc));
    }
  }
  return ws;
}

//==============================================================================
std::string span_problem(const dsl::SourceSpan& span, const std::string& text)
{
  if (span.offset > text.size())
    return "offset " + std::to_string(span.offset) + " beyond " + std::to_string(text.size());
  if (span.offset + span.length > text.size())
    return "span end beyond text";
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < span.offset; ++i)
  {
    if (text[i] == '\n')
    {
      ++line;
      column = 1;
    }
    else
    {
      ++column;
    }
  }
  if (line != span.line || column != span.column)
  {
    return "line/column " + std::to_string(span.line) + ":" + std::to_string(span.column)
      + " but offset says " + std::to_string(line) + ":" + std::to_string(column);
  }
  return {};
}

//==============================================================================
std::filesystem::path source_dir()
{
  return MFGSIM_SOURCE_DIR;
}

std::filesystem::path pilot_path()
{
  return source_dir() / "models" / "pilot.mim";
}

Workspace load_pilot()
{
  auto result = dsl::parse_file(pilot_path());
  if (!result.ok())
  {
    std::string message = "pilot does not parse:";
    for (const auto& d : result.diagnostics)
      message += "\n" + dsl::format(d);
    throw Error(ErrorCode::ParseFailed, message);
  }
  return std::move(*result.workspace);
}

} // namespace mfgsim::testing
