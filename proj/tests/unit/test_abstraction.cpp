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

#include <gtest/gtest.h>

using namespace mfgsim;

namespace {

SortSystem sorts()
{
  SortSystem s;
  auto& m = s.declare_sort_set("mfg");
  for (const char* n : {"Quantity", "Duration", "CycleTime", "SetupTime", "Count", "Capacity",
         "Facility", "Line", "Policy"})
    m.add_sort(n);
  m.declare_subsort("Duration", "Quantity");
  m.declare_subsort("CycleTime", "Duration");
  m.declare_subsort("SetupTime", "Duration");
  m.declare_subsort("Count", "Quantity");
  m.declare_subsort("Capacity", "Count");
  m.declare_subsort("Line", "Facility");
  auto& c = s.declare_sort_set("cost");
  c.add_sort("Cost");
  return s;
}

SortRef mfg(const std::string& n) { return {"mfg", n}; }

EntitySpec machine()
{
  EntitySpec e;
  e.name = "ML1";
  e.result_sort = {mfg("Line"), {"cost", "Cost"}};
  e.attributes = {{"cycle", mfg("CycleTime"), Value::number(40, Unit::Second)},
    {"setup", mfg("SetupTime"), Value::number(5, Unit::Second)},
    {"buffer", mfg("Capacity"), Value::number(5, Unit::Count)},
    {"cost", {"cost", "Cost"}, Value::number(120)}};
  e.rules = {{"fast", Expr::binary(ExprOp::Lt, Expr::attr("cycle"),
    Expr::lit(Value::number(60, Unit::Second)))}};
  return e;
}

SortMap up(std::vector<SortMapEntry> entries)
{
  return SortMap{"up", "mfg", MapDirection::Abstracting, std::move(entries)};
}

template<typename Fn>
ErrorCode code_of(Fn&& fn)
{
  try
  {
    fn();
  }
  catch (const Error& e)
  {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

} // namespace

TEST(SortMaps, DirectionIsValidated)
{
  const auto s = sorts();
  EXPECT_NO_THROW(validate_sort_map(up({{"CycleTime", "Duration", "", {}}}), s));
  EXPECT_EQ(code_of([&] { validate_sort_map(up({{"Duration", "CycleTime", "", {}}}), s); }),
    ErrorCode::NotAbstracting);
  SortMap down{"down", "mfg", MapDirection::Refining, {{"CycleTime", "Duration", "", {}}}};
  EXPECT_EQ(code_of([&] { validate_sort_map(down, s); }), ErrorCode::NotRefining);
  EXPECT_EQ(code_of([&] { validate_sort_map(up({{"Ghost", "Duration", "", {}}}), s); }),
    ErrorCode::UnknownSort);
  EXPECT_EQ(default_merge_name("CycleTime"), "cycletime");
}

TEST(Abstract, RewritesSortsAndKeepsOtherSets)
{
  const auto s = sorts();
  const auto r = abstract_entity(machine(), up({{"CycleTime", "Duration", "", {}},
    {"SetupTime", "Duration", "", {}}, {"Capacity", "Capacity", "", {}}}), s);
  ASSERT_EQ(r.entity.attributes.size(), 4u);
  EXPECT_EQ(r.entity.attributes[0].sort, mfg("Duration"));
  EXPECT_EQ(r.entity.attributes[2].sort, mfg("Capacity"));
  EXPECT_EQ(r.entity.attributes[3].sort, (SortRef{"cost", "Cost"}));
  EXPECT_EQ(r.entity.rules, machine().rules);
  EXPECT_EQ(r.entity.result_sort, machine().result_sort);
  EXPECT_TRUE(r.notes.empty());
  EXPECT_FALSE(check_abstraction_pair(machine(), r.entity, s).has_errors());
}

TEST(Abstract, MergeCollectsValuesAndFlagsRules)
{
  const auto s = sorts();
  const auto r = abstract_entity(machine(), up({
    {"CycleTime", "Duration", "times", FunctorMode::Aggregate},
    {"SetupTime", "Duration", "times", FunctorMode::Aggregate},
    {"Capacity", "Count", "", {}}}), s);
  ASSERT_EQ(r.entity.attributes.size(), 3u);
  EXPECT_EQ(r.entity.attributes[0].name, "times");
  EXPECT_EQ(r.entity.attributes[0].value, Value(ValueList{Value::number(40, Unit::Second),
    Value::number(5, Unit::Second)}));
  ASSERT_EQ(r.notes.size(), 1u);
  EXPECT_EQ(r.notes[0].code, "rule-needs-review");
  EXPECT_EQ(r.notes[0].rule_id, "fast");
  EXPECT_FALSE(check_abstraction_pair(machine(), r.entity, s).has_errors());
}

TEST(Abstract, Failures)
{
  const auto s = sorts();
  EXPECT_EQ(code_of([&] { abstract_entity(machine(), up({{"CycleTime", "Duration", "", {}}}), s); }),
    ErrorCode::UnmappedSort);
  EXPECT_EQ(code_of([&] { abstract_entity(machine(), up({{"CycleTime", "Duration", "x", {}},
    {"SetupTime", "Duration", "x", {}}, {"Capacity", "Count", "", {}}}), s); }),
    ErrorCode::NameClash);
  EXPECT_EQ(code_of([&] { abstract_entity(machine(), up({{"CycleTime", "Duration", "x",
    FunctorMode::Compose}, {"SetupTime", "Quantity", "x", FunctorMode::Compose},
    {"Capacity", "Count", "", {}}}), s); }), ErrorCode::NameClash);
  SortMap down{"down", "mfg", MapDirection::Refining, {}};
  EXPECT_EQ(code_of([&] { abstract_entity(machine(), down, s); }), ErrorCode::NotAbstracting);
}

TEST(Refine, ExpansionAndMap)
{
  const auto s = sorts();
  SortMap down{"down", "mfg", MapDirection::Refining, {{"Count", "Capacity", "", {}}}};
  EntitySpec e = machine();
  e.attributes[2].sort = mfg("Count");
  Expansion x{"x", "mfg", {{"ML1", "setup", {{"setup_a", mfg("SetupTime"), Value::number(2,
    Unit::Second)}, {"setup_b", mfg("SetupTime"), Value::number(3, Unit::Second)}}}}};
  const auto r = refine_entity(e, down, x, s);
  std::vector<std::string> names;
  for (const auto& a : r.entity.attributes)
    names.push_back(a.name);
  EXPECT_EQ(names, (std::vector<std::string>{"cycle", "setup_a", "setup_b", "buffer", "cost"}));
  EXPECT_EQ(r.entity.attributes[3].sort, mfg("Capacity"));
  EXPECT_FALSE(check_refinement_pair(r.entity, e, s).has_errors());
}

TEST(Refine, Failures)
{
  const auto s = sorts();
  SortMap down{"down", "mfg", MapDirection::Refining, {}};
  Expansion orphan{"x", "mfg", {{"ML1", "setup", {{"p", mfg("Policy"), Value::text("a")}}}}};
  EXPECT_EQ(code_of([&] { refine_entity(machine(), down, orphan, s); }), ErrorCode::OrphanAttribute);
  Expansion ghost{"x", "mfg", {{"ML1", "ghost", {}}}};
  EXPECT_EQ(code_of([&] { refine_entity(machine(), down, ghost, s); }), ErrorCode::UnknownAttribute);
  EXPECT_EQ(code_of([&] { refine_entity(machine(), up({}), Expansion{}, s); }), ErrorCode::NotRefining);
  InformationModel m("m", "mfg");
  m.define_entity(machine());
  Expansion other{"x", "mfg", {{"Nope", "a", {}}}};
  EXPECT_EQ(code_of([&] { refine_model(m, down, other, s); }), ErrorCode::UnknownEntity);
}

TEST(PairChecks, DetectUncoveredAttributes)
{
  const auto s = sorts();
  EntitySpec abstracted = machine();
  abstracted.attributes[0].sort = mfg("SetupTime");
  EXPECT_TRUE(check_abstraction_pair(machine(), abstracted, s).has_errors());

  EntitySpec renamed = machine();
  renamed.name = "Other";
  EXPECT_TRUE(check_abstraction_pair(machine(), renamed, s).has_errors());

  EntitySpec refined = machine();
  refined.attributes.push_back({"policy", mfg("Policy"), Value::text("x")});
  EXPECT_TRUE(check_refinement_pair(refined, machine(), s).has_errors());
}

TEST(View, KeepsOnlyTheViewAndExternalizesRefs)
{
  const auto s = sorts();
  InformationModel m("plant", "mfg");
  EntitySpec a = machine();
  a.attributes.push_back({"peer", {"cost", "Cost"}, Value::ref("B")});
  m.define_entity(a);
  EntitySpec b;
  b.name = "B";
  b.result_sort = {mfg("Line")};
  m.define_entity(b);

  const auto v = project_view(m, "cost", s);
  EXPECT_EQ(v.sort_set(), "cost");
  ASSERT_EQ(v.entities().size(), 1u);
  const auto& e = v.entity("ML1");
  ASSERT_EQ(e.attributes.size(), 2u);
  EXPECT_EQ(e.result_sort, (std::vector<SortRef>{{"cost", "Cost"}}));
  EXPECT_TRUE(e.attributes[1].value.as_ref().external);
  EXPECT_TRUE(e.rules.empty());
  EXPECT_EQ(project_view(v, "cost", s), v);
  EXPECT_EQ(code_of([&] { project_view(m, "ghost", s); }), ErrorCode::UnknownSortSet);
}

TEST(Coordinate, CoverageAndDirection)
{
  const auto s = sorts();
  InformationModel abs("abs", "mfg");
  EntitySpec route;
  route.name = "Route";
  route.result_sort = {mfg("Facility")};
  route.attributes = {{"travel", mfg("Duration"), Value::number(10, Unit::Second)}};
  abs.define_entity(route);
  EntitySpec fleet = route;
  fleet.name = "Fleet";
  fleet.attributes = {{"size", mfg("Count"), Value::number(2)}};
  abs.define_entity(fleet);

  InformationModel det("det", "mfg");
  EntitySpec edge;
  edge.name = "Edge";
  edge.result_sort = {mfg("Line")};
  edge.attributes = {{"time", mfg("CycleTime"), Value::number(3, Unit::Second)},
    {"cap", mfg("Capacity"), Value::number(1)}};
  det.define_entity(edge);
  EntitySpec spare = edge;
  spare.name = "Spare";
  det.define_entity(spare);

  ModeMapping mm{"mm", {{{"Route", "travel"}, {{"Edge", "time"}}, FunctorMode::Compose},
    {{"Fleet", "size"}, {{"Edge", "cap"}}, {}}}};
  const auto ok = coordinate_modes(abs, det, mm, s);
  EXPECT_FALSE(ok.has_errors()) << format_report(ok);
  ASSERT_EQ(ok.diagnostics.size(), 1u);
  EXPECT_EQ(ok.diagnostics[0].code, "unmapped-detailed-entity");
  EXPECT_EQ(ok.diagnostics[0].entity, "Spare");

  auto wrong = mm;
  wrong.entries[1].detailed_paths = {{"Edge", "time"}};
  auto missing = mm;
  missing.entries[0].detailed_paths.push_back({"Edge", "ghost"});
  auto uncovered = mm;
  uncovered.entries.pop_back();
  const auto has = [&](const ModeMapping& map, const std::string& code, const std::string& entity)
  {
    const auto r = coordinate_modes(abs, det, map, s);
    return std::any_of(r.diagnostics.begin(), r.diagnostics.end(), [&](const Diagnostic& d)
      { return d.severity == Severity::Error && d.code == code && d.entity == entity; });
  };
  EXPECT_TRUE(has(wrong, "not-abstracting", "Edge"));
  EXPECT_TRUE(has(missing, "unresolved-path", "Edge"));
  EXPECT_TRUE(has(uncovered, "uncovered-entity", "Fleet"));
}
