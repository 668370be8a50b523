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
#include <mfgsim/ontology.hpp>

#include <gtest/gtest.h>

using namespace mfgsim;

namespace {

SortSystem plant_sorts()
{
  SortSystem s;
  auto& m = s.declare_sort_set("mfg");
  for (const char* n : {"Quantity", "Duration", "CycleTime", "Count", "Capacity", "Facility",
         "Line", "Warehouse", "TransferSystem"})
    m.add_sort(n);
  m.declare_subsort("Duration", "Quantity");
  m.declare_subsort("CycleTime", "Duration");
  m.declare_subsort("Count", "Quantity");
  m.declare_subsort("Capacity", "Count");
  m.declare_subsort("Line", "Facility");
  m.declare_subsort("Warehouse", "Facility");
  s.declare_sort_set("cost").add_sort("Cost");
  return s;
}

SortRef mfg(const std::string& name) { return {"mfg", name}; }

EntitySpec line(const std::string& name, double cycle)
{
  EntitySpec e;
  e.name = name;
  e.kind = EntityKind::Process;
  e.result_sort = {mfg("Line")};
  e.attributes = {{"cycle_time", mfg("CycleTime"), Value::number(cycle, Unit::Second)},
    {"buffer", mfg("Capacity"), Value::number(5, Unit::Count)},
    {"next", mfg("Warehouse"), Value::ref("WH")}};
  return e;
}

InformationModel small_plant()
{
  InformationModel m("plant", "mfg");
  m.define_entity(line("ML1", 40));
  EntitySpec wh;
  wh.name = "WH";
  wh.result_sort = {mfg("Warehouse")};
  wh.attributes = {{"capacity", mfg("Capacity"), Value::number(10, Unit::Count)}};
  m.define_entity(wh);
  return m;
}

Ontology profile()
{
  Ontology o;
  o.name = "profile";
  o.sort_set = "mfg";
  Commitment c;
  c.id = "machining";
  c.applies_to = mfg("Line");
  c.required_attributes = {{"cycle_time", mfg("Duration"), true, false},
    {"buffer", mfg("Capacity"), true, false},
    {"next", mfg("Facility"), true, true},
    {"setup", mfg("Duration"), false, false}};
  c.rules = {{"positive", Expr::binary(ExprOp::Gt, Expr::attr("cycle_time"),
    Expr::lit(Value::number(0, Unit::Second)))}};
  o.commitments.push_back(c);
  Commitment any;
  any.id = "linked";
  any.applies_to = mfg("Facility");
  any.required_attributes = {{RequiredAttribute::any, mfg("Quantity"), true, false}};
  o.commitments.push_back(any);
  return o;
}

std::vector<std::string> codes(const Report& r)
{
  std::vector<std::string> out;
  for (const auto& d : r.diagnostics)
    out.push_back(d.code);
  return out;
}

} // namespace

TEST(InformationModel, DuplicateAndUnknownEntities)
{
  InformationModel m = small_plant();
  try
  {
    m.define_entity(line("ML1", 1));
    FAIL();
  }
  catch (const Error& e)
  {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateEntity);
  }
  EXPECT_THROW(m.entity("ghost"), Error);
  EXPECT_TRUE(m.has_entity("WH"));
}

TEST(Wellformed, CleanModelHasNoDiagnostics)
{
  EXPECT_TRUE(check_wellformed(small_plant(), plant_sorts()).empty());
}

TEST(Wellformed, ReportsStructuralProblems)
{
  auto m = small_plant();
  auto& e = m.entities().at("ML1");
  e.attributes.push_back({"cycle_time", mfg("Duration"), Value::number(1)});
  e.attributes.push_back({"ghost", mfg("Nope"), Value::ref("Missing")});
  e.rules.push_back({"r", Expr::has("undeclared")});
  m.entities().at("WH").result_sort.clear();
  const auto r = check_wellformed(m, plant_sorts());
  const auto c = codes(r);
  for (const char* want : {"duplicate-attr", "unknown-sort", "dangling-ref", "rule-unknown-attr",
         "empty-result-sort"})
    EXPECT_NE(std::find(c.begin(), c.end(), want), c.end()) << want;
  EXPECT_TRUE(std::is_sorted(r.diagnostics.begin(), r.diagnostics.end(),
    [](const Diagnostic& a, const Diagnostic& b) { return a.entity < b.entity; }));
}

TEST(Wellformed, ExternalReferencesNeedNotResolve)
{
  auto m = small_plant();
  m.entities().at("ML1").attributes.push_back(
    {"peer", mfg("Facility"), Value(EntityRef{"Elsewhere", true})});
  EXPECT_TRUE(check_wellformed(m, plant_sorts()).empty());
}

TEST(Wellformed, FunctorDomains)
{
  auto m = small_plant();
  auto& e = m.entities().at("ML1");
  e.functor = Functor{FunctorMode::Derive, {{"f", {"cycle_time", "ghost"}, mfg("Duration"), {}},
    {"g", {"ghost"}, mfg("Duration"), {}}, {"h", {}, mfg("Duration"), {}}}};
  const auto r = check_wellformed(m, plant_sorts());
  std::map<std::string, std::string> by_path;
  for (const auto& d : r.diagnostics)
    by_path[d.path] = d.code;
  EXPECT_EQ(by_path["functor.f"], "functor-domain-not-subset");
  EXPECT_EQ(by_path["functor.g"], "functor-overlap");
  EXPECT_EQ(by_path["functor.h"], "empty-domain");
  EXPECT_EQ(r.error_count(), 2u);
}

TEST(Wellformed, AlphabetConstrainsResultSorts)
{
  const auto s = plant_sorts();
  Alphabet a;
  a.assign_symbol_sorts(s, "ML1", {mfg("Line")});
  a.assign_symbol_sorts(s, "WH", {mfg("Line")});
  const auto r = check_wellformed(small_plant(), s, a);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].entity, "WH");
  EXPECT_EQ(r.diagnostics[0].code, "alphabet-mismatch");
}

TEST(Structure, GraphFollowsInternalReferences)
{
  const auto g = structure_graph(small_plant(), plant_sorts());
  EXPECT_EQ(g.nodes, (std::vector<std::string>{"ML1", "WH"}));
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0], (StructureEdge{"ML1", "WH", "next"}));
  EXPECT_NE(to_dot(g, "plant").find("\"ML1\" -> \"WH\""), std::string::npos);

  auto broken = small_plant();
  broken.entities().at("ML1").attributes[2].value = Value::ref("Nowhere");
  EXPECT_THROW(structure_graph(broken, plant_sorts()), Error);
}

TEST(Verify, IntactModelHasNoViolations)
{
  const auto r = verify_model(small_plant(), profile(), plant_sorts());
  EXPECT_TRUE(r.empty()) << to_text(r);
}

TEST(Verify, EachRequirementKind)
{
  auto m = small_plant();
  auto& e = m.entities().at("ML1");
  e.attributes[0].value = Value::number(-1, Unit::Second);
  e.attributes[1].sort = mfg("Duration");
  e.attributes[2].value = Value::text("WH");
  m.entities().at("WH").attributes.clear();
  const auto r = verify_model(m, profile(), plant_sorts());

  std::vector<std::tuple<std::string, std::string, std::string, std::string>> got;
  for (const auto& v : r.violations)
    got.emplace_back(v.commitment, v.entity, v.item, v.kind);
  const decltype(got) want = {
    {"linked", "WH", "*:Quantity", "missing"},
    {"machining", "ML1", "buffer", "wrong-sort"},
    {"machining", "ML1", "next", "not-a-reference"},
    {"machining", "ML1", "rule:positive", "rule-failed"},
  };
  EXPECT_EQ(got, want) << to_text(r);
}

TEST(Verify, MissingRequiredOnlyWhenRequired)
{
  auto m = small_plant();
  auto& attrs = m.entities().at("ML1").attributes;
  attrs.erase(attrs.begin());
  const auto r = verify_model(m, profile(), plant_sorts());
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r.violations[0].item, "cycle_time");
  EXPECT_EQ(r.violations[0].kind, "missing");
  for (const auto& v : r.violations)
    EXPECT_NE(v.item, "setup");
}

TEST(Verify, WellformednessErrorsFoldIn)
{
  auto m = small_plant();
  m.entities().at("ML1").attributes[2].value = Value::ref("Nowhere");
  const auto r = verify_model(m, profile(), plant_sorts());
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].commitment, "wf:dangling-ref");
  EXPECT_EQ(r.violations[0].item, "next");
}

TEST(Verify, SortSetMismatchThrows)
{
  InformationModel m("other", "cost");
  try
  {
    verify_model(m, profile(), plant_sorts());
    FAIL();
  }
  catch (const Error& e)
  {
    EXPECT_EQ(e.code(), ErrorCode::SortSystemMismatch);
  }
}

TEST(Verify, JsonAndTextCarryTheTriple)
{
  auto m = small_plant();
  m.entities().at("WH").attributes.clear();
  const auto r = verify_model(m, profile(), plant_sorts());
  EXPECT_NE(to_text(r).find("linked: WH: *:Quantity: missing"), std::string::npos);
  EXPECT_NE(to_json(r).find("\"commitment\""), std::string::npos);
}

TEST(Ontology, ValidationCatchesDuplicatesAndUnknownSorts)
{
  auto o = profile();
  o.commitments.push_back(o.commitments[0]);
  o.commitments[1].applies_to = mfg("Ghost");
  const auto r = validate_ontology(o, plant_sorts());
  EXPECT_GE(r.error_count(), 2u) << format_report(r);
  EXPECT_FALSE(validate_ontology(profile(), plant_sorts()).has_errors());
}

TEST(Lattice, SmallContextByHand)
{
  FormalContext ctx;
  ctx.objects = {"A", "B", "C"};
  ctx.attributes = {mfg("x"), mfg("y")};
  ctx.incidence = {{true, true}, {false, true}, {false, false}};
  const auto lat = build_conceptual_lattice(ctx);
  ASSERT_EQ(lat.concepts.size(), 3u);
  EXPECT_EQ(lat.concepts[0].extent, (std::set<std::string>{"A", "B", "C"}));
  EXPECT_TRUE(lat.concepts[0].intent.empty());
  EXPECT_EQ(lat.concepts[1].extent, (std::set<std::string>{"A", "B"}));
  EXPECT_EQ(lat.concepts[2].intent, (std::set<SortRef>{mfg("x"), mfg("y")}));
  EXPECT_EQ(lat.hasse_edges, (std::vector<std::pair<std::size_t, std::size_t>>{{1, 0}, {2, 1}}));
  EXPECT_TRUE(lattice_subsumes(lat, lat.top(), lat.bottom()));
  EXPECT_FALSE(lattice_subsumes(lat, lat.bottom(), lat.top()));
  EXPECT_TRUE(lattice_subsumes(lat, 1, 1));
  EXPECT_THROW(lattice_subsumes(lat, 0, 7), Error);
}

TEST(Lattice, EmptyContextHasOneConcept)
{
  const auto lat = build_conceptual_lattice(FormalContext{});
  ASSERT_EQ(lat.concepts.size(), 1u);
  EXPECT_TRUE(lat.hasse_edges.empty());
}

TEST(Lattice, FromModelUsesAttributeSorts)
{
  const auto lat = build_conceptual_lattice(small_plant(), plant_sorts());
  // ML1 {CycleTime, Capacity, Warehouse}, WH {Capacity}.
  ASSERT_EQ(lat.concepts.size(), 2u);
  EXPECT_EQ(lat.concepts[0].intent, (std::set<SortRef>{mfg("Capacity")}));
  EXPECT_EQ(lat.concepts[1].extent, (std::set<std::string>{"ML1"}));
  EXPECT_NE(to_text(lat).find("ML1"), std::string::npos);
  EXPECT_NE(to_dot(lat, "plant").find("digraph"), std::string::npos);
}

TEST(Lattice, IllFormedModelThrows)
{
  auto m = small_plant();
  m.entities().at("WH").result_sort.clear();
  EXPECT_THROW(build_conceptual_lattice(m, plant_sorts()), Error);
}
