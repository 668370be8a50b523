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
#include <mfgsim/rule.hpp>

#include <gtest/gtest.h>

using namespace mfgsim;

namespace {

class RuleTest : public ::testing::Test
{
protected:
  RuleTest()
  {
    auto& m = system.declare_sort_set("mfg");
    m.add_sort("Quantity").add_sort("Duration").add_sort("Length").add_sort("Speed");
    m.declare_subsort("Duration", "Quantity");
    m.declare_subsort("Length", "Quantity");
    entity.name = "E";
    entity.attributes = {
      {"cycle", {"mfg", "Duration"}, Value::number(40, Unit::Second)},
      {"length", {"mfg", "Length"}, Value::number(60, Unit::Metre)},
      {"speed", {"mfg", "Speed"}, Value::number(1.5, Unit::MetrePerSecond)},
      {"label", {"mfg", "Quantity"}, Value::text("fifo")},
      {"flag", {"mfg", "Quantity"}, Value(true)},
    };
  }

  RuleOutcome run(Expr e) const
  {
    return evaluate_rule(Rule{"r", std::move(e)}, entity, system).outcome;
  }

  static Expr secs(double v) { return Expr::lit(Value::number(v, Unit::Second)); }

  SortSystem system;
  EntitySpec entity;
};

} // namespace

TEST_F(RuleTest, ComparesWithinAUnit)
{
  EXPECT_EQ(run(Expr::binary(ExprOp::Gt, Expr::attr("cycle"), secs(0))), RuleOutcome::Pass);
  EXPECT_EQ(run(Expr::binary(ExprOp::Lt, Expr::attr("cycle"), secs(40))), RuleOutcome::Fail);
  EXPECT_EQ(run(Expr::binary(ExprOp::Le, Expr::attr("cycle"), secs(40))), RuleOutcome::Pass);
  EXPECT_EQ(run(Expr::binary(ExprOp::Eq, Expr::attr("label"), Expr::lit(Value::text("fifo")))),
    RuleOutcome::Pass);
}

TEST_F(RuleTest, MixedUnitsAreTypeErrors)
{
  EXPECT_EQ(run(Expr::binary(ExprOp::Gt, Expr::attr("cycle"), Expr::lit(Value::number(0)))),
    RuleOutcome::TypeError);
  EXPECT_EQ(run(Expr::binary(ExprOp::Gt, Expr::attr("label"), secs(0))), RuleOutcome::TypeError);
  EXPECT_EQ(run(Expr::binary(ExprOp::Add, Expr::attr("cycle"), Expr::attr("length"))),
    RuleOutcome::TypeError);
}

TEST_F(RuleTest, DerivedUnits)
{
  // length / speed is a duration: 60 m / 1.5 m/s = 40 s.
  const auto travel = Expr::binary(ExprOp::Div, Expr::attr("length"), Expr::attr("speed"));
  EXPECT_EQ(run(Expr::binary(ExprOp::Eq, travel, secs(40))), RuleOutcome::Pass);
  const auto dist = Expr::binary(ExprOp::Mul, Expr::attr("speed"), Expr::attr("cycle"));
  EXPECT_EQ(run(Expr::binary(ExprOp::Eq, dist, Expr::lit(Value::number(60, Unit::Metre)))),
    RuleOutcome::Pass);
  const auto ratio = Expr::binary(ExprOp::Div, Expr::attr("cycle"), secs(20));
  EXPECT_EQ(run(Expr::binary(ExprOp::Eq, ratio, Expr::lit(Value::number(2)))), RuleOutcome::Pass);
}

TEST_F(RuleTest, DivisionByZeroIsATypeError)
{
  const auto e = Expr::binary(ExprOp::Div, Expr::attr("cycle"), secs(0));
  EXPECT_EQ(run(Expr::binary(ExprOp::Gt, e, Expr::lit(Value::number(0)))), RuleOutcome::TypeError);
}

TEST_F(RuleTest, MissingAttributeFails)
{
  EXPECT_EQ(run(Expr::binary(ExprOp::Gt, Expr::attr("ghost"), secs(0))), RuleOutcome::Fail);
  EXPECT_EQ(run(Expr::has("ghost")), RuleOutcome::Fail);
  EXPECT_EQ(run(Expr::has("cycle")), RuleOutcome::Pass);
}

TEST_F(RuleTest, LogicEvaluatesBothSides)
{
  const auto bad = Expr::binary(ExprOp::Gt, Expr::attr("label"), secs(0));
  EXPECT_EQ(run(Expr::binary(ExprOp::Or, Expr::attr("flag"), bad)), RuleOutcome::TypeError);
  EXPECT_EQ(run(Expr::binary(ExprOp::And, Expr::attr("flag"), Expr::unary(ExprOp::Not,
    Expr::attr("flag")))), RuleOutcome::Fail);
  EXPECT_EQ(run(Expr::attr("cycle")), RuleOutcome::TypeError);
}

TEST_F(RuleTest, SortAtMostUsesTheOrder)
{
  EXPECT_EQ(run(Expr::sort_at_most("cycle", {"mfg", "Quantity"})), RuleOutcome::Pass);
  EXPECT_EQ(run(Expr::sort_at_most("cycle", {"mfg", "Length"})), RuleOutcome::Fail);
  EXPECT_EQ(run(Expr::sort_at_most("ghost", {"mfg", "Quantity"})), RuleOutcome::Fail);
  EXPECT_EQ(run(Expr::sort_at_most("cycle", {"mfg", "Nope"})), RuleOutcome::TypeError);
}

TEST_F(RuleTest, NegationKeepsTheUnit)
{
  EXPECT_EQ(run(Expr::binary(ExprOp::Lt, Expr::unary(ExprOp::Negate, Expr::attr("cycle")), secs(0))),
    RuleOutcome::Pass);
}

TEST(RuleAnalysis, ReferencedNamesAndSorts)
{
  const auto e = Expr::binary(ExprOp::And, Expr::has("a"),
    Expr::binary(ExprOp::Or, Expr::attr("b"), Expr::sort_at_most("c", {"s", "T"})));
  EXPECT_EQ(referenced_attributes(e), (std::set<std::string>{"a", "b", "c"}));
  ASSERT_EQ(referenced_sorts(e).size(), 1u);
  EXPECT_EQ(referenced_sorts(e)[0], (SortRef{"s", "T"}));
}

TEST(Values, ReferenceLikeAndTraversal)
{
  EXPECT_TRUE(is_reference_like(Value::ref("A")));
  EXPECT_TRUE(is_reference_like(Value(ValueList{Value::ref("A"), Value::ref("B")})));
  EXPECT_FALSE(is_reference_like(Value(ValueList{})));
  EXPECT_FALSE(is_reference_like(Value(ValueList{Value::ref("A"), Value::number(1)})));
  EXPECT_FALSE(is_reference_like(Value::text("A")));

  std::vector<std::string> seen;
  for_each_ref(Value(ValueList{Value::ref("A"), Value(ValueList{Value::ref("B")})}),
    [&](const EntityRef& r) { seen.push_back(r.target); });
  EXPECT_EQ(seen, (std::vector<std::string>{"A", "B"}));
}

TEST(Values, UnitNamesRoundTrip)
{
  for (const Unit u : {Unit::None, Unit::Metre, Unit::MetrePerSecond, Unit::Second, Unit::Count})
    EXPECT_EQ(unit_from_string(to_string(u)), u);
  EXPECT_FALSE(unit_from_string("furlong").has_value());
}
