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

#ifndef MFGSIM__RULE_HPP
#define MFGSIM__RULE_HPP

#include <mfgsim/sorts.hpp>
#include <mfgsim/value.hpp>

#include <set>
#include <string>
#include <vector>

namespace mfgsim {

class SortSystem;
struct EntitySpec;

enum class ExprOp
{
  Literal,
  Attribute,
  Not,
  Negate,
  And,
  Or,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Sub,
  Mul,
  Div,
  Has,
  SortAtMost,
};

/// Predicate/arithmetic expression over an entity's attribute names.
struct Expr
{
  ExprOp op = ExprOp::Literal;
  Value literal;          // Literal
  std::string name;       // Attribute, Has, SortAtMost
  SortRef sort;           // SortAtMost
  std::vector<Expr> args; // unary / binary operands

  static Expr lit(Value v);
  static Expr attr(std::string name);
  static Expr has(std::string name);
  static Expr sort_at_most(std::string name, SortRef sort);
  static Expr unary(ExprOp op, Expr operand);
  static Expr binary(ExprOp op, Expr lhs, Expr rhs);

  bool operator==(const Expr&) const = default;
};

/// Attribute names referenced anywhere in the expression.
std::set<std::string> referenced_attributes(const Expr& expr);

/// Visits every SortRef in the expression.
std::vector<SortRef> referenced_sorts(const Expr& expr);

struct Rule
{
  std::string id;
  Expr expr;

  bool operator==(const Rule&) const = default;
};

enum class RuleOutcome
{
  Pass,
  Fail,
  TypeError,
};

std::string_view to_string(RuleOutcome outcome);

struct RuleResult
{
  std::string id;
  RuleOutcome outcome = RuleOutcome::Pass;
  std::string message;

  bool operator==(const RuleResult&) const = default;
};

/// Evaluates a rule against the attribute values of `entity`. Comparisons
/// between incompatible values (text against number, differing units) are
/// reported as TypeError rather than thrown.
RuleResult evaluate_rule(
  const Rule& rule, const EntitySpec& entity, const SortSystem& system);

} // namespace mfgsim

#endif // MFGSIM__RULE_HPP
