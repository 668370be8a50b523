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
#include <mfgsim/value.hpp>

namespace mfgsim {

//==============================================================================
std::string_view to_string(Unit unit)
{
  switch (unit)
  {
    case Unit::None: return "none";
    case Unit::Metre: return "m";
    case Unit::MetrePerSecond: return "m/s";
    case Unit::Second: return "s";
    case Unit::Count: return "count";
  }
  return "none";
}

//==============================================================================
std::optional<Unit> unit_from_string(std::string_view text)
{
  if (text == "none") return Unit::None;
  if (text == "m") return Unit::Metre;
  if (text == "m/s") return Unit::MetrePerSecond;
  if (text == "s") return Unit::Second;
  if (text == "count") return Unit::Count;
  return std::nullopt;
}

//==============================================================================
bool is_reference_like(const Value& value)
{
  if (value.is_ref())
    return true;
  if (!value.is_list() || value.as_list().empty())
    return false;
  for (const auto& v : value.as_list())
  {
    if (!is_reference_like(v))
      return false;
  }
  return true;
}

//==============================================================================
Expr Expr::lit(Value v)
{
  Expr e;
  e.op = ExprOp::Literal;
  e.literal = std::move(v);
  return e;
}

//==============================================================================
Expr Expr::attr(std::string name)
{
  Expr e;
  e.op = ExprOp::Attribute;
  e.name = std::move(name);
  return e;
}

//==============================================================================
Expr Expr::has(std::string name)
{
  Expr e;
  e.op = ExprOp::Has;
  e.name = std::move(name);
  return e;
}

//==============================================================================
Expr Expr::sort_at_most(std::string name, SortRef sort)
{
  Expr e;
  e.op = ExprOp::SortAtMost;
  e.name = std::move(name);
  e.sort = std::move(sort);
  return e;
}

//==============================================================================
Expr Expr::unary(ExprOp op, Expr operand)
{
  Expr e;
  e.op = op;
  e.args.push_back(std::move(operand));
  return e;
}

//==============================================================================
Expr Expr::binary(ExprOp op, Expr lhs, Expr rhs)
{
  Expr e;
  e.op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

namespace {

void collect_attributes(const Expr& expr, std::set<std::string>& out)
{
  switch (expr.op)
  {
    case ExprOp::Attribute:
    case ExprOp::Has:
    case ExprOp::SortAtMost:
      out.insert(expr.name);
      break;
    default:
      break;
  }
  for (const auto& arg : expr.args)
    collect_attributes(arg, out);
}

void collect_sorts(const Expr& expr, std::vector<SortRef>& out)
{
  if (expr.op == ExprOp::SortAtMost)
    out.push_back(expr.sort);
  for (const auto& arg : expr.args)
    collect_sorts(arg, out);
}

//==============================================================================
struct TypeMismatch
{
  std::string message;
};

struct MissingAttribute
{
  std::string name;
};

class Evaluator
{
public:
  Evaluator(const EntitySpec& entity, const SortSystem& system)
  : _entity(entity),
    _system(system)
  {
  }

  Value eval(const Expr& e) const
  {
    switch (e.op)
    {
      case ExprOp::Literal:
        return e.literal;

      case ExprOp::Attribute:
      {
        const Attribute* a = _entity.find_attribute(e.name);
        if (!a)
          throw MissingAttribute{e.name};
        return a->value;
      }

      case ExprOp::Has:
        return Value(_entity.find_attribute(e.name) != nullptr);

      case ExprOp::SortAtMost:
      {
        const Attribute* a = _entity.find_attribute(e.name);
        if (!a)
          return Value(false);
        if (!_system.contains(a->sort) || !_system.contains(e.sort))
          throw TypeMismatch{"sort_at_most over an unknown sort"};
        return Value(_system.is_subsort(a->sort, e.sort));
      }

      case ExprOp::Not:
        return Value(!boolean(eval(e.args[0]), "not"));

      case ExprOp::Negate:
      {
        const Number n = number(eval(e.args[0]), "unary -");
        return Value(Number{-n.value, n.unit});
      }

      case ExprOp::And:
        // Both sides are evaluated so type errors never hide behind
        // short-circuiting.
      {
        const bool lhs = boolean(eval(e.args[0]), "and");
        const bool rhs = boolean(eval(e.args[1]), "and");
        return Value(lhs && rhs);
      }

      case ExprOp::Or:
      {
        const bool lhs = boolean(eval(e.args[0]), "or");
        const bool rhs = boolean(eval(e.args[1]), "or");
        return Value(lhs || rhs);
      }

      case ExprOp::Eq:
      case ExprOp::Ne:
      {
        const bool eq = equal(eval(e.args[0]), eval(e.args[1]));
        return Value(e.op == ExprOp::Eq ? eq : !eq);
      }

      case ExprOp::Lt:
      case ExprOp::Le:
      case ExprOp::Gt:
      case ExprOp::Ge:
        return Value(order(e.op, eval(e.args[0]), eval(e.args[1])));

      case ExprOp::Add:
      case ExprOp::Sub:
      case ExprOp::Mul:
      case ExprOp::Div:
        return Value(arithmetic(e.op, eval(e.args[0]), eval(e.args[1])));
    }
    throw TypeMismatch{"unsupported expression"};
  }

private:
  static bool boolean(const Value& v, const char* context)
  {
    if (!v.is_bool())
      throw TypeMismatch{std::string("operand of '") + context + "' is not boolean"};
    return v.as_bool();
  }

  static Number number(const Value& v, const char* context)
  {
    if (!v.is_number())
      throw TypeMismatch{std::string("operand of '") + context + "' is not a number"};
    return v.as_number();
  }

  static bool equal(const Value& lhs, const Value& rhs)
  {
    if (lhs.data.index() != rhs.data.index())
      throw TypeMismatch{"comparison between values of different kinds"};
    if (lhs.is_number() && lhs.as_number().unit != rhs.as_number().unit)
      throw TypeMismatch{"comparison between differing units"};
    if (lhs.is_ref())
      return lhs.as_ref().target == rhs.as_ref().target;
    return lhs == rhs;
  }

  static bool order(ExprOp op, const Value& lhs, const Value& rhs)
  {
    int cmp = 0;
    if (lhs.is_number() && rhs.is_number())
    {
      const Number& a = lhs.as_number();
      const Number& b = rhs.as_number();
      if (a.unit != b.unit)
        throw TypeMismatch{"comparison between differing units"};
      cmp = a.value < b.value ? -1 : (a.value > b.value ? 1 : 0);
    }
    else if (lhs.is_text() && rhs.is_text())
    {
      const int c = lhs.as_text().compare(rhs.as_text());
      cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    else
    {
      throw TypeMismatch{"ordering comparison between incomparable values"};
    }

    switch (op)
    {
      case ExprOp::Lt: return cmp < 0;
      case ExprOp::Le: return cmp <= 0;
      case ExprOp::Gt: return cmp > 0;
      default: return cmp >= 0;
    }
  }

  static Number arithmetic(ExprOp op, const Value& lv, const Value& rv)
  {
    const Number a = number(lv, "arithmetic");
    const Number b = number(rv, "arithmetic");
    switch (op)
    {
      case ExprOp::Add:
      case ExprOp::Sub:
        if (a.unit != b.unit)
          throw TypeMismatch{"arithmetic across differing units"};
        return Number{op == ExprOp::Add ? a.value + b.value : a.value - b.value, a.unit};

      case ExprOp::Mul:
        if ((a.unit == Unit::MetrePerSecond && b.unit == Unit::Second)
          || (a.unit == Unit::Second && b.unit == Unit::MetrePerSecond))
          return Number{a.value * b.value, Unit::Metre};
        if (a.unit != Unit::None && b.unit != Unit::None)
          throw TypeMismatch{"product of two unit-tagged quantities"};
        return Number{a.value * b.value, a.unit == Unit::None ? b.unit : a.unit};

      default:
      {
        Unit unit = a.unit;
        if (a.unit == b.unit)
          unit = Unit::None;
        else if (a.unit == Unit::Metre && b.unit == Unit::MetrePerSecond)
          unit = Unit::Second;
        else if (a.unit == Unit::Metre && b.unit == Unit::Second)
          unit = Unit::MetrePerSecond;
        else if (b.unit != Unit::None)
          throw TypeMismatch{"division across incompatible units"};
        if (b.value == 0.0)
          throw TypeMismatch{"division by zero"};
        return Number{a.value / b.value, unit};
      }
    }
  }

  const EntitySpec& _entity;
  const SortSystem& _system;
};

} // anonymous namespace

//==============================================================================
std::set<std::string> referenced_attributes(const Expr& expr)
{
  std::set<std::string> out;
  collect_attributes(expr, out);
  return out;
}

//==============================================================================
std::vector<SortRef> referenced_sorts(const Expr& expr)
{
  std::vector<SortRef> out;
  collect_sorts(expr, out);
  return out;
}

//==============================================================================
std::string_view to_string(RuleOutcome outcome)
{
  switch (outcome)
  {
    case RuleOutcome::Pass: return "pass";
    case RuleOutcome::Fail: return "fail";
    case RuleOutcome::TypeError: return "type-error";
  }
  return "fail";
}

//==============================================================================
RuleResult evaluate_rule(
  const Rule& rule, const EntitySpec& entity, const SortSystem& system)
{
  RuleResult result;
  result.id = rule.id;
  try
  {
    const Value v = Evaluator(entity, system).eval(rule.expr);
    if (!v.is_bool())
    {
      result.outcome = RuleOutcome::TypeError;
      result.message = "rule does not evaluate to a boolean";
    }
    else
    {
      result.outcome = v.as_bool() ? RuleOutcome::Pass : RuleOutcome::Fail;
    }
  }
  catch (const MissingAttribute& m)
  {
    result.outcome = RuleOutcome::Fail;
    result.message = "attribute '" + m.name + "' is absent";
  }
  catch (const TypeMismatch& t)
  {
    result.outcome = RuleOutcome::TypeError;
    result.message = t.message;
  }
  return result;
}

} // namespace mfgsim
