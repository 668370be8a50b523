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

#include <mfgsim/dsl.hpp>

#include <charconv>
#include <sstream>

namespace mfgsim::dsl {
namespace {

std::string number_text(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string quoted(const std::string& s)
{
  std::string out = "\"";
  for (const char c : s)
  {
    switch (c)
    {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string sort_text(const SortRef& ref, const std::string& context)
{
  return ref.set == context ? ref.name : ref.set + "::" + ref.name;
}

std::string value_text(const Value& v)
{
  if (v.is_number())
  {
    const Number& n = v.as_number();
    std::string out = number_text(n.value);
    if (n.unit != Unit::None)
      out += " " + std::string(to_string(n.unit));
    return out;
  }
  if (v.is_text())
    return quoted(v.as_text());
  if (v.is_bool())
    return v.as_bool() ? "true" : "false";
  if (v.is_ref())
    return (v.as_ref().external ? "extern " : "ref ") + v.as_ref().target;

  std::string out = "[";
  bool first = true;
  for (const auto& item : v.as_list())
  {
    if (!first)
      out += ", ";
    first = false;
    out += value_text(item);
  }
  return out + "]";
}

// Binding strength; higher binds tighter.
int precedence(ExprOp op)
{
  switch (op)
  {
    case ExprOp::Or: return 1;
    case ExprOp::And: return 2;
    case ExprOp::Not: return 3;
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le:
    case ExprOp::Gt:
    case ExprOp::Ge: return 4;
    case ExprOp::Add:
    case ExprOp::Sub: return 5;
    case ExprOp::Mul:
    case ExprOp::Div: return 6;
    case ExprOp::Negate: return 7;
    default: return 8;
  }
}

const char* op_text(ExprOp op)
{
  switch (op)
  {
    case ExprOp::Or: return "or";
    case ExprOp::And: return "and";
    case ExprOp::Eq: return "=";
    case ExprOp::Ne: return "!=";
    case ExprOp::Lt: return "<";
    case ExprOp::Le: return "<=";
    case ExprOp::Gt: return ">";
    case ExprOp::Ge: return ">=";
    case ExprOp::Add: return "+";
    case ExprOp::Sub: return "-";
    case ExprOp::Mul: return "*";
    case ExprOp::Div: return "/";
    default: return "?";
  }
}

std::string expr_text(const Expr& e, const std::string& context);

std::string wrapped(const Expr& e, const std::string& context, bool parens)
{
  const std::string inner = expr_text(e, context);
  return parens ? "(" + inner + ")" : inner;
}

std::string expr_text(const Expr& e, const std::string& context)
{
  switch (e.op)
  {
    case ExprOp::Literal:
      return value_text(e.literal);
    case ExprOp::Attribute:
      return e.name;
    case ExprOp::Has:
      return "has(" + e.name + ")";
    case ExprOp::SortAtMost:
      return "sort_at_most(" + e.name + ", " + sort_text(e.sort, context) + ")";
    case ExprOp::Not:
      return "not " + wrapped(e.args[0], context, precedence(e.args[0].op) < 3);
    case ExprOp::Negate:
      return "-(" + expr_text(e.args[0], context) + ")";
    default:
      break;
  }

  const int p = precedence(e.op);
  const Expr& lhs = e.args[0];
  const Expr& rhs = e.args[1];
  // Comparisons do not chain, so an equal-precedence operand needs parens on
  // either side; the other binary operators associate to the left.
  const bool lhs_parens = p == 4 ? precedence(lhs.op) <= p : precedence(lhs.op) < p;
  const bool rhs_parens = precedence(rhs.op) <= p;
  return wrapped(lhs, context, lhs_parens) + " " + op_text(e.op) + " "
    + wrapped(rhs, context, rhs_parens);
}

//==============================================================================
class Printer
{
public:
  explicit Printer(const Workspace& ws)
  : _ws(ws)
  {
  }

  std::string run()
  {
    for (const auto& [name, set] : _ws.sorts.sort_sets())
      sortset(set);

    if (!_ws.sorts.rank_edges().empty())
    {
      begin_block();
      for (const auto& [below, above] : _ws.sorts.rank_edges())
        _out << "rank " << below << " < " << above << ";\n";
    }

    if (!_ws.alphabet.symbols().empty())
    {
      begin_block();
      _out << "alphabet {\n";
      for (const auto& [symbol, sorts] : _ws.alphabet.symbols())
      {
        _out << "  symbol " << symbol << " : ";
        bool first = true;
        for (const auto& s : sorts)
        {
          _out << (first ? "" : ", ") << to_string(s);
          first = false;
        }
        _out << ";\n";
      }
      _out << "}\n";
    }

    for (const auto& [name, o] : _ws.ontologies)
      ontology(o);
    for (const auto& [name, m] : _ws.models)
      model(m);
    for (const auto& [name, m] : _ws.sort_maps)
      sort_map(m);
    for (const auto& [name, x] : _ws.expansions)
      expansion(x);
    for (const auto& [name, mm] : _ws.mode_mappings)
      mode_mapping(mm);
    for (const auto& [name, sc] : _ws.scenarios)
      scenario(sc);

    return _out.str();
  }

private:
  void begin_block()
  {
    if (_started)
      _out << "\n";
    _started = true;
  }

  void sortset(const SortSet& set)
  {
    begin_block();
    _out << "sortset " << set.name() << " {\n";
    for (const auto& sort : set.sorts())
    {
      _out << "  sort " << sort;
      const auto supers = set.direct_supersorts(sort);
      for (std::size_t i = 0; i < supers.size(); ++i)
        _out << (i == 0 ? " < " : ", ") << supers[i];
      _out << ";\n";
    }
    _out << "}\n";
  }

  void rule(const Rule& r, const std::string& context, const std::string& indent)
  {
    _out << indent << "rule " << r.id << ": " << expr_text(r.expr, context) << ";\n";
  }

  void ontology(const Ontology& o)
  {
    begin_block();
    _out << "ontology " << o.name << " in " << o.sort_set << " {\n";
    if (!o.provenance.empty())
      _out << "  provenance " << quoted(o.provenance) << ";\n";
    for (const auto& c : o.commitments)
    {
      _out << "  commitment " << c.id << " on " << sort_text(c.applies_to, o.sort_set)
           << " {\n";
      for (const auto& req : c.required_attributes)
      {
        _out << "    " << (req.required ? "require " : "optional ") << req.name
             << (req.ref_only ? " ref" : "") << " : " << sort_text(req.sort, o.sort_set)
             << ";\n";
      }
      for (const auto& r : c.rules)
        rule(r, o.sort_set, "    ");
      if (!c.rationale.empty())
        _out << "    rationale " << quoted(c.rationale) << ";\n";
      _out << "  }\n";
    }
    _out << "}\n";
  }

  void attribute(const Attribute& a, const std::string& context, const std::string& indent)
  {
    _out << indent << "attr " << a.name << " : " << sort_text(a.sort, context) << " = "
         << value_text(a.value) << ";\n";
  }

  void model(const InformationModel& m)
  {
    begin_block();
    const std::string& ctx = m.sort_set();
    _out << "model " << m.name() << " in " << ctx << " {\n";
    for (const auto& [name, e] : m.entities())
    {
      _out << "  entity " << e.name << " : ";
      for (std::size_t i = 0; i < e.result_sort.size(); ++i)
        _out << (i == 0 ? "" : ", ") << sort_text(e.result_sort[i], ctx);
      _out << " kind " << to_string(e.kind) << " {\n";
      for (const auto& a : e.attributes)
        attribute(a, ctx, "    ");
      if (e.functor)
      {
        _out << "    functor " << to_string(e.functor->mode) << " {\n";
        for (const auto& fn : e.functor->functions)
        {
          _out << "      fn " << fn.name << "(";
          for (std::size_t i = 0; i < fn.domain_attrs.size(); ++i)
            _out << (i == 0 ? "" : ", ") << fn.domain_attrs[i];
          _out << ") -> " << sort_text(fn.codomain, ctx);
          if (fn.body)
            _out << " = " << expr_text(*fn.body, ctx);
          _out << ";\n";
        }
        _out << "    }\n";
      }
      for (const auto& r : e.rules)
        rule(r, ctx, "    ");
      _out << "  }\n";
    }
    _out << "}\n";
  }

  void sort_map(const SortMap& m)
  {
    begin_block();
    _out << (m.direction == MapDirection::Abstracting ? "abstractmap " : "refinemap ")
         << m.name << " in " << m.sort_set << " {\n";
    for (const auto& e : m.entries)
    {
      _out << "  " << e.from << " -> " << e.to;
      if (!e.target_attribute.empty())
        _out << " as " << e.target_attribute;
      if (e.merge)
        _out << " " << to_string(*e.merge);
      _out << ";\n";
    }
    _out << "}\n";
  }

  void expansion(const Expansion& x)
  {
    begin_block();
    _out << "expansion " << x.name << " in " << x.sort_set << " {\n";
    for (const auto& entry : x.entries)
    {
      _out << "  " << entry.entity << "." << entry.attribute << " => {\n";
      for (const auto& a : entry.replacements)
        attribute(a, x.sort_set, "    ");
      _out << "  }\n";
    }
    _out << "}\n";
  }

  void mode_mapping(const ModeMapping& mm)
  {
    begin_block();
    _out << "modemapping " << mm.name << " {\n";
    for (const auto& e : mm.entries)
    {
      _out << "  " << to_string(e.abstract_path) << " <- ";
      for (std::size_t i = 0; i < e.detailed_paths.size(); ++i)
        _out << (i == 0 ? "" : ", ") << to_string(e.detailed_paths[i]);
      if (e.mode)
        _out << " " << to_string(*e.mode);
      _out << ";\n";
    }
    _out << "}\n";
  }

  void scenario(const ScenarioConfig& sc)
  {
    begin_block();
    _out << "scenario " << sc.name << " {\n";
    _out << "  plant " << sc.plant_model << ";\n";
    if (sc.abstract_model)
      _out << "  abstract " << *sc.abstract_model << ";\n";
    if (sc.detailed_model)
      _out << "  detailed " << *sc.detailed_model << ";\n";
    _out << "  mode " << to_string(sc.mode) << ";\n";
    _out << "  horizon " << sim::format_duration(sc.horizon) << ";\n";
    _out << "  seed " << sc.seed << ";\n";
    if (sc.fleet)
      _out << "  fleet " << *sc.fleet << ";\n";
    for (const auto& r : sc.releases)
    {
      _out << "  release " << r.unit;
      switch (r.kind)
      {
        case ReleaseKind::Every:
        case ReleaseKind::Exponential:
          _out << (r.kind == ReleaseKind::Every ? " every " : " exponential ")
               << sim::format_duration(r.interval);
          if (r.offset.us != 0)
            _out << " offset " << sim::format_duration(r.offset);
          break;
        case ReleaseKind::Batch:
          _out << " batch " << r.count << " at " << sim::format_duration(r.offset);
          break;
      }
      _out << ";\n";
    }
    for (const auto& r : sc.routes)
      _out << "  route " << r.from << " -> " << r.to << ";\n";
    for (const auto& n : sc.needs)
      _out << "  needs " << n.assembly << " from " << n.source << " " << n.count << ";\n";
    for (const auto& r : sc.retrievals)
      _out << "  retrieve " << r.unit << " every " << sim::format_duration(r.interval)
           << ";\n";
    _out << "}\n";
  }

  const Workspace& _ws;
  std::ostringstream _out;
  bool _started = false;
};

} // anonymous namespace

//==============================================================================
std::string print(const Workspace& workspace)
{
  return Printer(workspace).run();
}

} // namespace mfgsim::dsl
