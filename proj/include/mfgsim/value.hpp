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

#ifndef MFGSIM__VALUE_HPP
#define MFGSIM__VALUE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mfgsim {

/// Closed set of unit tags carried by numeric data parameters.
enum class Unit
{
  None,
  Metre,
  MetrePerSecond,
  Second,
  Count,
};

std::string_view to_string(Unit unit);
std::optional<Unit> unit_from_string(std::string_view text);

struct Number
{
  double value = 0.0;
  Unit unit = Unit::None;

  bool operator==(const Number&) const = default;
};

struct EntityRef
{
  std::string target;

  /// Set when a projection dropped the target; an external reference is
  /// opaque and is not required to resolve.
  bool external = false;

  bool operator==(const EntityRef&) const = default;
};

struct Value;
using ValueList = std::vector<Value>;

/// An attribute value: another entity or a data parameter. Lists appear when
/// abstraction merges several attributes into one collection, and for
/// tabular parameters such as travel-time matrices.
struct Value
{
  std::variant<Number, std::string, bool, EntityRef, ValueList> data;

  Value() : data(Number{}) {}
  Value(Number n) : data(n) {}
  Value(std::string s) : data(std::move(s)) {}
  Value(bool b) : data(b) {}
  Value(EntityRef r) : data(std::move(r)) {}
  Value(ValueList l) : data(std::move(l)) {}

  static Value number(double v, Unit unit = Unit::None)
  {
    return Value(Number{v, unit});
  }
  static Value ref(std::string target)
  {
    return Value(EntityRef{std::move(target), false});
  }
  static Value text(std::string s) { return Value(std::move(s)); }

  bool is_number() const { return std::holds_alternative<Number>(data); }
  bool is_text() const { return std::holds_alternative<std::string>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_ref() const { return std::holds_alternative<EntityRef>(data); }
  bool is_list() const { return std::holds_alternative<ValueList>(data); }

  const Number& as_number() const { return std::get<Number>(data); }
  const std::string& as_text() const { return std::get<std::string>(data); }
  bool as_bool() const { return std::get<bool>(data); }
  const EntityRef& as_ref() const { return std::get<EntityRef>(data); }
  const ValueList& as_list() const { return std::get<ValueList>(data); }

  bool operator==(const Value& other) const { return data == other.data; }
};

/// Calls `fn(ref)` for every entity reference reachable in `value`,
/// descending into lists.
template<typename Fn>
void for_each_ref(const Value& value, Fn&& fn)
{
  if (value.is_ref())
  {
    fn(value.as_ref());
  }
  else if (value.is_list())
  {
    for (const auto& v : value.as_list())
      for_each_ref(v, fn);
  }
}

/// True for a reference or a nonempty list made only of references.
bool is_reference_like(const Value& value);

} // namespace mfgsim

#endif // MFGSIM__VALUE_HPP
