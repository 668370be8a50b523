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
#include <mfgsim/scenario.hpp>
#include <mfgsim/workspace.hpp>

namespace mfgsim {

//==============================================================================
std::string_view to_string(TransferMode mode)
{
  return mode == TransferMode::Abstract ? "abstract" : "detailed";
}

//==============================================================================
std::optional<TransferMode> transfer_mode_from_string(std::string_view text)
{
  if (text == "abstract")
    return TransferMode::Abstract;
  if (text == "detailed")
    return TransferMode::Detailed;
  return std::nullopt;
}

namespace {

template<typename T>
const T& lookup(
  const std::map<std::string, T>& items, const std::string& name, const char* what)
{
  const auto it = items.find(name);
  if (it == items.end())
    throw Error(ErrorCode::NotFound, std::string("no ") + what + " named '" + name + "'");
  return it->second;
}

} // anonymous namespace

const InformationModel& Workspace::model(const std::string& name) const
{
  return lookup(models, name, "model");
}

const Ontology& Workspace::ontology(const std::string& name) const
{
  return lookup(ontologies, name, "ontology");
}

const SortMap& Workspace::sort_map(const std::string& name) const
{
  return lookup(sort_maps, name, "sort map");
}

const Expansion& Workspace::expansion(const std::string& name) const
{
  return lookup(expansions, name, "expansion");
}

const ModeMapping& Workspace::mode_mapping(const std::string& name) const
{
  return lookup(mode_mappings, name, "mode mapping");
}

const ScenarioConfig& Workspace::scenario(const std::string& name) const
{
  return lookup(scenarios, name, "scenario");
}

} // namespace mfgsim
