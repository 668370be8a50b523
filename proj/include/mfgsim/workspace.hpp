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

#ifndef MFGSIM__WORKSPACE_HPP
#define MFGSIM__WORKSPACE_HPP

#include <mfgsim/abstraction.hpp>
#include <mfgsim/entity.hpp>
#include <mfgsim/ontology.hpp>
#include <mfgsim/scenario.hpp>
#include <mfgsim/sorts.hpp>

#include <map>
#include <string>

namespace mfgsim {

/// The file-level unit: one sort system and alphabet plus every named model,
/// ontology, map and scenario defined over them.
struct Workspace
{
  SortSystem sorts;
  Alphabet alphabet;
  std::map<std::string, Ontology> ontologies;
  std::map<std::string, InformationModel> models;
  std::map<std::string, SortMap> sort_maps;
  std::map<std::string, Expansion> expansions;
  std::map<std::string, ModeMapping> mode_mappings;
  std::map<std::string, ScenarioConfig> scenarios;

  // Lookups throw NotFound.
  const InformationModel& model(const std::string& name) const;
  const Ontology& ontology(const std::string& name) const;
  const SortMap& sort_map(const std::string& name) const;
  const Expansion& expansion(const std::string& name) const;
  const ModeMapping& mode_mapping(const std::string& name) const;
  const ScenarioConfig& scenario(const std::string& name) const;

  bool operator==(const Workspace&) const = default;
};

} // namespace mfgsim

#endif // MFGSIM__WORKSPACE_HPP
