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

#ifndef MFGSIM__ONTOLOGY_HPP
#define MFGSIM__ONTOLOGY_HPP

#include <mfgsim/entity.hpp>

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mfgsim {

/// One attribute shape demanded by a commitment. The name "*" matches any
/// attribute, so `require any ref : RouteElement` asks for at least one
/// reference-valued attribute declared at a sort <= RouteElement.
struct RequiredAttribute
{
  static constexpr const char* any = "*";

  std::string name;
  SortRef sort;
  bool required = true;
  bool ref_only = false;

  bool is_wildcard() const { return name == any; }

  bool operator==(const RequiredAttribute&) const = default;
};

struct Commitment
{
  std::string id;
  SortRef applies_to;
  std::vector<RequiredAttribute> required_attributes;
  std::vector<Rule> rules;
  std::string rationale;

  bool operator==(const Commitment&) const = default;
};

struct Ontology
{
  std::string name;
  std::string sort_set;
  std::string provenance;
  std::vector<Commitment> commitments;

  const Commitment* find(const std::string& id) const;

  bool operator==(const Ontology&) const = default;
};

/// Checks the ontology's own invariants: unique commitment ids, known sorts.
Report validate_ontology(const Ontology& ontology, const SortSystem& system);

struct Violation
{
  std::string commitment;
  std::string entity;
  std::string item;
  std::string kind;
  std::string message;

  auto operator<=>(const Violation&) const = default;
  bool operator==(const Violation&) const = default;
};

struct ViolationReport
{
  std::vector<Violation> violations;

  bool empty() const { return violations.empty(); }
};

/// `commitment: entity: item: kind: message`, one line per violation.
std::string to_text(const ViolationReport& report);
std::string to_json(const ViolationReport& report);

/// Matches commitments to entities by result-sort subsumption and lists
/// every unmet requirement. Well-formedness errors of the model are folded
/// in with a "wf:<code>" commitment id. An empty report does not certify
/// validity; it only says no stated commitment is broken.
///
/// Throws SortSystemMismatch if the ontology and the model are built on
/// different primary sort sets.
ViolationReport verify_model(
  const InformationModel& model,
  const Ontology& ontology,
  const SortSystem& system,
  const Alphabet& alphabet = {});

//==============================================================================
/// Entity x attribute-sort incidence: an entity has the attribute-sort t iff
/// it declares some attribute at sort t.
struct FormalContext
{
  std::vector<std::string> objects;
  std::vector<SortRef> attributes;
  std::vector<std::vector<bool>> incidence; // [object][attribute]

  static FormalContext from_model(const InformationModel& model);
};

struct Concept
{
  std::set<std::string> extent;
  std::set<SortRef> intent;

  auto operator<=>(const Concept&) const = default;
  bool operator==(const Concept&) const = default;
};

struct ConceptualLattice
{
  /// Ordered by (|intent|, intent); the top concept comes first and the
  /// bottom concept last.
  std::vector<Concept> concepts;

  /// (subconcept, superconcept) covering pairs, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> hasse_edges;

  std::size_t top() const { return 0; }
  std::size_t bottom() const { return concepts.empty() ? 0 : concepts.size() - 1; }
};

ConceptualLattice build_conceptual_lattice(const FormalContext& context);

/// Throws ModelNotWellFormed.
ConceptualLattice build_conceptual_lattice(
  const InformationModel& model, const SortSystem& system);

/// True iff `general` is reachable from `specific` along Hasse edges, i.e.
/// `specific` is a subconcept of `general` (reflexive). Throws
/// UnknownConcept.
bool lattice_subsumes(
  const ConceptualLattice& lattice, std::size_t general, std::size_t specific);

std::string to_dot(const ConceptualLattice& lattice, const std::string& name);
std::string to_text(const ConceptualLattice& lattice);

} // namespace mfgsim

#endif // MFGSIM__ONTOLOGY_HPP
