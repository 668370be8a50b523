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

#ifndef MFGSIM__ERROR_HPP
#define MFGSIM__ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfgsim {

enum class ErrorCode
{
  // sort kernel
  DuplicateSortSet,
  UnknownSortSet,
  UnknownSort,
  CycleIntroduced,
  InvalidIdentifier,

  // entity kernel and ontology
  DuplicateEntity,
  UnknownEntity,
  ModelNotWellFormed,
  SortSystemMismatch,
  UnknownConcept,

  // abstraction
  NotAbstracting,
  NotRefining,
  UnmappedSort,
  OrphanAttribute,
  UnknownAttribute,
  NameClash,

  // workspace lookups, parsing
  NotFound,
  ParseFailed,

  // library
  IoError,
  CorruptManifest,
  HashMismatch,
  LockHeld,

  // simulation
  ScheduleInPast,
  ActionPanic,
  EngineFinished,
  DeadlockDetected,

  // manufacturing
  VerificationFailed,
  MissingComponent,
  ModeMismatch,
  ModelMismatch,
  InvalidScenario,

  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& message)
  : std::runtime_error(message),
    _code(code)
  {
  }

  ErrorCode code() const { return _code; }

private:
  ErrorCode _code;
};

} // namespace mfgsim

#endif // MFGSIM__ERROR_HPP
