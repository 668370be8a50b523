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

#ifndef MFGSIM__DSL_HPP
#define MFGSIM__DSL_HPP

#include <mfgsim/entity.hpp>
#include <mfgsim/workspace.hpp>

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mfgsim::dsl {

/// 1-based line and column (in bytes); `offset` is the 0-based byte offset.
struct SourceSpan
{
  std::string file;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;
  std::size_t offset = 0;
};

struct ParseDiagnostic
{
  SourceSpan span;
  Severity severity = Severity::Error;
  std::string message;
};

/// `file:line:col: severity: message`
std::string format(const ParseDiagnostic& diagnostic);

struct ParseResult
{
  /// Present only if no error diagnostics were produced.
  std::optional<Workspace> workspace;
  std::vector<ParseDiagnostic> diagnostics;

  /// check_wellformed output for every model, keyed by model name.
  std::map<std::string, Report> model_reports;

  bool ok() const { return workspace.has_value(); }
};

struct ParseOptions
{
  /// Name used in spans and diagnostics.
  std::string filename = "<input>";

  /// Directory against which `include` paths resolve. Empty means the
  /// current working directory.
  std::filesystem::path base_dir;
};

ParseResult parse(std::string_view text, const ParseOptions& options = {});

/// Reads and parses a `.mim` file; includes resolve relative to it.
ParseResult parse_file(const std::filesystem::path& path);

/// Canonical text: sort system, alphabet, ontologies, models, maps,
/// expansions, mode mappings, scenarios; names in alphabetical order within
/// each group; 2-space indentation. Includes are flattened.
std::string print(const Workspace& workspace);

/// Words the expression language reserves; they cannot name anything.
bool is_reserved_word(std::string_view word);

} // namespace mfgsim::dsl

#endif // MFGSIM__DSL_HPP
