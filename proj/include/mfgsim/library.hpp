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

#ifndef MFGSIM__LIBRARY_HPP
#define MFGSIM__LIBRARY_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mfgsim {

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

namespace library {

enum class Kind
{
  PrimitiveSet,
  Conceptualization,
  Model,
  Result,
};

/// "primitive-set", "conceptualization", "model", "result".
std::string_view to_string(Kind kind);
std::optional<Kind> kind_from_string(std::string_view text);

struct Item
{
  Kind kind = Kind::Model;
  std::string name;
  std::int64_t version = 0;
  std::string content_hash;
  std::string payload;

  /// UTC, ISO 8601 with second resolution.
  std::string created_at;
};

struct CatalogEntry
{
  Kind kind = Kind::Model;
  std::string name;
  std::int64_t version = 0;
  std::string content_hash;
  std::string created_at;
};

/// Appends `payload` as the next version of (kind, name). A payload equal to
/// the latest version is not stored again; the existing item is returned.
/// Takes the root's writer lock. Throws IoError, CorruptManifest, LockHeld,
/// InvalidArgument (bad name).
Item store(
  const std::filesystem::path& root,
  Kind kind,
  const std::string& name,
  const std::string& payload);

/// Latest version when `version` is empty. Re-hashes the payload on read.
/// Throws NotFound, HashMismatch, IoError, CorruptManifest.
Item load(
  const std::filesystem::path& root,
  Kind kind,
  const std::string& name,
  std::optional<std::int64_t> version = std::nullopt);

/// Ordered by (kind, name, version). A root without a manifest is empty.
std::vector<CatalogEntry> list(
  const std::filesystem::path& root, std::optional<Kind> kind = std::nullopt);

namespace testing {

/// Called by store() after each durable step with "payload-written" and
/// "manifest-written". Used by crash tests; not thread-safe.
void set_crash_hook(std::function<void(std::string_view stage)> hook);

} // namespace testing
} // namespace library
} // namespace mfgsim

#endif // MFGSIM__LIBRARY_HPP
