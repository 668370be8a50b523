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
#include <mfgsim/library.hpp>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace mfgsim {

//==============================================================================
std::string sha256_hex(std::string_view bytes)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoError, "SHA-256 computation failed");

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i)
  {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

namespace library {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::function<void(std::string_view)>& crash_hook()
{
  static std::function<void(std::string_view)> hook;
  return hook;
}

void reached(std::string_view stage)
{
  if (crash_hook())
    crash_hook()(stage);
}

[[noreturn]] void io_fail(const std::string& what, const fs::path& path)
{
  throw Error(ErrorCode::IoError, what + " '" + path.string() + "': " + std::strerror(errno));
}

bool valid_name(const std::string& name)
{
  if (name.empty() || name.size() > 128 || name[0] == '.' || name[0] == '-')
    return false;
  return std::all_of(name.begin(), name.end(), [](char c)
    {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

fs::path payload_path(const fs::path& root, Kind kind, const std::string& name, std::int64_t v)
{
  return root / std::string(to_string(kind)) / name / (std::to_string(v) + ".payload");
}

std::string now_utc()
{
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void fsync_dir(const fs::path& dir)
{
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0)
    io_fail("cannot open directory", dir);
  ::fsync(fd);
  ::close(fd);
}

/// Writes to a sibling temp file, fsyncs it, renames it over `path` and
/// fsyncs the directory.
void write_durably(const fs::path& path, std::string_view bytes)
{
  const fs::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0)
    io_fail("cannot create", tmp);

  std::size_t done = 0;
  while (done < bytes.size())
  {
    const ssize_t n = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (n < 0)
    {
      if (errno == EINTR)
        continue;
      ::close(fd);
      io_fail("cannot write", tmp);
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0)
  {
    ::close(fd);
    io_fail("cannot fsync", tmp);
  }
  ::close(fd);

  if (::rename(tmp.c_str(), path.c_str()) != 0)
    io_fail("cannot rename onto", path);
  fsync_dir(path.parent_path());
}

std::string read_file(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    io_fail("cannot read", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<CatalogEntry> read_manifest(const fs::path& root)
{
  const fs::path path = root / "manifest.json";
  std::error_code ec;
  if (!fs::exists(path, ec))
    return {};

  const std::string text = read_file(path);
  std::vector<CatalogEntry> entries;
  try
  {
    const json doc = json::parse(text);
    if (doc.at("format").get<int>() != 1)
      throw Error(ErrorCode::CorruptManifest, "unsupported manifest format");
    for (const auto& it : doc.at("items"))
    {
      CatalogEntry e;
      const auto kind = kind_from_string(it.at("kind").get<std::string>());
      if (!kind)
        throw Error(ErrorCode::CorruptManifest, "unknown item kind in manifest");
      e.kind = *kind;
      e.name = it.at("name").get<std::string>();
      e.version = it.at("version").get<std::int64_t>();
      e.content_hash = it.at("content_hash").get<std::string>();
      e.created_at = it.at("created_at").get<std::string>();
      if (!valid_name(e.name) || e.version < 1)
        throw Error(ErrorCode::CorruptManifest, "invalid item in manifest");
      entries.push_back(std::move(e));
    }
  }
  catch (const json::exception& e)
  {
    throw Error(ErrorCode::CorruptManifest,
      "cannot parse '" + path.string() + "': " + e.what());
  }

  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b)
    {
      return std::tie(a.kind, a.name, a.version) < std::tie(b.kind, b.name, b.version);
    });

  // Versions must be gapless and unique per (kind, name).
  for (std::size_t i = 0; i < entries.size(); ++i)
  {
    const bool continues = i > 0 && entries[i - 1].kind == entries[i].kind
      && entries[i - 1].name == entries[i].name;
    const std::int64_t expected = continues ? entries[i - 1].version + 1 : 1;
    if (entries[i].version != expected)
      throw Error(ErrorCode::CorruptManifest,
        "versions of '" + entries[i].name + "' are not gapless");
  }
  return entries;
}

void write_manifest(const fs::path& root, const std::vector<CatalogEntry>& entries)
{
  json items = json::array();
  for (const auto& e : entries)
  {
    items.push_back({
      {"kind", std::string(to_string(e.kind))},
      {"name", e.name},
      {"version", e.version},
      {"content_hash", e.content_hash},
      {"created_at", e.created_at},
      {"path", std::string(to_string(e.kind)) + "/" + e.name + "/"
          + std::to_string(e.version) + ".payload"},
    });
  }
  const json doc = {{"format", 1}, {"items", items}};
  write_durably(root / "manifest.json", doc.dump(2) + "\n");
}

/// Exclusive advisory lock on `<root>/.lock`, held for the object's lifetime.
class WriterLock
{
public:
  explicit WriterLock(const fs::path& root)
  {
    const fs::path path = root / ".lock";
    _fd = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
    if (_fd < 0)
      io_fail("cannot open lock file", path);

    for (int attempt = 0; ::flock(_fd, LOCK_EX | LOCK_NB) != 0; ++attempt)
    {
      if (errno != EWOULDBLOCK || attempt >= 100)
      {
        ::close(_fd);
        throw Error(ErrorCode::LockHeld, "library '" + root.string() + "' is locked by another writer");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  }

  ~WriterLock()
  {
    ::flock(_fd, LOCK_UN);
    ::close(_fd);
  }

  WriterLock(const WriterLock&) = delete;
  WriterLock& operator=(const WriterLock&) = delete;

private:
  int _fd = -1;
};

} // anonymous namespace

//==============================================================================
std::string_view to_string(Kind kind)
{
  switch (kind)
  {
    case Kind::PrimitiveSet: return "primitive-set";
    case Kind::Conceptualization: return "conceptualization";
    case Kind::Model: return "model";
    case Kind::Result: return "result";
  }
  return "?";
}

std::optional<Kind> kind_from_string(std::string_view text)
{
  for (const Kind k : {Kind::PrimitiveSet, Kind::Conceptualization, Kind::Model, Kind::Result})
  {
    if (to_string(k) == text)
      return k;
  }
  return std::nullopt;
}

//==============================================================================
Item store(
  const fs::path& root, Kind kind, const std::string& name, const std::string& payload)
{
  if (!valid_name(name))
    throw Error(ErrorCode::InvalidArgument, "invalid library item name '" + name + "'");

  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec)
    throw Error(ErrorCode::IoError, "cannot create '" + root.string() + "': " + ec.message());

  WriterLock lock(root);
  std::vector<CatalogEntry> entries = read_manifest(root);

  const std::string hash = sha256_hex(payload);
  const CatalogEntry* latest = nullptr;
  for (const auto& e : entries)
  {
    if (e.kind == kind && e.name == name)
      latest = &e;
  }
  if (latest && latest->content_hash == hash)
    return load(root, kind, name, latest->version);

  CatalogEntry entry;
  entry.kind = kind;
  entry.name = name;
  entry.version = latest ? latest->version + 1 : 1;
  entry.content_hash = hash;
  entry.created_at = now_utc();

  const fs::path path = payload_path(root, kind, name, entry.version);
  fs::create_directories(path.parent_path(), ec);
  if (ec)
    throw Error(ErrorCode::IoError,
      "cannot create '" + path.parent_path().string() + "': " + ec.message());

  // Payload first, manifest last: a crash in between leaves an unlisted
  // payload file that the next store of this name overwrites.
  write_durably(path, payload);
  reached("payload-written");

  entries.push_back(entry);
  write_manifest(root, entries);
  reached("manifest-written");

  return Item{kind, name, entry.version, hash, payload, entry.created_at};
}

//==============================================================================
Item load(
  const fs::path& root, Kind kind, const std::string& name, std::optional<std::int64_t> version)
{
  const CatalogEntry* found = nullptr;
  const std::vector<CatalogEntry> entries = read_manifest(root);
  for (const auto& e : entries)
  {
    if (e.kind == kind && e.name == name && (!version || e.version == *version))
      found = &e;
  }
  if (!found)
  {
    throw Error(ErrorCode::NotFound, std::string(to_string(kind)) + " '" + name + "'"
      + (version ? " version " + std::to_string(*version) : std::string()) + " not found");
  }

  const std::string payload = read_file(payload_path(root, kind, name, found->version));
  if (sha256_hex(payload) != found->content_hash)
  {
    throw Error(ErrorCode::HashMismatch, std::string(to_string(kind)) + " '" + name
      + "' version " + std::to_string(found->version) + " does not match its recorded hash");
  }
  return Item{kind, name, found->version, found->content_hash, payload, found->created_at};
}

//==============================================================================
std::vector<CatalogEntry> list(const fs::path& root, std::optional<Kind> kind)
{
  std::error_code ec;
  if (!fs::is_directory(root, ec))
    throw Error(ErrorCode::IoError, "library root '" + root.string() + "' does not exist");

  std::vector<CatalogEntry> out;
  for (auto& e : read_manifest(root))
  {
    if (!kind || e.kind == *kind)
      out.push_back(std::move(e));
  }
  return out;
}

//==============================================================================
void testing::set_crash_hook(std::function<void(std::string_view)> hook)
{
  crash_hook() = std::move(hook);
}

} // namespace library
} // namespace mfgsim
