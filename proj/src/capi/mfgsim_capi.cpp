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

#include <mfgsim/mfgsim.h>

#include <mfgsim/abstraction.hpp>
#include <mfgsim/dsl.hpp>
#include <mfgsim/error.hpp>
#include <mfgsim/library.hpp>
#include <mfgsim/manufacturing.hpp>
#include <mfgsim/ontology.hpp>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct mfgsim_workspace
{
  mfgsim::Workspace ws;
};

namespace {

using mfgsim::Error;
using mfgsim::ErrorCode;

thread_local std::string last_error;

int status_of(ErrorCode code)
{
  if (code == ErrorCode::InvalidArgument)
    return MFGSIM_INVALID_ARGUMENT;
  return MFGSIM_DUPLICATE_SORT_SET + static_cast<int>(code);
}

char* dup(const std::string& s)
{
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out)
    throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void put(char** target, const std::string& s)
{
  if (target)
    *target = dup(s);
}

void clear(char** target)
{
  if (target)
    *target = nullptr;
}

int fail(int status, std::string message)
{
  last_error = std::move(message);
  return status;
}

/// Runs `body`, translating exceptions into status codes.
template<typename Fn>
int guarded(Fn&& body)
{
  try
  {
    last_error.clear();
    return body();
  }
  catch (const Error& e)
  {
    return fail(status_of(e.code()), e.what());
  }
  catch (const std::bad_alloc&)
  {
    return fail(MFGSIM_INTERNAL, "out of memory");
  }
  catch (const std::exception& e)
  {
    return fail(MFGSIM_INTERNAL, e.what());
  }
}

#define MFGSIM_REQUIRE(cond, what) \
  do \
  { \
    if (!(cond)) \
      return fail(MFGSIM_INVALID_ARGUMENT, what); \
  } while (0)

std::string diagnostics_text(const mfgsim::dsl::ParseResult& r)
{
  std::string out;
  for (const auto& d : r.diagnostics)
    out += mfgsim::dsl::format(d) + "\n";
  return out;
}

int adopt(mfgsim::dsl::ParseResult result, mfgsim_workspace** out, char** diagnostics)
{
  put(diagnostics, diagnostics_text(result));
  if (!result.ok())
  {
    const std::string first = result.diagnostics.empty()
      ? std::string("parse failed") : mfgsim::dsl::format(result.diagnostics.front());
    return fail(MFGSIM_PARSE_FAILED, first);
  }
  *out = new mfgsim_workspace{std::move(*result.workspace)};
  return MFGSIM_OK;
}

std::vector<std::string> models_on(const mfgsim::Workspace& ws, const std::string& set,
  const char* model)
{
  std::vector<std::string> out;
  if (model)
  {
    ws.model(model);
    out.push_back(model);
    return out;
  }
  for (const auto& [name, m] : ws.models)
  {
    if (m.sort_set() == set)
      out.push_back(name);
  }
  return out;
}

std::string notes_text(const std::string& model, const std::vector<mfgsim::Diagnostic>& notes)
{
  std::string out;
  for (const auto& n : notes)
  {
    mfgsim::Report r;
    r.diagnostics.push_back(n);
    out += model + ": " + mfgsim::format_report(r);
  }
  return out;
}

mfgsim::ScenarioConfig scenario_for(
  const mfgsim::Workspace& ws, const char* scenario, const mfgsim_run_options* o)
{
  mfgsim::ScenarioConfig config = ws.scenario(scenario);
  if (!o)
    return config;
  if (o->mode)
  {
    const auto mode = mfgsim::transfer_mode_from_string(o->mode);
    if (!mode)
      throw Error(ErrorCode::InvalidArgument, std::string("unknown mode '") + o->mode + "'");
    config.mode = *mode;
  }
  if (o->use_seed)
    config.seed = o->seed;
  if (o->horizon)
  {
    const auto h = mfgsim::sim::parse_duration(o->horizon);
    if (!h || h->us <= 0)
      throw Error(ErrorCode::InvalidArgument, std::string("bad horizon '") + o->horizon + "'");
    config.horizon = *h;
  }
  if (o->fleet != 0)
    config.fleet = o->fleet;
  return config;
}

const char* profile_of(const mfgsim_run_options* o)
{
  return o && o->profile ? o->profile : "mfg_profile";
}

mfgsim::mfg::ExecutableScenario build(
  const mfgsim::Workspace& ws, const mfgsim::ScenarioConfig& config, const char* profile)
{
  const auto model = mfgsim::mfg::compose_model(ws, config, config.mode);
  return mfgsim::mfg::instantiate(model, ws.ontology(profile), config, ws.sorts, ws.alphabet);
}

std::optional<mfgsim::library::Kind> kind_arg(const char* kind)
{
  return kind ? mfgsim::library::kind_from_string(kind) : std::nullopt;
}

} // anonymous namespace

//==============================================================================
extern "C" {

const char* mfgsim_last_error(void)
{
  return last_error.c_str();
}

const char* mfgsim_status_name(int status)
{
  switch (status)
  {
    case MFGSIM_OK: return "Ok";
    case MFGSIM_DIAGNOSTICS: return "Diagnostics";
    case MFGSIM_INVALID_ARGUMENT: return "InvalidArgument";
    case MFGSIM_INTERNAL: return "Internal";
    default: break;
  }
  const int index = status - MFGSIM_DUPLICATE_SORT_SET;
  if (index >= 0 && index < static_cast<int>(ErrorCode::InvalidArgument))
    return mfgsim::to_string(static_cast<ErrorCode>(index)).data();
  return "unknown";
}

void mfgsim_string_free(char* s)
{
  std::free(s);
}

const char* mfgsim_version(void)
{
  return "1.0.0";
}

int mfgsim_parse_duration(const char* text, int64_t* out_us)
{
  MFGSIM_REQUIRE(text && out_us, "null argument");
  const auto d = mfgsim::sim::parse_duration(text);
  if (!d)
  {
    return fail(MFGSIM_INVALID_ARGUMENT, std::string("bad duration '") + text
      + "': expected an integer followed by us, ms, s, m or h");
  }
  *out_us = d->us;
  return MFGSIM_OK;
}

//==============================================================================
int mfgsim_workspace_load(const char* path, mfgsim_workspace** out, char** diagnostics)
{
  clear(diagnostics);
  MFGSIM_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&]() -> int { return adopt(mfgsim::dsl::parse_file(path), out, diagnostics); });
}

int mfgsim_workspace_parse(
  const char* text, const char* filename, const char* base_dir,
  mfgsim_workspace** out, char** diagnostics)
{
  clear(diagnostics);
  MFGSIM_REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded([&]() -> int
    {
      mfgsim::dsl::ParseOptions options;
      if (filename)
        options.filename = filename;
      if (base_dir)
        options.base_dir = base_dir;
      return adopt(mfgsim::dsl::parse(text, options), out, diagnostics);
    });
}

void mfgsim_workspace_free(mfgsim_workspace* ws)
{
  delete ws;
}

int mfgsim_workspace_print(const mfgsim_workspace* ws, char** out)
{
  clear(out);
  MFGSIM_REQUIRE(ws && out, "null argument");
  return guarded([&]() -> int
    {
      put(out, mfgsim::dsl::print(ws->ws));
      return MFGSIM_OK;
    });
}

int mfgsim_check(const mfgsim_workspace* ws, const char* model, char** report)
{
  clear(report);
  MFGSIM_REQUIRE(ws && report, "null argument");
  return guarded([&]() -> int
    {
      std::string text;
      bool errors = false;
      for (const auto& [name, m] : ws->ws.models)
      {
        if (model && name != model)
          continue;
        const auto r = mfgsim::check_wellformed(m, ws->ws.sorts, ws->ws.alphabet);
        errors = errors || r.has_errors();
        std::string lines = mfgsim::format_report(r);
        std::size_t pos = 0;
        while (pos < lines.size())
        {
          const std::size_t end = lines.find('\n', pos);
          text += "model " + name + ": " + lines.substr(pos, end - pos) + "\n";
          pos = end == std::string::npos ? lines.size() : end + 1;
        }
      }
      if (model)
        ws->ws.model(model);
      put(report, text);
      if (errors)
        return fail(MFGSIM_DIAGNOSTICS, "model is not well-formed");
      return MFGSIM_OK;
    });
}

int mfgsim_verify(
  const mfgsim_workspace* ws, const char* model, const char* ontology, int as_json,
  char** report)
{
  clear(report);
  MFGSIM_REQUIRE(ws && ontology && report, "null argument");
  return guarded([&]() -> int
    {
      const mfgsim::Ontology& onto = ws->ws.ontology(ontology);
      mfgsim::ViolationReport all;
      for (const auto& name : models_on(ws->ws, onto.sort_set, model))
      {
        const auto r = mfgsim::verify_model(ws->ws.model(name), onto, ws->ws.sorts,
          ws->ws.alphabet);
        all.violations.insert(all.violations.end(), r.violations.begin(), r.violations.end());
      }
      put(report, as_json ? mfgsim::to_json(all) : mfgsim::to_text(all));
      if (!all.empty())
        return fail(MFGSIM_DIAGNOSTICS, std::to_string(all.violations.size()) + " violation(s)");
      return MFGSIM_OK;
    });
}

int mfgsim_lattice(const mfgsim_workspace* ws, const char* model, const char* format, char** out)
{
  clear(out);
  MFGSIM_REQUIRE(ws && model && out, "null argument");
  const std::string fmt = format ? format : "text";
  MFGSIM_REQUIRE(fmt == "text" || fmt == "dot", "format must be 'text' or 'dot'");
  return guarded([&]() -> int
    {
      const auto lattice = mfgsim::build_conceptual_lattice(ws->ws.model(model), ws->ws.sorts);
      put(out, fmt == "dot" ? mfgsim::to_dot(lattice, model) : mfgsim::to_text(lattice));
      return MFGSIM_OK;
    });
}

int mfgsim_abstract(
  const mfgsim_workspace* ws, const char* map, const char* model,
  mfgsim_workspace** out, char** notes)
{
  clear(notes);
  MFGSIM_REQUIRE(ws && map && out, "null argument");
  *out = nullptr;
  return guarded([&]() -> int
    {
      const mfgsim::SortMap& m = ws->ws.sort_map(map);
      auto copy = std::make_unique<mfgsim_workspace>(*ws);
      std::string text;
      for (const auto& name : models_on(ws->ws, m.sort_set, model))
      {
        auto r = mfgsim::abstract_model(ws->ws.model(name), m, ws->ws.sorts);
        text += notes_text(name, r.notes);
        copy->ws.models.insert_or_assign(name, std::move(r.model));
      }
      put(notes, text);
      *out = copy.release();
      return MFGSIM_OK;
    });
}

int mfgsim_refine(
  const mfgsim_workspace* ws, const char* map, const char* expansion, const char* model,
  mfgsim_workspace** out, char** notes)
{
  clear(notes);
  MFGSIM_REQUIRE(ws && map && out, "null argument");
  *out = nullptr;
  return guarded([&]() -> int
    {
      const mfgsim::SortMap& m = ws->ws.sort_map(map);
      mfgsim::Expansion none;
      const mfgsim::Expansion& x = expansion ? ws->ws.expansion(expansion) : none;
      auto copy = std::make_unique<mfgsim_workspace>(*ws);
      std::string text;
      for (const auto& name : models_on(ws->ws, m.sort_set, model))
      {
        auto r = mfgsim::refine_model(ws->ws.model(name), m, x, ws->ws.sorts);
        text += notes_text(name, r.notes);
        copy->ws.models.insert_or_assign(name, std::move(r.model));
      }
      put(notes, text);
      *out = copy.release();
      return MFGSIM_OK;
    });
}

int mfgsim_view(
  const mfgsim_workspace* ws, const char* sort_set, const char* model, mfgsim_workspace** out)
{
  MFGSIM_REQUIRE(ws && sort_set && out, "null argument");
  *out = nullptr;
  return guarded([&]() -> int
    {
      auto copy = std::make_unique<mfgsim_workspace>(*ws);
      for (const auto& [name, m] : ws->ws.models)
      {
        if (model && name != model)
          continue;
        copy->ws.models.insert_or_assign(name, mfgsim::project_view(m, sort_set, ws->ws.sorts));
      }
      if (model)
        ws->ws.model(model);
      *out = copy.release();
      return MFGSIM_OK;
    });
}

int mfgsim_coordinate(
  const mfgsim_workspace* abstract_ws, const char* abstract_model,
  const mfgsim_workspace* detailed_ws, const char* detailed_model,
  const char* mapping, char** report)
{
  clear(report);
  MFGSIM_REQUIRE(abstract_ws && abstract_model && detailed_ws && detailed_model && mapping
    && report, "null argument");
  return guarded([&]() -> int
    {
      const auto& a = abstract_ws->ws;
      const auto& d = detailed_ws->ws;
      const mfgsim::ModeMapping& mm = a.mode_mappings.count(mapping)
        ? a.mode_mapping(mapping) : d.mode_mapping(mapping);
      const auto r = mfgsim::coordinate_modes(
        a.model(abstract_model), d.model(detailed_model), mm, a.sorts);
      put(report, mfgsim::format_report(r));
      if (r.has_errors())
        return fail(MFGSIM_DIAGNOSTICS, "modes are not coordinated");
      return MFGSIM_OK;
    });
}

//==============================================================================
void mfgsim_run_options_init(mfgsim_run_options* options)
{
  if (!options)
    return;
  *options = mfgsim_run_options{};
  options->trace = 1;
}

int mfgsim_estimate(
  const mfgsim_workspace* ws, const char* scenario, const mfgsim_run_options* options,
  char** text)
{
  clear(text);
  MFGSIM_REQUIRE(ws && scenario && text, "null argument");
  return guarded([&]() -> int
    {
      auto config = scenario_for(ws->ws, scenario, options);
      config.mode = mfgsim::TransferMode::Abstract;
      const auto sc = build(ws->ws, config, profile_of(options));
      const auto est = mfgsim::mfg::estimate_transfer_capacity(sc, mfgsim::mfg::derive_demand(sc));
      put(text, mfgsim::mfg::to_text(est));
      return MFGSIM_OK;
    });
}

int mfgsim_simulate(
  const mfgsim_workspace* ws, const char* scenario, const mfgsim_run_options* options,
  char** report_csv, char** trace)
{
  clear(report_csv);
  clear(trace);
  MFGSIM_REQUIRE(ws && scenario && report_csv, "null argument");
  return guarded([&]() -> int
    {
      const auto config = scenario_for(ws->ws, scenario, options);
      const auto sc = build(ws->ws, config, profile_of(options));
      mfgsim::mfg::SimOptions so;
      so.trace = options ? options->trace != 0 : true;
      const auto rep = mfgsim::mfg::simulate(sc, config.seed, config.horizon, so);
      put(report_csv, mfgsim::mfg::to_csv(rep));
      put(trace, rep.trace_jsonl);
      return MFGSIM_OK;
    });
}

int mfgsim_compare(
  const mfgsim_workspace* ws, const char* scenario, const mfgsim_run_options* options,
  double threshold, char** text, char** csv)
{
  clear(text);
  clear(csv);
  MFGSIM_REQUIRE(ws && scenario, "null argument");
  return guarded([&]() -> int
    {
      auto config = scenario_for(ws->ws, scenario, options);
      config.mode = mfgsim::TransferMode::Abstract;
      const auto abstract_sc = build(ws->ws, config, profile_of(options));
      config.mode = mfgsim::TransferMode::Detailed;
      const auto detailed_sc = build(ws->ws, config, profile_of(options));

      const auto est = mfgsim::mfg::estimate_transfer_capacity(
        abstract_sc, mfgsim::mfg::derive_demand(abstract_sc));
      mfgsim::mfg::SimOptions so;
      so.trace = false;
      const auto rep = mfgsim::mfg::simulate(detailed_sc, config.seed, config.horizon, so);
      const auto cmp = mfgsim::mfg::compare_modes(est, rep, threshold);
      put(text, mfgsim::mfg::to_text(cmp));
      put(csv, mfgsim::mfg::to_csv(cmp));
      if (cmp.any_flagged())
        return fail(MFGSIM_DIAGNOSTICS, "gap above threshold");
      return MFGSIM_OK;
    });
}

//==============================================================================
int mfgsim_lib_store(
  const char* root, const char* kind, const char* name, const char* payload, size_t size,
  int64_t* version, char** content_hash)
{
  clear(content_hash);
  MFGSIM_REQUIRE(root && kind && name && (payload || size == 0), "null argument");
  const auto k = kind_arg(kind);
  MFGSIM_REQUIRE(k, "unknown library kind");
  return guarded([&]() -> int
    {
      const auto item = mfgsim::library::store(root, *k, name,
        std::string(payload ? payload : "", size));
      if (version)
        *version = item.version;
      put(content_hash, item.content_hash);
      return MFGSIM_OK;
    });
}

int mfgsim_lib_load(
  const char* root, const char* kind, const char* name, int64_t version,
  char** payload, size_t* size, int64_t* loaded_version)
{
  clear(payload);
  MFGSIM_REQUIRE(root && kind && name && payload, "null argument");
  MFGSIM_REQUIRE(version >= 0, "version must be non-negative");
  const auto k = kind_arg(kind);
  MFGSIM_REQUIRE(k, "unknown library kind");
  return guarded([&]() -> int
    {
      const auto item = mfgsim::library::load(root, *k, name,
        version == 0 ? std::nullopt : std::optional<std::int64_t>(version));
      put(payload, item.payload);
      if (size)
        *size = item.payload.size();
      if (loaded_version)
        *loaded_version = item.version;
      return MFGSIM_OK;
    });
}

int mfgsim_lib_list(const char* root, const char* kind, char** json)
{
  clear(json);
  MFGSIM_REQUIRE(root && json, "null argument");
  const auto k = kind_arg(kind);
  MFGSIM_REQUIRE(!kind || k, "unknown library kind");
  return guarded([&]() -> int
    {
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const auto& e : mfgsim::library::list(root, k))
      {
        doc.push_back({
          {"kind", std::string(mfgsim::library::to_string(e.kind))},
          {"name", e.name},
          {"version", e.version},
          {"content_hash", e.content_hash},
          {"created_at", e.created_at},
        });
      }
      put(json, doc.dump(2) + "\n");
      return MFGSIM_OK;
    });
}

} // extern "C"
