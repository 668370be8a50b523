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

// Command-line front end. Talks to the engine only through the C API.

#include <mfgsim/mfgsim.h>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace {

enum Exit
{
  ExitOk = 0,
  ExitDiagnostics = 1,
  ExitUsage = 2,
  ExitInternal = 3,
};

struct StringDeleter
{
  void operator()(char* s) const { mfgsim_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct WorkspaceDeleter
{
  void operator()(mfgsim_workspace* ws) const { mfgsim_workspace_free(ws); }
};
using WorkspacePtr = std::unique_ptr<mfgsim_workspace, WorkspaceDeleter>;

/// Thrown to leave a subcommand with a specific exit code.
struct Quit
{
  int code;
};

std::mutex stderr_mutex;

void diag(const std::string& text)
{
  if (text.empty())
    return;
  std::lock_guard<std::mutex> lock(stderr_mutex);
  std::cerr << text;
  if (text.back() != '\n')
    std::cerr << '\n';
}

void diag(const char* text)
{
  if (text)
    diag(std::string(text));
}

int exit_for(int status)
{
  switch (status)
  {
    case MFGSIM_OK: return ExitOk;
    case MFGSIM_INVALID_ARGUMENT: return ExitUsage;
    case MFGSIM_INTERNAL: return ExitInternal;
    default: return ExitDiagnostics;
  }
}

/// Reports a failed call on stderr and quits with the matching exit code.
void check_status(int status)
{
  if (status == MFGSIM_OK)
    return;
  const std::string message = mfgsim_last_error();
  if (status != MFGSIM_DIAGNOSTICS && !message.empty())
    diag(std::string("mfgsim: ") + mfgsim_status_name(status) + ": " + message);
  throw Quit{exit_for(status)};
}

void usage_error(const std::string& message, const std::string& command)
{
  diag("mfgsim: " + message + " (see 'mfgsim " + command + " --help')");
  throw Quit{ExitUsage};
}

WorkspacePtr load(const std::string& path)
{
  mfgsim_workspace* raw = nullptr;
  char* diagnostics = nullptr;
  const int status = mfgsim_workspace_load(path.c_str(), &raw, &diagnostics);
  CString text(diagnostics);
  diag(text.get());
  if (status == MFGSIM_PARSE_FAILED)
    throw Quit{ExitDiagnostics};
  check_status(status);
  return WorkspacePtr(raw);
}

void write_file(const std::string& path, const std::string& data)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  out.close();
  if (!out)
  {
    diag("mfgsim: cannot write '" + path + "'");
    throw Quit{ExitDiagnostics};
  }
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    diag("mfgsim: cannot read '" + path + "'");
    throw Quit{ExitDiagnostics};
  }
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void emit(const std::string& path, const char* data)
{
  const std::string text = data ? data : "";
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

void emit_workspace(const mfgsim_workspace* ws, const std::string& path)
{
  char* text = nullptr;
  const int status = mfgsim_workspace_print(ws, &text);
  CString owned(text);
  check_status(status);
  emit(path, owned.get());
}

const char* opt(const std::string& s)
{
  return s.empty() ? nullptr : s.c_str();
}

/// `FILE#MODEL`, split at the last '#'.
std::pair<std::string, std::string> split_target(const std::string& arg, const std::string& cmd)
{
  const auto hash = arg.rfind('#');
  if (hash == std::string::npos || hash == 0 || hash + 1 == arg.size())
    usage_error("expected FILE#MODEL, got '" + arg + "'", cmd);
  return {arg.substr(0, hash), arg.substr(hash + 1)};
}

void check_duration(const std::string& text, const std::string& cmd)
{
  if (text.empty())
    return;
  int64_t us = 0;
  if (mfgsim_parse_duration(text.c_str(), &us) != MFGSIM_OK || us <= 0)
    usage_error(std::string("bad duration: ") + mfgsim_last_error(), cmd);
}

/// Inserts `.seed<N>` before the extension: `r.csv` -> `r.seed7.csv`.
std::string per_seed_path(const std::string& path, uint64_t seed)
{
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const std::string tag = ".seed" + std::to_string(seed);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash) || dot == 0
    || dot == slash + 1)
  {
    return path + tag;
  }
  return path.substr(0, dot) + tag + path.substr(dot);
}

//==============================================================================
struct Args
{
  std::string file;
  std::string second;
  std::string model;
  std::string ontology;
  std::string format = "text";
  std::string map;
  std::string expansion;
  std::string sort_set;
  std::string out;
  std::string mapping;
  std::string scenario;
  std::string mode;
  std::string horizon;
  std::string report;
  std::string trace;
  std::string seeds;
  std::string csv;
  std::string profile;
  std::optional<uint64_t> seed;
  int64_t fleet = 0;
  double threshold = 0.1;
  bool json = false;

  std::string root;
  std::string kind;
  std::string name;
  int64_t version = 0;
};

int cmd_check(const Args& a)
{
  auto ws = load(a.file);
  char* report = nullptr;
  const int status = mfgsim_check(ws.get(), opt(a.model), &report);
  CString owned(report);
  diag(owned.get());
  check_status(status);
  return ExitOk;
}

int cmd_verify(const Args& a)
{
  auto ws = load(a.file);
  char* report = nullptr;
  const int status = mfgsim_verify(ws.get(), opt(a.model), a.ontology.c_str(), a.json, &report);
  CString owned(report);
  diag(owned.get());
  check_status(status);
  return ExitOk;
}

int cmd_lattice(const Args& a)
{
  auto ws = load(a.file);
  if (a.model.empty())
    usage_error("lattice needs --model", "lattice");
  char* out = nullptr;
  const int status = mfgsim_lattice(ws.get(), a.model.c_str(), a.format.c_str(), &out);
  CString owned(out);
  check_status(status);
  emit("", owned.get());
  return ExitOk;
}

int cmd_transform(const Args& a, const std::string& command)
{
  auto ws = load(a.file);
  mfgsim_workspace* raw = nullptr;
  char* notes = nullptr;
  int status = MFGSIM_OK;
  if (command == "abstract")
    status = mfgsim_abstract(ws.get(), a.map.c_str(), opt(a.model), &raw, &notes);
  else if (command == "refine")
    status = mfgsim_refine(ws.get(), a.map.c_str(), opt(a.expansion), opt(a.model), &raw, &notes);
  else
    status = mfgsim_view(ws.get(), a.sort_set.c_str(), opt(a.model), &raw);
  WorkspacePtr result(raw);
  CString owned(notes);
  diag(owned.get());
  check_status(status);
  emit_workspace(result.get(), a.out);
  return ExitOk;
}

int cmd_coordinate(const Args& a)
{
  const auto [abs_file, abs_model] = split_target(a.file, "coordinate");
  const auto [det_file, det_model] = split_target(a.second, "coordinate");
  auto abs_ws = load(abs_file);
  auto det_ws = abs_file == det_file ? WorkspacePtr() : load(det_file);
  const mfgsim_workspace* det = det_ws ? det_ws.get() : abs_ws.get();
  char* report = nullptr;
  const int status = mfgsim_coordinate(abs_ws.get(), abs_model.c_str(), det, det_model.c_str(),
    a.mapping.c_str(), &report);
  CString owned(report);
  diag(owned.get());
  check_status(status);
  return ExitOk;
}

mfgsim_run_options run_options(const Args& a)
{
  mfgsim_run_options o;
  mfgsim_run_options_init(&o);
  o.mode = opt(a.mode);
  o.horizon = opt(a.horizon);
  o.fleet = a.fleet;
  o.profile = opt(a.profile);
  if (a.seed)
  {
    o.use_seed = 1;
    o.seed = *a.seed;
  }
  return o;
}

int cmd_estimate(const Args& a)
{
  check_duration(a.horizon, "estimate");
  auto ws = load(a.file);
  const auto o = run_options(a);
  char* text = nullptr;
  const int status = mfgsim_estimate(ws.get(), a.scenario.c_str(), &o, &text);
  CString owned(text);
  check_status(status);
  emit("", owned.get());
  return ExitOk;
}

/// One simulation; returns the C API status and leaves outputs in place.
int simulate_one(const mfgsim_workspace* ws, const Args& a, mfgsim_run_options o,
  const std::string& report_path, const std::string& trace_path, std::string& error)
{
  o.trace = trace_path.empty() ? 0 : 1;
  char* csv = nullptr;
  char* trace = nullptr;
  const int status = mfgsim_simulate(ws, a.scenario.c_str(), &o, &csv, o.trace ? &trace : nullptr);
  CString owned_csv(csv);
  CString owned_trace(trace);
  if (status != MFGSIM_OK)
  {
    error = std::string(mfgsim_status_name(status)) + ": " + mfgsim_last_error();
    return status;
  }
  emit(report_path, owned_csv.get());
  if (!trace_path.empty())
    write_file(trace_path, owned_trace ? owned_trace.get() : "");
  return MFGSIM_OK;
}

int cmd_simulate(const Args& a)
{
  check_duration(a.horizon, "simulate");
  if (!a.seeds.empty() && a.seed)
    usage_error("--seed and --seeds are exclusive", "simulate");

  auto ws = load(a.file);
  if (a.seeds.empty())
  {
    std::string error;
    const int status = simulate_one(ws.get(), a, run_options(a), a.report, a.trace, error);
    if (status != MFGSIM_OK)
    {
      diag("mfgsim: " + error);
      throw Quit{exit_for(status)};
    }
    return ExitOk;
  }

  const auto dots = a.seeds.find("..");
  uint64_t first = 0;
  uint64_t last = 0;
  try
  {
    if (dots == std::string::npos)
      throw std::invalid_argument("no range");
    std::size_t used = 0;
    first = std::stoull(a.seeds.substr(0, dots), &used);
    if (used != dots)
      throw std::invalid_argument("trailing");
    const std::string tail = a.seeds.substr(dots + 2);
    last = std::stoull(tail, &used);
    if (used != tail.size())
      throw std::invalid_argument("trailing");
  }
  catch (const std::exception&)
  {
    usage_error("--seeds expects A..B, got '" + a.seeds + "'", "simulate");
  }
  if (last < first)
    usage_error("--seeds range is empty", "simulate");
  if (a.report.empty() || a.report == "-")
    usage_error("--seeds needs --report FILE for per-seed outputs", "simulate");

  std::vector<uint64_t> seeds;
  for (uint64_t s = first; ; ++s)
  {
    seeds.push_back(s);
    if (s == last)
      break;
  }

  std::vector<int> statuses(seeds.size(), MFGSIM_OK);
  std::vector<std::string> errors(seeds.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(
    std::thread::hardware_concurrency(), static_cast<unsigned>(seeds.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
  {
    pool.emplace_back([&]
      {
        for (std::size_t i = next++; i < seeds.size(); i = next++)
        {
          auto o = run_options(a);
          o.use_seed = 1;
          o.seed = seeds[i];
          const std::string trace = a.trace.empty() ? "" : per_seed_path(a.trace, seeds[i]);
          try
          {
            statuses[i] = simulate_one(ws.get(), a, o, per_seed_path(a.report, seeds[i]), trace,
              errors[i]);
          }
          catch (const Quit& q)
          {
            statuses[i] = q.code == ExitOk ? MFGSIM_OK : MFGSIM_DIAGNOSTICS;
          }
        }
      });
  }
  for (auto& t : pool)
    t.join();

  int worst = ExitOk;
  for (std::size_t i = 0; i < seeds.size(); ++i)
  {
    if (statuses[i] == MFGSIM_OK)
      continue;
    if (!errors[i].empty())
      diag("mfgsim: seed " + std::to_string(seeds[i]) + ": " + errors[i]);
    worst = std::max(worst, exit_for(statuses[i]));
  }
  return worst;
}

int cmd_compare(const Args& a)
{
  check_duration(a.horizon, "compare");
  auto ws = load(a.file);
  const auto o = run_options(a);
  char* text = nullptr;
  char* csv = nullptr;
  const int status = mfgsim_compare(ws.get(), a.scenario.c_str(), &o, a.threshold, &text, &csv);
  CString owned_text(text);
  CString owned_csv(csv);
  if (status == MFGSIM_OK || status == MFGSIM_DIAGNOSTICS)
  {
    emit("", owned_text.get());
    if (!a.csv.empty())
      write_file(a.csv, owned_csv ? owned_csv.get() : "");
  }
  if (status == MFGSIM_DIAGNOSTICS)
    diag("mfgsim: " + std::string(mfgsim_last_error()));
  check_status(status);
  return ExitOk;
}

std::string library_root(const Args& a, const std::string& cmd)
{
  if (!a.root.empty())
    return a.root;
  if (const char* env = std::getenv("MFGSIM_LIB_ROOT"); env && *env)
    return env;
  usage_error("no library root: pass --root or set MFGSIM_LIB_ROOT", cmd);
  return {};
}

int cmd_lib_add(const Args& a)
{
  const std::string root = library_root(a, "lib add");
  const std::string payload = read_file(a.file);
  int64_t version = 0;
  char* hash = nullptr;
  const int status = mfgsim_lib_store(root.c_str(), a.kind.c_str(), a.name.c_str(),
    payload.data(), payload.size(), &version, &hash);
  CString owned(hash);
  check_status(status);
  std::cout << a.kind << " " << a.name << " v" << version << " " << owned.get() << "\n";
  return ExitOk;
}

int cmd_lib_get(const Args& a)
{
  const std::string root = library_root(a, "lib get");
  char* payload = nullptr;
  size_t size = 0;
  int64_t loaded = 0;
  const int status = mfgsim_lib_load(root.c_str(), a.kind.c_str(), a.name.c_str(), a.version,
    &payload, &size, &loaded);
  CString owned(payload);
  check_status(status);
  const std::string data(owned.get(), size);
  if (a.out.empty() || a.out == "-")
    std::cout << data;
  else
    write_file(a.out, data);
  return ExitOk;
}

int cmd_lib_list(const Args& a)
{
  const std::string root = library_root(a, "lib list");
  char* json = nullptr;
  const int status = mfgsim_lib_list(root.c_str(), opt(a.kind), &json);
  CString owned(json);
  check_status(status);
  emit("", owned.get());
  return ExitOk;
}

} // anonymous namespace

//==============================================================================
int main(int argc, char** argv)
{
  Args a;
  CLI::App app{"Information-model driven manufacturing simulation", "mfgsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mfgsim_version()));

  const auto file_arg = [&](CLI::App* sub)
  {
    sub->add_option("FILE", a.file, "Workspace file (.mim)")->required();
  };
  const auto model_opt = [&](CLI::App* sub)
  {
    sub->add_option("--model", a.model, "Restrict to one model");
  };

  auto* check = app.add_subcommand("check", "Parse and check well-formedness");
  file_arg(check);
  model_opt(check);

  auto* verify = app.add_subcommand("verify", "Verify models against an ontology");
  file_arg(verify);
  model_opt(verify);
  verify->add_option("--ontology", a.ontology, "Ontology name")->required();
  verify->add_flag("--json", a.json, "Report violations as JSON");

  auto* lattice = app.add_subcommand("lattice", "Print the conceptual lattice of a model");
  file_arg(lattice);
  model_opt(lattice);
  lattice->add_option("--out", a.format, "Output format")
    ->check(CLI::IsMember({"dot", "text"}));

  auto* abstract = app.add_subcommand("abstract", "Apply an abstracting sort map");
  file_arg(abstract);
  model_opt(abstract);
  abstract->add_option("--map", a.map, "Sort map name")->required();
  abstract->add_option("--out", a.out, "Output workspace file")->required();

  auto* refine = app.add_subcommand("refine", "Apply a refining sort map and expansion");
  file_arg(refine);
  model_opt(refine);
  refine->add_option("--map", a.map, "Sort map name")->required();
  refine->add_option("--expansion", a.expansion, "Expansion name");
  refine->add_option("--out", a.out, "Output workspace file")->required();

  auto* view = app.add_subcommand("view", "Project models onto a sort set");
  file_arg(view);
  model_opt(view);
  view->add_option("--sortset", a.sort_set, "View sort set")->required();
  view->add_option("--out", a.out, "Output workspace file")->required();

  auto* coordinate = app.add_subcommand("coordinate", "Check an abstract/detailed mode mapping");
  coordinate->add_option("ABSTRACT", a.file, "FILE#MODEL of the abstract mode")->required();
  coordinate->add_option("DETAILED", a.second, "FILE#MODEL of the detailed mode")->required();
  coordinate->add_option("--mapping", a.mapping, "Mode mapping name")->required();

  const auto run_opts = [&](CLI::App* sub)
  {
    sub->add_option("--scenario", a.scenario, "Scenario name")->required();
    sub->add_option("--horizon", a.horizon, "Horizon, e.g. 8h");
    sub->add_option("--fleet", a.fleet, "AGV fleet override")->check(CLI::PositiveNumber);
    sub->add_option("--profile", a.profile, "Ontology used to verify before instantiation");
  };

  auto* estimate = app.add_subcommand("estimate", "Abstract transfer capacity estimate");
  file_arg(estimate);
  run_opts(estimate);

  auto* simulate = app.add_subcommand("simulate", "Run the discrete-event simulation");
  file_arg(simulate);
  run_opts(simulate);
  simulate->add_option("--mode", a.mode, "Transfer mode")
    ->check(CLI::IsMember({"abstract", "detailed"}));
  simulate->add_option("--seed", a.seed, "RNG seed");
  simulate->add_option("--seeds", a.seeds, "Seed range A..B, run concurrently");
  simulate->add_option("--report", a.report, "CSV report path (default stdout)");
  simulate->add_option("--trace", a.trace, "JSON-lines trace path");

  auto* compare = app.add_subcommand("compare", "Compare the estimate with a detailed run");
  file_arg(compare);
  run_opts(compare);
  compare->add_option("--seed", a.seed, "RNG seed");
  compare->add_option("--threshold", a.threshold, "Relative gap that gets flagged")
    ->check(CLI::NonNegativeNumber);
  compare->add_option("--csv", a.csv, "Also write the comparison as CSV");

  auto* lib = app.add_subcommand("lib", "Versioned model library");
  lib->require_subcommand(1);
  const auto lib_common = [&](CLI::App* sub, bool needs_kind)
  {
    sub->add_option("--root", a.root, "Library root (default $MFGSIM_LIB_ROOT)");
    auto* k = sub->add_option("--kind", a.kind, "primitive-set|conceptualization|model|result");
    if (needs_kind)
      k->required();
  };
  auto* lib_add = lib->add_subcommand("add", "Store a new version");
  lib_common(lib_add, true);
  lib_add->add_option("--name", a.name, "Item name")->required();
  lib_add->add_option("FILE", a.file, "Payload file")->required();
  auto* lib_get = lib->add_subcommand("get", "Load a version");
  lib_common(lib_get, true);
  lib_get->add_option("--name", a.name, "Item name")->required();
  lib_get->add_option("--version", a.version, "Version (default latest)")
    ->check(CLI::PositiveNumber);
  lib_get->add_option("--out", a.out, "Output path (default stdout)");
  auto* lib_list = lib->add_subcommand("list", "List catalog entries");
  lib_common(lib_list, false);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::Success& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    std::string where = "mfgsim";
    for (const auto* sub = &app; ; )
    {
      const auto subs = sub->get_subcommands();
      if (subs.empty())
        break;
      sub = subs.front();
      where += " " + sub->get_name();
    }
    std::cerr << "mfgsim: " << e.what() << " (see '" << where << " --help')\n";
    return ExitUsage;
  }

  try
  {
    if (*check) return cmd_check(a);
    if (*verify) return cmd_verify(a);
    if (*lattice) return cmd_lattice(a);
    if (*abstract) return cmd_transform(a, "abstract");
    if (*refine) return cmd_transform(a, "refine");
    if (*view) return cmd_transform(a, "view");
    if (*coordinate) return cmd_coordinate(a);
    if (*estimate) return cmd_estimate(a);
    if (*simulate) return cmd_simulate(a);
    if (*compare) return cmd_compare(a);
    if (*lib_add) return cmd_lib_add(a);
    if (*lib_get) return cmd_lib_get(a);
    if (*lib_list) return cmd_lib_list(a);
  }
  catch (const Quit& q)
  {
    return q.code;
  }
  catch (const std::exception& e)
  {
    std::cerr << "mfgsim: internal error: " << e.what() << "\n";
    return ExitInternal;
  }
  return ExitUsage;
}
