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

// Exercises the shared library through its C header only.

#include <mfgsim/mfgsim.h>

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const std::string pilot = std::string(MFGSIM_SOURCE_DIR) + "/models/pilot.mim";

/// Owns a string returned by the library.
struct Text
{
  char* p = nullptr;
  ~Text() { mfgsim_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct Ws
{
  mfgsim_workspace* p = nullptr;
  ~Ws() { mfgsim_workspace_free(p); }
};

class CApi : public ::testing::Test
{
protected:
  void SetUp() override
  {
    Text diags;
    ASSERT_EQ(mfgsim_workspace_load(pilot.c_str(), &ws.p, &diags.p), MFGSIM_OK) << diags.str();
    ASSERT_NE(ws.p, nullptr);
  }

  Ws ws;
};

} // namespace

TEST(CApiBasics, VersionStatusAndDurations)
{
  EXPECT_STREQ(mfgsim_version(), "1.0.0");
  EXPECT_STREQ(mfgsim_status_name(MFGSIM_OK), "Ok");
  EXPECT_STREQ(mfgsim_status_name(MFGSIM_HASH_MISMATCH), "HashMismatch");
  int64_t us = 0;
  EXPECT_EQ(mfgsim_parse_duration("8h", &us), MFGSIM_OK);
  EXPECT_EQ(us, 28'800'000'000);
  EXPECT_EQ(mfgsim_parse_duration("8 h", &us), MFGSIM_INVALID_ARGUMENT);
  EXPECT_NE(std::strlen(mfgsim_last_error()), 0u);
  EXPECT_EQ(mfgsim_parse_duration(nullptr, &us), MFGSIM_INVALID_ARGUMENT);
  mfgsim_string_free(nullptr);
}

TEST(CApiBasics, ParseFailureReturnsDiagnostics)
{
  Ws ws;
  Text diags;
  EXPECT_EQ(mfgsim_workspace_parse("sortset a { sort ; }", "bad.mim", nullptr, &ws.p, &diags.p),
    MFGSIM_PARSE_FAILED);
  EXPECT_EQ(ws.p, nullptr);
  EXPECT_EQ(diags.str().rfind("bad.mim:1:", 0), 0u) << diags.str();

  EXPECT_EQ(mfgsim_workspace_load("/nonexistent/x.mim", &ws.p, nullptr), MFGSIM_PARSE_FAILED);
}

TEST_F(CApi, PrintParsesBackIdentically)
{
  Text text;
  ASSERT_EQ(mfgsim_workspace_print(ws.p, &text.p), MFGSIM_OK);
  Ws again;
  ASSERT_EQ(mfgsim_workspace_parse(text.p, "printed.mim", nullptr, &again.p, nullptr), MFGSIM_OK);
  Text text2;
  ASSERT_EQ(mfgsim_workspace_print(again.p, &text2.p), MFGSIM_OK);
  EXPECT_EQ(text.str(), text2.str());
}

TEST_F(CApi, CheckVerifyLattice)
{
  Text report;
  EXPECT_EQ(mfgsim_check(ws.p, nullptr, &report.p), MFGSIM_OK) << report.str();
  Text verify;
  EXPECT_EQ(mfgsim_verify(ws.p, nullptr, "mfg_profile", 1, &verify.p), MFGSIM_OK);
  EXPECT_TRUE(nlohmann::json::parse(verify.str()).is_object() || nlohmann::json::parse(verify.str()).is_array());
  Text lattice;
  EXPECT_EQ(mfgsim_lattice(ws.p, "plant", "dot", &lattice.p), MFGSIM_OK);
  EXPECT_NE(lattice.str().find("digraph"), std::string::npos);
  Text bad;
  EXPECT_EQ(mfgsim_lattice(ws.p, "plant", "svg", &bad.p), MFGSIM_INVALID_ARGUMENT);
  EXPECT_EQ(mfgsim_lattice(ws.p, "ghost", "text", &bad.p), MFGSIM_NOT_FOUND);
  EXPECT_EQ(mfgsim_check(nullptr, nullptr, &bad.p), MFGSIM_INVALID_ARGUMENT);
}

TEST_F(CApi, VerifyReportsViolations)
{
  Ws broken;
  Text printed;
  ASSERT_EQ(mfgsim_workspace_print(ws.p, &printed.p), MFGSIM_OK);
  std::string text = printed.str();
  const auto at = text.find("attr cycle_time : CycleTime = 40 s;");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, std::strlen("attr cycle_time : CycleTime = 40 s;"), "attr cycle_time : CycleTime = -40 s;");
  ASSERT_EQ(mfgsim_workspace_parse(text.c_str(), "b.mim", nullptr, &broken.p, nullptr), MFGSIM_OK);
  Text report;
  EXPECT_EQ(mfgsim_verify(broken.p, "plant", "mfg_profile", 0, &report.p), MFGSIM_DIAGNOSTICS);
  EXPECT_NE(report.str().find("machining: ML1: rule:positive_cycle"), std::string::npos) << report.str();
}

TEST_F(CApi, TransformsReturnNewWorkspaces)
{
  Ws up;
  Text notes;
  ASSERT_EQ(mfgsim_abstract(ws.p, "coarsen", "plant", &up.p, &notes.p), MFGSIM_OK);
  Text checked;
  EXPECT_EQ(mfgsim_check(up.p, "plant", &checked.p), MFGSIM_OK) << checked.str();

  Ws down;
  EXPECT_EQ(mfgsim_refine(ws.p, "specialize", "split_store", "plant", &down.p, &notes.p), MFGSIM_OK);
  Ws view;
  EXPECT_EQ(mfgsim_view(ws.p, "cost", "plant", &view.p), MFGSIM_OK);
  Ws none;
  EXPECT_EQ(mfgsim_abstract(ws.p, "specialize", "plant", &none.p, &notes.p), MFGSIM_NOT_ABSTRACTING);
  EXPECT_EQ(none.p, nullptr);
}

TEST_F(CApi, CoordinateUsesTheMapping)
{
  Text report;
  EXPECT_EQ(mfgsim_coordinate(ws.p, "transfer_abstract", ws.p, "transfer_detailed", "transfer_modes",
    &report.p), MFGSIM_OK) << report.str();
  EXPECT_EQ(mfgsim_coordinate(ws.p, "transfer_abstract", ws.p, "transfer_detailed", "nope",
    &report.p), MFGSIM_NOT_FOUND);
}

TEST_F(CApi, SimulationEntryPoints)
{
  mfgsim_run_options o;
  mfgsim_run_options_init(&o);
  o.horizon = "1h";
  o.trace = 1;
  o.use_seed = 1;
  o.seed = 7;
  Text csv, trace;
  ASSERT_EQ(mfgsim_simulate(ws.p, "base", &o, &csv.p, &trace.p), MFGSIM_OK) << mfgsim_last_error();
  EXPECT_EQ(csv.str().rfind("metric,entity,value,unit", 0), 0u);
  EXPECT_FALSE(trace.str().empty());

  Text csv2, trace2;
  ASSERT_EQ(mfgsim_simulate(ws.p, "base", &o, &csv2.p, &trace2.p), MFGSIM_OK);
  EXPECT_EQ(trace.str(), trace2.str());

  Text est;
  EXPECT_EQ(mfgsim_estimate(ws.p, "base", nullptr, &est.p), MFGSIM_OK);
  EXPECT_NE(est.str().find("required_agvs"), std::string::npos) << est.str();

  Text cmp, cmp_csv;
  EXPECT_EQ(mfgsim_compare(ws.p, "base", nullptr, 0.1, &cmp.p, &cmp_csv.p), MFGSIM_OK) << cmp.str();
  EXPECT_EQ(mfgsim_compare(ws.p, "base", nullptr, 0.0, &cmp.p, &cmp_csv.p), MFGSIM_DIAGNOSTICS);

  o.fleet = 99;
  EXPECT_EQ(mfgsim_simulate(ws.p, "base", &o, &csv.p, nullptr), MFGSIM_INVALID_SCENARIO);
  o.fleet = 0;
  o.horizon = "soon";
  EXPECT_EQ(mfgsim_simulate(ws.p, "base", &o, &csv.p, nullptr), MFGSIM_INVALID_ARGUMENT);
  o.horizon = nullptr;
  o.mode = "psychic";
  EXPECT_EQ(mfgsim_simulate(ws.p, "base", &o, &csv.p, nullptr), MFGSIM_INVALID_ARGUMENT);
  EXPECT_EQ(mfgsim_simulate(ws.p, "ghost", nullptr, &csv.p, nullptr), MFGSIM_NOT_FOUND);
}

TEST(CApiLibrary, StoreLoadList)
{
  const fs::path root = fs::temp_directory_path() / ("mfgsim-capi-" + std::to_string(::getpid()));
  fs::remove_all(root);
  const char payload[] = {'a', '\0', 'b'};
  int64_t version = 0;
  Text hash;
  ASSERT_EQ(mfgsim_lib_store(root.c_str(), "model", "plant", payload, 3, &version, &hash.p), MFGSIM_OK);
  EXPECT_EQ(version, 1);
  EXPECT_EQ(hash.str().size(), 64u);

  char* out = nullptr;
  size_t size = 0;
  int64_t loaded = 0;
  ASSERT_EQ(mfgsim_lib_load(root.c_str(), "model", "plant", 0, &out, &size, &loaded), MFGSIM_OK);
  EXPECT_EQ(std::string(out, size), std::string(payload, 3));
  EXPECT_EQ(loaded, 1);
  mfgsim_string_free(out);

  Text list;
  ASSERT_EQ(mfgsim_lib_list(root.c_str(), nullptr, &list.p), MFGSIM_OK);
  const auto j = nlohmann::json::parse(list.str());
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["kind"], "model");
  EXPECT_EQ(j[0]["version"], 1);

  EXPECT_EQ(mfgsim_lib_store(root.c_str(), "blob", "x", "a", 1, &version, nullptr),
    MFGSIM_INVALID_ARGUMENT);
  EXPECT_EQ(mfgsim_lib_load(root.c_str(), "model", "plant", 5, &out, &size, &loaded), MFGSIM_NOT_FOUND);
  fs::remove_all(root);
}
