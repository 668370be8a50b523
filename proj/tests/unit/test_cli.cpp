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

// Runs the installed command-line binary and checks exit codes and outputs.

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const std::string cli = MFGSIM_CLI;
const std::string models = std::string(MFGSIM_SOURCE_DIR) + "/models";

struct Outcome
{
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir = fs::temp_directory_path() / ("mfgsim-cli-" + std::to_string(::getpid()) + "-"
      + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }

  void TearDown() override { fs::remove_all(dir); }

  Outcome run(const std::string& args) const
  {
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = "cd '" + models + "' && '" + cli + "' " + args + " 2>'" + err.string() + "'";
    Outcome r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p)
      return r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0)
      r.out.append(buf, n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
  }

  fs::path write(const std::string& name, const std::string& text) const
  {
    std::ofstream(dir / name) << text;
    return dir / name;
  }

  fs::path dir;
};

} // namespace

TEST_F(Cli, CheckAndVerifyThePilot)
{
  auto r = run("check pilot.mim");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty()) << r.err;
  r = run("verify pilot.mim --ontology mfg_profile --json");
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(Cli, ParseErrorsAreDiagnostics)
{
  const auto bad = write("bad.mim", "sortset a {\n  sort X <;\n}\n");
  const auto r = run("check '" + bad.string() + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.mim:2:"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST_F(Cli, ViolationsExitWithOne)
{
  const auto ws = write("v.mim", "sortset s { sort Line; sort Duration; }\n"
    "ontology o in s { commitment c on Line { require t : Duration; } }\n"
    "model m in s { entity L : Line {} }\n");
  const auto r = run("verify '" + ws.string() + "' --ontology o");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE((r.out + r.err).find("c: L: t: missing"), std::string::npos) << r.out << r.err;
}

TEST_F(Cli, UsageErrorsExitWithTwo)
{
  for (const std::string args : {std::string(""), std::string("frobnicate"),
         std::string("check"), std::string("simulate pilot.mim --scenario base --horizon 1.5h"),
         std::string("simulate pilot.mim --scenario base --mode sideways"),
         std::string("lattice pilot.mim --model plant --out svg")})
  {
    const auto r = run(args);
    EXPECT_EQ(r.code, 2) << args << "\n" << r.err;
    EXPECT_FALSE(r.err.empty()) << args;
  }
}

TEST_F(Cli, UnknownNamesAreDiagnostics)
{
  const auto r = run("simulate pilot.mim --scenario nowhere");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("NotFound"), std::string::npos) << r.err;
}

TEST_F(Cli, SimulateWritesReportAndTrace)
{
  const auto trace = dir / "t.jsonl";
  const auto r = run("simulate pilot.mim --scenario base --horizon 1h --seed 3 --trace '"
    + trace.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("metric,entity,value,unit", 0), 0u);
  EXPECT_FALSE(slurp(trace).empty());
}

TEST_F(Cli, SeedRangeWritesOneFilePerSeed)
{
  const auto report = dir / "run.csv";
  const auto r = run("simulate pilot.mim --scenario varied --horizon 30m --seeds 1..3 --report '"
    + report.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  for (int s = 1; s <= 3; ++s)
    EXPECT_TRUE(fs::exists(dir / ("run.seed" + std::to_string(s) + ".csv"))) << s;
  EXPECT_NE(slurp(dir / "run.seed1.csv"), slurp(dir / "run.seed2.csv"));

  const auto again = run("simulate pilot.mim --scenario varied --horizon 30m --seeds 1..1 --report '"
    + (dir / "again.csv").string() + "'");
  ASSERT_EQ(again.code, 0);
  EXPECT_EQ(slurp(dir / "again.seed1.csv"), slurp(dir / "run.seed1.csv"));

  EXPECT_EQ(run("simulate pilot.mim --scenario base --seeds 1..3").code, 2);
  EXPECT_EQ(run("simulate pilot.mim --scenario base --seeds 3..1 --report x.csv").code, 2);
}

TEST_F(Cli, EstimateAndCompare)
{
  auto r = run("estimate pilot.mim --scenario base");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("required_agvs"), std::string::npos);
  r = run("compare pilot.mim --scenario base");
  EXPECT_EQ(r.code, 0) << r.err;
  r = run("compare pilot.mim --scenario base --threshold 0");
  EXPECT_EQ(r.code, 1);
}

TEST_F(Cli, TransformsWriteWorkspaces)
{
  const auto up = dir / "up.mim";
  auto r = run("abstract pilot.mim --map coarsen --model plant --out '" + up.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run("check '" + up.string() + "'").code, 0);
  r = run("coordinate 'pilot.mim#transfer_abstract' 'pilot.mim#transfer_detailed' --mapping transfer_modes");
  EXPECT_EQ(r.code, 0) << r.err;
  r = run("lattice pilot.mim --model plant --out dot");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("digraph"), std::string::npos);
}

TEST_F(Cli, LibraryRoundTrip)
{
  const auto payload = write("p.mim", "sortset a { sort X; }\n");
  const std::string root = "--root '" + (dir / "lib").string() + "'";
  auto r = run("lib add '" + payload.string() + "' --kind model --name a " + root);
  ASSERT_EQ(r.code, 0) << r.err;
  r = run("lib add '" + payload.string() + "' --kind model --name a " + root);
  ASSERT_EQ(r.code, 0) << r.err;
  r = run("lib list " + root);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"version\": 1"), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find("\"version\": 2"), std::string::npos) << r.out;
  r = run("lib get --kind model --name a " + root);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(payload));
  EXPECT_EQ(run("lib get --kind model --name zz " + root).code, 1);
  EXPECT_EQ(run("lib add '" + payload.string() + "' --kind blob --name a " + root).code, 2);
}
