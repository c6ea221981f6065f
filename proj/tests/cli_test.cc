// Copyright 2026 The clocksim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.h"
#include "clocksim/harness.h"
#include "clocksim/io.h"

using namespace clocksim;

namespace {

std::string corpus(const std::string &name) {
    return std::string(CLOCKSIM_CORPUS_DIR) + "/" + name;
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string> &args) {
    std::ostringstream out, err;
    int code = cli_dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ValidateCorpusMachine) {
    CliResult r = run({"validate", corpus("flip.rtm")});
    EXPECT_EQ(r.code, EXIT_OK) << r.err;
    EXPECT_NE(r.out.find("\"violations\": []"), std::string::npos);
}

TEST(Cli, ValidateReportsFailures) {
    CliResult r = run({"validate", std::string(CLOCKSIM_TEST_DATA_DIR) + "/collision.rtm"});
    EXPECT_EQ(r.code, EXIT_VALIDATION);
    EXPECT_NE(r.err.find("reversibility"), std::string::npos);
    r = run({"validate", std::string(CLOCKSIM_TEST_DATA_DIR) + "/bad_kind.rtm"});
    EXPECT_EQ(r.code, EXIT_VALIDATION);
    EXPECT_NE(r.err.find("[parse]"), std::string::npos);
    EXPECT_NE(r.err.find(":3:18:"), std::string::npos);
    r = run({"validate", "/nonexistent/machine.rtm"});
    EXPECT_EQ(r.code, EXIT_IO);
}

TEST(Cli, SpectrumFour) {
    CliResult r = run({"spectrum", "--d", "4"});
    EXPECT_EQ(r.code, EXIT_OK);
    EXPECT_EQ(r.out, "j,eigenvalue,multiplicity,probability\n0,1,1,0.25\n1,0,2,0.5\n2,-1,1,0.25\n");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({"frobnicate"}).code, EXIT_USAGE);
    EXPECT_EQ(run({}).code, EXIT_USAGE);
    EXPECT_EQ(run({"spectrum"}).code, EXIT_USAGE);
    EXPECT_EQ(run({"spectrum", "--d", "zero"}).code, EXIT_USAGE);
    EXPECT_EQ(run({"--help"}).code, EXIT_OK);
}

TEST(Cli, CompileAndOrbit) {
    CliResult c = run({"compile", corpus("flip.rtm")});
    EXPECT_EQ(c.code, EXIT_OK);
    EXPECT_NE(c.out.find("clocksim-circuit/1"), std::string::npos);
    CliResult o = run({"orbit", corpus("flip.rtm"), "--input", "00"});
    EXPECT_EQ(o.code, EXIT_OK) << o.err;
    EXPECT_NE(o.out.find("\"r_observed\": 508"), std::string::npos);
    EXPECT_NE(o.out.find("\"restored\": true"), std::string::npos);
    CliResult b = run({"orbit", corpus("flip.rtm"), "--input", "00", "--budget", "10"});
    EXPECT_EQ(b.code, EXIT_BUDGET);
    EXPECT_NE(b.err.find("[orbit]"), std::string::npos);
}

TEST(Cli, SampleThenDecide) {
    auto dir = std::filesystem::temp_directory_path() / "clocksim_cli_test";
    std::filesystem::create_directories(dir);
    std::string csv = (dir / "batch.csv").string();
    CliResult s = run({"sample", corpus("flip.rtm"), "--input", "00", "--samples", "400", "--seed", "5", "--out", csv});
    ASSERT_EQ(s.code, EXIT_OK) << s.err;
    CliResult d = run({"decide", "--batch", csv, "--r", "254", "--s", "14"});
    EXPECT_EQ(d.code, EXIT_OK) << d.err;
    EXPECT_NE(d.out.find("\"verdict\": 1"), std::string::npos);
    EXPECT_EQ(run({"decide", "--batch", (dir / "missing.csv").string(), "--r", "1", "--s", "1"}).code, EXIT_IO);
    std::filesystem::remove_all(dir);
}

TEST(Cli, PhaseEstimate) {
    CliResult r = run({"phase-estimate", "--m", "2", "--phase", "1/4"});
    EXPECT_EQ(r.code, EXIT_OK) << r.err;
    EXPECT_EQ(r.out, "j,probability\n0,0\n1,1\n2,0\n3,0\n");
    EXPECT_EQ(run({"phase-estimate", "--m", "20", "--phase", "0.1"}).code, EXIT_VALIDATION);
    EXPECT_EQ(run({"phase-estimate", "--m", "2", "--phase", "abc"}).code, EXIT_VALIDATION);
}

TEST(Cli, ExperimentIsByteIdentical) {
    auto dir = std::filesystem::temp_directory_path() / "clocksim_cli_experiment";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::string cfg = (dir / "cfg.json").string();
    write_text_file(cfg, "{\"spec_path\": \"" + corpus("xor_walker.rtm") + "\", \"input\": \"01\", \"batches\": 3}");
    CliResult a = run({"experiment", "--config", cfg, "--seed", "7", "--out", (dir / "a").string()});
    CliResult b = run({"experiment", "--config", cfg, "--seed", "7", "--out", (dir / "b").string()});
    ASSERT_EQ(a.code, EXIT_OK) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(read_text_file((dir / "a" / "report.json").string()), read_text_file((dir / "b" / "report.json").string()));
    EXPECT_EQ(read_text_file((dir / "a" / "samples.csv").string()), read_text_file((dir / "b" / "samples.csv").string()));
    EXPECT_EQ(run({"experiment", "--config", (dir / "nope.json").string()}).code, EXIT_IO);
    std::filesystem::remove_all(dir);
}
