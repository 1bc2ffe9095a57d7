// Copyright 2026 The procauction Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <cstdlib>
#include <string>

namespace {

int RunCli(const std::string& args) {
  const std::string cmd =
      std::string(PROCAUCTION_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, VerifySuitesExitZero) {
  EXPECT_EQ(RunCli("verify nas --trials 20"), 0);
  EXPECT_EQ(RunCli("verify ir --trials 20"), 0);
}

TEST(CliTest, FirstPriceFixtureFailsIc) {
  EXPECT_EQ(RunCli("verify ic --trials 20 --fixture first-price"), 1);
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(RunCli("verify no-such-suite"), 2);
  EXPECT_EQ(RunCli("lowerbound -L 10 --epsilon 0.1"), 2);
  EXPECT_EQ(RunCli("run /nonexistent/instance.json"), 2);
}

TEST(CliTest, LowerBoundRuns) { EXPECT_EQ(RunCli("lowerbound -L 10"), 0); }

}  // namespace
