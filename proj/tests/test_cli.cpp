#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#ifndef DNPLAB_PATH
#error "DNPLAB_PATH must point at the dnplab executable"
#endif

namespace {

namespace fs = std::filesystem;

class Cli : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dnplab_cli_" + std::string(testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd =
        env + " " + DNPLAB_PATH + " " + args + " > " + (dir_ / "stdout.txt").string() + " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  [[nodiscard]] std::string read(const fs::path& p) const {
    std::ifstream in(dir_ / p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  [[nodiscard]] nlohmann::json verdict(const std::string& out) const {
    return nlohmann::json::parse(read(fs::path(out) / "verdict.json"));
  }

  [[nodiscard]] std::string out(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, CheckOperatorPasses) {
  ASSERT_EQ(run("check-operator p_laplacian p=3 n=2 -o " + out("op")), 0) << read("stderr.txt");
  const auto v = verdict("op");
  EXPECT_TRUE(v["pass"].get<bool>());
  EXPECT_EQ(v["exit_code"], 0);
  EXPECT_EQ(v["result"]["k"], 2.0);
  EXPECT_NEAR(v["result"]["lambda1"].get<double>(), 1.5, 1e-3);
  EXPECT_TRUE(fs::exists(dir_ / "op" / "coercivity.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "op" / "scenario.yaml"));
}

TEST_F(Cli, ConfigErrorsExitOne) {
  EXPECT_EQ(run("check-operator p_laplacian p=1.5 -o " + out("bad")), 1);
  EXPECT_NE(read("stderr.txt").find("p >= 2"), std::string::npos);
  EXPECT_EQ(run("simulate foo=1 -o " + out("bad2")), 1);
  EXPECT_NE(read("stderr.txt").find("'simulate.foo'"), std::string::npos);
  EXPECT_EQ(run("run " + out("missing.yaml")), 1);
  EXPECT_EQ(run("--no-such-flag"), 1);
}

TEST_F(Cli, FailedCheckExitsThree) {
  ASSERT_EQ(run("experiment hopf-check threshold=100 -o " + out("hopf")), 3);
  const auto v = verdict("hopf");
  EXPECT_FALSE(v["pass"].get<bool>());
  EXPECT_EQ(v["exit_code"], 3);
}

TEST_F(Cli, ZeroDurationSimulate) {
  ASSERT_EQ(run("simulate T_end=0 -o " + out("zero")), 0) << read("stderr.txt");
  const std::string series = read("zero/series.csv");
  std::istringstream in(series);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header.rfind("t,sup_u,inf_u,interior_min", 0), 0u);
  EXPECT_EQ(row.rfind("0,", 0), 0u) << row;
  EXPECT_FALSE(std::getline(in, extra) && !extra.empty());
}

TEST_F(Cli, OutputIndependentOfThreadCount) {
  const std::string args = "simulate family=pucci_max lo=1 hi=2 shape=box lower=[0,0] upper=[1,1] h=0.0625 T_end=0.05 ";
  ASSERT_EQ(run(args + "-o " + out("t1"), "DNP_THREADS=1"), 0) << read("stderr.txt");
  ASSERT_EQ(run(args + "-o " + out("t4"), "DNP_THREADS=4"), 0) << read("stderr.txt");
  for (const char* f : {"series.csv", "fields/u.csv", "fields/u.bin"}) {
    const auto a = read(fs::path("t1") / f), b = read(fs::path("t4") / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, b) << f;
  }
}

TEST_F(Cli, RunFileMatchesPrintedConfig) {
  {
    std::ofstream f(dir_ / "s.yaml");
    f << "kind: elliptic\ndomain: {h: pi/32}\n";
  }
  ASSERT_EQ(run("run " + out("s.yaml") + " --print-config"), 0);
  const std::string printed = read("stdout.txt");
  {
    std::ofstream f(dir_ / "s2.yaml");
    f << printed;
  }
  ASSERT_EQ(run("run " + out("s2.yaml") + " --print-config"), 0);
  EXPECT_EQ(read("stdout.txt"), printed);
  ASSERT_EQ(run("run " + out("s2.yaml") + " -o " + out("ell")), 0) << read("stderr.txt");
  EXPECT_TRUE(verdict("ell")["pass"].get<bool>());
  EXPECT_TRUE(fs::exists(dir_ / "ell" / "fields" / "psi.csv"));
}

}  // namespace
