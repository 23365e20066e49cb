#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
namespace cli = heatstring::cli;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("heatstring_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const std::string& text) {
    const fs::path p = dir_ / "run.cfg";
    std::ofstream(p) << text;
    return p.string();
  }

  int run(const std::string& command, const std::string& cfg_text,
          std::optional<std::uint64_t> seed = std::nullopt, const std::string& sub = "out") {
    cli::CommandOptions o;
    o.command = command;
    o.config_path = write_config(cfg_text);
    o.out_dir = (dir_ / sub).string();
    o.seed = seed;
    out_.str("");
    err_.str("");
    return cli::run_command(o, out_, err_);
  }

  std::string slurp(const std::string& rel) {
    std::ifstream in(dir_ / rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  nlohmann::json json(const std::string& rel) { return nlohmann::json::parse(slurp(rel)); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, KnownCommands) {
  for (const char* c :
       {"simulate", "eigen-report", "asymptotics-verify", "duhamel", "decay-fit", "thresholds"}) {
    EXPECT_TRUE(cli::is_known_command(c));
  }
  EXPECT_FALSE(cli::is_known_command("plot"));
  EXPECT_EQ(run("plot", "[model]\n"), cli::kExitUsage);
}

TEST_F(CliTest, ThresholdsUnitParameters) {
  ASSERT_EQ(run("thresholds", "[model]\nmu = 1\n[thresholds]\ntheta_inf = 1\n"), cli::kExitOk)
      << err_.str();
  const auto j = json("out/thresholds.json");
  EXPECT_DOUBLE_EQ(j["alpha2"].get<double>(), 0.25);
  EXPECT_EQ(j["N0_floor"].get<int>(), 2304);
  EXPECT_LE(j["alpha"].get<double>(), 0.25);
}

TEST_F(CliTest, SimulateEquilibriumHasZeroDeviations) {
  ASSERT_EQ(run("simulate",
                "[model]\nn_modes = 8\n[initial]\npreset = equilibrium\ntheta0 = 1.2\n"
                "[integrator]\nt_end = 0.5\ndt = 0.01\n"),
            cli::kExitOk)
      << err_.str();
  std::istringstream csv(slurp("out/trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t,energy,hs_u_x,hs_u_t,hs_theta_dev,theta0_dev,min_theta");
  int rows = 0;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 7u);
    EXPECT_EQ(v[2], 0.0);
    EXPECT_EQ(v[3], 0.0);
    EXPECT_EQ(v[4], 0.0);
    EXPECT_EQ(v[5], 0.0);
    ++rows;
  }
  EXPECT_EQ(rows, 51);
}

TEST_F(CliTest, SeedDeterminism) {
  const std::string cfg =
      "[model]\nn_modes = 12\n[initial]\npreset = random-smooth\n"
      "[integrator]\nt_end = 0.3\ndt = 0.01\n";
  ASSERT_EQ(run("simulate", cfg, 5, "a"), cli::kExitOk);
  ASSERT_EQ(run("simulate", cfg, 5, "b"), cli::kExitOk);
  ASSERT_EQ(run("simulate", cfg, 6, "c"), cli::kExitOk);
  EXPECT_EQ(slurp("a/trajectory.csv"), slurp("b/trajectory.csv"));
  EXPECT_NE(slurp("a/trajectory.csv"), slurp("c/trajectory.csv"));
}

TEST_F(CliTest, ParseErrorReportsLine) {
  EXPECT_EQ(run("simulate", "[model]\nmu = 1\nn_modes\n"), cli::kExitUsage);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos) << err_.str();
  EXPECT_EQ(run("simulate", "[model]\nn_modes = x\n"), cli::kExitUsage);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos) << err_.str();
}

TEST_F(CliTest, InvalidModelIsUsageError) {
  EXPECT_EQ(run("simulate", "[model]\nmu = -1\n"), cli::kExitUsage);
  EXPECT_EQ(run("simulate", "[model]\nn_modes = 8\ngrid_points = 10\n"), cli::kExitUsage);
  EXPECT_EQ(run("simulate",
                "[model]\nn_modes = 32\n[integrator]\nmethod = rk4\ndt = 0.01\n"),
            cli::kExitUsage);
}

TEST_F(CliTest, MissingConfigIsUsageError) {
  cli::CommandOptions o;
  o.command = "simulate";
  o.config_path = (dir_ / "absent.cfg").string();
  EXPECT_EQ(cli::run_command(o, out_, err_), cli::kExitUsage);
}

TEST_F(CliTest, UnusedKeysWarn) {
  ASSERT_EQ(run("thresholds", "[model]\nmu = 1\nmuu = 2\n[thresholds]\ntheta_inf = 1\n"),
            cli::kExitOk);
  EXPECT_NE(err_.str().find("model.muu"), std::string::npos);
}

TEST_F(CliTest, EigenReportRows) {
  ASSERT_EQ(run("eigen-report", "[model]\nmu = 1\na = 1\n[eigen]\nn_min = 1\nn_max = 40\n"),
            cli::kExitOk);
  const std::string csv = slurp("out/eigen_report.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 41);
}

TEST_F(CliTest, AsymptoticsVerifyPasses) {
  ASSERT_EQ(run("asymptotics-verify", "[model]\nmu = 1\na = 2\n"), cli::kExitOk) << out_.str();
  const auto j = json("out/asymptotics.json");
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["slopes"].size(), 7u);
}

TEST_F(CliTest, DuhamelSmallData) {
  ASSERT_EQ(run("duhamel",
                "[model]\nn_modes = 8\n[initial]\npreset = small-data\nseed = 2\n"
                "[duhamel]\nt_end = 2\n"),
            cli::kExitOk)
      << out_.str() << err_.str();
  const auto j = json("out/duhamel.json");
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_LE(j["x_distance_to_reference"].get<double>(), 1e-4);
  EXPECT_FALSE(slurp("out/iteration_log.csv").empty());
}

TEST_F(CliTest, DecayFitSmallData) {
  ASSERT_EQ(run("decay-fit",
                "[model]\nn_modes = 16\n[initial]\npreset = small-data\nseed = 4\n"
                "[integrator]\ndt = 0.01\nrecord_every = 10\n"),
            cli::kExitOk)
      << out_.str() << err_.str();
  const auto j = json("out/decay_fit.json");
  const double alpha = j["thresholds"]["alpha"].get<double>();
  for (const auto& f : j["fits"]) {
    const std::string col = f["column"].get<std::string>();
    if (col == "hs_theta_dev" || col == "hs_u_t") {
      EXPECT_GE(f["fitted_rate"].get<double>(), 0.9 * alpha) << col;
    }
  }
}
