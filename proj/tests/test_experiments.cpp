#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fpp/experiments.hpp"

using namespace fpp;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config text parsing") {
  auto cfg = ExperimentConfig::parse_text(
      "# comment\n"
      "[run]\n"
      "name = fkg\n"
      "dimension = 3\n"
      "seed = 42\n"
      "replicas = 500\n"
      "workers = 4\n"
      "n = 10\n"
      "t_grid = 0.5,1.0\n");
  CHECK(cfg.name == "fkg");
  CHECK(cfg.dimension == 3);
  CHECK(cfg.master_seed == 42);
  CHECK(cfg.replicas == 500);
  CHECK(cfg.workers == 4);
  CHECK(!cfg.dist_set);
  CHECK(cfg.get_int("n", 0) == 10);
  CHECK(cfg.get_grid("t_grid", {}) == std::vector<double>{0.5, 1.0});
  CHECK(cfg.get_real("missing", 7.5) == 7.5);

  auto with_dist = ExperimentConfig::parse_text("name = fkg\ndistribution = exponential(2)\n");
  CHECK(with_dist.dist_set);
}

TEST_CASE("config parse errors carry line numbers") {
  try {
    ExperimentConfig::parse_text("name = fkg\nnonsense line\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  CHECK_THROWS_AS(ExperimentConfig::parse_text("= value\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse_text("replicas = many\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse_text("distribution = nope(1)\n"),
                  std::invalid_argument);
}

TEST_CASE("canonical text and hash") {
  auto a = ExperimentConfig::parse_text("name = fkg\nseed = 9\nn = 10\nworkers = 1\n");
  auto b = ExperimentConfig::parse_text("n = 10\nseed = 9\nworkers = 8\nname = fkg\n");
  // key order and worker count never affect identity
  CHECK(a.canonical_text() == b.canonical_text());
  CHECK(a.hash() == b.hash());
  auto c = ExperimentConfig::parse_text("name = fkg\nseed = 10\nn = 10\n");
  CHECK(a.hash() != c.hash());
  CHECK(a.canonical_text().find("workers") == std::string::npos);
}

TEST_CASE("defaults exist and validate for every experiment") {
  const auto& names = experiment_names();
  CHECK(names.size() == 10);
  for (const auto& n : names) {
    ExperimentConfig cfg = default_config(n);
    CHECK(cfg.name == n);
    CHECK_NOTHROW(validate_config(cfg));
    CHECK(cfg.replicas >= 30);
  }
  CHECK_THROWS(default_config("no_such_experiment"));
}

TEST_CASE("config validation rejects bad inputs") {
  ExperimentConfig cfg = default_config("fkg");
  cfg.name = "no_such_experiment";
  CHECK_THROWS(validate_config(cfg));

  cfg = default_config("fkg");
  cfg.replicas = 10;  // too few for a standard error
  CHECK_THROWS(validate_config(cfg));

  cfg = default_config("fkg");
  cfg.dimension = 1;
  CHECK_THROWS(validate_config(cfg));

  cfg = default_config("fkg");
  cfg.extra["weird_set"] = "[3,2]";  // empty interval literal
  CHECK_THROWS(validate_config(cfg));
}

TEST_CASE("report artifacts and byte determinism") {
  ExperimentConfig cfg = default_config("lower_upper_tail");
  cfg.replicas = 200;
  cfg.master_seed = 5;

  ExperimentReport rep = run_experiment(cfg);
  CHECK(!rep.cells.empty());
  CHECK(rep.config_hash == cfg.hash());

  namespace fs = std::filesystem;
  fs::path dir1 = fs::temp_directory_path() / "fpp-test-report-a";
  fs::path dir2 = fs::temp_directory_path() / "fpp-test-report-b";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  std::string line = write_report(rep, dir1.string());
  CHECK(fs::exists(dir1 / "report.json"));
  CHECK(fs::exists(dir1 / "cells.csv"));
  CHECK(fs::exists(dir1 / "plot.svg"));
  CHECK(fs::exists(dir1 / "manifest.txt"));

  // the manifest line names the run and its config hash
  CHECK(line.find(rep.name) != std::string::npos);
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(rep.config_hash));
  CHECK(line.find(hex) != std::string::npos);
  CHECK(slurp(dir1 / "manifest.txt").find(line) != std::string::npos);

  // csv: one header plus one row per cell
  std::string csv = slurp(dir1 / "cells.csv");
  size_t rows = static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(rows == rep.cells.size() + 1);
  CHECK(csv.rfind("label,param,estimate,stderr,reference", 0) == 0);

  // a rerun of the same config writes byte-identical report.json
  ExperimentReport rep2 = run_experiment(cfg);
  write_report(rep2, dir2.string());
  CHECK(slurp(dir1 / "report.json") == slurp(dir2 / "report.json"));
  // report.json never embeds wall-clock state
  CHECK(slurp(dir1 / "report.json").find("runtime") == std::string::npos);
  CHECK(slurp(dir1 / "report.json").find("timestamp") == std::string::npos);

  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("worker count does not change results") {
  ExperimentConfig cfg = default_config("fkg");
  cfg.replicas = 60;
  cfg.master_seed = 11;
  cfg.workers = 1;
  ExperimentReport a = run_experiment(cfg);
  cfg.workers = 8;
  ExperimentReport b = run_experiment(cfg);
  REQUIRE(a.cells.size() == b.cells.size());
  for (size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].estimate == b.cells[i].estimate);
    CHECK(a.cells[i].stderr_ == b.cells[i].stderr_);
    CHECK(a.cells[i].values == b.cells[i].values);
  }
  CHECK(to_string(a.verdict) == to_string(b.verdict));
}

TEST_CASE("run_experiment rejects unknown names") {
  ExperimentConfig cfg;
  cfg.name = "no_such_experiment";
  CHECK_THROWS(run_experiment(cfg));
}
