#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "turanlab/reports.hpp"

using namespace turanlab;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("turanlab_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

SweepConfig small_config(std::vector<int> n, std::vector<int> k, std::vector<Theorem> t) {
  SweepConfig cfg;
  cfg.n_values = std::move(n);
  cfg.k_values = std::move(k);
  cfg.theorems = std::move(t);
  return cfg;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto m = parse_config("# sweep\nbits = 320\n\n  n=20,40  # grid\njobs=2\r\nempty=\n");
  CHECK(m.at("bits") == "320");
  CHECK(m.at("n") == "20,40");
  CHECK(m.at("jobs") == "2");
  CHECK(m.at("empty").empty());
  CHECK(m.size() == 4);
  try {
    parse_config("bits 320\n");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
  CHECK_THROWS_AS(parse_config("=3\n"), Error);
  CHECK_THROWS_AS(read_config_file("/nonexistent/turanlab.cfg"), Error);
}

TEST_CASE("integer lists") {
  CHECK(parse_int_list("20,40,80") == std::vector<int>{20, 40, 80});
  CHECK(parse_int_list(" 7") == std::vector<int>{7});
  CHECK_THROWS_AS(parse_int_list("20,x"), Error);
  CHECK_THROWS_AS(parse_int_list("2.5"), Error);
  CHECK_THROWS_AS(parse_int_list(""), Error);
}

TEST_CASE("numbers print with 17 significant digits and round-trip") {
  for (double v : {0.1, 1.0 / 3, 13.0, 2.2328486232222219e-07, 1e300, -0.0}) {
    const std::string s = format_number(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_number(13.0) == "13");
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("sweep config validation") {
  CHECK_THROWS_AS(run_sweep(small_config({}, {1}, {Theorem::markov})), Error);
  CHECK_THROWS_AS(run_sweep(small_config({0}, {1}, {Theorem::markov})), Error);
  auto cfg = small_config({12}, {1}, {Theorem::markov});
  cfg.jobs = 0;
  CHECK_THROWS_AS(run_sweep(cfg), Error);
}

TEST_CASE("sweep, n = 12, k = 1, unit weight: one row with value 13") {
  const auto dir = scratch_dir("one");
  auto cfg = small_config({12}, {1}, {Theorem::markov});
  cfg.csv_path = (dir / "sweep.csv").string();
  cfg.json_path = (dir / "sweep.json").string();
  const auto report = run_sweep(cfg);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].pass());
  CHECK(report.rows[0].report->computed.value_upper.to_double() == doctest::Approx(13.0).epsilon(1e-12));
  CHECK(exit_code(report) == kExitPass);

  const std::string csv = slurp(cfg.csv_path);
  CHECK(csv == csv_text(report));
  const auto lines = split(csv, '\n');
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == kCsvHeader);
  CHECK(lines[1] == "12,1,2.1,unit,1,13,13,0,13,true");
  CHECK(csv.find('\r') == std::string::npos);

  // re-emission is byte-identical and leaves no temporary files behind
  emit_csv(report, cfg.csv_path);
  CHECK(slurp(cfg.csv_path) == csv);
  int files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 2);

  const auto j = nlohmann::json::parse(slurp(cfg.json_path));
  CHECK(j["rows"].size() == 1);
  CHECK(j["metadata"]["seed"] == kDefaultSeed);
  CHECK(j["metadata"]["bits"] == 256);
  CHECK(j["constants"]["c1_endpoint_hat"].get<double>() == doctest::Approx(13.0 / 12));
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep: cells above the variation guard are skipped with a reason") {
  const auto report = run_sweep(small_config({2}, {9}, {Theorem::markov, Theorem::bernstein}));
  REQUIRE(report.rows.size() == 2);
  CHECK(report.skipped() == 2);
  CHECK(report.failed() == 0);
  CHECK(!report.constants.has_value());
  CHECK(exit_code(report) == kExitPass);
  CHECK(split(csv_text(report), '\n').size() == 1);
  const auto j = to_json(report);
  CHECK(j["skipped"].size() == 2);
  CHECK(j["skipped"][0]["reason"].get<std::string>().find("k > 8") != std::string::npos);
}

TEST_CASE("sweep: rows are ordered by (n, k, theorem) and independent of the worker count") {
  auto cfg = small_config({20, 12}, {2, 1, 2}, {Theorem::bernstein, Theorem::markov});
  const auto serial = run_sweep(cfg);
  cfg.jobs = 3;
  const auto parallel = run_sweep(cfg);
  CHECK(csv_text(serial) == csv_text(parallel));
  REQUIRE(serial.rows.size() == 8);
  for (std::size_t i = 1; i < serial.rows.size(); ++i) {
    const auto& a = serial.rows[i - 1];
    const auto& b = serial.rows[i];
    CHECK(std::tie(a.n, a.k, a.theorem) < std::tie(b.n, b.k, b.theorem));
  }
  CHECK(cell_seed(1, 20, 2, Theorem::markov) == cell_seed(1, 20, 2, Theorem::markov));
  CHECK(cell_seed(1, 20, 2, Theorem::markov) != cell_seed(1, 20, 2, Theorem::bernstein));
  CHECK(cell_seed(1, 20, 2, Theorem::markov) != cell_seed(2, 20, 2, Theorem::markov));
}

TEST_CASE("sweep over n in {20, 40, 80}, k in {1, 2, 4}, both theorems: 18 rows, all pass") {
  const auto report = run_sweep(small_config({20, 40, 80}, {1, 2, 4}, {Theorem::markov, Theorem::bernstein}));
  CHECK(report.failed() == 0);
  CHECK(exit_code(report) == kExitPass);
  const auto lines = split(csv_text(report), '\n');
  REQUIRE(lines.size() == 19);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    REQUIRE(fields.size() == 10);
    CHECK(fields[9] == "true");
    for (std::size_t f = 4; f < 9; ++f) {
      char* end = nullptr;
      std::strtod(fields[f].c_str(), &end);
      CHECK(*end == '\0');
    }
    CHECK(std::stod(fields[4]) <= std::stod(fields[6]) + 1e-9);  // theorem_lower <= value_upper
    CHECK(std::stod(fields[5]) <= std::stod(fields[8]) + 1e-9);  // value_lower <= witness
  }
  REQUIRE(report.constants.has_value());
  CHECK(report.constants->lower_constants_ok());
  CHECK(*report.constants->c1_endpoint_hat >= 1.0 / 12);
  CHECK(*report.constants->c1_sqrt_hat >= 1.0 / 6);
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorKind::non_convergence) == kExitSolver);
  CHECK(exit_code(ErrorKind::oracle_disagreement) == kExitSolver);
  CHECK(exit_code(ErrorKind::config) == kExitUsage);
  CHECK(exit_code(ErrorKind::io) == kExitUsage);
  SweepReport r;
  SweepRow failed;
  failed.error_kind = ErrorKind::non_convergence;
  failed.error = "stalled";
  r.rows.push_back(failed);
  CHECK(r.failed() == 1);
  CHECK(exit_code(r) == kExitSolver);
  r.rows[0].error_kind = ErrorKind::degenerate_normalization;
  CHECK(exit_code(r) == kExitSolver);
  r.rows[0].error_kind = ErrorKind::precondition;
  CHECK(exit_code(r) == kExitCheckFailed);
  CHECK(split(csv_text(r), '\n')[1] == "0,0,2.1,unit,,,,,,false");
}

TEST_CASE("atomic write reports I/O errors") {
  try {
    write_atomic("/proc/turanlab/cannot/write.csv", "x");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
}
