#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "turanlab/extremal.hpp"
#include "turanlab/inequalities.hpp"

namespace turanlab {

std::string_view library_version();

struct SweepConfig {
  std::vector<int> n_values{20, 40, 80};
  std::vector<int> k_values{1, 2, 4};
  std::vector<Theorem> theorems{Theorem::markov, Theorem::bernstein};
  PrecisionContext ctx;
  std::uint64_t seed = kDefaultSeed;
  VariationOptions variation;  // its seed is replaced by a per-cell seed
  std::string csv_path;        // empty: not written
  std::string json_path;       // empty: not written
  int jobs = 1;

  void validate() const;
};

struct SweepRow {
  int n = 0;
  int k = 0;
  Theorem theorem = Theorem::markov;
  WeightKind weight = WeightKind::unit;
  std::optional<SandwichReport> report;  // empty when skipped or failed
  std::string skip_reason;
  std::optional<ErrorKind> error_kind;
  std::string error;
  double seconds = 0.0;

  bool skipped() const { return !skip_reason.empty(); }
  /// Sandwich, proof chain and variation <= endpoint all hold.
  bool pass() const;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // ordered by (n, k, theorem), skipped cells included
  std::optional<ConstantEstimates> constants;
  std::uint64_t seed = 0;
  long bits = 0;
  double wall_seconds = 0.0;

  int skipped() const;
  int failed() const;  // evaluated rows that did not pass, errors included
  bool non_converged() const;
};

/// Seed of one sweep cell, independent of scheduling.
std::uint64_t cell_seed(std::uint64_t seed, int n, int k, Theorem theorem);

/// theorem_check over the grid with up to cfg.jobs cells in flight. Cell errors
/// are recorded in their rows; cells with k above the variation guard are
/// skipped. Writes the CSV and JSON files named in cfg.
SweepReport run_sweep(const SweepConfig& cfg);

inline constexpr const char* kCsvHeader = "n,k,theorem,weight,theorem_lower,value_lower,value_upper,gap,witness_ratio,pass";

/// One line per evaluated row; skipped rows appear only in the JSON report.
std::string csv_text(const SweepReport& report);
void emit_csv(const SweepReport& report, const std::string& path);
nlohmann::json to_json(const SweepReport& report);

/// Writes to a temporary file next to path, then renames it over path.
void write_atomic(const std::string& path, const std::string& content);

/// %.17g
std::string format_number(double v);

/// Flat key=value file: '#' starts a comment, blank lines are ignored.
std::map<std::string, std::string> parse_config(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// "20,40,80" -> {20, 40, 80}.
std::vector<int> parse_int_list(const std::string& text);

/// Exit status for a finished run: 2 for non-convergence, 1 for any failed
/// check, otherwise 0.
int exit_code(const SweepReport& report);

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitUsage = 3;

/// Exit status for an error that escaped a command.
int exit_code(ErrorKind kind);

}  // namespace turanlab
