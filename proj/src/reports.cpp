#include "turanlab/reports.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

namespace turanlab {

#ifndef TURANLAB_VERSION
#define TURANLAB_VERSION "0.0.0"
#endif

std::string_view library_version() { return TURANLAB_VERSION; }

void SweepConfig::validate() const {
  ctx.validate();
  if (n_values.empty() || k_values.empty() || theorems.empty()) {
    throw Error(ErrorKind::config, "sweep grids must be nonempty");
  }
  for (int n : n_values) {
    if (n < 1) throw Error(ErrorKind::config, "sweep needs n >= 1, got " + std::to_string(n));
  }
  for (int k : k_values) {
    if (k < 1) throw Error(ErrorKind::config, "sweep needs k >= 1, got " + std::to_string(k));
  }
  if (jobs < 1) throw Error(ErrorKind::config, "jobs must be at least 1");
}

bool SweepRow::pass() const { return report && report->pass && report->chain_ok && report->monotone_ok; }

int SweepReport::skipped() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.skipped(); }));
}

int SweepReport::failed() const {
  return static_cast<int>(
      std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.skipped() && !r.pass(); }));
}

namespace {

bool solver_error(ErrorKind kind) {
  return kind == ErrorKind::non_convergence || kind == ErrorKind::ill_conditioned ||
         kind == ErrorKind::oracle_disagreement || kind == ErrorKind::degenerate_normalization;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

SweepRow run_cell(int n, int k, Theorem theorem, const SweepConfig& cfg) {
  SweepRow row;
  row.n = n;
  row.k = k;
  row.theorem = theorem;
  row.weight = theorem == Theorem::markov ? WeightKind::unit : WeightKind::circle;
  if (k > kMaxVariationK) {
    row.skip_reason = "k > " + std::to_string(kMaxVariationK) + " exceeds the variation solver guard";
    return row;
  }
  const auto start = std::chrono::steady_clock::now();
  VariationOptions options = cfg.variation;
  options.seed = cell_seed(cfg.seed, n, k, theorem);
  try {
    row.report = theorem_check(n, k, theorem, cfg.ctx, options);
  } catch (const Error& e) {
    row.error_kind = e.kind();
    row.error = e.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

bool SweepReport::non_converged() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const SweepRow& r) { return r.error_kind && solver_error(*r.error_kind); });
}

std::uint64_t cell_seed(std::uint64_t seed, int n, int k, Theorem theorem) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = splitmix64(h ^ static_cast<std::uint64_t>(k));
  return splitmix64(h ^ static_cast<std::uint64_t>(theorem));
}

SweepReport run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<int> ns = cfg.n_values;
  std::vector<int> ks = cfg.k_values;
  std::vector<Theorem> ts = cfg.theorems;
  for (auto* v : {&ns, &ks}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::vector<std::tuple<int, int, Theorem>> cells;
  for (int n : ns) {
    for (int k : ks) {
      for (Theorem t : ts) cells.emplace_back(n, k, t);
    }
  }
  SweepReport report;
  report.seed = cfg.seed;
  report.bits = cfg.ctx.mantissa_bits;
  report.rows.resize(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const auto& [n, k, t] = cells[i];
      report.rows[i] = run_cell(n, k, t, cfg);
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), cells.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<RatioSample> samples;
  for (const auto& row : report.rows) {
    if (row.report) samples.push_back(ratio_sample(*row.report));
  }
  if (!samples.empty()) report.constants = estimate_constants(samples, {});
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!cfg.csv_path.empty()) emit_csv(report, cfg.csv_path);
  if (!cfg.json_path.empty()) write_atomic(cfg.json_path, to_json(report).dump(2) + "\n");
  return report;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_text(const SweepReport& report) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& row : report.rows) {
    if (row.skipped()) continue;
    out += std::to_string(row.n) + "," + std::to_string(row.k) + "," + std::string(to_string(row.theorem)) + "," +
           std::string(to_string(row.weight)) + ",";
    if (row.report) {
      const auto& r = *row.report;
      out += format_number(r.theorem_lower) + "," + format_number(r.computed.value_lower.to_double()) + "," +
             format_number(r.computed.value_upper.to_double()) + "," + format_number(r.computed.gap.to_double()) +
             "," + format_number(r.witness_ratio.to_double()) + ",";
    } else {
      out += ",,,,,";
    }
    out += row.pass() ? "true\n" : "false\n";
  }
  return out;
}

void emit_csv(const SweepReport& report, const std::string& path) { write_atomic(path, csv_text(report)); }

nlohmann::json to_json(const SweepReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json j = {{"n", row.n},
                        {"k", row.k},
                        {"theorem", std::string(to_string(row.theorem))},
                        {"weight", std::string(to_string(row.weight))}};
    if (row.skipped()) {
      j["reason"] = row.skip_reason;
      skipped.push_back(std::move(j));
      continue;
    }
    j["pass"] = row.pass();
    j["seconds"] = row.seconds;
    if (row.report) {
      j["check"] = to_json(*row.report);
    } else {
      j["error"] = {{"kind", std::string(to_string(*row.error_kind))}, {"message", row.error}};
    }
    rows.push_back(std::move(j));
  }
  return {{"rows", std::move(rows)},
          {"skipped", std::move(skipped)},
          {"constants", report.constants ? to_json(*report.constants) : nlohmann::json(nullptr)},
          {"metadata",
           {{"version", std::string(library_version())},
            {"seed", report.seed},
            {"bits", report.bits},
            {"wall_seconds", report.wall_seconds}}}};
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::io, "write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot rename into " + path);
  }
}

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::config, "config line " + std::to_string(number) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::config, "config line " + std::to_string(number) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config, "cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::config, "not an integer: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw Error(ErrorKind::config, "not an integer: '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::config, "empty list");
  return out;
}

int exit_code(const SweepReport& report) {
  if (report.non_converged()) return kExitSolver;
  if (report.failed() > 0) return kExitCheckFailed;
  if (report.constants && !report.constants->lower_constants_ok()) return kExitCheckFailed;
  return kExitPass;
}

int exit_code(ErrorKind kind) { return solver_error(kind) ? kExitSolver : kExitUsage; }

}  // namespace turanlab
