#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "turanlab/inequalities.hpp"
#include "turanlab/muntz.hpp"
#include "turanlab/reports.hpp"

using namespace turanlab;

namespace {

// Value lookup with precedence: flag, then config file, then environment, then default.
class Settings {
 public:
  void set_flag(const std::string& key, const std::string& value) { flags_[key] = value; }
  void set_file(std::map<std::string, std::string> values) { file_ = std::move(values); }

  std::optional<std::string> raw(const std::string& key) const {
    if (auto it = flags_.find(key); it != flags_.end()) return it->second;
    if (auto it = file_.find(key); it != file_.end()) return it->second;
    if (key == "bits") {
      if (const char* env = std::getenv("TURANLAB_BITS"); env != nullptr && *env != '\0') return std::string(env);
    }
    return std::nullopt;
  }

  std::string text(const std::string& key, const std::string& fallback) const { return raw(key).value_or(fallback); }

  long integer(const std::string& key, long fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    try {
      std::size_t used = 0;
      const long out = std::stol(*v, &used, 0);
      if (used == v->size()) return out;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::config, key + ": not an integer: '" + *v + "'");
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    try {
      std::size_t used = 0;
      const auto out = std::stoull(*v, &used, 0);
      if (used == v->size() && v->front() != '-') return out;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::config, key + ": not an unsigned integer: '" + *v + "'");
  }

  double real(const std::string& key, double fallback) const {
    const auto v = raw(key);
    if (!v) return fallback;
    try {
      std::size_t used = 0;
      const double out = std::stod(*v, &used);
      if (used == v->size()) return out;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::config, key + ": not a number: '" + *v + "'");
  }

  std::vector<int> ints(const std::string& key, std::vector<int> fallback) const {
    const auto v = raw(key);
    return v ? parse_int_list(*v) : fallback;
  }

 private:
  std::map<std::string, std::string> flags_;
  std::map<std::string, std::string> file_;
};

std::vector<Theorem> parse_theorems(const std::string& text) {
  std::vector<Theorem> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(theorem_from_string(item));
  if (out.empty()) throw Error(ErrorKind::config, "empty theorem list");
  return out;
}

PrecisionContext context(const Settings& s) {
  PrecisionContext ctx;
  ctx.mantissa_bits = s.integer("bits", ctx.mantissa_bits);
  ctx.sup_tol = s.real("tol", ctx.sup_tol);
  try {
    ctx.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, e.what());
  }
  return ctx;
}

int jobs(const Settings& s) {
  const long j = s.integer("jobs", 1);
  if (j < 1) throw Error(ErrorKind::config, "jobs must be at least 1");
  return static_cast<int>(j);
}

// JSON goes to <out>/<name>.json when --out is set, to stdout otherwise.
void emit_json(const Settings& s, const std::string& name, const nlohmann::json& j) {
  const std::string out = s.text("out", "");
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  const std::string path = (std::filesystem::path(out) / (name + ".json")).string();
  write_atomic(path, j.dump(2) + "\n");
  std::cout << "wrote " << path << "\n";
}

int cmd_muntz(const Settings& s) {
  const PrecisionContext ctx = context(s);
  const int nu = static_cast<int>(s.integer("nu", -1));
  const int kappa = static_cast<int>(s.integer("kappa", -1));
  if (nu < 0 || kappa < 1) throw Error(ErrorKind::config, "muntz needs --nu >= 0 and --kappa >= 1");
  const MuntzChebyshev mc = muntz_chebyshev(nu, kappa, ctx);
  nlohmann::json j = to_json(mc, t_squared_integral(mc, ctx));
  nlohmann::json slacks = nlohmann::json::array();
  for (const auto& v : zero_bound_check(mc)) slacks.push_back(v.to_double());
  j["zero_bound_slacks"] = std::move(slacks);
  emit_json(s, "muntz", j);
  return kExitPass;
}

int cmd_ratio(const Settings& s) {
  const PrecisionContext ctx = context(s);
  RatioProblem p;
  p.n = static_cast<int>(s.integer("n", 0));
  p.k = static_cast<int>(s.integer("k", 0));
  p.denominator = denominator_from_string(s.text("denominator", "variation"));
  p.weight = Weight{weight_from_string(s.text("weight", "unit"))};
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, e.what());
  }
  RatioCertificate cert;
  if (p.denominator == Denominator::endpoint) {
    cert = solve_endpoint(p, ctx);
  } else {
    VariationOptions options;
    options.seed = s.unsigned_integer("seed", kDefaultSeed);
    cert = solve_variation(p, ctx, options);
  }
  emit_json(s, "ratio", to_json(cert));
  return kExitPass;
}

SweepConfig sweep_config(const Settings& s) {
  SweepConfig cfg;
  cfg.n_values = s.ints("n", cfg.n_values);
  cfg.k_values = s.ints("k", cfg.k_values);
  cfg.theorems = parse_theorems(s.text("theorems", "2.1,2.2"));
  cfg.ctx = context(s);
  cfg.seed = s.unsigned_integer("seed", kDefaultSeed);
  cfg.jobs = jobs(s);
  return cfg;
}

int cmd_sweep(const Settings& s) {
  SweepConfig cfg = sweep_config(s);
  const std::string out = s.text("out", "");
  if (!out.empty()) {
    cfg.csv_path = (std::filesystem::path(out) / "sweep.csv").string();
    cfg.json_path = (std::filesystem::path(out) / "sweep.json").string();
  }
  const SweepReport report = run_sweep(cfg);
  if (out.empty()) {
    std::cout << csv_text(report);
  } else {
    std::cout << "wrote " << cfg.csv_path << " and " << cfg.json_path << "\n";
  }
  std::cerr << report.rows.size() - static_cast<std::size_t>(report.skipped()) << " rows, " << report.skipped()
            << " skipped, " << report.failed() << " failed, " << report.wall_seconds << "s\n";
  return exit_code(report);
}

int cmd_verify_lemmas(const Settings& s) {
  const PrecisionContext ctx = context(s);
  const std::string which = s.text("lemma", "all");
  const int trials = static_cast<int>(s.integer("trials", 200));
  const std::uint64_t seed = s.unsigned_integer("seed", kDefaultSeed);
  std::vector<std::string> ids = which == "all" ? lemma_ids() : std::vector<std::string>{which};

  std::vector<LemmaReport> reports(ids.size());
  std::vector<std::optional<Error>> errors(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) {
      try {
        reports[i] = run_lemma_suite(ids[i], trials, seed, ctx);
      } catch (const Error& e) {
        errors[i] = e;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(jobs(s)), ids.size());
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) throw *e;
  }

  bool pass = true;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass();
    list.push_back(to_json(r));
  }
  emit_json(s, "lemmas", {{"seed", seed}, {"trials", trials}, {"lemmas", std::move(list)}, {"pass", pass}});
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_estimate_constants(const Settings& s) {
  SweepConfig cfg = sweep_config(s);
  const SweepReport sweep = run_sweep(cfg);
  std::vector<RatioSample> ratios;
  for (const auto& row : sweep.rows) {
    if (row.report) ratios.push_back(ratio_sample(*row.report));
  }
  std::vector<MuntzSample> muntz;
  for (int nu : s.ints("nu", {0, 10, 20, 40, 80, 160})) {
    for (int kappa : s.ints("kappa", {1, 2, 3, 4})) muntz.push_back(muntz_sample(nu, kappa, cfg.ctx));
  }
  const ConstantEstimates est = estimate_constants(ratios, muntz);
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& m : muntz) {
    samples.push_back({{"nu", m.nu},
                       {"kappa", m.kappa},
                       {"bernstein_ratio", m.bernstein_ratio},
                       {"min_zero_slack", m.min_zero_slack},
                       {"t2_scaled", m.t2_scaled}});
  }
  emit_json(s, "constants",
            {{"constants", to_json(est)}, {"sweep", to_json(sweep)}, {"muntz_samples", std::move(samples)}});
  if (sweep.non_converged()) return kExitSolver;
  return est.lower_constants_ok() && sweep.failed() == 0 ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremal ratios and reverse Markov/Bernstein checks for incomplete polynomials"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(library_version()));

  std::map<std::string, std::string> given;
  auto option = [&](CLI::App* on, const std::string& flag, const std::string& key, const std::string& help) {
    on->add_option_function<std::string>(flag, [&given, key](const std::string& v) { given[key] = v; }, help);
  };
  option(&app, "--bits", "bits", "mantissa bits (default 256, or TURANLAB_BITS)");
  option(&app, "--seed", "seed", "random seed (default 0x5EED)");
  option(&app, "--tol", "tol", "relative tolerance of sup-norm refinement (default 1e-12)");
  option(&app, "--out", "out", "directory for report files; stdout when absent");
  option(&app, "--jobs", "jobs", "concurrent sweep cells or lemma suites");
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value file; flags override it");

  auto* muntz = app.add_subcommand("muntz", "Chebyshev polynomial of span{x^nu, ..., x^{nu+kappa}}");
  option(muntz, "--nu", "nu", "lowest exponent");
  option(muntz, "--kappa", "kappa", "number of extra exponents");

  auto* ratio = app.add_subcommand("ratio", "solve one extremal ratio problem");
  option(ratio, "--n", "n", "P = x^{n+1} R");
  option(ratio, "--k", "k", "deg R <= k - 1");
  option(ratio, "--denominator", "denominator", "endpoint or variation (default)");
  option(ratio, "--weight", "weight", "unit (default) or circle");

  auto* sweep = app.add_subcommand("sweep", "theorem checks over an (n, k) grid");
  for (auto* sub : {sweep, app.add_subcommand("estimate-constants", "empirical values of the absolute constants")}) {
    option(sub, "--n", "n", "comma-separated n values");
    option(sub, "--k", "k", "comma-separated k values");
    option(sub, "--theorems", "theorems", "comma-separated subset of 2.1,2.2");
  }
  auto* constants = app.get_subcommand("estimate-constants");
  option(constants, "--nu", "nu", "comma-separated nu values for the Chebyshev samples");
  option(constants, "--kappa", "kappa", "comma-separated kappa values for the Chebyshev samples");

  auto* lemmas = app.add_subcommand("verify-lemmas", "seeded property checks of the lemma inequalities");
  option(lemmas, "--lemma", "lemma", "3.1, 3.2, 3.4, 3.5, 3.6, 4.1 or all (default)");
  option(lemmas, "--trials", "trials", "trials per lemma (default 200)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    Settings settings;
    if (!config_path.empty()) settings.set_file(read_config_file(config_path));
    for (const auto& [k, v] : given) settings.set_flag(k, v);
    if (muntz->parsed()) return cmd_muntz(settings);
    if (ratio->parsed()) return cmd_ratio(settings);
    if (sweep->parsed()) return cmd_sweep(settings);
    if (lemmas->parsed()) return cmd_verify_lemmas(settings);
    return cmd_estimate_constants(settings);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
