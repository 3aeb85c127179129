// pmdkit: command line front end for the PMD code toolkit.
//
// Subcommands: bound, verify, design-check, search, gap. Exit codes:
//   0  success
//   1  a proven invariant failed (implementation bug, never bad input)
//   2  invalid arguments or unreadable input
//
// Reports go to stdout in human form; --json / --csv write machine forms.
// Every file report embeds a manifest (command, parameters, seed, version,
// output paths). Wall time is printed to stdout only and worker counts are
// not part of the manifest, so repeated runs with the same seed produce
// byte-identical files regardless of parallelism.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmd/codespace.hpp"
#include "pmd/finite_field.hpp"
#include "pmd/metrics.hpp"
#include "pmd/report_io.hpp"
#include "pmd/rng.hpp"
#include "pmd/search.hpp"
#include "pmd/version.hpp"

namespace {

using nlohmann::json;

struct FieldArgs {
  std::uint64_t q = 0;  // as given, 0 when unset
  std::uint32_t p = 0;
  std::uint32_t m = 1;
};

void add_field_options(CLI::App* cmd, FieldArgs& fa) {
  cmd->add_option("-q", fa.q, "field size as a prime power p^m");
  cmd->add_option("-p", fa.p, "field characteristic (prime)");
  cmd->add_option("-m", fa.m, "extension degree (default 1)");
}

// Resolves -q / -p -m to a validated prime power. Throws on conflicts.
std::uint64_t resolve_q(const CLI::App* cmd, const FieldArgs& fa) {
  const bool has_q = cmd->count("-q") > 0;
  const bool has_p = cmd->count("-p") > 0;
  if (has_q && has_p)
    throw std::invalid_argument("give either -q or -p/-m, not both");
  if (has_q) {
    pmd::factor_prime_power(fa.q);  // validates
    return fa.q;
  }
  if (!has_p) throw std::invalid_argument("a field is required: -q or -p (with optional -m)");
  if (fa.m == 0) throw std::invalid_argument("-m must be at least 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < fa.m; ++i) {
    if (q > UINT64_MAX / fa.p) throw std::invalid_argument("p^m overflows");
    q *= fa.p;
  }
  pmd::factor_prime_power(q);  // confirms p prime
  return q;
}

json make_manifest(const std::string& command, json parameters, const json& seed,
                   const std::string& json_path, const std::string& csv_path) {
  json outputs;
  outputs["json"] = json_path.empty() ? json() : json(json_path);
  outputs["csv"] = csv_path.empty() ? json() : json(csv_path);
  json m;
  m["command"] = command;
  m["parameters"] = std::move(parameters);
  m["seed"] = seed;
  m["version"] = pmd::kVersion;
  m["outputs"] = outputs;
  return m;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json(const std::string& path, const json& j) {
  if (path.empty()) return;
  write_file(path, j.dump(2) + "\n");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct WallClock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

int run_bound(const CLI::App* cmd, const FieldArgs& fa, unsigned n, unsigned lambda,
              double epsilon, const std::string& json_path) {
  const std::uint64_t q = resolve_q(cmd, fa);
  const bool has_n = cmd->count("-n") > 0;
  const bool has_l = cmd->count("--lambda") > 0;
  const bool has_eps = cmd->count("--epsilon") > 0;
  if (has_n != has_l)
    throw std::invalid_argument("-n and --lambda must be given together");
  if (!has_n && !has_eps)
    throw std::invalid_argument("nothing to compute: give -n with --lambda, or --epsilon");

  json parameters;
  parameters["q"] = q;
  json out;
  out["q"] = q;
  if (has_n) {
    const double b = pmd::theorem1_bound(n, lambda, q);
    std::cout << "bound_theorem1 = " << fmt(b) << "\n";
    parameters["n"] = n;
    parameters["lambda"] = lambda;
    out["n"] = n;
    out["lambda"] = lambda;
    out["bound_theorem1"] = b;
  }
  if (has_eps) {
    const double c = pmd::corollary1_bound(epsilon, q);
    std::cout << "corollary_lambda_min = " << fmt(c) << "\n";
    parameters["epsilon"] = epsilon;
    out["epsilon"] = epsilon;
    out["corollary_lambda_min"] = c;
  }
  out["manifest"] = make_manifest("bound", parameters, json(), json_path, "");
  write_json(json_path, out);
  return 0;
}

void print_report(const pmd::PmdReport& r) {
  std::cout << "n = " << r.n << "\n"
            << "k = " << r.k << "\n"
            << "q = " << r.q << "\n"
            << "lambda = " << r.lambda << "\n"
            << "epsilon = " << fmt(r.epsilon) << "\n"
            << "worst_label = " << pmd::label_to_string(r.worst_label) << "\n"
            << "bound_theorem1 = " << fmt(r.bound_theorem1) << "\n"
            << "slack = " << fmt(r.slack) << "\n"
            << "corollary_lambda_min = " << fmt(r.corollary_lambda_min) << "\n"
            << "eps_floor_ok = " << (r.eps_floor_ok ? "true" : "false") << "\n";
}

int run_verify(const std::string& file, unsigned workers, const std::string& json_path,
               const std::string& csv_path) {
  const WallClock clock;
  pmd::CodeSpace cs = pmd::load_codespace(file);
  pmd::PmdReport report = pmd::make_pmd_report(cs, workers);
  print_report(report);
  std::cout << "wall_time_s = " << clock.seconds() << "\n";

  json parameters;
  parameters["file"] = file;
  json out = pmd::report_json(report);
  out["manifest"] = make_manifest("verify", parameters, json(), json_path, csv_path);
  write_json(json_path, out);
  if (!csv_path.empty()) write_file(csv_path, pmd::report_csv(report));
  return 0;
}

int run_design_check(const CLI::App* cmd, const FieldArgs& fa, unsigned n, unsigned trials,
                     std::uint64_t seed, const std::string& json_path,
                     const std::string& csv_path) {
  const std::uint64_t q = resolve_q(cmd, fa);
  if (cmd->count("-n") == 0) throw std::invalid_argument("design-check requires -n");
  const auto [p, m] = pmd::factor_prime_power(q);
  auto field = pmd::make_field(p, m);
  const pmd::PauliEnumerator en(field, n);
  const WallClock clock;

  pmd::DesignCheckReport report;
  // Conjugation average over t seeded random operators.
  pmd::Rng op_rng(pmd::splitmix64(seed));
  const auto d = static_cast<Eigen::Index>(en.dim());
  for (unsigned t = 0; t < trials; ++t) {
    Eigen::MatrixXcd o(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index r = 0; r < d; ++r) o(r, c) = op_rng.next_complex_gaussian();
    report.moment_deviation =
        std::max(report.moment_deviation, pmd::design_average_check(field, n, o));
  }
  // Overlap identity over t random codes for every k.
  for (unsigned k = 0; k <= n; ++k) {
    for (unsigned t = 0; t < trials; ++t) {
      const std::uint64_t code_seed =
          pmd::splitmix64(seed ^ ((std::uint64_t(k) + 1) << 32) ^ (std::uint64_t(t) + 1));
      auto cs = pmd::random_codespace(field, n, k, code_seed);
      const auto overlap = pmd::average_overlap(cs);
      if (overlap.deviation >= report.overlap_deviation) {
        report.overlap_deviation = overlap.deviation;
        report.overlap_value = overlap.value;
      }
    }
  }

  std::cout << "moment_deviation = " << fmt(report.moment_deviation) << "\n"
            << "overlap_deviation = " << fmt(report.overlap_deviation) << "\n"
            << "overlap_value = " << fmt(report.overlap_value) << "\n"
            << "wall_time_s = " << clock.seconds() << "\n";

  json parameters;
  parameters["p"] = p;
  parameters["m"] = m;
  parameters["n"] = n;
  parameters["trials"] = trials;
  json out = pmd::report_json(report);
  out["manifest"] = make_manifest("design-check", parameters, json(seed), json_path, csv_path);
  write_json(json_path, out);
  if (!csv_path.empty()) write_file(csv_path, pmd::report_csv(report));

  const double worst = std::max(report.moment_deviation, report.overlap_deviation);
  if (worst > 1e-9) {
    std::cerr << "design identity deviation " << fmt(worst) << " exceeds 1e-9\n";
    return 1;
  }
  return 0;
}

int run_search(const CLI::App* cmd, const FieldArgs& fa, pmd::SearchConfig cfg, double target,
               unsigned workers, const std::string& json_path, const std::string& csv_path) {
  cfg.q = resolve_q(cmd, fa);
  if (cmd->count("--target") > 0) cfg.target = target;
  const WallClock clock;
  pmd::SearchResult result = pmd::optimize_epsilon(cfg, workers);
  print_report(result.report);
  std::cout << "trajectory_points = " << result.trajectory.size() << "\n"
            << "wall_time_s = " << clock.seconds() << "\n";

  json parameters;
  parameters["n"] = cfg.n;
  parameters["k"] = cfg.k;
  parameters["q"] = cfg.q;
  parameters["restarts"] = cfg.restarts;
  parameters["local_steps"] = cfg.local_steps;
  parameters["initial_step"] = cfg.initial_step;
  parameters["step_decay"] = cfg.step_decay;
  parameters["target"] = cfg.target ? json(*cfg.target) : json();

  json out;
  out["report"] = pmd::report_json(result.report);
  json traj = json::array();
  for (const auto& [iter, eps] : result.trajectory) traj.push_back({iter, eps});
  out["trajectory"] = traj;
  out["best"] = json::parse(pmd::codespace_to_json(result.best));
  out["manifest"] = make_manifest("search", parameters, json(cfg.seed), json_path, csv_path);
  write_json(json_path, out);
  if (!csv_path.empty()) write_file(csv_path, pmd::trajectory_csv(result.trajectory));
  return 0;
}

int run_gap(const CLI::App* cmd, const FieldArgs& fa, unsigned n, unsigned ell,
            const std::string& json_path, const std::string& csv_path) {
  const std::uint64_t q = resolve_q(cmd, fa);
  if (cmd->count("-n") == 0 || cmd->count("--ell") == 0)
    throw std::invalid_argument("gap requires -n and -l/--ell");
  const pmd::BergamaschiGap g = pmd::bergamaschi_gap(n, ell, q);
  std::cout << "lambda_construction = " << fmt(g.lambda_construction) << "\n"
            << "epsilon_upper = " << fmt(g.epsilon_upper) << "\n"
            << "lambda_lower = " << fmt(g.lambda_lower) << "\n"
            << "gap = " << fmt(g.gap) << "\n"
            << "out_of_regime = " << (g.out_of_regime ? "true" : "false") << "\n";
  if (g.out_of_regime)
    std::cout << "note: epsilon_upper >= 1, the construction guarantee is vacuous at these parameters\n";

  json parameters;
  parameters["n"] = n;
  parameters["ell"] = ell;
  parameters["q"] = q;
  json out = pmd::report_json(g);
  out["manifest"] = make_manifest("gap", parameters, json(), json_path, csv_path);
  write_json(json_path, out);
  if (!csv_path.empty()) write_file(csv_path, pmd::report_csv(g));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PMD code toolkit: bounds, verification, design checks, and code search"};
  app.require_subcommand(1);

  // bound
  auto* bound = app.add_subcommand("bound", "Error-parameter lower bound and redundancy bound");
  FieldArgs bound_field;
  unsigned bound_n = 0, bound_lambda = 0;
  double bound_epsilon = 0.0;
  std::string bound_json;
  add_field_options(bound, bound_field);
  bound->add_option("-n", bound_n, "number of qudits");
  bound->add_option("-l,--lambda", bound_lambda, "redundancy n - k");
  bound->add_option("--epsilon", bound_epsilon, "error parameter for the redundancy bound");
  bound->add_option("--json", bound_json, "write a JSON report to this path");

  // verify
  auto* verify = app.add_subcommand("verify", "Exact epsilon evaluation of a code-space file");
  std::string verify_file, verify_json, verify_csv;
  unsigned verify_workers = 1;
  verify->add_option("file", verify_file, "code-space JSON file")->required();
  verify->add_option("--workers", verify_workers, "parallel scan threads (default 1)");
  verify->add_option("--json", verify_json, "write a JSON report to this path");
  verify->add_option("--csv", verify_csv, "write a one-row CSV report to this path");

  // design-check
  auto* design = app.add_subcommand("design-check", "Verify the conjugation-average identities");
  FieldArgs design_field;
  unsigned design_n = 1, design_trials = 20;
  std::uint64_t design_seed = 0;
  std::string design_json, design_csv;
  add_field_options(design, design_field);
  design->add_option("-n", design_n, "number of qudits");
  design->add_option("--trials", design_trials, "random trials per check (default 20)");
  design->add_option("--seed", design_seed, "base seed (default 0)");
  design->add_option("--json", design_json, "write a JSON report to this path");
  design->add_option("--csv", design_csv, "write a one-row CSV report to this path");

  // search
  auto* search = app.add_subcommand("search", "Local search for low-epsilon codes");
  FieldArgs search_field;
  pmd::SearchConfig cfg;
  double search_target = 0.0;
  unsigned search_workers = 1;
  std::string search_json, search_csv;
  add_field_options(search, search_field);
  search->add_option("-n", cfg.n, "number of qudits");
  search->add_option("-k", cfg.k, "logical qudits");
  search->add_option("--seed", cfg.seed, "base seed (default 0)");
  search->add_option("--restarts", cfg.restarts, "independent restarts (default 8)");
  search->add_option("--steps", cfg.local_steps, "local steps per restart (default 500)");
  search->add_option("--initial-step", cfg.initial_step, "perturbation size (default 0.3)");
  search->add_option("--step-decay", cfg.step_decay, "decay on rejection streaks (default 0.7)");
  search->add_option("--target", search_target, "stop a restart at this epsilon");
  search->add_option("--workers", search_workers, "parallel restarts (default 1)");
  search->add_option("--json", search_json, "write a JSON report to this path");
  search->add_option("--csv", search_csv, "write the trajectory CSV to this path");

  // gap
  auto* gap = app.add_subcommand("gap", "Compare the known construction against the bound");
  FieldArgs gap_field;
  unsigned gap_n = 0, gap_ell = 0;
  std::string gap_json, gap_csv;
  add_field_options(gap, gap_field);
  gap->add_option("-n", gap_n, "number of qudits");
  gap->add_option("-l,--ell", gap_ell, "construction parameter ell");
  gap->add_option("--json", gap_json, "write a JSON report to this path");
  gap->add_option("--csv", gap_csv, "write a one-row CSV report to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*bound)
      return run_bound(bound, bound_field, bound_n, bound_lambda, bound_epsilon, bound_json);
    if (*verify) return run_verify(verify_file, verify_workers, verify_json, verify_csv);
    if (*design)
      return run_design_check(design, design_field, design_n, design_trials, design_seed,
                              design_json, design_csv);
    if (*search)
      return run_search(search, search_field, cfg, search_target, search_workers, search_json,
                        search_csv);
    if (*gap) return run_gap(gap, gap_field, gap_n, gap_ell, gap_json, gap_csv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
