#include "pmd/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pmd/parallel.hpp"
#include "pmd/pauli.hpp"
#include "pmd/rng.hpp"

namespace pmd {

namespace {

struct RestartRun {
  double epsilon = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd basis;
  std::vector<std::pair<std::uint64_t, double>> traj;  // (local step, epsilon so far)
};

Eigen::MatrixXcd gaussian_like(const Eigen::MatrixXcd& shape, Rng& rng) {
  Eigen::MatrixXcd g(shape.rows(), shape.cols());
  for (Eigen::Index c = 0; c < g.cols(); ++c)
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = rng.next_complex_gaussian();
  return g;
}

}  // namespace

SearchResult optimize_epsilon(const SearchConfig& cfg, unsigned workers) {
  if (cfg.restarts < 1)
    throw std::invalid_argument("optimize_epsilon: restarts must be at least 1");
  if (!(cfg.step_decay > 0.0) || !(cfg.step_decay < 1.0))
    throw std::invalid_argument("optimize_epsilon: step_decay must lie in (0, 1)");
  if (!(cfg.initial_step > 0.0) || !std::isfinite(cfg.initial_step))
    throw std::invalid_argument("optimize_epsilon: initial_step must be positive");
  if (cfg.n < 1) throw std::invalid_argument("optimize_epsilon: n must be at least 1");
  if (cfg.k > cfg.n) throw std::invalid_argument("optimize_epsilon: k must not exceed n");

  const auto [p, m] = factor_prime_power(cfg.q);
  auto field = make_field(p, m);
  {
    const PauliEnumerator preflight(field, cfg.n);  // enforces the enumeration limit
    (void)preflight;
  }

  const unsigned lambda = cfg.n - cfg.k;
  const double bound = theorem1_bound(cfg.n, lambda, cfg.q);
  const double floor = bound - 1e-9;

  auto checked = [floor](double eps) {
    if (eps < floor)
      throw std::logic_error("optimize_epsilon: epsilon beat the proven lower bound: implementation bug");
    return eps;
  };
  auto eval = [&](Eigen::MatrixXcd basis) {
    CodeSpace cs = make_codespace(field, cfg.n, cfg.k, std::move(basis));
    return checked(epsilon_scan(cs, 1).epsilon);
  };

  auto run_restart = [&](unsigned r) {
    // Fixed, documented per-restart seed: splitmix64 of the config seed
    // xor'd with (r+1) times the 64-bit golden-ratio constant.
    const std::uint64_t seed_r =
        splitmix64(cfg.seed ^ ((std::uint64_t(r) + 1) * 0x9e3779b97f4a7c15ull));
    CodeSpace start = random_codespace(field, cfg.n, cfg.k, seed_r);
    Rng moves(splitmix64(seed_r));  // move stream, decoupled from the start draw

    RestartRun run;
    Eigen::MatrixXcd cur = start.basis;
    run.epsilon = checked(epsilon_scan(start, 1).epsilon);
    run.traj.emplace_back(0, run.epsilon);

    double step = cfg.initial_step;
    unsigned rejects = 0;
    auto target_reached = [&]() { return cfg.target && run.epsilon <= *cfg.target + 1e-6; };

    for (unsigned t = 1; t <= cfg.local_steps && !target_reached(); ++t) {
      double cand_eps = std::numeric_limits<double>::infinity();
      Eigen::MatrixXcd cand;
      try {
        cand = modified_gram_schmidt(cur + step * gaussian_like(cur, moves));
        cand_eps = eval(cand);
      } catch (const std::invalid_argument&) {
        // Degenerate perturbation; treat as a rejected move.
      }
      if (cand_eps < run.epsilon) {
        cur = std::move(cand);
        run.epsilon = cand_eps;
        rejects = 0;
      } else if (++rejects == 10) {
        step *= cfg.step_decay;
        rejects = 0;
      }
      run.traj.emplace_back(t, run.epsilon);
    }
    run.basis = std::move(cur);
    return run;
  };

  using Runs = std::vector<RestartRun>;
  Runs runs = chunked_reduce<Runs>(
      cfg.restarts, 1, workers, Runs{},
      [&](std::uint64_t begin, std::uint64_t end) {
        Runs part;
        for (std::uint64_t r = begin; r < end; ++r) part.push_back(run_restart(unsigned(r)));
        return part;
      },
      [](Runs acc, Runs part) {
        for (auto& run : part) acc.push_back(std::move(run));
        return acc;
      });

  std::size_t best_r = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].epsilon < runs[best_r].epsilon) best_r = r;  // ties keep the lower index

  SearchResult out;
  const std::uint64_t span = std::uint64_t(cfg.local_steps) + 1;
  double seen = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < runs.size(); ++r)
    for (const auto& [t, e] : runs[r].traj)
      if (e < seen) {
        seen = e;
        out.trajectory.emplace_back(std::uint64_t(r) * span + t, e);
      }

  out.best = make_codespace(field, cfg.n, cfg.k, std::move(runs[best_r].basis));
  out.report = make_pmd_report(out.best, workers);
  return out;
}

double bloch_epsilon(double theta, double phi) {
  const double st = std::sin(theta);
  const double x = std::abs(st * std::cos(phi));   // shift operator
  const double z = std::abs(std::cos(theta));      // phase operator
  const double xz = std::abs(st * std::sin(phi));  // their product
  return std::max({x, z, xz});
}

BlochGridResult bloch_grid_oracle(unsigned resolution) {
  if (resolution < 2)
    throw std::invalid_argument("bloch_grid_oracle: resolution must be at least 2");
  BlochGridResult best;
  best.min_epsilon = 2.0;
  const double pi = std::numbers::pi;
  for (unsigned i = 0; i < resolution; ++i) {
    const double theta = pi * double(i) / double(resolution - 1);
    for (unsigned j = 0; j < resolution; ++j) {
      const double phi = 2.0 * pi * double(j) / double(resolution);
      const double e = bloch_epsilon(theta, phi);
      if (e < best.min_epsilon) {
        best.min_epsilon = e;
        best.theta = theta;
        best.phi = phi;
      }
    }
  }
  return best;
}

std::string trajectory_csv(const std::vector<std::pair<std::uint64_t, double>>& trajectory) {
  std::string s = "iteration,epsilon\n";
  char buf[64];
  for (const auto& [it, eps] : trajectory) {
    std::snprintf(buf, sizeof(buf), "%llu,%.17g\n", static_cast<unsigned long long>(it), eps);
    s += buf;
  }
  return s;
}

}  // namespace pmd
