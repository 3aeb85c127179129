#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmd/codespace.hpp"
#include "pmd/metrics.hpp"

namespace pmd {

struct SearchConfig {
  unsigned n = 1;
  unsigned k = 0;
  std::uint64_t q = 2;          // prime power p^m
  std::uint64_t seed = 0;
  unsigned restarts = 8;        // independent random starts, >= 1
  unsigned local_steps = 500;   // perturbation steps per restart
  double initial_step = 0.3;    // Gaussian perturbation magnitude
  double step_decay = 0.7;      // applied after 10 consecutive rejections, in (0,1)
  std::optional<double> target; // a restart stops once epsilon <= target + 1e-6
};

struct SearchResult {
  CodeSpace best;
  PmdReport report;
  // Global running minimum: (iteration, epsilon), strictly decreasing in
  // epsilon. Iteration r*(local_steps+1) + t is step t of restart r.
  std::vector<std::pair<std::uint64_t, double>> trajectory;
};

// Multi-restart local search for low-epsilon codes. Restart i draws its
// start and all its moves from the seed splitmix64(seed ^ (i+1)*2^64/phi),
// so runs are reproducible and restarts can execute in parallel without
// changing the result. A move adds step * Gaussian noise to the basis and
// re-orthonormalizes; only strict decreases of epsilon are accepted. Every
// evaluated epsilon is checked against the proven lower bound; undercutting
// it by more than 1e-9 raises std::logic_error.
SearchResult optimize_epsilon(const SearchConfig& cfg, unsigned workers = 1);

// max(|<X>|, |<Z>|, |<XZ>|) for the Bloch state with polar angle theta and
// azimuth phi: the exact error parameter of that one-dimensional code.
double bloch_epsilon(double theta, double phi);

struct BlochGridResult {
  double min_epsilon = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

// Brute-force grid oracle for the single-qubit, k=0 case: theta sweeps
// [0, pi] with `resolution` points including both ends, phi sweeps [0, 2 pi)
// with `resolution` points. Returns the grid minimum and the first argmin in
// scan order. Requires resolution >= 2.
BlochGridResult bloch_grid_oracle(unsigned resolution);

// Trajectory rows as "iteration,epsilon" CSV, one header line included.
std::string trajectory_csv(const std::vector<std::pair<std::uint64_t, double>>& trajectory);

}  // namespace pmd
