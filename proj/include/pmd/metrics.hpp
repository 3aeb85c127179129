#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "pmd/codespace.hpp"
#include "pmd/pauli.hpp"

namespace pmd {

// Largest singular value of m.  Uses a Hermitian eigendecomposition of
// m^dagger m up to dimension 64 and a deterministic power iteration above
// that (relative tolerance 1e-12, at most 10^4 iterations).  Throws
// std::invalid_argument on non-finite entries and std::runtime_error when
// the iteration fails to converge.
double operator_norm(const Eigen::MatrixXcd& m);

// C^dagger E C for the code isometry C and the Pauli operator E named by
// `label`.  The result is q^k by q^k; its operator norm equals the norm of
// the compressed operator Pi E Pi on the full space.
Eigen::MatrixXcd reduced_error_matrix(const CodeSpace& cs, const PauliLabel& label);

struct EpsilonScan {
  double epsilon = 0.0;             // max norm over the q^{2n}-1 nontrivial Paulis
  std::uint64_t worst_index = 0;    // enumeration index of the first maximiser
  PauliLabel worst_label;
  double mean_square = 0.0;         // (1/q^{2n}) sum over all Paulis of norm^2
};

// Exhaustive scan over every Pauli label.  Results are bit-identical for
// any worker count: labels are processed in fixed chunks of 4096 and the
// partial results are folded in chunk order.  Ties in the max are broken
// toward the smaller enumeration index.
EpsilonScan epsilon_scan(const CodeSpace& cs, unsigned workers = 1);

// The error parameter of the code together with the label that attains it.
std::pair<double, PauliLabel> epsilon_of(const CodeSpace& cs);

// |<psi1| E^dagger |psi2>| for two unit states inside the code space.
// Throws std::invalid_argument when a state is not normalised or lies
// outside the span of the code basis (tolerance 1e-9).  The value never
// exceeds the code's error parameter (up to 1e-9).
double orthogonality_witness(const CodeSpace& cs, const PauliLabel& label,
                             const Eigen::VectorXcd& psi1, const Eigen::VectorXcd& psi2);

// Deviation of the Pauli average from the depolarising value:
// || (1/q^{2n}) sum_E E o E^dagger  -  (tr o / q^n) I ||.
// Zero (up to roundoff) because the Pauli group is a unitary 1-design.
double design_average_check(const FieldCtxPtr& field, unsigned n, const Eigen::MatrixXcd& o);

struct AverageOverlap {
  double value = 0.0;      // || (1/q^{2n}) sum_E Pi E^dagger Pi E Pi ||, equals q^{-lambda}
  double deviation = 0.0;  // distance of the averaged operator from q^{-lambda} Pi
};

AverageOverlap average_overlap(const CodeSpace& cs, unsigned workers = 1);

// sqrt((q^{2n-lambda} - 1) / (q^{2n} - 1)), evaluated with exact integer
// powers so large parameters do not overflow.  Requires 0 <= lambda <= n
// and q a prime power; lambda == 0 returns exactly 1.
double theorem1_bound(unsigned n, unsigned lambda, std::uint64_t q);

// Minimum number of check qudits implied by a target error parameter:
// 2 log_q(1/epsilon) - log_q 2.  Requires 0 < epsilon <= 1.
double corollary1_bound(double epsilon, std::uint64_t q);

struct BergamaschiGap {
  double lambda_construction = 0.0;  // 2*ell check qudits used by the construction
  double epsilon_upper = 0.0;        // sqrt((2n+1) q^{-ell}) guaranteed error parameter
  double lambda_lower = 0.0;         // ell - log_q(2(2n+1)) implied lower bound
  double gap = 0.0;                  // lambda_construction - lambda_lower
  bool out_of_regime = false;        // epsilon_upper >= 1: the guarantee is vacuous
};

// Compares the known explicit construction against the converse bound.
BergamaschiGap bergamaschi_gap(unsigned n, unsigned ell, std::uint64_t q);

struct PmdReport {
  unsigned n = 0;
  unsigned k = 0;
  std::uint64_t q = 0;
  unsigned lambda = 0;
  double epsilon = 0.0;
  PauliLabel worst_label;
  double bound_theorem1 = 0.0;
  double slack = 0.0;                 // epsilon - bound_theorem1, >= 0 up to roundoff
  double corollary_lambda_min = 0.0;  // corollary1_bound at the measured epsilon
  bool eps_floor_ok = false;          // epsilon >= q^{-n} (up to 1e-9)
};

// Full evaluation of one code.  Throws std::logic_error when the measured
// epsilon undercuts the proven lower bound by more than 1e-9, which can
// only mean a bug.
PmdReport make_pmd_report(const CodeSpace& cs, unsigned workers = 1);

struct DesignCheckReport {
  double moment_deviation = 0.0;   // worst design_average_check deviation seen
  double overlap_deviation = 0.0;  // worst average_overlap deviation seen
  double overlap_value = 0.0;      // overlap value of the worst-deviation run
};

}  // namespace pmd
