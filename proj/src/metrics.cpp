#include "pmd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pmd/limits.hpp"
#include "pmd/parallel.hpp"
#include "pmd/report_io.hpp"
#include "pmd/rng.hpp"

namespace pmd {

namespace {

constexpr std::uint64_t kScanChunk = 4096;

std::uint64_t upow(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  while (e--) {
    if (base != 0 && r > kEnumerationLimit / base)
      throw std::invalid_argument("size exceeds the enumeration limit");
    r *= base;
  }
  return r;
}

// Largest eigenvalue of m^dagger m by power iteration with a Rayleigh
// quotient stop. The start vector comes from a fixed-seed generator, so the
// result is reproducible.
double power_norm(const Eigen::MatrixXcd& m) {
  const Eigen::Index d = m.cols();
  Rng rng(0x9e3779b97f4a7c15ull);
  Eigen::VectorXcd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.next_complex_gaussian();
  v /= v.norm();
  double prev = -1.0;
  for (int iter = 0; iter < 10000; ++iter) {
    Eigen::VectorXcd w = m * v;
    const double lam = w.squaredNorm();  // v^dagger (M^dagger M) v for unit v
    if (lam == 0.0) {
      // v landed in the kernel; restart from a fresh direction.
      for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.next_complex_gaussian();
      v /= v.norm();
      prev = -1.0;
      continue;
    }
    if (prev >= 0.0 && std::abs(lam - prev) <= 1e-12 * lam) return std::sqrt(lam);
    prev = lam;
    Eigen::VectorXcd hv = m.adjoint() * w;
    const double nh = hv.norm();
    if (nh == 0.0) return std::sqrt(lam);
    v = hv / nh;
  }
  throw std::runtime_error("operator_norm: power iteration did not converge");
}

struct ScanPartial {
  double best = -1.0;
  std::uint64_t best_index = 0;
  double sum_squares = 0.0;
};

double q_pow_minus(std::uint64_t q, unsigned e) { return 1.0 / double(upow(q, e)); }

// Unsigned big integer, little-endian base-2^32 limbs. Just enough for the
// exact powers inside the bound radical.
class BigUInt {
 public:
  static BigUInt one() {
    BigUInt b;
    b.limbs_ = {1};
    return b;
  }

  void mul_small(std::uint32_t f) {
    std::uint64_t carry = 0;
    for (auto& l : limbs_) {
      const std::uint64_t t = std::uint64_t(l) * f + carry;
      l = static_cast<std::uint32_t>(t);
      carry = t >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  }

  void sub_one() {
    for (auto& l : limbs_) {
      if (l != 0) {
        --l;
        break;
      }
      l = 0xffffffffu;
    }
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }

  bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

  // value ~= mantissa * 2^exp with mantissa in [2^63, 2^64) as a double;
  // truncation keeps the relative error below 2^-63.
  std::pair<double, long> to_mantissa_exp2() const {
    int i = static_cast<int>(limbs_.size()) - 1;
    unsigned __int128 w = limbs_[static_cast<std::size_t>(i)];
    long lsb = 32L * i;
    while (i > 0 && (w >> 64) == 0) {
      --i;
      w = (w << 32) | limbs_[static_cast<std::size_t>(i)];
      lsb -= 32;
    }
    while ((w >> 64) != 0) {
      w >>= 1;
      ++lsb;
    }
    return {double(static_cast<std::uint64_t>(w)), lsb};
  }

 private:
  std::vector<std::uint32_t> limbs_;
};

BigUInt big_power(Fp p, unsigned m, unsigned e) {
  BigUInt b = BigUInt::one();
  const unsigned long long steps = static_cast<unsigned long long>(m) * e;
  for (unsigned long long s = 0; s < steps; ++s) b.mul_small(p);
  return b;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw std::invalid_argument("operator_norm: matrix has non-finite entries");
  if (m.cols() <= 64) {
    const Eigen::MatrixXcd h = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("operator_norm: eigendecomposition failed");
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  if (m.squaredNorm() == 0.0) return 0.0;
  return power_norm(m);
}

Eigen::MatrixXcd reduced_error_matrix(const CodeSpace& cs, const PauliLabel& label) {
  if (!cs.field) throw std::invalid_argument("reduced_error_matrix: code space has no field");
  const unsigned qudits = label_qudits(label);
  if (qudits != cs.n || !fields_compatible(label.a.front().ctx(), cs.field))
    throw std::invalid_argument("reduced_error_matrix: label does not match the code space");
  PauliAction action(label);
  if (static_cast<Eigen::Index>(action.dim()) != cs.basis.rows())
    throw std::invalid_argument("reduced_error_matrix: dimension mismatch");
  return cs.basis.adjoint() * apply_pauli(action, cs.basis);
}

EpsilonScan epsilon_scan(const CodeSpace& cs, unsigned workers) {
  const PauliEnumerator en(cs.field, cs.n);
  const std::uint64_t total = en.size();

  auto map = [&](std::uint64_t begin, std::uint64_t end) {
    ScanPartial part;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const double norm = operator_norm(reduced_error_matrix(cs, en.label(idx)));
      part.sum_squares += norm * norm;
      if (idx != 0 && norm > part.best) {
        part.best = norm;
        part.best_index = idx;
      }
    }
    return part;
  };
  auto combine = [](ScanPartial acc, const ScanPartial& p) {
    acc.sum_squares += p.sum_squares;  // chunk order, so the sum is reproducible
    if (p.best > acc.best) {           // ties keep the earlier chunk's index
      acc.best = p.best;
      acc.best_index = p.best_index;
    }
    return acc;
  };

  const ScanPartial acc = chunked_reduce<ScanPartial>(total, kScanChunk, workers, ScanPartial{}, map, combine);
  EpsilonScan out;
  out.epsilon = acc.best;
  out.worst_index = acc.best_index;
  out.worst_label = en.label(acc.best_index);
  out.mean_square = acc.sum_squares / double(total);
  return out;
}

std::pair<double, PauliLabel> epsilon_of(const CodeSpace& cs) {
  EpsilonScan scan = epsilon_scan(cs, 1);
  return {scan.epsilon, std::move(scan.worst_label)};
}

double orthogonality_witness(const CodeSpace& cs, const PauliLabel& label,
                             const Eigen::VectorXcd& psi1, const Eigen::VectorXcd& psi2) {
  if (psi1.size() != cs.basis.rows() || psi2.size() != cs.basis.rows())
    throw std::invalid_argument("orthogonality_witness: state dimension mismatch");
  for (const Eigen::VectorXcd* psi : {&psi1, &psi2}) {
    if (!psi->allFinite())
      throw std::invalid_argument("orthogonality_witness: state has non-finite entries");
    if (std::abs(psi->norm() - 1.0) > 1e-9)
      throw std::invalid_argument("orthogonality_witness: state is not a unit vector");
    const Eigen::VectorXcd proj = cs.basis * (cs.basis.adjoint() * (*psi));
    if ((*psi - proj).norm() > 1e-9)
      throw std::invalid_argument("orthogonality_witness: state lies outside the code space");
  }
  PauliAction action(label);
  if (static_cast<Eigen::Index>(action.dim()) != cs.basis.rows())
    throw std::invalid_argument("orthogonality_witness: label does not match the code space");
  // (E psi1)^dagger psi2 = <psi1| E^dagger |psi2>
  return std::abs(apply_pauli(action, psi1).dot(psi2));
}

double design_average_check(const FieldCtxPtr& field, unsigned n, const Eigen::MatrixXcd& o) {
  if (!field) throw std::invalid_argument("design_average_check: null field context");
  if (n == 0) throw std::invalid_argument("design_average_check: n must be at least 1");
  const PauliEnumerator en(field, n);
  const std::uint64_t d = en.dim();
  if (d > dense_dim_limit())
    throw std::invalid_argument("dimension exceeds the dense limit (PMD_MAX_DIM)");
  if (o.rows() != static_cast<Eigen::Index>(d) || o.cols() != static_cast<Eigen::Index>(d))
    throw std::invalid_argument("design_average_check: operator must be q^n by q^n");
  if (!o.allFinite())
    throw std::invalid_argument("design_average_check: operator has non-finite entries");

  const Eigen::Index di = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd accum = Eigen::MatrixXcd::Zero(di, di);
  for (std::uint64_t idx = 0; idx < en.size(); ++idx) {
    const PauliAction act(en.label(idx));
    const auto& inv = act.inv_perm();
    const auto& e = act.exponents();
    const Fp p = act.p();
    // (E o E^dagger)[u][v] = omega^{e[inv u] - e[inv v]} o[inv u][inv v]
    for (Eigen::Index v = 0; v < di; ++v) {
      const std::size_t sv = inv[static_cast<std::size_t>(v)];
      const Fp ev = e[sv];
      for (Eigen::Index u = 0; u < di; ++u) {
        const std::size_t su = inv[static_cast<std::size_t>(u)];
        const Fp de = (e[su] + p - ev) % p;
        accum(u, v) += act.omega(de) * o(static_cast<Eigen::Index>(su), static_cast<Eigen::Index>(sv));
      }
    }
  }
  accum /= double(en.size());
  accum -= (o.trace() / double(d)) * Eigen::MatrixXcd::Identity(di, di);
  return operator_norm(accum);
}

AverageOverlap average_overlap(const CodeSpace& cs, unsigned workers) {
  const PauliEnumerator en(cs.field, cs.n);
  const std::uint64_t total = en.size();
  const Eigen::Index dk = cs.basis.cols();
  using Mat = Eigen::MatrixXcd;

  auto map = [&](std::uint64_t begin, std::uint64_t end) {
    Mat part = Mat::Zero(dk, dk);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const Mat m = reduced_error_matrix(cs, en.label(idx));
      part.noalias() += m.adjoint() * m;
    }
    return part;
  };
  auto combine = [](Mat acc, const Mat& p) {
    acc += p;
    return acc;
  };

  Mat acc = chunked_reduce<Mat>(total, kScanChunk, workers, Mat::Zero(dk, dk).eval(), map, combine);
  acc /= double(total);

  const double target = q_pow_minus(cs.field->q(), cs.lambda());
  AverageOverlap out;
  out.value = operator_norm(acc);
  out.deviation = operator_norm(acc - target * Mat::Identity(dk, dk));
  return out;
}

double theorem1_bound(unsigned n, unsigned lambda, std::uint64_t q) {
  const auto [p, m] = factor_prime_power(q);
  if (n == 0) throw std::invalid_argument("theorem1_bound: n must be at least 1");
  if (lambda > n) throw std::invalid_argument("theorem1_bound: lambda must not exceed n");
  if (n > 10000) throw std::invalid_argument("theorem1_bound: n is too large");
  if (lambda == 0) return 1.0;

  BigUInt num = big_power(p, m, 2 * n - lambda);
  num.sub_one();
  BigUInt den = big_power(p, m, 2 * n);
  den.sub_one();
  const auto [xn, en] = num.to_mantissa_exp2();
  const auto [xd, ed] = den.to_mantissa_exp2();
  return std::sqrt(xn / xd) * std::exp2(double(en - ed) / 2.0);
}

double corollary1_bound(double epsilon, std::uint64_t q) {
  factor_prime_power(q);
  if (!(epsilon > 0.0) || !(epsilon <= 1.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("corollary1_bound: epsilon must lie in (0, 1]");
  const double lq = std::log(double(q));
  return (-2.0 * std::log(epsilon) - std::log(2.0)) / lq;
}

BergamaschiGap bergamaschi_gap(unsigned n, unsigned ell, std::uint64_t q) {
  factor_prime_power(q);
  if (n == 0 || ell == 0)
    throw std::invalid_argument("bergamaschi_gap: n and ell must be at least 1");
  BergamaschiGap g;
  g.lambda_construction = 2.0 * double(ell);
  const double lq = std::log(double(q));
  g.epsilon_upper = std::sqrt((2.0 * double(n) + 1.0) * std::pow(double(q), -double(ell)));
  g.lambda_lower = double(ell) - std::log(2.0 * (2.0 * double(n) + 1.0)) / lq;
  g.gap = g.lambda_construction - g.lambda_lower;
  g.out_of_regime = g.epsilon_upper >= 1.0;
  return g;
}

PmdReport make_pmd_report(const CodeSpace& cs, unsigned workers) {
  const EpsilonScan scan = epsilon_scan(cs, workers);
  PmdReport r;
  r.n = cs.n;
  r.k = cs.k;
  r.q = cs.field->q();
  r.lambda = cs.lambda();
  r.epsilon = scan.epsilon;
  r.worst_label = scan.worst_label;
  r.bound_theorem1 = theorem1_bound(cs.n, r.lambda, r.q);
  r.slack = r.epsilon - r.bound_theorem1;
  if (r.slack < -1e-9)
    throw std::logic_error("epsilon undercuts the proven lower bound: implementation bug");
  if (r.epsilon > 1.0 + 1e-9)
    throw std::logic_error("epsilon exceeds 1: implementation bug");
  r.corollary_lambda_min = corollary1_bound(std::min(r.epsilon, 1.0), r.q);
  r.eps_floor_ok = r.epsilon + 1e-9 >= q_pow_minus(r.q, cs.n);
  return r;
}

nlohmann::json report_json(const PmdReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["q"] = r.q;
  j["lambda"] = r.lambda;
  j["epsilon"] = r.epsilon;
  j["worst_label"] = label_to_string(r.worst_label);
  j["bound_theorem1"] = r.bound_theorem1;
  j["slack"] = r.slack;
  j["corollary_lambda_min"] = r.corollary_lambda_min;
  j["eps_floor_ok"] = r.eps_floor_ok;
  return j;
}

nlohmann::json report_json(const DesignCheckReport& r) {
  nlohmann::json j;
  j["moment_deviation"] = r.moment_deviation;
  j["overlap_deviation"] = r.overlap_deviation;
  j["overlap_value"] = r.overlap_value;
  return j;
}

nlohmann::json report_json(const BergamaschiGap& g) {
  nlohmann::json j;
  j["lambda_construction"] = g.lambda_construction;
  j["epsilon_upper"] = g.epsilon_upper;
  j["lambda_lower"] = g.lambda_lower;
  j["gap"] = g.gap;
  j["out_of_regime"] = g.out_of_regime;
  return j;
}

std::string report_csv(const PmdReport& r) {
  std::string s = "n,k,q,lambda,epsilon,worst_label,bound_theorem1,slack,corollary_lambda_min,eps_floor_ok\n";
  s += std::to_string(r.n) + "," + std::to_string(r.k) + "," + std::to_string(r.q) + "," +
       std::to_string(r.lambda) + "," + fmt_double(r.epsilon) + ",\"" +
       label_to_string(r.worst_label) + "\"," + fmt_double(r.bound_theorem1) + "," +
       fmt_double(r.slack) + "," + fmt_double(r.corollary_lambda_min) + "," +
       (r.eps_floor_ok ? "true" : "false") + "\n";
  return s;
}

std::string report_csv(const DesignCheckReport& r) {
  std::string s = "moment_deviation,overlap_deviation,overlap_value\n";
  s += fmt_double(r.moment_deviation) + "," + fmt_double(r.overlap_deviation) + "," +
       fmt_double(r.overlap_value) + "\n";
  return s;
}

std::string report_csv(const BergamaschiGap& g) {
  std::string s = "lambda_construction,epsilon_upper,lambda_lower,gap,out_of_regime\n";
  s += fmt_double(g.lambda_construction) + "," + fmt_double(g.epsilon_upper) + "," +
       fmt_double(g.lambda_lower) + "," + fmt_double(g.gap) + "," +
       (g.out_of_regime ? "true" : "false") + "\n";
  return s;
}

}  // namespace pmd
