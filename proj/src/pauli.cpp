#include "pmd/pauli.hpp"

#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pmd/limits.hpp"

namespace pmd {

namespace {

std::vector<std::complex<double>> make_omega_table(Fp p) {
  std::vector<std::complex<double>> w(p);
  for (Fp e = 0; e < p; ++e) w[e] = std::polar(1.0, 2.0 * std::numbers::pi * e / p);
  return w;
}

std::uint64_t pow_checked(std::uint64_t base, unsigned e, std::uint64_t limit, const char* what) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > limit / base) throw std::invalid_argument(what);
    r *= base;
  }
  if (r > limit) throw std::invalid_argument(what);
  return r;
}

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& m, Fp e) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  for (Fp i = 0; i < e; ++i) r = r * m;
  return r;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

}  // namespace

unsigned label_qudits(const PauliLabel& label) {
  if (label.a.empty() || label.a.size() != label.b.size())
    throw std::invalid_argument("label needs equal, non-empty shift and phase parts");
  for (const auto& e : label.a) {
    if (!e.ctx()) throw std::invalid_argument("label element without field context");
    (void)field_add(label.a[0], e);
  }
  for (const auto& e : label.b) (void)field_add(label.a[0], e);
  return static_cast<unsigned>(label.a.size());
}

bool is_identity(const PauliLabel& label) {
  label_qudits(label);
  for (const auto& e : label.a)
    if (!e.is_zero()) return false;
  for (const auto& e : label.b)
    if (!e.is_zero()) return false;
  return true;
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> weyl_matrices(Fp p) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (p > dense_dim_limit()) throw std::invalid_argument("dimension exceeds the dense limit (PMD_MAX_DIM)");
  auto w = make_omega_table(p);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(p, p);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(p, p);
  for (Fp x = 0; x < p; ++x) {
    t((x + p - 1) % p, x) = 1.0;
    r(x, x) = w[x];
  }
  return {std::move(t), std::move(r)};
}

Eigen::MatrixXcd pauli_matrix(const PauliLabel& label) {
  unsigned n = label_qudits(label);
  const auto& F = label.a[0].ctx();
  const Fp p = F->p();
  const unsigned m = F->m();
  pow_checked(F->q(), n, dense_dim_limit(), "dimension exceeds the dense limit (PMD_MAX_DIM)");

  auto [t, r] = weyl_matrices(p);
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Identity(1, 1);
  for (unsigned j = 0; j < n; ++j) {
    // Phase exponent tr(b y) is linear in the coefficients of y; its
    // coefficient vector d is the Gram image of b, which makes the phase part
    // a tensor product of clock powers prime subsystem by prime subsystem.
    std::vector<Fp> d(m, 0);
    for (unsigned l = 0; l < m; ++l) {
      std::uint64_t s = 0;
      for (unsigned k = 0; k < m; ++k)
        s += static_cast<std::uint64_t>(label.b[j].coeffs()[k]) * F->trace_of_power(k + l) % p;
      d[l] = static_cast<Fp>(s % p);
    }
    for (unsigned l = 0; l < m; ++l) {
      Eigen::MatrixXcd factor = matrix_power(t, label.a[j].coeffs()[l]) * matrix_power(r, d[l]);
      total = kron(total, factor);
    }
  }
  return total;
}

PauliAction::PauliAction(const PauliLabel& label) {
  unsigned n = label_qudits(label);
  const auto& F = label.a[0].ctx();
  p_ = F->p();
  const std::uint64_t q = F->q();
  const std::uint64_t dim = pow_checked(q, n, kEnumerationLimit, "dimension exceeds the enumeration limit");

  perm_.resize(dim);
  inv_perm_.resize(dim);
  exp_.resize(dim);
  omega_ = make_omega_table(p_);

  for (std::uint64_t v = 0; v < dim; ++v) {
    std::uint64_t rest = v;
    std::uint64_t divisor = dim;
    std::uint64_t target = 0;
    std::uint64_t e = 0;
    for (unsigned j = 0; j < n; ++j) {
      divisor /= q;
      std::uint64_t yj = rest / divisor;
      rest %= divisor;
      FieldElement y = F->element_from_index(yj);
      target = target * q + field_sub(y, label.a[j]).index();
      e += field_trace(field_mul(label.b[j], y));
    }
    perm_[v] = static_cast<std::size_t>(target);
    inv_perm_[target] = static_cast<std::size_t>(v);
    exp_[v] = static_cast<Fp>(e % p_);
  }
}

Eigen::VectorXcd apply_pauli(const PauliAction& action, const Eigen::VectorXcd& v) {
  if (static_cast<std::size_t>(v.size()) != action.dim())
    throw std::invalid_argument("vector dimension does not match the action");
  Eigen::VectorXcd out(v.size());
  for (std::size_t y = 0; y < action.dim(); ++y)
    out[static_cast<Eigen::Index>(action.perm()[y])] =
        action.omega(action.exponents()[y]) * v[static_cast<Eigen::Index>(y)];
  return out;
}

Eigen::MatrixXcd apply_pauli(const PauliAction& action, const Eigen::MatrixXcd& m) {
  if (static_cast<std::size_t>(m.rows()) != action.dim())
    throw std::invalid_argument("matrix row count does not match the action");
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t y = 0; y < action.dim(); ++y)
    out.row(static_cast<Eigen::Index>(action.perm()[y])) =
        action.omega(action.exponents()[y]) * m.row(static_cast<Eigen::Index>(y));
  return out;
}

Eigen::VectorXcd apply_pauli(const PauliLabel& label, const Eigen::VectorXcd& v) {
  return apply_pauli(PauliAction(label), v);
}

Fp commutation_phase(const PauliLabel& e1, const PauliLabel& e2) {
  unsigned n1 = label_qudits(e1);
  unsigned n2 = label_qudits(e2);
  if (n1 != n2) throw std::invalid_argument("labels act on different qudit counts");
  const Fp p = e1.a[0].ctx()->p();
  std::uint64_t c = 0;
  for (unsigned j = 0; j < n1; ++j) {
    c += inner_product(e1.a[j], e2.b[j]);
    c += p - inner_product(e2.a[j], e1.b[j]);
  }
  return static_cast<Fp>(c % p);
}

PauliEnumerator::PauliEnumerator(FieldCtxPtr field, unsigned n) : field_(std::move(field)), n_(n) {
  if (!field_) throw std::invalid_argument("enumerator requires a field");
  if (n_ < 1) throw std::invalid_argument("n must be at least 1");
  size_ = pow_checked(field_->q(), 2 * n_, kEnumerationLimit, "label count exceeds the enumeration limit");
  dim_ = pow_checked(field_->q(), n_, kEnumerationLimit, "dimension exceeds the enumeration limit");
}

PauliLabel PauliEnumerator::label(std::uint64_t index) const {
  if (index >= size_) throw std::invalid_argument("label index out of range");
  std::uint64_t a_idx = index % dim_;
  std::uint64_t b_idx = index / dim_;
  PauliLabel out;
  out.a.reserve(n_);
  out.b.reserve(n_);
  std::uint64_t divisor = dim_;
  const std::uint64_t q = field_->q();
  for (unsigned j = 0; j < n_; ++j) {
    divisor /= q;
    out.a.push_back(field_->element_from_index(a_idx / divisor));
    out.b.push_back(field_->element_from_index(b_idx / divisor));
    a_idx %= divisor;
    b_idx %= divisor;
  }
  return out;
}

std::string label_to_string(const PauliLabel& label) {
  label_qudits(label);
  std::ostringstream os;
  os << "a=(";
  for (std::size_t j = 0; j < label.a.size(); ++j) {
    if (j) os << ',';
    os << to_string(label.a[j]);
  }
  os << ");b=(";
  for (std::size_t j = 0; j < label.b.size(); ++j) {
    if (j) os << ',';
    os << to_string(label.b[j]);
  }
  os << ')';
  return os.str();
}

}
