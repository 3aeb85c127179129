#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pmd/finite_field.hpp"

namespace pmd {

// Label (a, b) of a generalized Pauli operator on n qudits of dimension q:
// the shift part a and the phase part b, one field element per qudit.
// The operator acts as E_{a,b} |y> = omega^{sum_j tr(b_j y_j)} |y - a>
// with omega = exp(2 pi i / p).
struct PauliLabel {
  std::vector<FieldElement> a;
  std::vector<FieldElement> b;
};

// Validates a label (non-empty, equal lengths, one common field) and returns
// the number of qudits.
unsigned label_qudits(const PauliLabel& label);

bool is_identity(const PauliLabel& label);

// Prime-dimensional generators: the cyclic shift T with T|x> = |x-1 mod p>
// and the clock R = diag(omega^x). Returned as (T, R).
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> weyl_matrices(Fp p);

// Dense q^n x q^n matrix of E_{a,b}, assembled as a Kronecker product of
// prime-dimensional T and R powers across all n*m prime subsystems. Subject
// to dense_dim_limit().
Eigen::MatrixXcd pauli_matrix(const PauliLabel& label);

// Sparse form of E_{a,b}: a permutation of basis states together with a
// p-th root of unity exponent per input state,
//   (E v)[perm[y]] = omega^{exponent[y]} v[y].
class PauliAction {
 public:
  explicit PauliAction(const PauliLabel& label);

  std::size_t dim() const { return perm_.size(); }
  Fp p() const { return p_; }

  // perm()[y] is the destination index of basis state y; inv_perm() is the
  // inverse permutation.
  const std::vector<std::size_t>& perm() const { return perm_; }
  const std::vector<std::size_t>& inv_perm() const { return inv_perm_; }
  const std::vector<Fp>& exponents() const { return exp_; }

  // omega^e for e in [0, p).
  std::complex<double> omega(Fp e) const { return omega_[e]; }
  const std::vector<std::complex<double>>& omega_table() const { return omega_; }

 private:
  Fp p_ = 0;
  std::vector<std::size_t> perm_;
  std::vector<std::size_t> inv_perm_;
  std::vector<Fp> exp_;
  std::vector<std::complex<double>> omega_;
};

Eigen::VectorXcd apply_pauli(const PauliAction& action, const Eigen::VectorXcd& v);

// Columnwise application to a q^n x r matrix.
Eigen::MatrixXcd apply_pauli(const PauliAction& action, const Eigen::MatrixXcd& m);

// One-shot O(q^n) application without keeping the action around.
Eigen::VectorXcd apply_pauli(const PauliLabel& label, const Eigen::VectorXcd& v);

// Exponent c with E1 E2 = omega^c E2 E1, namely
// <a1, b2> - <a2, b1> mod p with the componentwise trace pairing.
Fp commutation_phase(const PauliLabel& e1, const PauliLabel& e2);

// Flat indexing of all q^{2n} labels. Index L splits as L = bIdx * q^n + aIdx
// so the shift part varies fastest; L = 0 is the identity. Vector indices put
// qudit 1 in the most significant position.
class PauliEnumerator {
 public:
  PauliEnumerator(FieldCtxPtr field, unsigned n);

  std::uint64_t size() const { return size_; }  // q^{2n}
  std::uint64_t dim() const { return dim_; }    // q^n
  unsigned n() const { return n_; }
  const FieldCtxPtr& field() const { return field_; }

  PauliLabel label(std::uint64_t index) const;

 private:
  FieldCtxPtr field_;
  unsigned n_ = 0;
  std::uint64_t dim_ = 0;
  std::uint64_t size_ = 0;
};

std::string label_to_string(const PauliLabel& label);

inline PauliEnumerator enumerate_paulis(FieldCtxPtr field, unsigned n) {
  return PauliEnumerator(std::move(field), n);
}

}
