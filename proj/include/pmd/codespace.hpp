#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "pmd/finite_field.hpp"

namespace pmd {

// Orthonormal basis of a q^k-dimensional subspace of C^{q^n}. Column order
// defines the logical basis. Immutable by convention after construction.
struct CodeSpace {
  FieldCtxPtr field;
  unsigned n = 0;
  unsigned k = 0;
  Eigen::MatrixXcd basis;  // q^n rows, q^k orthonormal columns

  std::uint64_t dim() const;   // q^n
  std::uint64_t rank() const;  // q^k
  unsigned lambda() const { return n - k; }
};

// Sequential two-pass modified Gram-Schmidt. Throws when a column's residual
// after orthogonalization falls below rank_tol relative to the column norm.
Eigen::MatrixXcd modified_gram_schmidt(Eigen::MatrixXcd m, double rank_tol = 1e-10);

// Central validator: checks dimensions, linear independence, and
// orthonormality within 1e-8. A basis that fails orthonormality is repaired
// with modified Gram-Schmidt when reorthonormalize is set, and rejected
// otherwise.
CodeSpace make_codespace(FieldCtxPtr field, unsigned n, unsigned k, Eigen::MatrixXcd basis,
                         bool reorthonormalize = false);

// Haar-distributed subspace: a seeded complex Gaussian matrix, columns
// orthonormalized. Identical seed gives a bit-identical basis.
CodeSpace random_codespace(FieldCtxPtr field, unsigned n, unsigned k, std::uint64_t seed);

// Single-qubit pure state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> as a
// q=2, n=1, k=0 code space.
CodeSpace bloch_state(double theta, double phi);

// Dense projector C C^dagger, subject to dense_dim_limit().
Eigen::MatrixXcd projector(const CodeSpace& cs);

CodeSpace load_codespace(const std::string& path);
CodeSpace parse_codespace(const std::string& text);
std::string codespace_to_json(const CodeSpace& cs);
void save_codespace(const CodeSpace& cs, const std::string& path);

// Same layout as the file format, one line per basis entry. Emitted for
// reports; not accepted as input.
void export_codespace_csv(const CodeSpace& cs, const std::string& path);

}
