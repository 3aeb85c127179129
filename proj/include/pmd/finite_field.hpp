#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pmd/limits.hpp"

namespace pmd {

using Fp = std::uint32_t;  // residue mod p

class FieldCtx;
using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

// Element of GF(p^m), stored as its coefficient vector in the polynomial
// basis {1, x, ..., x^{m-1}}, low degree first. Every element is bound to the
// FieldCtx instance that created it; mixing contexts is an error.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldCtxPtr ctx, std::vector<Fp> coeffs);

  const std::vector<Fp>& coeffs() const { return coeffs_; }
  const FieldCtxPtr& ctx() const { return ctx_; }
  bool is_zero() const;

  // Integer encoding with the coefficient of 1 (the first basis component)
  // most significant: index = sum_i coeffs[i] * p^{m-1-i}. This is also the
  // element's position in the computational basis of one qudit.
  std::uint64_t index() const;

  bool operator==(const FieldElement& other) const;
  bool operator!=(const FieldElement& other) const { return !(*this == other); }

 private:
  FieldCtxPtr ctx_;
  std::vector<Fp> coeffs_;
};

// Immutable description of GF(p^m): modulus, polynomial basis, trace data and
// the trace-dual basis. Create through make_field / field_from_modulus.
class FieldCtx : public std::enable_shared_from_this<FieldCtx> {
 public:
  Fp p() const { return p_; }
  unsigned m() const { return m_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t id() const { return id_; }

  // Monic modulus, m+1 coefficients low degree first (last one is 1).
  const std::vector<Fp>& modulus() const { return modulus_; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement element(std::vector<Fp> coeffs) const;
  FieldElement element_from_index(std::uint64_t index) const;

  // alpha_{i+1} = x^i for i in [0, m).
  FieldElement basis(unsigned i) const;
  // beta_{i+1}, the trace-dual of the polynomial basis.
  FieldElement dual(unsigned i) const;
  std::vector<FieldElement> basis_all() const;
  std::vector<FieldElement> dual_all() const;

  // Trace of x^i for i in [0, 2m-2]; enough to trace any product of basis
  // elements. Traces of arbitrary elements follow by linearity.
  Fp trace_of_power(unsigned i) const { return trace_powers_[i]; }

 private:
  friend FieldCtxPtr field_from_modulus(Fp, unsigned, std::vector<Fp>, std::uint64_t);
  FieldCtx() = default;

  Fp p_ = 0;
  unsigned m_ = 0;
  std::uint64_t q_ = 0;
  std::uint64_t id_ = 0;
  std::vector<Fp> modulus_;
  std::vector<Fp> trace_powers_;          // tr(x^i), i in [0, 2m-2]
  std::vector<std::vector<Fp>> dual_;     // beta coefficients, m rows of m
};

// Builds GF(p^m) with the lexicographically smallest monic irreducible
// modulus (coefficients compared low degree first). Deterministic.
FieldCtxPtr make_field(Fp p, unsigned m, std::uint64_t size_limit = kFieldSizeLimit);

// Builds GF(p^m) from an explicit monic irreducible modulus (m+1 coefficients
// low degree first). Used by the code-space file loader.
FieldCtxPtr field_from_modulus(Fp p, unsigned m, std::vector<Fp> modulus,
                               std::uint64_t size_limit = kFieldSizeLimit);

FieldElement field_add(const FieldElement& a, const FieldElement& b);
FieldElement field_sub(const FieldElement& a, const FieldElement& b);
FieldElement field_neg(const FieldElement& a);
FieldElement field_mul(const FieldElement& a, const FieldElement& b);
FieldElement field_pow(const FieldElement& a, std::uint64_t e);
FieldElement field_inv(const FieldElement& a);

// Field trace sum_{i=0}^{m-1} a^{p^i}, reduced to F_p.
Fp field_trace(const FieldElement& a);

// Trace-dual of the context's polynomial basis (recomputed from the Gram
// matrix; the context caches the same data).
std::vector<FieldElement> dual_basis(const FieldCtx& ctx);

// Trace-dual of an arbitrary basis given as m independent elements.
std::vector<FieldElement> trace_dual(const std::vector<FieldElement>& basis);

// sum_i a_i b_i with a expanded in the polynomial basis and b in its dual;
// equals field_trace(a*b) identically.
Fp inner_product(const FieldElement& a, const FieldElement& b);

// Irreducibility over F_p of a monic polynomial given low degree first.
// Degree 1 is always irreducible; degrees 2 and 3 are decided by root
// absence; degree >= 4 additionally uses gcd(f, x^{p^i} - x) for i <= deg/2.
bool is_irreducible(Fp p, const std::vector<Fp>& poly);

bool is_prime(std::uint64_t v);

// Decomposes q = p^m with p prime, m >= 1. Throws std::invalid_argument when
// q is not a prime power.
std::pair<Fp, unsigned> factor_prime_power(std::uint64_t q);

// True when two contexts describe the same field with the same modulus (or
// are the same object); elements of compatible contexts interoperate.
bool fields_compatible(const FieldCtxPtr& a, const FieldCtxPtr& b);

std::string to_string(const FieldElement& a);

}
