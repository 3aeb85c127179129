#include "pmd/finite_field.hpp"

#include <atomic>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace pmd {

namespace {

std::atomic<std::uint64_t> g_next_ctx_id{1};

// Dense polynomial over F_p, low degree first, entries already reduced.
using Poly = std::vector<Fp>;

int poly_degree(const Poly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[i] != 0) return i;
  return -1;
}

void poly_trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Fp mod_pow(Fp base, std::uint64_t e, Fp p) {
  std::uint64_t r = 1, b = base % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<Fp>(r);
}

Fp mod_inv(Fp a, Fp p) { return mod_pow(a, p - 2, p); }

Poly poly_mul(const Poly& a, const Poly& b, Fp p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<Fp>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
  }
  return r;
}

// Remainder of a modulo f. f need not be monic; its leading coefficient is
// inverted once.
Poly poly_mod(Poly a, const Poly& f, Fp p) {
  int df = poly_degree(f);
  if (df < 0) throw std::invalid_argument("polynomial division by zero");
  Fp lead_inv = mod_inv(f[static_cast<std::size_t>(df)], p);
  int da = poly_degree(a);
  while (da >= df) {
    Fp c = static_cast<Fp>(static_cast<std::uint64_t>(a[static_cast<std::size_t>(da)]) * lead_inv % p);
    if (c != 0) {
      int shift = da - df;
      for (int i = 0; i <= df; ++i) {
        std::uint64_t sub = static_cast<std::uint64_t>(c) * f[static_cast<std::size_t>(i)] % p;
        std::size_t k = static_cast<std::size_t>(i + shift);
        a[k] = static_cast<Fp>((a[k] + p - sub) % p);
      }
    }
    --da;
    while (da >= 0 && a[static_cast<std::size_t>(da)] == 0) --da;
  }
  poly_trim(a);
  return a;
}

Poly poly_gcd(Poly a, Poly b, Fp p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, Fp p) {
  Poly r{1};
  base = poly_mod(std::move(base), f, p);
  while (e) {
    if (e & 1) r = poly_mod(poly_mul(r, base, p), f, p);
    base = poly_mod(poly_mul(base, base, p), f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_sub(Poly a, const Poly& b, Fp p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = static_cast<Fp>((a[i] + p - b[i]) % p);
  poly_trim(a);
  return a;
}

// Multiply by x modulo the monic modulus f of degree m, in place on a
// coefficient vector of fixed length m.
void mul_by_x(std::vector<Fp>& col, const std::vector<Fp>& f, Fp p, unsigned m) {
  Fp lead = col[m - 1];
  for (unsigned t = m - 1; t > 0; --t) col[t] = col[t - 1];
  col[0] = 0;
  if (lead != 0) {
    for (unsigned t = 0; t < m; ++t) {
      std::uint64_t sub = static_cast<std::uint64_t>(lead) * f[t] % p;
      col[t] = static_cast<Fp>((col[t] + p - sub) % p);
    }
  }
}

// Trace of the F_p-linear multiplication-by-a map on GF(p^m); equals the
// field trace of a.
Fp trace_of_element(const std::vector<Fp>& a, const std::vector<Fp>& f, Fp p, unsigned m) {
  std::vector<Fp> col(a.begin(), a.end());
  col.resize(m, 0);
  std::uint64_t s = 0;
  for (unsigned j = 0; j < m; ++j) {
    s += col[j];
    if (j + 1 < m) mul_by_x(col, f, p, m);
  }
  return static_cast<Fp>(s % p);
}

// Gauss-Jordan inverse of an m x m matrix over F_p. Throws on a singular
// matrix; the message names the condition the callers care about.
std::vector<std::vector<Fp>> invert_mod(std::vector<std::vector<Fp>> a, Fp p) {
  const std::size_t m = a.size();
  std::vector<std::vector<Fp>> inv(m, std::vector<Fp>(m, 0));
  for (std::size_t i = 0; i < m; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) throw std::invalid_argument("basis elements are linearly dependent");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Fp s = mod_inv(a[col][col], p);
    for (std::size_t j = 0; j < m; ++j) {
      a[col][j] = static_cast<Fp>(static_cast<std::uint64_t>(a[col][j]) * s % p);
      inv[col][j] = static_cast<Fp>(static_cast<std::uint64_t>(inv[col][j]) * s % p);
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Fp c = a[r][col];
      for (std::size_t j = 0; j < m; ++j) {
        a[r][j] = static_cast<Fp>((a[r][j] + p - static_cast<std::uint64_t>(c) * a[col][j] % p) % p);
        inv[r][j] = static_cast<Fp>((inv[r][j] + p - static_cast<std::uint64_t>(c) * inv[col][j] % p) % p);
      }
    }
  }
  return inv;
}

bool ctx_compatible(const FieldCtxPtr& a, const FieldCtxPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->p() == b->p() && a->m() == b->m() && a->modulus() == b->modulus();
}

const FieldCtxPtr& require_same_ctx(const FieldElement& a, const FieldElement& b) {
  if (!a.ctx() || !b.ctx()) throw std::invalid_argument("field element without context");
  if (!ctx_compatible(a.ctx(), b.ctx())) throw std::invalid_argument("field context mismatch");
  return a.ctx();
}

}  // namespace

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  if (v % 2 == 0) return v == 2;
  if (v % 3 == 0) return v == 3;
  for (std::uint64_t d = 5; d * d <= v; d += 6) {
    if (v % d == 0 || v % (d + 2) == 0) return false;
  }
  return true;
}

std::pair<Fp, unsigned> factor_prime_power(std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  std::uint64_t p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (p * p > q) p = q;  // q itself is prime
  unsigned m = 0;
  std::uint64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++m;
  }
  if (rest != 1) throw std::invalid_argument("q must be a prime power");
  if (p > std::numeric_limits<Fp>::max())
    throw std::invalid_argument("prime base does not fit the field type");
  return {static_cast<Fp>(p), m};
}

bool fields_compatible(const FieldCtxPtr& a, const FieldCtxPtr& b) {
  return ctx_compatible(a, b);
}

bool is_irreducible(Fp p, const std::vector<Fp>& poly) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  for (Fp c : poly)
    if (c >= p) throw std::invalid_argument("polynomial coefficient out of range");
  int deg = poly_degree(poly);
  if (deg < 1) throw std::invalid_argument("polynomial must have degree at least 1");
  if (static_cast<std::size_t>(deg) + 1 != poly.size() || poly.back() != 1)
    throw std::invalid_argument("polynomial must be monic");
  if (deg == 1) return true;
  if (deg <= 3) {
    // Degree 2 or 3: reducible exactly when a root exists in F_p.
    for (Fp t = 0; t < p; ++t) {
      std::uint64_t v = 0;
      for (int i = deg; i >= 0; --i) v = (v * t + poly[static_cast<std::size_t>(i)]) % p;
      if (v == 0) return false;
    }
    return true;
  }
  // f is reducible iff it shares a factor with x^{p^i} - x for some
  // i <= deg/2, since any reducible f has an irreducible factor of degree
  // <= deg/2 and x^{p^i} - x is the product of all irreducibles of degree
  // dividing i.
  Poly x{0, 1};
  Poly y = x;
  for (int i = 1; i <= deg / 2; ++i) {
    y = poly_powmod(std::move(y), p, poly, p);
    Poly g = poly_gcd(poly, poly_sub(y, x, p), p);
    if (poly_degree(g) > 0) return false;
  }
  return true;
}

FieldElement::FieldElement(FieldCtxPtr ctx, std::vector<Fp> coeffs)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
  if (!ctx_) throw std::invalid_argument("field element requires a context");
  if (coeffs_.size() != ctx_->m()) throw std::invalid_argument("coefficient count must equal m");
  for (Fp c : coeffs_)
    if (c >= ctx_->p()) throw std::invalid_argument("coefficient out of range");
}

bool FieldElement::is_zero() const {
  for (Fp c : coeffs_)
    if (c != 0) return false;
  return true;
}

std::uint64_t FieldElement::index() const {
  std::uint64_t v = 0;
  for (Fp c : coeffs_) v = v * ctx_->p() + c;
  return v;
}

bool FieldElement::operator==(const FieldElement& other) const {
  require_same_ctx(*this, other);
  return coeffs_ == other.coeffs_;
}

FieldElement FieldCtx::zero() const { return FieldElement(shared_from_this(), std::vector<Fp>(m_, 0)); }

FieldElement FieldCtx::one() const {
  std::vector<Fp> c(m_, 0);
  c[0] = 1;
  return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FieldCtx::element(std::vector<Fp> coeffs) const {
  return FieldElement(shared_from_this(), std::move(coeffs));
}

FieldElement FieldCtx::element_from_index(std::uint64_t index) const {
  if (index >= q_) throw std::invalid_argument("element index out of range");
  std::vector<Fp> c(m_, 0);
  for (unsigned i = m_; i-- > 0;) {
    c[i] = static_cast<Fp>(index % p_);
    index /= p_;
  }
  return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FieldCtx::basis(unsigned i) const {
  if (i >= m_) throw std::invalid_argument("basis index out of range");
  std::vector<Fp> c(m_, 0);
  c[i] = 1;
  return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FieldCtx::dual(unsigned i) const {
  if (i >= m_) throw std::invalid_argument("basis index out of range");
  return FieldElement(shared_from_this(), dual_[i]);
}

std::vector<FieldElement> FieldCtx::basis_all() const {
  std::vector<FieldElement> out;
  out.reserve(m_);
  for (unsigned i = 0; i < m_; ++i) out.push_back(basis(i));
  return out;
}

std::vector<FieldElement> FieldCtx::dual_all() const {
  std::vector<FieldElement> out;
  out.reserve(m_);
  for (unsigned i = 0; i < m_; ++i) out.push_back(dual(i));
  return out;
}

FieldCtxPtr field_from_modulus(Fp p, unsigned m, std::vector<Fp> modulus, std::uint64_t size_limit) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < m; ++i) {
    q *= p;
    if (q > size_limit) throw std::invalid_argument("field size exceeds limit");
  }
  if (modulus.size() != static_cast<std::size_t>(m) + 1)
    throw std::invalid_argument("modulus must have m+1 coefficients");
  for (Fp c : modulus)
    if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
  if (modulus.back() != 1) throw std::invalid_argument("modulus must be monic");
  if (!is_irreducible(p, modulus)) throw std::invalid_argument("modulus is not irreducible");

  auto ctx = std::shared_ptr<FieldCtx>(new FieldCtx());
  ctx->p_ = p;
  ctx->m_ = m;
  ctx->q_ = q;
  ctx->id_ = g_next_ctx_id.fetch_add(1);
  ctx->modulus_ = std::move(modulus);

  // tr(x^i) for i in [0, 2m-2], via the trace of the multiplication map.
  std::vector<Fp> cur(m, 0);
  cur[0] = 1;
  for (unsigned i = 0; i + 1 <= 2 * m - 1; ++i) {
    ctx->trace_powers_.push_back(trace_of_element(cur, ctx->modulus_, p, m));
    mul_by_x(cur, ctx->modulus_, p, m);
  }

  // Dual basis: the Gram matrix G_ij = tr(x^{i+j}) is inverted over F_p and
  // beta_j is read off as column j of the inverse.
  std::vector<std::vector<Fp>> gram(m, std::vector<Fp>(m, 0));
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) gram[i][j] = ctx->trace_powers_[i + j];
  auto inv = invert_mod(std::move(gram), p);
  ctx->dual_.assign(m, std::vector<Fp>(m, 0));
  for (unsigned j = 0; j < m; ++j)
    for (unsigned k = 0; k < m; ++k) ctx->dual_[j][k] = inv[k][j];

  return ctx;
}

FieldCtxPtr make_field(Fp p, unsigned m, std::uint64_t size_limit) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < m; ++i) {
    q *= p;
    if (q > size_limit) throw std::invalid_argument("field size exceeds limit");
  }
  // Scan monic degree-m candidates in lexicographic order of the coefficient
  // tuple (c_0, c_1, ..., c_{m-1}); the first irreducible one is the modulus.
  for (std::uint64_t v = 0; v < q; ++v) {
    std::vector<Fp> cand(m + 1, 0);
    std::uint64_t t = v;
    for (unsigned i = m; i-- > 0;) {
      cand[i] = static_cast<Fp>(t % p);
      t /= p;
    }
    cand[m] = 1;
    if (is_irreducible(p, cand)) return field_from_modulus(p, m, std::move(cand), size_limit);
  }
  throw std::logic_error("no irreducible modulus found");
}

FieldElement field_add(const FieldElement& a, const FieldElement& b) {
  const auto& ctx = require_same_ctx(a, b);
  std::vector<Fp> c(ctx->m());
  for (unsigned i = 0; i < ctx->m(); ++i)
    c[i] = static_cast<Fp>((static_cast<std::uint64_t>(a.coeffs()[i]) + b.coeffs()[i]) % ctx->p());
  return FieldElement(ctx, std::move(c));
}

FieldElement field_sub(const FieldElement& a, const FieldElement& b) {
  const auto& ctx = require_same_ctx(a, b);
  std::vector<Fp> c(ctx->m());
  for (unsigned i = 0; i < ctx->m(); ++i)
    c[i] = static_cast<Fp>((a.coeffs()[i] + ctx->p() - b.coeffs()[i]) % ctx->p());
  return FieldElement(ctx, std::move(c));
}

FieldElement field_neg(const FieldElement& a) {
  if (!a.ctx()) throw std::invalid_argument("field element without context");
  return field_sub(a.ctx()->zero(), a);
}

FieldElement field_mul(const FieldElement& a, const FieldElement& b) {
  const auto& ctx = require_same_ctx(a, b);
  Poly r = poly_mod(poly_mul(a.coeffs(), b.coeffs(), ctx->p()), ctx->modulus(), ctx->p());
  r.resize(ctx->m(), 0);
  return FieldElement(ctx, std::move(r));
}

FieldElement field_pow(const FieldElement& a, std::uint64_t e) {
  if (!a.ctx()) throw std::invalid_argument("field element without context");
  FieldElement r = a.ctx()->one();
  FieldElement b = a;
  while (e) {
    if (e & 1) r = field_mul(r, b);
    b = field_mul(b, b);
    e >>= 1;
  }
  return r;
}

FieldElement field_inv(const FieldElement& a) {
  if (!a.ctx()) throw std::invalid_argument("field element without context");
  if (a.is_zero()) throw std::invalid_argument("zero has no inverse");
  return field_pow(a, a.ctx()->q() - 2);
}

Fp field_trace(const FieldElement& a) {
  if (!a.ctx()) throw std::invalid_argument("field element without context");
  const auto& ctx = a.ctx();
  std::uint64_t s = 0;
  for (unsigned i = 0; i < ctx->m(); ++i)
    s += static_cast<std::uint64_t>(a.coeffs()[i]) * ctx->trace_of_power(i);
  return static_cast<Fp>(s % ctx->p());
}

std::vector<FieldElement> trace_dual(const std::vector<FieldElement>& basis) {
  if (basis.empty()) throw std::invalid_argument("empty basis");
  const auto& ctx = basis[0].ctx();
  if (!ctx) throw std::invalid_argument("field element without context");
  if (basis.size() != ctx->m()) throw std::invalid_argument("basis must have m elements");
  for (const auto& b : basis) require_same_ctx(basis[0], b);

  const unsigned m = ctx->m();
  std::vector<std::vector<Fp>> gram(m, std::vector<Fp>(m, 0));
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) gram[i][j] = field_trace(field_mul(basis[i], basis[j]));
  auto inv = invert_mod(std::move(gram), ctx->p());

  std::vector<FieldElement> out;
  out.reserve(m);
  for (unsigned j = 0; j < m; ++j) {
    FieldElement acc = ctx->zero();
    for (unsigned k = 0; k < m; ++k) {
      std::vector<Fp> scale(m, 0);
      scale[0] = inv[k][j];
      acc = field_add(acc, field_mul(FieldElement(ctx, std::move(scale)), basis[k]));
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<FieldElement> dual_basis(const FieldCtx& ctx) {
  return trace_dual(ctx.basis_all());
}

Fp inner_product(const FieldElement& a, const FieldElement& b) {
  const auto& ctx = require_same_ctx(a, b);
  // a is read in the polynomial basis and b in its trace-dual, which reduces
  // the pairing to the bilinear form a^T G b with G_ij = tr(x^{i+j}).
  std::uint64_t s = 0;
  for (unsigned i = 0; i < ctx->m(); ++i) {
    if (a.coeffs()[i] == 0) continue;
    std::uint64_t row = 0;
    for (unsigned j = 0; j < ctx->m(); ++j)
      row += static_cast<std::uint64_t>(ctx->trace_of_power(i + j)) * b.coeffs()[j] % ctx->p();
    s += a.coeffs()[i] * (row % ctx->p()) % ctx->p();
  }
  return static_cast<Fp>(s % ctx->p());
}

std::string to_string(const FieldElement& a) {
  std::ostringstream os;
  os << '(';
  for (unsigned i = 0; i < a.coeffs().size(); ++i) {
    if (i) os << ',';
    os << a.coeffs()[i];
  }
  os << ')';
  return os.str();
}

}
