#include "pmd/codespace.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "pmd/limits.hpp"
#include "pmd/rng.hpp"

namespace pmd {

namespace {

std::uint64_t upow(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > kEnumerationLimit / base) throw std::invalid_argument("dimension exceeds the enumeration limit");
    r *= base;
  }
  return r;
}

}  // namespace

std::uint64_t CodeSpace::dim() const {
  if (!field) throw std::invalid_argument("code space without field context");
  return upow(field->q(), n);
}

std::uint64_t CodeSpace::rank() const {
  if (!field) throw std::invalid_argument("code space without field context");
  return upow(field->q(), k);
}

Eigen::MatrixXcd modified_gram_schmidt(Eigen::MatrixXcd m, double rank_tol) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double original = m.col(j).norm();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < j; ++i) m.col(j) -= m.col(i).dot(m.col(j)) * m.col(i);
    const double residual = m.col(j).norm();
    if (!(residual > rank_tol * std::max(1.0, original)))
      throw std::invalid_argument("basis is rank deficient: columns are not linearly independent");
    m.col(j) /= residual;
  }
  return m;
}

CodeSpace make_codespace(FieldCtxPtr field, unsigned n, unsigned k, Eigen::MatrixXcd basis,
                         bool reorthonormalize) {
  if (!field) throw std::invalid_argument("code space requires a field");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (k > n) throw std::invalid_argument("dimension inconsistency: k exceeds n");
  const std::uint64_t dim = upow(field->q(), n);
  const std::uint64_t rank = upow(field->q(), k);
  if (static_cast<std::uint64_t>(basis.rows()) != dim ||
      static_cast<std::uint64_t>(basis.cols()) != rank)
    throw std::invalid_argument("dimension inconsistency: basis must be q^n by q^k");
  if (!basis.allFinite()) throw std::invalid_argument("basis has non-finite entries");

  // Establishes linear independence regardless of the orthonormality path.
  Eigen::MatrixXcd repaired = modified_gram_schmidt(basis);

  const double err =
      (basis.adjoint() * basis - Eigen::MatrixXcd::Identity(basis.cols(), basis.cols()))
          .cwiseAbs()
          .maxCoeff();
  CodeSpace cs;
  cs.field = std::move(field);
  cs.n = n;
  cs.k = k;
  if (err <= 1e-8) {
    cs.basis = std::move(basis);
  } else if (reorthonormalize) {
    cs.basis = std::move(repaired);
  } else {
    throw std::invalid_argument("basis is not orthonormal within 1e-8");
  }
  return cs;
}

CodeSpace random_codespace(FieldCtxPtr field, unsigned n, unsigned k, std::uint64_t seed) {
  if (!field) throw std::invalid_argument("code space requires a field");
  const std::uint64_t dim = upow(field->q(), n);
  const std::uint64_t rank = upow(field->q(), k);
  Rng rng(seed);
  Eigen::MatrixXcd g(dim, rank);
  for (std::uint64_t j = 0; j < rank; ++j)
    for (std::uint64_t i = 0; i < dim; ++i)
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.next_complex_gaussian();
  return make_codespace(std::move(field), n, k, modified_gram_schmidt(std::move(g)));
}

CodeSpace bloch_state(double theta, double phi) {
  Eigen::MatrixXcd basis(2, 1);
  basis(0, 0) = std::cos(theta / 2);
  basis(1, 0) = std::polar(std::sin(theta / 2), phi);
  return make_codespace(make_field(2, 1), 1, 0, std::move(basis));
}

Eigen::MatrixXcd projector(const CodeSpace& cs) {
  if (cs.dim() > dense_dim_limit())
    throw std::invalid_argument("dimension exceeds the dense limit (PMD_MAX_DIM)");
  return cs.basis * cs.basis.adjoint();
}

namespace {

nlohmann::json codespace_json(const CodeSpace& cs) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["p"] = cs.field->p();
  j["m"] = cs.field->m();
  j["modulus"] = cs.field->modulus();
  j["n"] = cs.n;
  j["k"] = cs.k;
  j["reorthonormalize"] = false;
  nlohmann::json cols = nlohmann::json::array();
  for (Eigen::Index c = 0; c < cs.basis.cols(); ++c) {
    nlohmann::json col = nlohmann::json::array();
    for (Eigen::Index r = 0; r < cs.basis.rows(); ++r)
      col.push_back({cs.basis(r, c).real(), cs.basis(r, c).imag()});
    cols.push_back(std::move(col));
  }
  j["basis"] = std::move(cols);
  return j;
}

}  // namespace

std::string codespace_to_json(const CodeSpace& cs) { return codespace_json(cs).dump(); }

void save_codespace(const CodeSpace& cs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << codespace_json(cs).dump() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

CodeSpace parse_codespace(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("code space parse error: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("format_version") || j["format_version"] != 1)
      throw std::runtime_error("unsupported format_version (expected 1)");

    const std::int64_t p = j.at("p").get<std::int64_t>();
    const std::int64_t m = j.at("m").get<std::int64_t>();
    if (p < 2 || p > static_cast<std::int64_t>(kFieldSizeLimit))
      throw std::runtime_error("p out of range");
    if (m < 1 || m > 16) throw std::runtime_error("m out of range");
    std::vector<std::int64_t> mod_raw = j.at("modulus").get<std::vector<std::int64_t>>();
    std::vector<Fp> modulus;
    modulus.reserve(mod_raw.size());
    for (std::int64_t c : mod_raw) {
      if (c < 0 || c >= p) throw std::runtime_error("modulus coefficient out of range");
      modulus.push_back(static_cast<Fp>(c));
    }
    auto field = field_from_modulus(static_cast<Fp>(p), static_cast<unsigned>(m), std::move(modulus));

    const std::int64_t n = j.at("n").get<std::int64_t>();
    const std::int64_t k = j.at("k").get<std::int64_t>();
    if (n < 1 || n > 63) throw std::runtime_error("n out of range");
    if (k < 0) throw std::runtime_error("k out of range");
    const bool reorthonormalize = j.at("reorthonormalize").get<bool>();

    const auto& cols = j.at("basis");
    if (!cols.is_array()) throw std::runtime_error("basis must be an array of columns");
    const std::uint64_t dim = upow(field->q(), static_cast<unsigned>(n));
    if (k > n) throw std::invalid_argument("dimension inconsistency: k exceeds n");
    const std::uint64_t rank = upow(field->q(), static_cast<unsigned>(k));
    if (cols.size() != rank)
      throw std::runtime_error("dimension inconsistency: expected q^k basis columns");
    Eigen::MatrixXcd basis(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rank));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& col = cols[c];
      if (!col.is_array() || col.size() != dim)
        throw std::runtime_error("dimension inconsistency: each column needs q^n entries");
      for (std::size_t r = 0; r < dim; ++r) {
        const auto& entry = col[r];
        if (!entry.is_array() || entry.size() != 2)
          throw std::runtime_error("basis entries must be [re, im] pairs");
        basis(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            std::complex<double>(entry[0].get<double>(), entry[1].get<double>());
      }
    }
    return make_codespace(std::move(field), static_cast<unsigned>(n), static_cast<unsigned>(k),
                          std::move(basis), reorthonormalize);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("invalid code space record: ") + e.what());
  }
}

CodeSpace load_codespace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_codespace(buf.str());
}

void export_codespace_csv(const CodeSpace& cs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "column,row,re,im\n";
  char line[128];
  for (Eigen::Index c = 0; c < cs.basis.cols(); ++c)
    for (Eigen::Index r = 0; r < cs.basis.rows(); ++r) {
      std::snprintf(line, sizeof(line), "%lld,%lld,%.17g,%.17g\n", static_cast<long long>(c),
                    static_cast<long long>(r), cs.basis(r, c).real(), cs.basis(r, c).imag());
      out << line;
    }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}
