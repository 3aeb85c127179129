#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <complex>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

#include "pmd/finite_field.hpp"
#include "pmd/pauli.hpp"
#include "pmd/rng.hpp"

using pmd::Fp;
using pmd::PauliLabel;

namespace {

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

std::complex<double> omega(Fp p, Fp e) {
  return std::polar(1.0, 2.0 * std::numbers::pi * e / p);
}

Eigen::MatrixXcd action_matrix(const pmd::PauliAction& act) {
  const auto d = static_cast<Eigen::Index>(act.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t y = 0; y < act.dim(); ++y)
    m(static_cast<Eigen::Index>(act.perm()[y]), static_cast<Eigen::Index>(y)) =
        act.omega(act.exponents()[y]);
  return m;
}

Eigen::MatrixXcd random_matrix(Eigen::Index d, pmd::Rng& rng) {
  Eigen::MatrixXcd o(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) o(i, j) = rng.next_complex_gaussian();
  return o;
}

}  // namespace

TEST_CASE("prime generators match their defining action") {
  auto [t2, r2] = pmd::weyl_matrices(2);
  Eigen::MatrixXcd x_expected(2, 2);
  x_expected << 0, 1, 1, 0;
  Eigen::MatrixXcd z_expected(2, 2);
  z_expected << 1, 0, 0, -1;
  CHECK(max_abs_diff(t2, x_expected) < 1e-15);
  CHECK(max_abs_diff(r2, z_expected) < 1e-15);

  auto [t3, r3] = pmd::weyl_matrices(3);
  // T sends |x> to |x-1>, so column x carries a one in row x-1 mod 3.
  Eigen::MatrixXcd t3_expected = Eigen::MatrixXcd::Zero(3, 3);
  t3_expected(2, 0) = 1;
  t3_expected(0, 1) = 1;
  t3_expected(1, 2) = 1;
  CHECK(max_abs_diff(t3, t3_expected) < 1e-15);
  for (Fp x = 0; x < 3; ++x) {
    CHECK(std::abs(r3(x, x) - omega(3, x)) < 1e-15);
  }

  for (Fp p : {2u, 3u, 5u, 7u}) {
    auto [t, r] = pmd::weyl_matrices(p);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(p, p);
    Eigen::MatrixXcd tp = id, rp = id;
    for (Fp i = 0; i < p; ++i) {
      tp = tp * t;
      rp = rp * r;
    }
    CHECK(max_abs_diff(tp, id) < 1e-12);
    CHECK(max_abs_diff(rp, id) < 1e-12);
    // T R = omega R T under the shift-down convention.
    CHECK(max_abs_diff(t * r, omega(p, 1) * (r * t)) < 1e-12);
    CHECK(max_abs_diff(t * t.adjoint(), id) < 1e-12);
    CHECK(max_abs_diff(r * r.adjoint(), id) < 1e-12);
  }
}

TEST_CASE("dense single-qubit operators are pinned") {
  auto F = pmd::make_field(2, 1);
  auto lab = [&](Fp a, Fp b) {
    return PauliLabel{{F->element({a})}, {F->element({b})}};
  };
  Eigen::MatrixXcd x(2, 2), z(2, 2), xz(2, 2), id(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  xz << 0, -1, 1, 0;
  id << 1, 0, 0, 1;
  CHECK(max_abs_diff(pmd::pauli_matrix(lab(0, 0)), id) < 1e-15);
  CHECK(max_abs_diff(pmd::pauli_matrix(lab(1, 0)), x) < 1e-15);
  CHECK(max_abs_diff(pmd::pauli_matrix(lab(0, 1)), z) < 1e-15);
  CHECK(max_abs_diff(pmd::pauli_matrix(lab(1, 1)), xz) < 1e-15);
}

TEST_CASE("dense qutrit operators are pinned") {
  auto F = pmd::make_field(3, 1);
  PauliLabel zlab{{F->zero()}, {F->one()}};
  auto z = pmd::pauli_matrix(zlab);
  for (Fp y = 0; y < 3; ++y) CHECK(std::abs(z(y, y) - omega(3, y)) < 1e-14);

  // E_{1,1} |y> = omega^y |y-1>.
  PauliLabel xzlab{{F->one()}, {F->one()}};
  auto xz = pmd::pauli_matrix(xzlab);
  for (Fp y = 0; y < 3; ++y) {
    CHECK(std::abs(xz((y + 2) % 3, y) - omega(3, y)) < 1e-14);
  }
}

TEST_CASE("dense and sparse routes agree on every label") {
  for (auto [p, m, n] : std::vector<std::array<unsigned, 3>>{
           {2, 1, 1}, {2, 1, 2}, {3, 1, 1}, {5, 1, 1}, {2, 2, 1}, {3, 1, 2}, {2, 1, 3}, {3, 2, 1}, {2, 2, 2}}) {
    CAPTURE(p);
    CAPTURE(m);
    CAPTURE(n);
    auto F = pmd::make_field(p, m);
    pmd::PauliEnumerator en(F, n);
    for (std::uint64_t L = 0; L < en.size(); ++L) {
      auto lab = en.label(L);
      pmd::PauliAction act(lab);
      CHECK(max_abs_diff(pmd::pauli_matrix(lab), action_matrix(act)) < 1e-12);
    }
  }
}

TEST_CASE("actions are unitary permutations with unit phases") {
  auto F = pmd::make_field(2, 2);
  pmd::PauliEnumerator en(F, 2);
  for (std::uint64_t L = 0; L < en.size(); L += 7) {
    pmd::PauliAction act(en.label(L));
    std::vector<std::size_t> seen(act.dim(), 0);
    for (std::size_t y = 0; y < act.dim(); ++y) {
      ++seen[act.perm()[y]];
      CHECK(act.inv_perm()[act.perm()[y]] == y);
      CHECK(act.exponents()[y] < act.p());
    }
    for (auto s : seen) CHECK(s == 1);
    auto e = action_matrix(act);
    CHECK(max_abs_diff(e * e.adjoint(), Eigen::MatrixXcd::Identity(e.rows(), e.cols())) < 1e-12);
  }
}

TEST_CASE("nontrivial operators are traceless and mutually trace-orthogonal") {
  for (auto [p, m, n] : std::vector<std::array<unsigned, 3>>{{2, 1, 1}, {3, 1, 1}, {2, 1, 2}, {2, 2, 1}}) {
    CAPTURE(p);
    CAPTURE(m);
    CAPTURE(n);
    auto F = pmd::make_field(p, m);
    pmd::PauliEnumerator en(F, n);
    std::vector<Eigen::MatrixXcd> mats;
    for (std::uint64_t L = 0; L < en.size(); ++L) mats.push_back(pmd::pauli_matrix(en.label(L)));
    const double dim = static_cast<double>(en.dim());
    for (std::size_t i = 0; i < mats.size(); ++i)
      for (std::size_t j = 0; j < mats.size(); ++j) {
        std::complex<double> tr = (mats[i].adjoint() * mats[j]).trace();
        std::complex<double> expected = (i == j) ? std::complex<double>(dim, 0) : std::complex<double>(0, 0);
        CHECK(std::abs(tr - expected) < 1e-9);
      }
  }
}

TEST_CASE("commutation identity holds as a matrix equation on all pairs") {
  for (auto [p, m, n] : std::vector<std::array<unsigned, 3>>{{2, 1, 1}, {3, 1, 1}, {5, 1, 1}, {2, 2, 1}, {2, 1, 2}}) {
    CAPTURE(p);
    CAPTURE(m);
    CAPTURE(n);
    auto F = pmd::make_field(p, m);
    pmd::PauliEnumerator en(F, n);
    std::vector<Eigen::MatrixXcd> mats;
    std::vector<PauliLabel> labels;
    for (std::uint64_t L = 0; L < en.size(); ++L) {
      labels.push_back(en.label(L));
      mats.push_back(pmd::pauli_matrix(labels.back()));
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = 0; j < labels.size(); ++j) {
        Fp c = pmd::commutation_phase(labels[i], labels[j]);
        CHECK(max_abs_diff(mats[i] * mats[j], omega(F->p(), c) * (mats[j] * mats[i])) < 1e-11);
      }
  }
}

TEST_CASE("commutation phase is antisymmetric and trivial against the identity") {
  auto F = pmd::make_field(3, 2);
  pmd::PauliEnumerator en(F, 1);
  auto id = en.label(0);
  const Fp p = F->p();
  for (std::uint64_t i = 0; i < en.size(); i += 5)
    for (std::uint64_t j = 0; j < en.size(); j += 7) {
      Fp cij = pmd::commutation_phase(en.label(i), en.label(j));
      Fp cji = pmd::commutation_phase(en.label(j), en.label(i));
      CHECK((cij + cji) % p == 0);
    }
  for (std::uint64_t i = 0; i < en.size(); ++i) CHECK(pmd::commutation_phase(id, en.label(i)) == 0);
}

TEST_CASE("conjugation shortcut reproduces dense E O E^dagger") {
  pmd::Rng rng(23);
  for (auto [p, m, n] : std::vector<std::array<unsigned, 3>>{{2, 1, 2}, {3, 1, 1}, {2, 2, 1}}) {
    auto F = pmd::make_field(p, m);
    pmd::PauliEnumerator en(F, n);
    const auto d = static_cast<Eigen::Index>(en.dim());
    Eigen::MatrixXcd o = random_matrix(d, rng);
    for (std::uint64_t L = 0; L < en.size(); L += 3) {
      auto lab = en.label(L);
      pmd::PauliAction act(lab);
      Eigen::MatrixXcd dense = pmd::pauli_matrix(lab);
      Eigen::MatrixXcd expected = dense * o * dense.adjoint();
      Eigen::MatrixXcd shortcut(d, d);
      for (Eigen::Index u = 0; u < d; ++u)
        for (Eigen::Index v = 0; v < d; ++v) {
          auto yu = act.inv_perm()[static_cast<std::size_t>(u)];
          auto yv = act.inv_perm()[static_cast<std::size_t>(v)];
          Fp e = static_cast<Fp>((act.exponents()[yu] + act.p() - act.exponents()[yv]) % act.p());
          shortcut(u, v) = act.omega(e) * o(static_cast<Eigen::Index>(yu), static_cast<Eigen::Index>(yv));
        }
      CHECK(max_abs_diff(expected, shortcut) < 1e-12);
    }
  }
}

TEST_CASE("applying an action matches dense multiplication") {
  pmd::Rng rng(5);
  auto F = pmd::make_field(2, 2);
  pmd::PauliEnumerator en(F, 2);
  const auto d = static_cast<Eigen::Index>(en.dim());
  Eigen::VectorXcd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.next_complex_gaussian();
  Eigen::MatrixXcd mat = random_matrix(d, rng);
  for (std::uint64_t L = 0; L < en.size(); L += 11) {
    auto lab = en.label(L);
    pmd::PauliAction act(lab);
    Eigen::MatrixXcd dense = pmd::pauli_matrix(lab);
    CHECK((pmd::apply_pauli(act, v) - dense * v).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_abs_diff(pmd::apply_pauli(act, mat), dense * mat) < 1e-12);
  }
}

TEST_CASE("label enumeration is identity-first with the shift part fastest") {
  auto F = pmd::make_field(2, 1);
  pmd::PauliEnumerator en(F, 1);
  REQUIRE(en.size() == 4);
  REQUIRE(en.dim() == 2);
  CHECK(pmd::is_identity(en.label(0)));
  CHECK(en.label(1).a[0] == F->one());
  CHECK(en.label(1).b[0] == F->zero());
  CHECK(en.label(2).a[0] == F->zero());
  CHECK(en.label(2).b[0] == F->one());
  CHECK(en.label(3).a[0] == F->one());
  CHECK(en.label(3).b[0] == F->one());

  auto F3 = pmd::make_field(3, 1);
  pmd::PauliEnumerator en3(F3, 1);
  auto l5 = en3.label(5);
  CHECK(l5.a[0].coeffs()[0] == 2);
  CHECK(l5.b[0].coeffs()[0] == 1);

  // Qudit 1 occupies the most significant position of the part indices.
  pmd::PauliEnumerator en22(F, 2);
  auto l = en22.label(2);  // a index 2 = (1, 0), b index 0
  CHECK(l.a[0] == F->one());
  CHECK(l.a[1] == F->zero());
  CHECK(pmd::is_identity(en22.label(0)));
}

TEST_CASE("labels are pairwise distinct and stringify stably") {
  auto F = pmd::make_field(2, 2);
  pmd::PauliEnumerator en(F, 1);
  std::set<std::string> seen;
  for (std::uint64_t L = 0; L < en.size(); ++L) seen.insert(pmd::label_to_string(en.label(L)));
  CHECK(seen.size() == en.size());

  auto F2 = pmd::make_field(2, 1);
  pmd::PauliEnumerator en2(F2, 1);
  CHECK(pmd::label_to_string(en2.label(3)) == "a=((1));b=((1))");
  pmd::PauliEnumerator en4(F, 2);
  CHECK(pmd::label_to_string(en4.label(0)) == "a=((0,0),(0,0));b=((0,0),(0,0))");
}

TEST_CASE("invalid labels and oversized requests are rejected") {
  auto F = pmd::make_field(2, 1);
  auto F9 = pmd::make_field(3, 2);
  PauliLabel empty;
  CHECK_THROWS_AS(pmd::pauli_matrix(empty), std::invalid_argument);
  PauliLabel uneven{{F->one()}, {}};
  CHECK_THROWS_AS(pmd::pauli_matrix(uneven), std::invalid_argument);
  PauliLabel mixed{{F->one()}, {F9->one()}};
  CHECK_THROWS_AS(pmd::pauli_matrix(mixed), std::invalid_argument);
  PauliLabel ok{{F->one()}, {F->one()}};
  PauliLabel two{{F->one(), F->one()}, {F->one(), F->one()}};
  CHECK_THROWS_AS(pmd::commutation_phase(ok, two), std::invalid_argument);

  // 2^11 exceeds the default dense limit of 1024.
  PauliLabel big;
  for (int j = 0; j < 11; ++j) {
    big.a.push_back(F->one());
    big.b.push_back(F->zero());
  }
  CHECK_THROWS_AS(pmd::pauli_matrix(big), std::invalid_argument);
  CHECK_NOTHROW(pmd::PauliAction{big});

  pmd::PauliEnumerator en(F, 1);
  CHECK_THROWS_AS(en.label(4), std::invalid_argument);
  CHECK_THROWS_AS(pmd::PauliEnumerator(F, 12), std::invalid_argument);
  CHECK_THROWS_AS(pmd::PauliEnumerator(nullptr, 1), std::invalid_argument);
}
