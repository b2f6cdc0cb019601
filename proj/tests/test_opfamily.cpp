#include <cmath>

#include "doctest.h"
#include "fhlab/opfamily.hpp"

using namespace fhlab;

namespace {

const Complex I(0.0, 1.0);

OperatorFamily pauli() {
  OperatorFamily f;
  f.d = 2;
  f.label = "pauli";
  CMatrix id = CMatrix::Identity(2, 2), x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -I, I, 0;
  z << 1, 0, 0, -1;
  f.matrices = {id, x, y, z};
  f.weights = {0.5, 0.5, 0.5, 0.5};
  return f;
}

CMatrix random_matrix(Eigen::Index d, std::uint64_t seed, std::size_t i) {
  CMatrix t(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      t(a, b) = rng::gaussian(seed, {i, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)});
  return t;
}

// Tr[pi T] written out as a double sum
Complex trace_pair(const CMatrix& p, const CMatrix& t) {
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index k = 0; k < p.cols(); ++k) s += p(i, k) * t(k, i);
  return s;
}

}  // namespace

TEST_CASE("Pauli family") {
  const auto fam = pauli();
  const auto t = verify_tightness(fam, 1e-12);
  CHECK(t.pass);
  CHECK(t.frobenius_residual <= 1e-15);
  CHECK(t.sampled_residual <= 1e-13);

  const SymbolSpace space(fam);
  CHECK(space.rank() == 4);
  CMatrix e00 = CMatrix::Zero(2, 2);
  e00(0, 0) = 1.0;
  const CVector s = space.phi(e00);
  CHECK(std::abs(s(0) - 1.0) < 1e-15);
  CHECK(std::abs(s(1)) < 1e-15);
  CHECK(std::abs(s(2)) < 1e-15);
  CHECK(std::abs(s(3) - 1.0) < 1e-15);

  // row s holds (pi_s)_{ji} at column i*d+j
  const auto& a = space.analysis();
  CHECK(a.rows() == 4);
  CHECK(a.cols() == 4);
  CHECK(std::abs(a(2, 1) - I) < 1e-15);  // Y_10 = i

  // Gram of the vectorized family is 2 I
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const Complex g = trace_pair(fam.matrices[i].adjoint(), fam.matrices[j]);
      CHECK(std::abs(g - (i == j ? 2.0 : 0.0)) < 1e-15);
    }

  // X Z under the symbol calculus
  const CVector fx = space.phi(fam.matrices[1]);
  const CVector fz = space.phi(fam.matrices[3]);
  CHECK((space.star(fx, fz) - space.phi(fam.matrices[1] * fam.matrices[3])).norm() < 1e-14);
  CHECK((space.invol(space.phi(I * fam.matrices[1])) - space.phi(-I * fam.matrices[1])).norm() < 1e-14);
}

TEST_CASE("a single identity is not tight") {
  OperatorFamily f;
  f.d = 2;
  f.matrices = {CMatrix::Identity(2, 2)};
  f.weights = {1.0};
  const auto t = verify_tightness(f, 1e-10);
  CHECK_FALSE(t.pass);
  CHECK(t.frobenius_residual > 1.0);
  CHECK_THROWS_AS(TransportedModel{f}, Rejected);
}

TEST_CASE("family validation") {
  auto f = pauli();
  f.weights[2] = 0.0;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  f = pauli();
  f.matrices.pop_back();
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  f = pauli();
  f.matrices[0] = CMatrix::Identity(3, 3);
  CHECK_THROWS_AS(SymbolSpace{f}, std::invalid_argument);
  CHECK_THROWS_AS(build_weyl_heisenberg(1), std::invalid_argument);
  CHECK_THROWS_AS(build_random_tight(3, 2, 0), std::invalid_argument);
}

TEST_CASE("Weyl-Heisenberg matrices are clock and shift products") {
  const std::size_t n = 3;
  const auto fam = build_weyl_heisenberg(n);
  REQUIRE(fam.size() == 9);
  const double pi = std::acos(-1.0);
  const Complex w = std::polar(1.0, 2.0 * pi / 3.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      CMatrix want = CMatrix::Zero(3, 3);
      // (X^a Z^b) e_k = w^{bk} e_{k+a}
      for (std::size_t k = 0; k < n; ++k) want(static_cast<Eigen::Index>((k + a) % n), static_cast<Eigen::Index>(k)) = std::pow(w, double(b * k));
      CHECK((fam.matrices[a + n * b] - want).norm() < 1e-14);
      CHECK(fam.weights[a + n * b] == doctest::Approx(1.0 / 3.0));
    }
}

TEST_CASE("Weyl-Heisenberg symbols of matrix units are orthonormal") {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto fam = build_weyl_heisenberg(n);
    CHECK(verify_tightness(fam, 1e-10).pass);
    const SymbolSpace space(fam);
    CHECK(space.rank() == n * n);
    std::vector<CVector> sym;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        CMatrix e = CMatrix::Zero(n, n);
        e(j, k) = 1.0;
        sym.push_back(space.phi(e));
      }
    for (std::size_t p = 0; p < sym.size(); ++p)
      for (std::size_t q = 0; q < sym.size(); ++q)
        CHECK(std::abs(space.inner(sym[p], sym[q]) - (p == q ? 1.0 : 0.0)) < 1e-13);
  }
}

TEST_CASE("Parseval and reconstruction") {
  const auto fam = build_weyl_heisenberg(4);
  const SymbolSpace space(fam);
  for (std::size_t i = 0; i < 20; ++i) {
    const CMatrix t = random_matrix(4, 5, i);
    CHECK((space.pi(space.phi(t)) - t).norm() <= 1e-12 * t.norm());
    CVector f(16), g(16);
    for (Eigen::Index s = 0; s < 16; ++s) {
      f(s) = rng::gaussian(6, {i, 0, static_cast<std::uint64_t>(s)});
      g(s) = rng::gaussian(6, {i, 1, static_cast<std::uint64_t>(s)});
    }
    CHECK(parseval_check(f, g, fam).residual <= 1e-12);
    // Tr[Pi(f) Pi(g)^*] = <f, g>_mu for the full-rank family
    const Complex tr = trace_pair(space.pi(f), space.pi(g).adjoint());
    CHECK(std::abs(tr - space.inner(f, g)) <= 1e-12 * (1.0 + space.norm(f) * space.norm(g)));
    // free functions agree with the class
    CHECK((phi(t, fam) - space.phi(t)).norm() == 0.0);
    CHECK((pi(f, fam) - space.pi(f)).norm() == 0.0);
  }
}

TEST_CASE("random tight family in an overcomplete setting") {
  const auto fam = build_random_tight(18, 3, 5);
  CHECK(fam.size() == 18);
  CHECK(verify_tightness(fam, 1e-10).pass);
  const SymbolSpace space(fam);
  CHECK(space.rank() == 9);

  const CMatrix p = space.projector();
  CHECK((p * p - p).norm() < 1e-12);
  Eigen::Index r = 0;
  Eigen::ComplexEigenSolver<CMatrix> es(p);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) > 0.5) ++r;
  CHECK(r == 9);

  for (std::size_t i = 0; i < 10; ++i) {
    CVector f(18);
    for (Eigen::Index s = 0; s < 18; ++s) f(s) = rng::gaussian(9, {i, static_cast<std::uint64_t>(s)});
    const auto proj = space.project(f);
    const CVector perp = f - proj.symbol;
    CHECK(space.pi(perp).norm() < 1e-12);
    CHECK(std::abs(space.inner(perp, proj.symbol)) < 1e-12);
    CHECK(proj.discarded == doctest::Approx(space.norm(perp)).epsilon(1e-10));
    CHECK(proj.discarded > 0.0);
    CHECK(parseval_check(f, f, fam).residual <= 1e-10);
  }

  const auto again = build_random_tight(18, 3, 5);
  for (std::size_t s = 0; s < 18; ++s) CHECK((again.matrices[s] - fam.matrices[s]).norm() == 0.0);
  CHECK((build_random_tight(18, 3, 6).matrices[0] - fam.matrices[0]).norm() > 0.0);
}

TEST_CASE("transported model") {
  const auto setup = transported_model(build_weyl_heisenberg(2), WeightSystem(2));
  const auto& model = *setup.model;
  CHECK(model.shape() == MultiIndex{4});
  CHECK(model.algebra_dimension() == 4);
  const auto r = check_hilbert_axioms(model, {0, 40}, 1e-10);
  CHECK(r.all_pass());

  const auto f = model.sample(1, 0);
  const auto g = model.sample(1, 1);
  const CMatrix pf = model.space().pi(model.to_vector(f));
  const CMatrix pg = model.space().pi(model.to_vector(g));
  CHECK((model.space().pi(model.to_vector(model.product(f, g))) - pf * pg).norm() < 1e-13);
  CHECK((model.space().pi(model.to_vector(model.involution(f))) - pf.adjoint()).norm() < 1e-13);
  const auto view = model.graded_view(f);
  CHECK(view.trunc() == MultiIndex{2, 2});
  CHECK((model.to_vector(model.from_graded(view)) - model.to_vector(f)).norm() < 1e-13);
  CHECK_THROWS_AS(transported_model(build_weyl_heisenberg(2), WeightSystem(1)), std::invalid_argument);
}

TEST_CASE("representation check") {
  const std::vector<std::size_t> ladder{4, 8, 16};
  const auto rep = representation_check(ladder, default_multipliers(), WeightSystem(2));
  CHECK(rep.pass);
  REQUIRE(rep.levels.size() == 3);
  for (const auto& l : rep.levels) {
    CHECK(l.cases > 0);
    CHECK(l.rapid == l.cases);
    CHECK(l.left_members == l.cases);
    CHECK(l.right_members == l.cases);
    CHECK(l.max_residual <= 1e-9);
  }
  const std::vector<std::size_t> short_ladder{4, 8};
  CHECK_THROWS_AS(representation_check(short_ladder, default_multipliers(), WeightSystem(2)), Rejected);
  const std::vector<Generator> wild{gen::diag(Monomial{1.0, {0.0}, -0.5})};
  CHECK_THROWS_AS(representation_check(ladder, wild, WeightSystem(2)), Rejected);
}
