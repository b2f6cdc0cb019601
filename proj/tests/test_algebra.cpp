#include <cmath>

#include "doctest.h"
#include "fhlab/algebra.hpp"
#include "fhlab/moyal.hpp"
#include "oracles.hpp"

using namespace fhlab;

namespace {

double rel_diff(const GradedElement& a, const oracle::Mat& b) {
  double scale = 0.0;
  for (const auto& row : b)
    for (auto x : row) scale = std::max(scale, std::abs(x));
  return oracle::max_diff(a, b) / (1.0 + scale);
}

}  // namespace

TEST_CASE("model products against naive loops") {
  const MatrixModel mm(12);
  const PointwiseModel pw(30);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto f = mm.sample(3, 2 * i);
    const auto g = mm.sample(3, 2 * i + 1);
    CHECK(rel_diff(mm.product(f, g), oracle::mul(oracle::to_mat(f), oracle::to_mat(g))) <= 1e-14);
    CHECK(oracle::max_diff(mm.involution(f), oracle::adjoint(oracle::to_mat(f))) == 0.0);
    const Complex tr = oracle::trace(oracle::mul(oracle::to_mat(f), oracle::adjoint(oracle::to_mat(g))));
    CHECK(std::abs(mm.inner(f, g) - tr) <= 1e-14 * (1.0 + std::abs(tr)));

    const auto a = pw.sample(5, 2 * i);
    const auto b = pw.sample(5, 2 * i + 1);
    const auto p = pw.product(a, b);
    for (std::size_t m = 0; m < 30; ++m) {
      CHECK(p[m] == a[m] * b[m]);
      CHECK(pw.involution(a)[m] == std::conj(a[m]));
    }
  }
}

TEST_CASE("axiom suites pass on the shipped models") {
  const CorpusSpec corpus{0, 100};
  const PointwiseModel pw(64);
  const MatrixModel mm(16);
  for (const AlgebraModel* model : {static_cast<const AlgebraModel*>(&pw), static_cast<const AlgebraModel*>(&mm)}) {
    const auto r = check_hilbert_axioms(*model, corpus, 1e-10);
    CHECK(r.all_pass());
    REQUIRE(r.axioms.size() == 4);
    CHECK(r.axioms[0].residual <= 1e-10);
    CHECK(r.axioms[1].residual <= 1e-10);
    CHECK(r.axioms[2].residual <= 1.0 + 1e-12);  // ||f g||_2 <= ||f||_2 ||g||_2
    CHECK(r.axioms[3].residual == 0.0);
  }
}

TEST_CASE("totality fails with too few samples") {
  const MatrixModel mm(8);
  // 3 products cannot span a 64-dimensional algebra
  const auto r = check_hilbert_axioms(mm, {0, 1}, 1e-10);
  CHECK_FALSE(r.axioms[3].pass);
  CHECK(r.axioms[3].residual == doctest::Approx(61.0));
  CHECK(r.axioms[3].witness.size() == 1);
}

TEST_CASE("planted defects are caught with replayable witnesses") {
  Mutation transpose;
  transpose.apply("involution", "transpose");
  const MatrixModel bad(6, transpose);
  const auto r = check_hilbert_axioms(bad, {1, 20}, 1e-10);
  CHECK_FALSE(r.axioms[0].pass);
  REQUIRE(r.axioms[0].witness.size() == 1);
  const auto t = corpus_triple(bad, {1, 20}, r.axioms[0].witness[0]);
  CHECK(involution_adjoint_residual(bad, t.f, t.g) > 1e-10);

  // hand-worked case: <(E01)^T, (i E01)^T> = -i while <i E01, E01> = i
  const auto e01 = GradedElement::from_generator(gen::matrix_unit(0, 1), {6, 6});
  const auto ie01 = GradedElement::from_generator(gen::matrix_unit(0, 1, Complex(0, 1)), {6, 6});
  CHECK(involution_adjoint_residual(bad, ie01, e01) == doctest::Approx(1.0));
  CHECK(involution_adjoint_residual(MatrixModel(6), ie01, e01) == 0.0);

  Mutation drop;
  drop.apply("product", "dropconj");
  for (const AlgebraModel* model : {static_cast<const AlgebraModel*>(new MatrixModel(6, drop)),
                                    static_cast<const AlgebraModel*>(new PointwiseModel(20, drop))}) {
    const auto rep = check_hilbert_axioms(*model, {2, 20}, 1e-10);
    CHECK_FALSE(rep.axioms[1].pass);
    REQUIRE(rep.axioms[1].witness.size() == 1);
    const auto w = corpus_triple(*model, {2, 20}, rep.axioms[1].witness[0]);
    CHECK(product_adjoint_residual(*model, w.f, w.g, w.h) > 1e-10);
    CHECK(rep.axioms[1].witness[0] == 0);  // lowest failing triple
    delete model;
  }
  CHECK(drop.describe() == "product=dropconj");
  CHECK_THROWS_AS(drop.apply("product", "bogus"), std::invalid_argument);
  CHECK_THROWS_AS(drop.apply("colour", "red"), std::invalid_argument);
}

TEST_CASE("corpus draws are reproducible") {
  const MatrixModel mm(10);
  const auto a = mm.sample(7, 3);
  const auto b = mm.sample(7, 3);
  CHECK(oracle::max_diff(a, b) == 0.0);
  CHECK(oracle::max_diff(a, mm.sample(8, 3)) > 0.0);
  const auto g = random_gaussian({10, 10}, 1, 0, 2.0);
  const std::array<std::size_t, 2> m{3, 4};
  CHECK(std::abs(g.at(m)) <= std::exp(-25.0 / 8.0) * (1.0 + 1e-15));
}

TEST_CASE("duality extensions agree with direct products") {
  const MatrixModel mm(10);
  for (std::size_t i = 0; i < 8; ++i) {
    const auto f = mm.sample(11, 2 * i);
    const auto g = mm.sample(11, 2 * i + 1);
    const auto fm = oracle::to_mat(f), gm = oracle::to_mat(g);
    CHECK(rel_diff(extend_product_right(f, g, mm), oracle::mul(fm, gm)) <= 1e-12);
    CHECK(rel_diff(extend_product_left(g, f, mm), oracle::mul(gm, fm)) <= 1e-12);
    CHECK(rel_diff(extend_involution(f, mm), oracle::adjoint(fm)) <= 1e-12);

    // tempered left factor
    const auto t = random_tempered({10, 10}, 12, i, 2.0);
    const auto tm = oracle::to_mat(t);
    CHECK(rel_diff(extend_product_right(t, g, mm), oracle::mul(tm, gm)) <= 1e-12);
    CHECK(rel_diff(extend_product_left(g, t, mm), oracle::mul(gm, tm)) <= 1e-12);
  }
  const PointwiseModel pw(20);
  const auto t = random_tempered({20}, 1, 0, 3.0);
  const auto g = pw.sample(1, 0);
  const auto e = extend_product_right(t, g, pw);
  for (std::size_t m = 0; m < 20; ++m) CHECK(std::abs(e[m] - t[m] * g[m]) <= 1e-12 * (1.0 + std::abs(t[m])));
}

TEST_CASE("extensions reject operands outside their domain") {
  const MatrixModel mm(16);
  const auto wild = GradedElement::from_generator(gen::diag(Monomial{1.0, {0.0}, -std::log(2.0)}), {16, 16});
  const auto g = mm.sample(0, 0);
  CHECK_THROWS_AS(extend_product_right(wild, g, mm), Rejected);
  CHECK_THROWS_AS(extend_involution(wild, mm), Rejected);
  const auto t = random_tempered({16, 16}, 0, 0, 1.0);
  CHECK_THROWS_AS(extend_product_right(g, t, mm), Rejected);  // right factor must be in A
}

TEST_CASE("Moyal extensions match naive products") {
  const MatrixModel mm(16);
  const auto ladder = default_ladder(mm.sample(0, 0));
  CHECK(ladder == std::vector<std::size_t>{4, 8, 16});
  const auto f = GradedElement::from_generator(gen::diag(gen::power(3.0)), {16, 16});
  const auto right = is_right_moyal(f, mm, ladder);
  const auto left = is_left_moyal(f, mm, ladder);
  REQUIRE(right.verdict == Verdict::Member);
  REQUIRE(left.verdict == Verdict::Member);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto t = random_tempered({16, 16}, 5, i, 2.0);
    CHECK(rel_diff(moyal_extend(f, right, t, mm), oracle::mul(oracle::to_mat(f), oracle::to_mat(t))) <= 1e-12);
    CHECK(rel_diff(moyal_extend_left(t, f, left, mm), oracle::mul(oracle::to_mat(t), oracle::to_mat(f))) <= 1e-12);
  }
  // certificates must be for the right side
  CHECK_THROWS_AS(moyal_extend(f, left, random_tempered({16, 16}, 5, 0, 2.0), mm), Rejected);
}

TEST_CASE("mixed associativity against naive triple products") {
  const MatrixModel mm(12);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto t = random_tempered({12, 12}, 9, i, 2.0);
    const auto g = mm.sample(9, 2 * i);
    const auto h = mm.sample(9, 2 * i + 1);
    const auto want = oracle::mul(oracle::mul(oracle::to_mat(t), oracle::to_mat(g)), oracle::to_mat(h));
    CHECK(rel_diff(extend_product_right(extend_product_right(t, g, mm), h, mm), want) <= 1e-9);
    CHECK(rel_diff(extend_product_right(t, mm.product(g, h), mm), want) <= 1e-9);
  }
}
