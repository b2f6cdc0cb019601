#include <cmath>

#include "doctest.h"
#include "fhlab/moyal.hpp"
#include "oracles.hpp"

using namespace fhlab;

namespace {

const std::vector<std::size_t> kLadder{8, 16, 32};

GradedElement mat(const Generator& g, std::size_t d = 32) { return GradedElement::from_generator(g, {d, d}); }

}  // namespace

TEST_CASE("curated matrix verdicts") {
  const MatrixModel mm(32);
  auto both = [&](const Generator& g) { return moyal_membership(mat(g), mm, kLadder); };

  const auto id = both(gen::identity());
  CHECK(id.left.verdict == Verdict::Member);
  CHECK(id.right.verdict == Verdict::Member);
  CHECK(id.both().verdict == Verdict::Member);
  CHECK(id.both().side == Side::Both);

  for (double p : {1.0, 3.0, 5.0}) CHECK(both(gen::diag(gen::power(p))).both().member_on(Side::Both));

  const auto e0v = gen::outer(gen::delta(0), gen::power(0.0));
  const auto m = both(e0v);
  CHECK(m.left.verdict == Verdict::Member);
  CHECK(m.right.verdict == Verdict::NonMember);
  CHECK(m.both().verdict == Verdict::NonMember);
  REQUIRE(m.right.witness);
  REQUIRE(m.right.witness_product_class);
  CHECK_FALSE(in_algebra(*m.right.witness_product_class));
  // witness replay: g # e_0 v^* = g_{:,0} v^*, a full row of constants times a decaying column
  const auto g = mat(*m.right.witness);
  const auto prod = mm.product(g, mat(e0v));
  const auto want = oracle::mul(oracle::to_mat(g), oracle::to_mat(mat(e0v)));
  CHECK(oracle::max_diff(prod, want) <= 1e-14);
  CHECK_FALSE(in_algebra(classify(prod.stripped(), kLadder).verdict));

  const auto adj = both(catalog_involution(e0v, true));
  CHECK(adj.left.verdict == m.right.verdict);
  CHECK(adj.right.verdict == m.left.verdict);

  CHECK_THROWS_AS(both(gen::diag(Monomial{1.0, {0.0}, -std::log(2.0)})), Rejected);
}

TEST_CASE("curated pointwise verdicts") {
  const PointwiseModel pw(64);
  const std::vector<std::size_t> ladder{16, 32, 64};
  for (double p : {0.0, 1.0, 3.0, 5.0}) {
    const auto f = GradedElement::from_generator(gen::seq(gen::power(p)), {64});
    CHECK(moyal_membership(f, pw, ladder).both().verdict == Verdict::Member);
  }
}

TEST_CASE("numeric path on elements without certificates") {
  const MatrixModel mm(32);
  const auto id = moyal_membership(mat(gen::identity()).stripped(), mm, kLadder);
  CHECK(id.left.method == "numeric");
  CHECK(id.both().verdict == Verdict::Member);
  const auto e0v = moyal_membership(mat(gen::outer(gen::delta(0), gen::power(0.0))).stripped(), mm, kLadder);
  CHECK(e0v.left.verdict == Verdict::Member);
  CHECK(e0v.right.verdict == Verdict::NonMember);
  CHECK(e0v.right.witness);
  CHECK_FALSE(e0v.right.residuals.empty());
}

TEST_CASE("rapid elements are two-sided members") {
  const MatrixModel mm(32);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto m = moyal_membership(mm.sample(4, i), mm, kLadder);
    CHECK(m.left.verdict == Verdict::Member);
    CHECK(m.right.verdict == Verdict::Member);
    CHECK(m.left.method == "envelope");
  }
}

TEST_CASE("closure under products and involution, ideal property") {
  const MatrixModel mm(32);
  const std::vector<Generator> members{gen::identity(), gen::diag(gen::power(2.0, Complex(0, 1))),
                                       gen::diag(gen::power(-1.0)), gen::full_exponential(0.5),
                                       gen::outer(gen::exponential(0.3), gen::exponential(0.2)),
                                       gen::matrix_unit(3, 1)};
  for (const auto& f : members) {
    REQUIRE(moyal_membership(mat(f), mm, kLadder).both().verdict == Verdict::Member);
    CHECK(moyal_membership(mat(catalog_involution(f, true)), mm, kLadder).both().verdict == Verdict::Member);
    for (const auto& g : members) {
      const auto p = catalog_product(f, g, true);
      REQUIRE(p);
      CHECK(moyal_membership(mat(*p), mm, kLadder).both().verdict == Verdict::Member);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      const auto a = mm.sample(8, i);
      CHECK(classify(mm.product(mat(f), a), kLadder).verdict == GrowthClass::RapidDecay);
      CHECK(classify(mm.product(a, mat(f)), kLadder).verdict == GrowthClass::RapidDecay);
    }
  }
}

TEST_CASE("probe basket layout") {
  const auto m = moyal_probe_basket(MatrixModel(8));
  REQUIRE(m.size() == 7);
  CHECK(describe(m[0]) == describe(gen::diag(gen::exponential(1.0))));
  const auto p = moyal_probe_basket(PointwiseModel(8));
  CHECK(p.size() == 4);
  CHECK(moyal_probe_basket(MatrixModel(1)).size() == 4);
}

TEST_CASE("bounded elements") {
  const MatrixModel mm(32);
  const auto e00 = is_bounded_element(mat(gen::matrix_unit(0, 0)), mm, kLadder);
  CHECK(e00.verdict == Verdict::Member);
  CHECK(e00.constant == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(e00.certified_bound);
  CHECK(*e00.certified_bound >= e00.constant);

  // ||L_f|| is the spectral norm; for diag entries (1+m)^-1 it is 1
  const auto inv = is_bounded_element(mat(gen::diag(gen::power(-1.0))), mm, kLadder);
  CHECK(inv.constant == doctest::Approx(1.0));

  // Hilbert-Schmidt matrix: spectral norm below its certified bound
  const auto hs = is_bounded_element(mat(gen::full_power(-1.0, -1.0)), mm, kLadder);
  REQUIRE(hs.certified_bound);
  CHECK(hs.constant <= *hs.certified_bound);
  for (std::size_t i = 1; i < hs.norms.size(); ++i) CHECK(hs.norms[i] >= hs.norms[i - 1] - 1e-12);

  CHECK_THROWS_AS(is_bounded_element(mat(gen::identity()), mm, kLadder), Rejected);

  const PointwiseModel pw(64);
  const std::vector<std::size_t> ladder{16, 32, 64};
  auto seq = [](const Generator& g) { return GradedElement::from_generator(g, {64}); };
  CHECK(is_bounded_element(seq(gen::seq(gen::power(-1.0))), pw, ladder).constant == 1.0);
  CHECK_THROWS_AS(is_bounded_element(seq(gen::seq(gen::power(-0.25))), pw, ladder), Rejected);
}

TEST_CASE("trace on bounded pairs") {
  const MatrixModel mm(16);
  const std::vector<std::size_t> ladder{4, 8, 16};
  const auto e00 = mat(gen::matrix_unit(0, 0), 16);
  CHECK(std::abs(trace_tau_left(e00, e00, mm, ladder) - 1.0) <= 1e-15);
  const auto e01 = mat(gen::matrix_unit(0, 1), 16);
  const auto e10 = mat(gen::matrix_unit(1, 0), 16);
  CHECK(std::abs(trace_tau_left(e01, e10, mm, ladder) - 1.0) <= 1e-15);
  CHECK(std::abs(trace_tau_left(e01, e01, mm, ladder)) <= 1e-15);

  for (std::size_t i = 0; i < 10; ++i) {
    const auto f = mm.sample(21, 2 * i);
    const auto g = mm.sample(21, 2 * i + 1);
    const Complex tr = oracle::trace(oracle::mul(oracle::to_mat(f), oracle::to_mat(g)));
    CHECK(std::abs(trace_tau_left(f, g, mm, ladder) - tr) <= 1e-10);
    // symmetry tau(fg) = tau(gf)
    CHECK(std::abs(trace_tau_left(f, g, mm, ladder) - trace_tau_left(g, f, mm, ladder)) <= 1e-12);
    // faithfulness: tau(f^# f) = ||f||^2 > 0
    const Complex pos = trace_tau_left(mm.involution(f), f, mm, ladder);
    CHECK(std::abs(pos - mm.norm(f) * mm.norm(f)) <= 1e-10);
    CHECK(pos.real() > 0.0);
  }
  const auto t = random_tempered({16, 16}, 0, 0, 1.0);
  CHECK_THROWS_AS(trace_tau_left(t, e00, mm, ladder), Rejected);

  const PointwiseModel pw(40);
  const std::vector<std::size_t> pl{10, 20, 40};
  const auto e = GradedElement::from_generator(gen::seq(gen::exponential(1.0)), {40});
  double geometric = 0.0;
  for (int m = 0; m < 40; ++m) geometric += std::exp(-2.0 * m);
  CHECK(std::abs(trace_tau_left(e, e, pw, pl) - geometric) <= 1e-14);
}
