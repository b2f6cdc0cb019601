#include <array>
#include <cmath>

#include "doctest.h"
#include "fhlab/catalog.hpp"

using namespace fhlab;

namespace {

// sum_{k<K} f(i,k) g(k,j), evaluated entry by entry from the generator rules
Complex naive_matrix_entry(const Generator& f, const Generator& g, std::size_t i, std::size_t j, std::size_t K) {
  Complex s = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const std::array<std::size_t, 2> ik{i, k}, kj{k, j};
    s += evaluate(f, ik) * evaluate(g, kj);
  }
  return s;
}

}  // namespace

TEST_CASE("power_exp_series against direct summation") {
  struct Case {
    double p, r;
  };
  for (auto c : {Case{0.0, 1.0}, Case{3.0, 0.5}, Case{-2.0, 0.1}, Case{5.0, 2.0}, Case{1.0, 0.05}}) {
    double brute = 0.0;
    for (std::size_t k = 0; k < 200000; ++k) brute += std::pow(1.0 + k, c.p) * std::exp(-c.r * k);
    const auto s = power_exp_series(c.p, c.r);
    REQUIRE(s);
    CHECK(*s >= brute * (1.0 - 1e-13));
    CHECK(*s == doctest::Approx(brute).epsilon(1e-12));
  }
  // geometric series in closed form
  CHECK(*power_exp_series(0.0, std::log(2.0)) == doctest::Approx(2.0).epsilon(1e-14));
  // zeta(2) = pi^2 / 6, zeta(4) = pi^4 / 90
  const double pi = std::acos(-1.0);
  CHECK(*power_exp_series(-2.0, 0.0) == doctest::Approx(pi * pi / 6).epsilon(1e-13));
  CHECK(*power_exp_series(-4.0, 0.0) >= std::pow(pi, 4) / 90);
  CHECK_FALSE(power_exp_series(-1.0, 0.0));
  CHECK_FALSE(power_exp_series(0.0, 0.0));
  CHECK_FALSE(power_exp_series(-5.0, -0.1));
}

TEST_CASE("envelope bounds") {
  const auto e = EnvelopeClass::uniform({2.0, -1.0}, 0.5, 3.0);
  const std::array<std::size_t, 2> m{3, 1};
  CHECK(e.bound(m) == doctest::Approx(3.0 * 16.0 * 0.5 * std::exp(-2.0)));
  EnvelopeClass d;
  d.poly = {1.0};
  d.exp_rate = {0.0};
  d.diagonal = true;
  const std::array<std::size_t, 2> on{4, 4}, off{4, 2};
  CHECK(d.bound(on) == doctest::Approx(5.0));
  CHECK(d.bound(off) == 0.0);
}

TEST_CASE("pointwise catalog products are exact") {
  const std::vector<Generator> seqs{gen::seq(gen::power(2.0, Complex(1, 1))), gen::seq(gen::exponential(0.3)),
                                    gen::seq(gen::delta(2, 3.0)), gen::seq(gen::power(-1.5))};
  for (const auto& f : seqs)
    for (const auto& g : seqs) {
      const auto p = catalog_product(f, g, false);
      REQUIRE(p);
      for (std::size_t m = 0; m < 12; ++m) {
        const std::array<std::size_t, 1> idx{m};
        const Complex want = evaluate(f, idx) * evaluate(g, idx);
        CHECK(std::abs(evaluate(*p, idx) - want) <= 1e-13 * (1.0 + std::abs(want)));
      }
    }
}

TEST_CASE("matrix catalog products match long naive contractions") {
  const std::vector<Generator> mats{
      gen::identity(),
      gen::diag(gen::power(3.0)),
      gen::diag(gen::exponential(0.2, Complex(0, 2))),
      gen::full_exponential(0.4),
      gen::full_power(-2.0, -3.0),
      gen::outer(gen::exponential(0.7), gen::power(-2.5)),
      gen::outer(gen::delta(1, Complex(0, 1)), gen::exponential(0.5)),
      gen::matrix_unit(2, 3, 2.0),
  };
  const std::size_t K = 20000;
  std::size_t checked = 0;
  for (const auto& f : mats)
    for (const auto& g : mats) {
      const auto p = catalog_product(f, g, true);
      if (!p) continue;
      ++checked;
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
          const std::array<std::size_t, 2> ij{i, j};
          const Complex want = naive_matrix_entry(f, g, i, j, K);
          // tails of the slowest pair (k^-5.5) are below 1e-16 at K = 2e4
          CHECK(std::abs(evaluate(*p, ij) - want) <= 1e-9 * (1.0 + std::abs(want)));
          CHECK(std::abs(evaluate(*p, ij)) <= envelope_of(*p).bound(ij) * (1.0 + 1e-12));
        }
    }
  CHECK(checked == mats.size() * mats.size());
}

TEST_CASE("divergent contractions have no catalog product") {
  const auto ones = gen::full_power(0.0, 0.0);
  CHECK_FALSE(catalog_product(ones, ones, true));
  const auto row = gen::outer(gen::delta(0), gen::power(0.0));
  const auto col = gen::outer(gen::power(0.0), gen::delta(0));
  CHECK_FALSE(catalog_product(row, col, true));
  // column times row is a rank-one matrix, always defined
  const auto cr = catalog_product(col, row, true);
  REQUIRE(cr);
  const std::array<std::size_t, 2> m{7, 9};
  CHECK(evaluate(*cr, m) == Complex(1.0));
}

TEST_CASE("catalog involution is the conjugate transpose") {
  const std::vector<Generator> mats{gen::diag(gen::power(1.0, Complex(0, 1))),
                                    gen::full_power(1.0, -2.0, Complex(1, 2)),
                                    gen::outer(gen::delta(0, Complex(0, 1)), gen::exponential(0.3)),
                                    gen::matrix_unit(1, 4, Complex(2, -1))};
  for (const auto& f : mats) {
    const auto a = catalog_involution(f, true);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        const std::array<std::size_t, 2> ij{i, j}, ji{j, i};
        CHECK(std::abs(evaluate(a, ij) - std::conj(evaluate(f, ji))) <= 1e-14);
      }
    CHECK(generator_growth(a) == generator_growth(f));
  }
  const auto s = catalog_involution(gen::seq(gen::power(2.0, Complex(0, 3))), false);
  const std::array<std::size_t, 1> m{2};
  CHECK(evaluate(s, m) == Complex(0, -27));
}

TEST_CASE("envelope product rules") {
  const auto a = EnvelopeClass::uniform({1.0, 2.0}, 0.1, 2.0);
  const auto b = EnvelopeClass::uniform({-3.0, 0.0}, 0.2, 0.5);
  const auto p = envelope_pointwise_product(a, b);
  CHECK(p.poly == std::vector<double>{-2.0, 2.0});
  CHECK(p.exp_rate[0] == doctest::Approx(0.3));
  CHECK(p.constant == doctest::Approx(1.0));

  // matrix product bound holds for the product of two extremal matrices
  const auto m = envelope_matrix_product(a, b);
  REQUIRE(m);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 5000; ++k) {
        const std::array<std::size_t, 2> ik{i, k}, kj{k, j};
        s += a.bound(ik) * b.bound(kj);
      }
      const std::array<std::size_t, 2> ij{i, j};
      CHECK(s <= m->bound(ij) * (1.0 + 1e-12));
    }
  CHECK_FALSE(envelope_matrix_product(EnvelopeClass::uniform({0.0, 0.0}, 0.0, 1.0),
                                      EnvelopeClass::uniform({0.0, 0.0}, 0.0, 1.0)));
  const auto t = envelope_transpose(EnvelopeClass::uniform({1.0, -2.0}, 0.0, 1.0));
  CHECK(t.poly == std::vector<double>{-2.0, 1.0});
}

TEST_CASE("growth class names round trip") {
  for (auto c : {GrowthClass::RapidDecay, GrowthClass::SquareSummable, GrowthClass::Tempered, GrowthClass::Wild,
                 GrowthClass::Inconclusive})
    CHECK(growth_class_from_string(to_string(c)) == c);
  CHECK(worst(GrowthClass::RapidDecay, GrowthClass::Tempered) == GrowthClass::Tempered);
  CHECK(in_dual(GrowthClass::Tempered));
  CHECK_FALSE(in_hilbert(GrowthClass::Tempered));
}
