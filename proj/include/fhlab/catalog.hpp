#pragma once

// Growth envelopes and the closed generator catalog.
//
// An EnvelopeClass certifies |a_m| <= C * prod_i (1+m_i)^{p_i} * exp(-sum_i r_i m_i).
// Generators are closed-form entry rules; each has an exact envelope and an exact
// growth class, and products of catalog generators stay in the catalog.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fhlab/common.hpp"

namespace fhlab {

/// Membership class inside the triple A (rapid decay) ⊂ B (square summable) ⊂ A† (tempered).
/// Ordered from most to least regular; Inconclusive is last.
enum class GrowthClass { RapidDecay = 0, SquareSummable = 1, Tempered = 2, Wild = 3, Inconclusive = 4 };

std::string to_string(GrowthClass c);
GrowthClass growth_class_from_string(const std::string& s);

inline bool in_algebra(GrowthClass c) { return c == GrowthClass::RapidDecay; }
inline bool in_hilbert(GrowthClass c) {
  return c == GrowthClass::RapidDecay || c == GrowthClass::SquareSummable;
}
inline bool in_dual(GrowthClass c) {
  return c == GrowthClass::RapidDecay || c == GrowthClass::SquareSummable ||
         c == GrowthClass::Tempered;
}

/// The less regular of two definite classes.
inline GrowthClass worst(GrowthClass a, GrowthClass b) { return a < b ? b : a; }

struct EnvelopeClass {
  std::vector<double> poly;      // per axis
  std::vector<double> exp_rate;  // per axis; r > 0 decays, r < 0 grows
  double constant = 1.0;
  // Diagonal support: entries off the diagonal of a 2-axis array vanish and the
  // bound reads |a_mm| <= C (1+m)^p e^{-r m} with single-entry poly/exp_rate.
  bool diagonal = false;

  std::size_t axes() const { return diagonal ? 2 : poly.size(); }
  double bound(std::span<const std::size_t> m) const;

  static EnvelopeClass uniform(std::vector<double> poly, double rate, double constant);
};

/// Exact class of the set of sequences admitting this envelope.
GrowthClass envelope_growth(const EnvelopeClass& e);

/// Pointwise product: exponents add, rates add, constants multiply.
EnvelopeClass envelope_pointwise_product(const EnvelopeClass& a, const EnvelopeClass& b);

/// Matrix product bound. Empty when the contraction series diverges.
std::optional<EnvelopeClass> envelope_matrix_product(const EnvelopeClass& a, const EnvelopeClass& b);

/// Envelope of the conjugate transpose of a 2-axis array.
EnvelopeClass envelope_transpose(const EnvelopeClass& e);

/// Upper bound for sum_{k>=0} (1+k)^p e^{-r k}; empty if divergent.
std::optional<double> power_exp_series(double p, double r);

// ---------------------------------------------------------------------------
// Generator catalog

/// c * prod_i (1+m_i)^{p_i} * exp(-rate * sum_i m_i). Power laws and exponentials.
struct Monomial {
  Complex coef{1.0, 0.0};
  std::vector<double> exponents;
  double rate = 0.0;
};

/// c at a single index, zero elsewhere.
struct Kronecker {
  Complex coef{1.0, 0.0};
  MultiIndex index;
};

using Atom = std::variant<Monomial, Kronecker>;

/// Rank-one outer product: a_{mn} = left(m) * conj(right(n)), i.e. |left><right|.
struct Outer {
  Atom left;
  Atom right;
};

/// a_{mn} = delta_{mn} * entry(m).
struct Diagonal {
  Atom entry;
};

using Generator = std::variant<Monomial, Kronecker, Outer, Diagonal>;

std::size_t generator_axes(const Generator& g);
std::size_t atom_axes(const Atom& a);
Complex evaluate(const Generator& g, std::span<const std::size_t> m);
Complex evaluate(const Atom& a, std::span<const std::size_t> m);

EnvelopeClass envelope_of(const Generator& g);
EnvelopeClass envelope_of(const Atom& a);

/// Exact membership class of the infinite sequence/matrix the generator describes.
GrowthClass generator_growth(const Generator& g);

/// Human-readable one-liner, e.g. "diag((1+m)^3)".
std::string describe(const Generator& g);

// Convenience constructors used throughout tests and scenarios.
namespace gen {
Atom power(double p, Complex c = 1.0);
Atom exponential(double rate, Complex c = 1.0);
Atom delta(std::size_t j, Complex c = 1.0);
Generator seq(Atom a);
Generator diag(Atom a);
Generator outer(Atom left, Atom right);
Generator identity();
Generator matrix_unit(std::size_t j, std::size_t k, Complex c = 1.0);
Generator full_power(double p, double q, Complex c = 1.0);
Generator full_exponential(double rate, Complex c = 1.0);
}  // namespace gen

/// Exact product inside the catalog. `matrix` selects matrix composition on
/// 2-axis generators; otherwise the pointwise product. Empty when the product
/// involves a divergent contraction (not defined in the infinite model).
std::optional<Generator> catalog_product(const Generator& f, const Generator& g, bool matrix);

/// Exact involution inside the catalog (conjugate, or conjugate transpose).
Generator catalog_involution(const Generator& f, bool matrix);

}  // namespace fhlab
