#pragma once

// Graded coefficient arrays: elements of A (rapid decay), B (square summable)
// and A† (tempered) at finite truncation, with the seminorms
//   p_k(a) = max_m |a_m| w(m)^k,   w(m) = prod_i (1 + m_i).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fhlab/catalog.hpp"
#include "fhlab/common.hpp"

namespace fhlab {

class AlgebraModel;

class WeightSystem {
 public:
  explicit WeightSystem(std::size_t axes);

  std::size_t axes() const { return axes_; }
  double operator()(std::span<const std::size_t> m) const;

 private:
  std::size_t axes_;
};

/// Dense row-major complex array over a truncated index box, optionally carrying
/// a closed-form generator and/or a growth envelope. Immutable.
class GradedElement {
 public:
  /// Validates shape, and that coefficients agree with the generator (exactly)
  /// and satisfy the envelope bound.
  GradedElement(MultiIndex trunc, std::vector<Complex> coeffs,
                std::optional<EnvelopeClass> envelope = std::nullopt,
                std::optional<Generator> generator = std::nullopt);

  /// Materializes the generator on the box; the envelope is derived from it.
  static GradedElement from_generator(const Generator& g, MultiIndex trunc);
  static GradedElement zeros(MultiIndex trunc);

  std::size_t axes() const { return trunc_.size(); }
  const MultiIndex& trunc() const { return trunc_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex operator[](std::size_t flat) const { return coeffs_[flat]; }
  Complex at(std::span<const std::size_t> m) const { return coeffs_[flat_index(m)]; }

  const std::optional<EnvelopeClass>& envelope() const { return envelope_; }
  const std::optional<Generator>& generator() const { return generator_; }
  WeightSystem weights() const { return WeightSystem(axes()); }

  std::size_t flat_index(std::span<const std::size_t> m) const;
  MultiIndex multi_index(std::size_t flat) const;

  /// Same element on a different box. Enlarging needs a generator; shrinking
  /// keeps the leading block (and any certificate).
  GradedElement retruncated(const MultiIndex& trunc) const;

  /// Copy with certificates dropped (numeric evidence only).
  GradedElement stripped() const;
  GradedElement with_envelope(std::optional<EnvelopeClass> e) const;

  bool same_shape(const GradedElement& other) const { return trunc_ == other.trunc_; }

  /// Largest ratio |a_m| / envelope(m) over stored entries (0 when none).
  static double envelope_excess(std::span<const Complex> coeffs, const MultiIndex& trunc,
                                const EnvelopeClass& env);

 private:
  MultiIndex trunc_;
  std::vector<Complex> coeffs_;
  std::optional<EnvelopeClass> envelope_;
  std::optional<Generator> generator_;
};

/// p_k(a) = max over stored m of |a_m| w(m)^k. Index-ascending reduction.
double seminorm(const GradedElement& a, int k);

/// <f, h> = sum_m f_m conj(h_m); conjugate-linear in h.
Complex pairing(const GradedElement& f, const GradedElement& h);

/// B-norm at truncation.
double hilbert_norm(const GradedElement& a);

struct ClassifierThresholds {
  double slope = 8.0;           // |power-law slope| beyond which growth/decay is super-polynomial
  double fit_ratio = 0.25;      // exponential fit this much tighter than the power fit: super-polynomial
  std::size_t min_shells = 3;   // fewer complete dyadic shells than this: no fit
};

/// One ladder level of the numeric classifier.
struct ShellFit {
  std::size_t level = 0;
  std::size_t shells = 0;
  double power_slope = 0.0;     // slope of log max|a| vs log(shell start)
  double power_residual = 0.0;  // RMS in log space
  double exp_rate = 0.0;        // r in log max|a| ~ b - r * shell start
  double exp_residual = 0.0;
  bool finite_support = false;
  GrowthClass verdict = GrowthClass::Inconclusive;
};

struct Classification {
  GrowthClass verdict = GrowthClass::Inconclusive;
  std::string method;  // "generator", "envelope" or "numeric"
  std::vector<ShellFit> fits;
};

/// Decides membership in A / B / A†. Exact when a generator or envelope is
/// present; otherwise a dyadic-shell regression across the ladder.
Classification classify(const GradedElement& a, std::span<const std::size_t> ladder,
                        const ClassifierThresholds& thresholds = {});

/// The numeric classifier alone, at one level (entries with max index < level).
ShellFit fit_shells(const GradedElement& a, std::size_t level, const ClassifierThresholds& thresholds = {});

/// The triple A -> B -> A† over one weight system.
struct GelfandTriple {
  WeightSystem weights{1};
  int max_order = 6;
  ClassifierThresholds thresholds{};

  std::vector<double> seminorms(const GradedElement& a) const;
  Complex pair(const GradedElement& f, const GradedElement& h) const { return pairing(f, h); }
  Classification classify(const GradedElement& a, std::span<const std::size_t> ladder) const {
    return fhlab::classify(a, ladder, thresholds);
  }
  /// iota: A -> B. Rejects elements not certified in A.
  GradedElement embed(const GradedElement& a, std::span<const std::size_t> ladder) const;
  /// iota†: B -> A† (Riesz). Rejects elements not in B.
  GradedElement embed_dual(const GradedElement& b, std::span<const std::size_t> ladder) const;
};

struct UniformityResult {
  double value = 0.0;  // sup_{f in S, g in probes} p_k(f#g) / p_{k'}(g)
  int k = 0;
  int k_prime = 0;
  std::size_t probes = 0;
};

/// Equicontinuity surrogate for {g -> f#g : f in S}. Every f must be RapidDecay.
UniformityResult bounded_family_uniformity(std::span<const GradedElement> family, int k,
                                           const AlgebraModel& model);

}  // namespace fhlab
