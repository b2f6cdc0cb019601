#pragma once

// Moyal multiplier membership (M_L, M_R, M), bounded elements, and the trace
// tau_L on finite pairs of bounded elements.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fhlab/algebra.hpp"

namespace fhlab {

enum class Side { Left, Right, Both };
enum class Verdict { Member, NonMember, Inconclusive };

std::string to_string(Side s);
std::string to_string(Verdict v);

struct MembershipVerdict {
  Side side = Side::Left;
  Verdict verdict = Verdict::Inconclusive;
  std::string method;                    // "catalog", "envelope" or "numeric"
  std::vector<std::string> certificate;  // derivation steps / ladder statistics
  std::optional<Generator> witness;      // probe g in A with the product outside A
  std::optional<GrowthClass> witness_product_class;
  std::vector<std::size_t> ladder;
  std::vector<double> residuals;  // numeric path: power-law slope of each probe product at the top level

  bool member_on(Side s) const {
    return verdict == Verdict::Member && (side == s || side == Side::Both);
  }
  std::string summary() const;
};

/// Probe basket: e^{-m} diagonal, e^{-(m+n)} full, rank-one e^{-m} (x) e^{-n},
/// then the delta family (pointwise: e^{-m} and deltas).
std::vector<Generator> moyal_probe_basket(const AlgebraModel& model);

/// f # A ⊂ A ?
MembershipVerdict is_left_moyal(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder,
                                std::span<const Generator> probes);
MembershipVerdict is_left_moyal(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder);

/// A # f ⊂ A ?
MembershipVerdict is_right_moyal(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder,
                                 std::span<const Generator> probes);
MembershipVerdict is_right_moyal(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder);

/// Both sides; side == Both and Member only when both one-sided verdicts are Member.
struct MoyalMembership {
  MembershipVerdict left, right;
  MembershipVerdict both() const;
};
MoyalMembership moyal_membership(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder);

struct BoundedVerdict {
  Verdict verdict = Verdict::Inconclusive;
  double constant = 0.0;                      // sup over the ladder of ||L_f|| on the leading block
  std::optional<double> certified_bound;      // closed-form bound on ||L_f|| from the certificate
  std::vector<double> norms;                  // per ladder level
  std::vector<std::size_t> ladder;
};

/// Is g -> f#g bounded on B? Input must be SquareSummable.
BoundedVerdict is_bounded_element(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder);

/// tau_L(L_f L_g) = <f, g^#>, for certified bounded f and g.
Complex trace_tau_left(const GradedElement& f, const GradedElement& g, const AlgebraModel& model,
                       std::span<const std::size_t> ladder);

}  // namespace fhlab
