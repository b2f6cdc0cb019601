#include "fhlab/moyal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace fhlab {

std::string to_string(Side s) {
  switch (s) {
    case Side::Left: return "Left";
    case Side::Right: return "Right";
    case Side::Both: return "Both";
  }
  return "Both";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Member: return "Member";
    case Verdict::NonMember: return "NonMember";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string MembershipVerdict::summary() const {
  std::string s = to_string(side) + ": " + to_string(verdict);
  if (!method.empty()) s += " (" + method + ")";
  if (witness) s += ", witness " + describe(*witness);
  return s;
}

std::vector<Generator> moyal_probe_basket(const AlgebraModel& model) {
  const auto view_shape = model.graded_view(model.basis(0)).trunc();
  std::vector<Generator> out;
  if (view_shape.size() == 1) {
    out.push_back(gen::seq(gen::exponential(1.0)));
    for (std::size_t j = 0; j < 3; ++j)
      if (j < view_shape[0]) out.push_back(gen::seq(gen::delta(j)));
    return out;
  }
  out.push_back(gen::diag(gen::exponential(1.0)));
  out.push_back(gen::full_exponential(1.0));
  out.push_back(gen::outer(gen::exponential(1.0), gen::exponential(1.0)));
  for (auto [j, k] : {std::pair<std::size_t, std::size_t>{0, 0}, {0, 1}, {1, 0}, {1, 1}})
    if (j < view_shape[0] && k < view_shape[1]) out.push_back(gen::matrix_unit(j, k));
  return out;
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Sufficient condition, uniform over every probe envelope (rate eps > 0, any
// polynomial part), for the one-sided product with f to be RapidDecay.
std::optional<std::string> envelope_certificate(const EnvelopeClass& e, Side side) {
  if (e.constant == 0.0) return "f = 0";
  if (e.axes() == 1) {
    if (e.exp_rate[0] < 0) return std::nullopt;
    return "pointwise: (1+m)^" + fmt(e.poly[0]) + " e^{-" + fmt(e.exp_rate[0]) +
           " m} * C'(1+m)^q e^{-eps m} has rate " + fmt(e.exp_rate[0]) + "+eps > 0";
  }
  if (e.diagonal) {
    if (e.exp_rate[0] < 0) return std::nullopt;
    return std::string(side == Side::Left ? "rows" : "columns") + " of the probe scaled by (1+m)^" + fmt(e.poly[0]) +
           " e^{-" + fmt(e.exp_rate[0]) + " m}; rate " + fmt(e.exp_rate[0]) + "+eps > 0 on both axes";
  }
  // Left:  sum_k f_mk g_kn. Row bound of f must decay, contraction over columns must converge.
  // Right: sum_k g_mk f_kn. Mirror.
  const std::size_t keep = side == Side::Left ? 0 : 1;
  const std::size_t contract = 1 - keep;
  if (!(e.exp_rate[keep] > 0) || e.exp_rate[contract] < 0) return std::nullopt;
  return std::string(side == Side::Left ? "row" : "column") + " factor (1+m)^" + fmt(e.poly[keep]) + " e^{-" +
         fmt(e.exp_rate[keep]) + " m} decays; contraction sum_k (1+k)^(" + fmt(e.poly[contract]) + "+q) e^{-(" +
         fmt(e.exp_rate[contract]) + "+eps) k} converges";
}

GradedElement materialize_probe(const Generator& g, const AlgebraModel& model) {
  const auto view_shape = model.graded_view(model.basis(0)).trunc();
  return model.from_graded(GradedElement::from_generator(g, view_shape));
}

MembershipVerdict one_sided(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder,
                            std::span<const Generator> probes, Side side) {
  model.check_shape(f, side == Side::Left ? "is_left_moyal" : "is_right_moyal");
  if (ladder.empty()) throw std::invalid_argument("moyal membership: empty ladder");
  MembershipVerdict v;
  v.side = side;
  v.ladder.assign(ladder.begin(), ladder.end());

  const auto view = model.graded_view(f);
  const auto cls = classify(view, ladder);
  if (cls.verdict == GrowthClass::Wild) throw Rejected("moyal membership: operand is Wild, not in the dual space");
  if (cls.verdict == GrowthClass::Inconclusive) {
    v.method = cls.method;
    v.certificate.push_back("operand class Inconclusive; membership undecided");
    return v;
  }
  v.certificate.push_back("operand class " + to_string(cls.verdict) + " (" + cls.method + ")");

  // Catalog: exact products against the basket.
  if (view.generator()) {
    const bool matrix = view.axes() == 2;
    for (const auto& g : probes) {
      const auto p = side == Side::Left ? catalog_product(*view.generator(), g, matrix)
                                        : catalog_product(g, *view.generator(), matrix);
      if (!p) {
        v.certificate.push_back("probe " + describe(g) + ": contraction diverges");
        continue;
      }
      const auto pc = generator_growth(*p);
      const std::string expr = side == Side::Left ? "f # " + describe(g) : describe(g) + " # f";
      v.certificate.push_back(expr + " = " + describe(*p) + " : " + to_string(pc));
      if (!in_algebra(pc)) {
        v.verdict = Verdict::NonMember;
        v.method = "catalog";
        v.witness = g;
        v.witness_product_class = pc;
        return v;
      }
    }
  }

  // Envelope: a closed derivation valid for every probe in A.
  if (view.envelope()) {
    if (auto why = envelope_certificate(*view.envelope(), side)) {
      v.verdict = Verdict::Member;
      v.method = "envelope";
      v.certificate.push_back(*why);
      return v;
    }
    v.certificate.push_back("envelope does not certify the " + to_string(side) + " side");
  }

  // Numeric: ladder classification of the stripped products.
  v.method = "numeric";
  bool undecided = false;
  for (const auto& g : probes) {
    const auto probe = materialize_probe(g, model);
    const auto prod = side == Side::Left ? model.product(f, probe) : model.product(probe, f);
    const auto pview = model.graded_view(prod).stripped();
    const auto pc = classify(pview, ladder);
    v.residuals.push_back(pc.fits.back().power_slope);
    const std::string expr = side == Side::Left ? "f # " + describe(g) : describe(g) + " # f";
    v.certificate.push_back(expr + " : " + to_string(pc.verdict) + " (slope " + fmt(pc.fits.back().power_slope) + ")");
    if (pc.verdict == GrowthClass::Inconclusive) {
      undecided = true;
    } else if (!in_algebra(pc.verdict)) {
      v.verdict = Verdict::NonMember;
      v.witness = g;
      v.witness_product_class = pc.verdict;
      return v;
    }
  }
  v.verdict = undecided ? Verdict::Inconclusive : Verdict::Member;
  return v;
}

}  // namespace

MembershipVerdict is_left_moyal(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder,
                                std::span<const Generator> probes) {
  return one_sided(f, model, ladder, probes, Side::Left);
}

MembershipVerdict is_left_moyal(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder) {
  const auto basket = moyal_probe_basket(model);
  return is_left_moyal(f, model, ladder, basket);
}

MembershipVerdict is_right_moyal(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder,
                                 std::span<const Generator> probes) {
  return one_sided(f, model, ladder, probes, Side::Right);
}

MembershipVerdict is_right_moyal(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder) {
  const auto basket = moyal_probe_basket(model);
  return is_right_moyal(f, model, ladder, basket);
}

MembershipVerdict MoyalMembership::both() const {
  MembershipVerdict v;
  v.side = Side::Both;
  v.ladder = left.ladder;
  if (left.verdict == Verdict::Member && right.verdict == Verdict::Member) {
    v.verdict = Verdict::Member;
  } else if (left.verdict == Verdict::NonMember || right.verdict == Verdict::NonMember) {
    v.verdict = Verdict::NonMember;
    const auto& bad = left.verdict == Verdict::NonMember ? left : right;
    v.witness = bad.witness;
    v.witness_product_class = bad.witness_product_class;
  } else {
    v.verdict = Verdict::Inconclusive;
  }
  v.method = left.method == right.method ? left.method : left.method + "+" + right.method;
  for (const auto& c : left.certificate) v.certificate.push_back("left: " + c);
  for (const auto& c : right.certificate) v.certificate.push_back("right: " + c);
  v.residuals = left.residuals;
  v.residuals.insert(v.residuals.end(), right.residuals.begin(), right.residuals.end());
  return v;
}

MoyalMembership moyal_membership(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder) {
  return {is_left_moyal(f, model, ladder), is_right_moyal(f, model, ladder)};
}

// ---------------------------------------------------------------------------

namespace {

// sup_{x >= 0} (1+x)^p e^{-r x}, for r >= 0 (and p <= 0 when r = 0).
double sup_axis(double p, double r) {
  if (p <= 0) return 1.0;
  const double x = p / r - 1.0;
  if (x <= 0) return 1.0;
  return std::pow(1.0 + x, p) * std::exp(-r * x);
}

std::optional<double> envelope_operator_bound(const EnvelopeClass& e) {
  if (e.constant == 0.0) return 0.0;
  if (e.axes() == 1 || e.diagonal) {
    if (e.exp_rate[0] < 0 || (e.exp_rate[0] == 0 && e.poly[0] > 0)) return std::nullopt;
    return e.constant * sup_axis(e.poly[0], e.exp_rate[0]);
  }
  // ||L_f|| <= ||f||_HS <= C sqrt(S(2p0, 2r0) S(2p1, 2r1))
  auto s0 = power_exp_series(2 * e.poly[0], 2 * e.exp_rate[0]);
  auto s1 = power_exp_series(2 * e.poly[1], 2 * e.exp_rate[1]);
  if (!s0 || !s1) return std::nullopt;
  return e.constant * std::sqrt(*s0 * *s1);
}

}  // namespace

BoundedVerdict is_bounded_element(const GradedElement& f, const AlgebraModel& model, std::span<const std::size_t> ladder) {
  model.check_shape(f, "is_bounded_element");
  if (ladder.empty()) throw std::invalid_argument("is_bounded_element: empty ladder");
  const auto view = model.graded_view(f);
  const auto cls = classify(view, ladder);
  if (!in_hilbert(cls.verdict))
    throw Rejected("is_bounded_element: operand is " + to_string(cls.verdict) + ", not SquareSummable");

  BoundedVerdict out;
  const std::size_t cap = *std::min_element(view.trunc().begin(), view.trunc().end());
  for (auto l : ladder)
    if (l >= 1 && l <= cap) out.ladder.push_back(l);
  std::sort(out.ladder.begin(), out.ladder.end());
  out.ladder.erase(std::unique(out.ladder.begin(), out.ladder.end()), out.ladder.end());
  if (out.ladder.empty()) out.ladder.push_back(cap);

  for (auto l : out.ladder) {
    double norm = 0.0;
    if (view.axes() == 1) {
      for (std::size_t m = 0; m < l; ++m) norm = std::max(norm, std::abs(view[m]));
    } else {
      const auto cols = view.trunc()[1];
      Eigen::MatrixXcd block(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l));
      for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j)
          block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = view[i * cols + j];
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
      norm = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    }
    out.norms.push_back(norm);
    out.constant = std::max(out.constant, norm);
  }
  if (view.envelope()) out.certified_bound = envelope_operator_bound(*view.envelope());
  // In both shipped gradings ||L_f|| <= ||f||_B, so every element of B is bounded.
  out.verdict = Verdict::Member;
  return out;
}

Complex trace_tau_left(const GradedElement& f, const GradedElement& g, const AlgebraModel& model,
                       std::span<const std::size_t> ladder) {
  for (const auto* x : {&f, &g}) {
    const auto b = is_bounded_element(*x, model, ladder);
    if (b.verdict != Verdict::Member) throw Rejected("trace_tau_left: argument is not a certified bounded element");
  }
  return model.inner(f, model.involution(g));
}

}  // namespace fhlab
