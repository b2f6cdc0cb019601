#include "fhlab/graded.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "fhlab/algebra.hpp"

namespace fhlab {

WeightSystem::WeightSystem(std::size_t axes) : axes_(axes) {
  if (axes == 0) throw std::invalid_argument("weight system needs at least one axis");
}

double WeightSystem::operator()(std::span<const std::size_t> m) const {
  if (m.size() != axes_) throw std::invalid_argument("weight: index has wrong number of axes");
  double w = 1.0;
  for (auto mi : m) w *= 1.0 + static_cast<double>(mi);
  return w;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t box_size(const MultiIndex& trunc) {
  return std::accumulate(trunc.begin(), trunc.end(), std::size_t{1}, std::multiplies<>());
}

// Advances a row-major multi-index; returns false after the last one.
bool next_index(MultiIndex& m, const MultiIndex& trunc) {
  for (std::size_t i = m.size(); i-- > 0;) {
    if (++m[i] < trunc[i]) return true;
    m[i] = 0;
  }
  return false;
}

constexpr double kEnvelopeSlack = 1e-12;

}  // namespace

GradedElement::GradedElement(MultiIndex trunc, std::vector<Complex> coeffs, std::optional<EnvelopeClass> envelope,
                             std::optional<Generator> generator)
    : trunc_(std::move(trunc)),
      coeffs_(std::move(coeffs)),
      envelope_(std::move(envelope)),
      generator_(std::move(generator)) {
  if (trunc_.empty() || trunc_.size() > 2) throw std::invalid_argument("element must have 1 or 2 axes");
  for (auto d : trunc_)
    if (d < 1) throw std::invalid_argument("truncation must be at least 1 on every axis");
  if (coeffs_.size() != box_size(trunc_))
    throw std::invalid_argument("coefficient count " + std::to_string(coeffs_.size()) +
                                " does not match truncation box " + std::to_string(box_size(trunc_)));
  if (generator_) {
    if (generator_axes(*generator_) != axes()) throw std::invalid_argument("generator has wrong number of axes");
    MultiIndex m(axes(), 0);
    std::size_t flat = 0;
    do {
      if (evaluate(*generator_, m) != coeffs_[flat])
        throw std::invalid_argument("coefficients disagree with generator at flat index " + std::to_string(flat));
      ++flat;
    } while (next_index(m, trunc_));
  }
  if (envelope_) {
    if (envelope_->axes() != axes()) throw std::invalid_argument("envelope has wrong number of axes");
    if (envelope_->constant < 0) throw std::invalid_argument("envelope constant must be nonnegative");
    if (envelope_excess(coeffs_, trunc_, *envelope_) > 1.0 + kEnvelopeSlack)
      throw std::invalid_argument("coefficients violate the attached envelope");
  }
}

GradedElement GradedElement::from_generator(const Generator& g, MultiIndex trunc) {
  if (generator_axes(g) != trunc.size()) throw std::invalid_argument("generator/truncation axes mismatch");
  for (auto d : trunc)
    if (d < 1) throw std::invalid_argument("truncation must be at least 1 on every axis");
  std::vector<Complex> c;
  c.reserve(box_size(trunc));
  MultiIndex m(trunc.size(), 0);
  do {
    c.push_back(evaluate(g, m));
  } while (next_index(m, trunc));
  return GradedElement(std::move(trunc), std::move(c), envelope_of(g), g);
}

GradedElement GradedElement::zeros(MultiIndex trunc) {
  const auto n = box_size(trunc);
  return GradedElement(std::move(trunc), std::vector<Complex>(n, 0.0));
}

std::size_t GradedElement::flat_index(std::span<const std::size_t> m) const {
  if (m.size() != axes()) throw std::invalid_argument("index has wrong number of axes");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] >= trunc_[i]) throw std::out_of_range("index outside truncation box");
    flat = flat * trunc_[i] + m[i];
  }
  return flat;
}

MultiIndex GradedElement::multi_index(std::size_t flat) const {
  MultiIndex m(axes());
  for (std::size_t i = axes(); i-- > 0;) {
    m[i] = flat % trunc_[i];
    flat /= trunc_[i];
  }
  return m;
}

GradedElement GradedElement::retruncated(const MultiIndex& trunc) const {
  if (trunc.size() != axes()) throw std::invalid_argument("retruncation changes the number of axes");
  if (generator_) {
    auto out = from_generator(*generator_, trunc);
    return envelope_ ? out.with_envelope(envelope_) : out;
  }
  for (std::size_t i = 0; i < axes(); ++i)
    if (trunc[i] > trunc_[i]) throw std::invalid_argument("cannot enlarge an element without a generator");
  std::vector<Complex> c;
  c.reserve(box_size(trunc));
  MultiIndex m(axes(), 0);
  do {
    c.push_back(at(m));
  } while (next_index(m, trunc));
  return GradedElement(trunc, std::move(c), envelope_);
}

GradedElement GradedElement::stripped() const { return GradedElement(trunc_, coeffs_); }

GradedElement GradedElement::with_envelope(std::optional<EnvelopeClass> e) const {
  return GradedElement(trunc_, coeffs_, std::move(e), generator_);
}

double GradedElement::envelope_excess(std::span<const Complex> coeffs, const MultiIndex& trunc,
                                      const EnvelopeClass& env) {
  double worst_ratio = 0.0;
  MultiIndex m(trunc.size(), 0);
  std::size_t flat = 0;
  do {
    const double v = std::abs(coeffs[flat++]);
    if (v == 0.0) continue;
    const double b = env.bound(m);
    worst_ratio = std::max(worst_ratio, b > 0 ? v / b : std::numeric_limits<double>::infinity());
  } while (next_index(m, trunc));
  return worst_ratio;
}

// ---------------------------------------------------------------------------

double seminorm(const GradedElement& a, int k) {
  if (k < 0) throw std::invalid_argument("seminorm order must be nonnegative");
  const WeightSystem w = a.weights();
  double best = 0.0;
  MultiIndex m(a.axes(), 0);
  std::size_t flat = 0;
  do {
    const double v = std::abs(a[flat++]);
    if (v != 0.0) best = std::max(best, v * std::pow(w(m), k));
  } while (next_index(m, a.trunc()));
  return best;
}

Complex pairing(const GradedElement& f, const GradedElement& h) {
  if (!f.same_shape(h)) throw std::invalid_argument("pairing: shape mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(h[i]);
  return s;
}

double hilbert_norm(const GradedElement& a) {
  double s = 0.0;
  for (auto c : a.coeffs()) s += std::norm(c);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Classification

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

}  // namespace

ShellFit fit_shells(const GradedElement& a, std::size_t level, const ClassifierThresholds& thresholds) {
  ShellFit fit;
  fit.level = level;
  if (level < 1) throw std::invalid_argument("ladder levels must be positive");
  const bool from_generator = a.generator().has_value();
  if (!from_generator)
    for (auto d : a.trunc())
      if (level > d) throw std::invalid_argument("ladder level exceeds stored truncation");

  // shell j holds indices with 2^j <= 1 + max_i m_i < 2^{j+1}; only shells
  // lying entirely below the level are used
  std::size_t shells = 0;
  while ((std::size_t{2} << shells) - 1 <= level) ++shells;
  std::vector<double> shell_max(shells, 0.0);
  const MultiIndex box(a.axes(), level);
  MultiIndex m(a.axes(), 0);
  do {
    const double v = std::abs(from_generator ? evaluate(*a.generator(), m) : a.at(m));
    const std::size_t top = *std::max_element(m.begin(), m.end()) + 1;
    const auto j = static_cast<std::size_t>(std::bit_width(top) - 1);
    if (j < shells) shell_max[j] = std::max(shell_max[j], v);
  } while (next_index(m, box));

  fit.shells = shells;
  auto last_nonzero = std::find_if(shell_max.rbegin(), shell_max.rend(), [](double v) { return v > 0; });
  if (last_nonzero == shell_max.rend() || last_nonzero != shell_max.rbegin()) {
    // zero element, or the tail shells vanish identically
    fit.finite_support = true;
    fit.verdict = GrowthClass::RapidDecay;
    return fit;
  }
  std::vector<double> x_log, x_lin, y;
  for (std::size_t j = 0; j < shells; ++j) {
    if (shell_max[j] <= 0) continue;
    const double start = std::ldexp(1.0, static_cast<int>(j));
    x_log.push_back(std::log(start));
    x_lin.push_back(start);
    y.push_back(std::log(shell_max[j]));
  }
  if (y.size() < thresholds.min_shells) return fit;

  const auto power = least_squares(x_log, y);
  const auto expo = least_squares(x_lin, y);
  fit.power_slope = power.slope;
  fit.power_residual = power.rms;
  fit.exp_rate = -expo.slope;
  fit.exp_residual = expo.rms;

  // Shell maxima of (1+m)^s are exactly linear in log(start) and those of
  // e^{-rm} exactly linear in start, so the better fit decides the shape.
  const bool exp_better = expo.rms < power.rms;
  const double t = thresholds.slope;
  const bool super_polynomial =
      exp_better && (expo.rms <= thresholds.fit_ratio * power.rms || std::abs(power.slope) >= t);
  if (super_polynomial && fit.exp_rate > 0) {
    fit.verdict = GrowthClass::RapidDecay;
  } else if (super_polynomial && fit.exp_rate < 0) {
    fit.verdict = GrowthClass::Wild;
  } else if (!exp_better && std::abs(power.slope) <= t) {
    // shell j carries ~2^{j*axes} entries of size ~2^{j*s}
    const double axes = static_cast<double>(a.axes());
    fit.verdict = power.slope < -0.5 * axes ? GrowthClass::SquareSummable : GrowthClass::Tempered;
  }
  return fit;
}

Classification classify(const GradedElement& a, std::span<const std::size_t> ladder,
                        const ClassifierThresholds& thresholds) {
  if (ladder.empty()) throw std::invalid_argument("classify: empty ladder");
  Classification out;
  std::vector<std::size_t> levels(ladder.begin(), ladder.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (!a.generator()) {
    const std::size_t cap = *std::min_element(a.trunc().begin(), a.trunc().end());
    std::erase_if(levels, [cap](std::size_t l) { return l > cap || l == 0; });
    if (levels.empty()) levels.push_back(cap);
  }
  for (auto l : levels) out.fits.push_back(fit_shells(a, l, thresholds));

  if (a.generator()) {
    out.verdict = generator_growth(*a.generator());
    out.method = "generator";
    return out;
  }
  if (a.envelope()) {
    out.verdict = envelope_growth(*a.envelope());
    out.method = "envelope";
    return out;
  }
  out.method = "numeric";
  const auto& top = out.fits.back().verdict;
  if (out.fits.size() == 1) {
    out.verdict = top;
  } else {
    out.verdict = out.fits[out.fits.size() - 2].verdict == top ? top : GrowthClass::Inconclusive;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> GelfandTriple::seminorms(const GradedElement& a) const {
  if (a.axes() != weights.axes()) throw std::invalid_argument("element does not match the triple's weights");
  std::vector<double> out;
  for (int k = 0; k <= max_order; ++k) out.push_back(seminorm(a, k));
  return out;
}

GradedElement GelfandTriple::embed(const GradedElement& a, std::span<const std::size_t> ladder) const {
  const auto c = classify(a, ladder);
  if (!in_algebra(c.verdict)) throw Rejected("embed: element is " + to_string(c.verdict) + ", not in A");
  return a;
}

GradedElement GelfandTriple::embed_dual(const GradedElement& b, std::span<const std::size_t> ladder) const {
  const auto c = classify(b, ladder);
  if (!in_hilbert(c.verdict)) throw Rejected("embed_dual: element is " + to_string(c.verdict) + ", not in B");
  return b;
}

// ---------------------------------------------------------------------------

UniformityResult bounded_family_uniformity(std::span<const GradedElement> family, int k, const AlgebraModel& model) {
  if (family.empty()) throw std::invalid_argument("bounded_family_uniformity: empty family");
  if (k < 0) throw std::invalid_argument("seminorm order must be nonnegative");
  UniformityResult r;
  r.k = k;
  r.k_prime = k;  // p_k(f#g) <= C_f p_k(g) in all shipped models
  const auto probes = model.probes();
  r.probes = probes.size();
  for (const auto& f : family) {
    const std::array<std::size_t, 1> ladder{f.trunc().front()};
    const auto c = classify(model.graded_view(f), ladder);
    if (!in_algebra(c.verdict))
      throw Rejected("bounded_family_uniformity: family member is " + to_string(c.verdict));
    for (const auto& g : probes) {
      const double denom = model.seminorm(g, r.k_prime);
      if (denom == 0.0) continue;
      r.value = std::max(r.value, model.seminorm(model.product(f, g), k) / denom);
    }
  }
  return r;
}

}  // namespace fhlab
