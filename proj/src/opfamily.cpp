#include "fhlab/opfamily.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace fhlab {

void OperatorFamily::validate() const {
  if (d < 1) throw std::invalid_argument("operator family: d must be at least 1");
  if (weights.size() != matrices.size())
    throw std::invalid_argument("operator family: weights and matrices differ in count");
  if (weights.empty()) throw std::invalid_argument("operator family: no points");
  for (std::size_t s = 0; s < weights.size(); ++s) {
    if (!(weights[s] > 0) || !std::isfinite(weights[s]))
      throw std::invalid_argument("operator family: weight " + std::to_string(s) + " is not positive");
    if (matrices[s].rows() != static_cast<Eigen::Index>(d) || matrices[s].cols() != static_cast<Eigen::Index>(d))
      throw std::invalid_argument("operator family: matrix " + std::to_string(s) + " is not d x d");
  }
}

namespace {

using Index = Eigen::Index;

CVector vec(const CMatrix& t) {
  const Index d = t.rows();
  CVector v(d * t.cols());
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < t.cols(); ++j) v(i * t.cols() + j) = t(i, j);
  return v;
}

CMatrix unvec(const CVector& v, Index d) {
  CMatrix t(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) t(i, j) = v(i * d + j);
  return t;
}

CMatrix analysis_matrix(const OperatorFamily& fam) {
  fam.validate();
  const Index n = static_cast<Index>(fam.size());
  const Index d2 = static_cast<Index>(fam.d * fam.d);
  CMatrix a(n, d2);
  for (Index s = 0; s < n; ++s) a.row(s) = vec(fam.matrices[static_cast<std::size_t>(s)].adjoint()).adjoint();
  return a;
}

// Unit vector from counter-based Gaussian draws.
CVector random_unit(std::size_t d, std::uint64_t seed, std::uint64_t tag, std::size_t index) {
  CVector u(static_cast<Index>(d));
  for (std::size_t k = 0; k < d; ++k) u(static_cast<Index>(k)) = rng::gaussian(seed, {tag, index, k});
  return u / u.norm();
}

}  // namespace

TightnessReport verify_tightness(const OperatorFamily& fam, double tol, std::uint64_t seed, std::size_t samples) {
  fam.validate();
  TightnessReport r;
  r.samples = samples;
  const CMatrix a = analysis_matrix(fam);
  Eigen::VectorXd mu(static_cast<Index>(fam.size()));
  for (std::size_t s = 0; s < fam.size(); ++s) mu(static_cast<Index>(s)) = fam.weights[s];
  const Index d2 = a.cols();
  const CMatrix frame = a.adjoint() * mu.asDiagonal() * a;
  r.frobenius_residual = (frame - CMatrix::Identity(d2, d2)).norm();

  for (std::size_t i = 0; i < samples; ++i) {
    const CVector u = random_unit(fam.d, seed, 0x75, i);
    const CVector v = random_unit(fam.d, seed, 0x76, i);
    double sum = 0.0;
    for (std::size_t s = 0; s < fam.size(); ++s) sum += fam.weights[s] * std::norm(v.dot(fam.matrices[s] * u));
    r.sampled_residual = std::max(r.sampled_residual, std::abs(sum - 1.0));
  }
  const bool enough = fam.size() >= fam.d * fam.d;
  r.pass = enough && r.frobenius_residual <= tol && r.sampled_residual <= tol;
  if (!enough)
    r.detail = "N = " + std::to_string(fam.size()) + " < d^2 = " + std::to_string(fam.d * fam.d);
  else if (!r.pass)
    r.detail = "frame operator differs from the identity";
  return r;
}

// ---------------------------------------------------------------------------

SymbolSpace::SymbolSpace(const OperatorFamily& fam)
    : fam_(std::make_shared<const OperatorFamily>(fam)), analysis_(analysis_matrix(fam)) {
  mu_.resize(static_cast<Index>(fam.size()));
  for (std::size_t s = 0; s < fam.size(); ++s) mu_(static_cast<Index>(s)) = fam.weights[s];
}

CMatrix SymbolSpace::projector() const { return analysis_ * analysis_.adjoint() * mu_.asDiagonal(); }

std::size_t SymbolSpace::rank(double rel_tol) const {
  // rank of M^{1/2} A
  const CMatrix weighted = mu_.cwiseSqrt().asDiagonal() * analysis_;
  Eigen::JacobiSVD<CMatrix> svd(weighted);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++r;
  return r;
}

CVector SymbolSpace::phi(const CMatrix& t) const {
  if (t.rows() != static_cast<Index>(dim()) || t.cols() != static_cast<Index>(dim()))
    throw std::invalid_argument("phi: operator is not d x d");
  return analysis_ * vec(t);
}

CMatrix SymbolSpace::pi(const CVector& f) const {
  if (f.size() != static_cast<Index>(points())) throw std::invalid_argument("pi: symbol length does not match N");
  return unvec(analysis_.adjoint() * (mu_.cast<Complex>().cwiseProduct(f)), static_cast<Index>(dim()));
}

Complex SymbolSpace::inner(const CVector& f, const CVector& g) const {
  if (f.size() != static_cast<Index>(points()) || g.size() != static_cast<Index>(points()))
    throw std::invalid_argument("symbol inner product: length mismatch");
  Complex s = 0.0;
  for (Index i = 0; i < f.size(); ++i) s += mu_(i) * f(i) * std::conj(g(i));
  return s;
}

double SymbolSpace::norm(const CVector& f) const { return std::sqrt(std::max(0.0, inner(f, f).real())); }

SymbolSpace::Projection SymbolSpace::project(const CVector& f) const {
  Projection p;
  p.symbol = phi(pi(f));
  p.discarded = norm(f - p.symbol);
  return p;
}

CVector SymbolSpace::star(const CVector& f, const CVector& g) const { return phi(pi(f) * pi(g)); }

CVector SymbolSpace::invol(const CVector& f) const { return phi(pi(f).adjoint()); }

CVector phi(const CMatrix& t, const OperatorFamily& fam) { return SymbolSpace(fam).phi(t); }
CMatrix pi(const CVector& f, const OperatorFamily& fam) { return SymbolSpace(fam).pi(f); }
CVector star(const CVector& f, const CVector& g, const OperatorFamily& fam) { return SymbolSpace(fam).star(f, g); }
CVector invol(const CVector& f, const OperatorFamily& fam) { return SymbolSpace(fam).invol(f); }

ParsevalResult parseval_check(const CVector& f, const CVector& g, const OperatorFamily& fam) {
  const SymbolSpace space(fam);
  const auto pf = space.project(f);
  const auto pg = space.project(g);
  const Complex lhs = (space.pi(pf.symbol) * space.pi(pg.symbol).adjoint()).trace();
  const Complex rhs = space.inner(pf.symbol, pg.symbol);
  return {relative_residual(lhs, rhs, space.norm(pf.symbol) * space.norm(pg.symbol)), pf.discarded, pg.discarded};
}

// ---------------------------------------------------------------------------

OperatorFamily build_weyl_heisenberg(std::size_t n) {
  if (n < 2) throw std::invalid_argument("build_weyl_heisenberg: n must be at least 2");
  const Index d = static_cast<Index>(n);
  CMatrix x = CMatrix::Zero(d, d);
  CMatrix z = CMatrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) {
    x(k, (k + d - 1) % d) = 1.0;  // (Xu)_k = u_{k-1}
    z(k, k) = std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n));
  }
  OperatorFamily fam;
  fam.d = n;
  fam.label = "weyl-heisenberg:" + std::to_string(n);
  std::vector<CMatrix> xa(n), zb(n);
  xa[0] = zb[0] = CMatrix::Identity(d, d);
  for (std::size_t a = 1; a < n; ++a) {
    xa[a] = x * xa[a - 1];
    zb[a] = z * zb[a - 1];
  }
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t a = 0; a < n; ++a) {
      fam.matrices.push_back(xa[a] * zb[b]);
      fam.weights.push_back(1.0 / static_cast<double>(n));
    }
  return fam;
}

OperatorFamily build_random_tight(std::size_t n_points, std::size_t d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("build_random_tight: d must be at least 1");
  if (n_points < d * d) throw std::invalid_argument("build_random_tight: N < d^2");
  const Index dd = static_cast<Index>(d);
  const Index d2 = dd * dd;
  const double mu = 1.0 / static_cast<double>(n_points);
  for (std::uint64_t attempt = 0; attempt < 3; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : rng::hash(seed, {0x7e7, attempt});
    std::vector<CVector> v(n_points);
    CMatrix frame = CMatrix::Zero(d2, d2);
    for (std::size_t p = 0; p < n_points; ++p) {
      CMatrix g(dd, dd);
      for (Index i = 0; i < dd; ++i)
        for (Index j = 0; j < dd; ++j)
          g(i, j) = rng::gaussian(s, {p, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
      v[p] = vec(g.adjoint());
      frame += mu * v[p] * v[p].adjoint();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(frame);
    const Eigen::VectorXd lambda = eig.eigenvalues();
    if (!(lambda.minCoeff() > 1e-12)) continue;
    const CMatrix inv_sqrt =
        eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
    OperatorFamily fam;
    fam.d = d;
    fam.label = "random:" + std::to_string(n_points) + "," + std::to_string(d) + "," + std::to_string(seed);
    for (std::size_t p = 0; p < n_points; ++p) {
      fam.matrices.push_back(unvec(inv_sqrt * v[p], dd).adjoint());
      fam.weights.push_back(mu);
    }
    return fam;
  }
  throw std::runtime_error("build_random_tight: frame operator singular after 3 attempts");
}

// ---------------------------------------------------------------------------

TransportedModel::TransportedModel(OperatorFamily fam, double tol) : space_(fam) {
  const auto t = verify_tightness(fam, tol);
  if (!t.pass)
    throw Rejected("transported model: family '" + fam.label + "' is not tight (Frobenius residual " +
                   std::to_string(t.frobenius_residual) + (t.detail.empty() ? "" : ", " + t.detail) + ")");
}

std::string TransportedModel::name() const { return "transported(" + space_.family().label + ")"; }

CVector TransportedModel::to_vector(const GradedElement& f) const {
  check_shape(f, "transported model");
  CVector v(static_cast<Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) v(static_cast<Index>(i)) = f[i];
  return v;
}

GradedElement TransportedModel::from_vector(const CVector& v) const {
  return GradedElement(shape(), std::vector<Complex>(v.data(), v.data() + v.size()));
}

GradedElement TransportedModel::product(const GradedElement& f, const GradedElement& g) const {
  return from_vector(space_.star(to_vector(f), to_vector(g)));
}

GradedElement TransportedModel::involution(const GradedElement& f) const {
  return from_vector(space_.invol(to_vector(f)));
}

Complex TransportedModel::inner(const GradedElement& f, const GradedElement& g) const {
  return space_.inner(to_vector(f), to_vector(g));
}

double TransportedModel::seminorm(const GradedElement& f, int k) const { return fhlab::seminorm(graded_view(f), k); }

GradedElement TransportedModel::graded_view(const GradedElement& f) const {
  const CMatrix t = space_.pi(to_vector(f));
  const std::size_t d = space_.dim();
  std::vector<Complex> c(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) c[i * d + j] = t(static_cast<Index>(i), static_cast<Index>(j));
  return GradedElement({d, d}, std::move(c));
}

GradedElement TransportedModel::from_graded(const GradedElement& a) const {
  const std::size_t d = space_.dim();
  if (a.trunc() != MultiIndex{d, d}) throw std::invalid_argument("from_graded: expected a d x d element");
  CMatrix t(static_cast<Index>(d), static_cast<Index>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) t(static_cast<Index>(i), static_cast<Index>(j)) = a[i * d + j];
  return from_vector(space_.phi(t));
}

GradedElement TransportedModel::basis(std::size_t i) const {
  std::vector<Complex> c(space_.points(), 0.0);
  c.at(i) = 1.0 / std::sqrt(space_.family().weights[i]);
  return GradedElement(shape(), std::move(c));
}

GradedElement TransportedModel::sample(std::uint64_t seed, std::size_t index) const {
  const std::size_t d = space_.dim();
  return from_graded(random_rapid({d, d}, seed, index, 0.15));
}

std::vector<GradedElement> TransportedModel::probes() const {
  const std::size_t d = space_.dim();
  std::vector<GradedElement> out;
  for (const auto& p : MatrixModel(d).probes()) out.push_back(from_graded(p));
  return out;
}

TransportedSetup transported_model(const OperatorFamily& fam, const WeightSystem& weights, double tol) {
  if (weights.axes() != 2) throw std::invalid_argument("transported model: weights must grade d x d matrices");
  TransportedSetup out;
  out.model = std::make_shared<TransportedModel>(fam, tol);
  out.triple.weights = weights;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Generator> default_multipliers() {
  return {gen::identity(), gen::diag(gen::power(3.0)), gen::full_power(1.0, 1.0),
          gen::outer(gen::delta(0), gen::power(0.0)), gen::outer(gen::power(0.0), gen::delta(0))};
}

namespace {

struct Operand {
  std::string label;
  GradedElement value;
};

CMatrix to_matrix(const GradedElement& a) {
  const auto d = static_cast<Index>(a.trunc()[0]);
  CMatrix t(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) t(i, j) = a[static_cast<std::size_t>(i * d + j)];
  return t;
}

}  // namespace

RepresentationReport representation_check(std::span<const std::size_t> ladder, std::span<const Generator> multipliers,
                                          const WeightSystem& weights, const RepresentationOptions& options) {
  if (ladder.size() < 3) throw Rejected("representation_check: ladder needs at least 3 levels");
  if (weights.axes() != 2) throw std::invalid_argument("representation_check: weights must grade d x d matrices");
  for (const auto& f : multipliers) {
    if (generator_axes(f) != 2) throw std::invalid_argument("representation_check: multipliers must be 2-axis");
    const auto c = generator_growth(f);
    if (!in_dual(c)) throw Rejected("representation_check: multiplier " + describe(f) + " is " + to_string(c));
  }

  RepresentationReport report;
  report.ladder.assign(ladder.begin(), ladder.end());
  for (const auto& f : multipliers) report.multipliers.push_back(describe(f));
  report.pass = true;

  for (const std::size_t n : ladder) {
    const auto fam = build_weyl_heisenberg(n);
    const auto setup = transported_model(fam, weights, options.tol);
    const auto& space = setup.model->space();
    const MatrixModel direct(n);
    const MultiIndex box{n, n};
    const std::array<std::size_t, 3> levels{std::max<std::size_t>(1, n / 4), std::max<std::size_t>(1, n / 2), n};

    std::vector<Operand> operands;
    for (std::size_t i = 0; i < 2 * options.gaussian_samples; ++i)
      operands.push_back({"gaussian#" + std::to_string(i),
                          random_gaussian(box, options.seed, i, options.gaussian_width)});
    for (const auto& g : moyal_probe_basket(direct))
      operands.push_back({describe(g), GradedElement::from_generator(g, box)});

    RepresentationLevel level;
    level.n = n;
    for (const auto& fgen : multipliers) {
      const auto f = GradedElement::from_generator(fgen, box);
      const CVector sf = space.phi(to_matrix(f));
      for (std::size_t i = 0; i < operands.size(); ++i) {
        const auto& a = operands[i];
        const auto& ap = operands[(i + 1) % operands.size()];
        RepresentationCase c;
        c.n = n;
        c.multiplier = describe(fgen);
        c.a = a.label;
        c.a_prime = ap.label;

        // Certified matrix-side calculus.
        const auto af = direct.product(a.value, f);
        const auto fap = direct.product(f, ap.value);
        const auto sandwich = direct.product(af, ap.value);
        c.sandwich_class = classify(sandwich, levels).verdict;
        c.left = is_left_moyal(af, direct, levels).verdict;
        c.right = is_right_moyal(fap, direct, levels).verdict;

        // Transported computation.
        const CVector t = space.star(space.star(space.phi(to_matrix(a.value)), sf), space.phi(to_matrix(ap.value)));
        const CMatrix back = space.pi(t);
        const CMatrix exact = to_matrix(sandwich);
        c.transport_residual = (back - exact).norm() / (1.0 + exact.norm());
        if (sandwich.envelope()) {
          const double scale = back.cwiseAbs().maxCoeff();
          double excess = 0.0;
          for (std::size_t m = 0; m < n; ++m)
            for (std::size_t k = 0; k < n; ++k) {
              const std::array<std::size_t, 2> idx{m, k};
              const double v = std::abs(back(static_cast<Index>(m), static_cast<Index>(k)));
              const double b = sandwich.envelope()->bound(idx) + 1e-10 * scale;
              if (v > 0) excess = std::max(excess, v / b);
            }
          c.envelope_excess = excess;
        } else {
          c.envelope_excess = std::numeric_limits<double>::infinity();
        }

        ++level.cases;
        if (c.sandwich_class == GrowthClass::RapidDecay) ++level.rapid;
        if (c.left == Verdict::Member) ++level.left_members;
        if (c.right == Verdict::Member) ++level.right_members;
        if (c.left == Verdict::Inconclusive || c.right == Verdict::Inconclusive ||
            c.sandwich_class == GrowthClass::Inconclusive)
          ++level.inconclusive;
        level.max_residual = std::max(level.max_residual, c.transport_residual);
        level.max_envelope_excess = std::max(level.max_envelope_excess, c.envelope_excess);
        report.cases.push_back(std::move(c));
      }
    }
    if (level.rapid != level.cases || level.left_members != level.cases || level.right_members != level.cases ||
        level.max_residual > 1e-9 || level.max_envelope_excess > 1.0)
      report.pass = false;
    report.levels.push_back(level);
  }
  return report;
}

}  // namespace fhlab
