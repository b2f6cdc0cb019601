#include "fhlab/algebra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "fhlab/moyal.hpp"

namespace fhlab {

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorMatrix> as_matrix(const GradedElement& a) {
  return {a.coeffs().data(), static_cast<Eigen::Index>(a.trunc()[0]), static_cast<Eigen::Index>(a.trunc()[1])};
}

std::vector<Complex> to_coeffs(const RowMajorMatrix& m) {
  return {m.data(), m.data() + m.size()};
}

// Envelope of f#g when both operands are certified, for the unmutated products.
std::optional<EnvelopeClass> product_envelope(const AlgebraModel& model, const GradedElement& f,
                                              const GradedElement& g) {
  if (!f.envelope() || !g.envelope()) return std::nullopt;
  switch (model.kind()) {
    case ModelKind::Pointwise: return envelope_pointwise_product(*f.envelope(), *g.envelope());
    case ModelKind::Matrix: return envelope_matrix_product(*f.envelope(), *g.envelope());
    case ModelKind::Transported: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<EnvelopeClass> involution_envelope(const AlgebraModel& model, const GradedElement& f) {
  if (!f.envelope()) return std::nullopt;
  switch (model.kind()) {
    case ModelKind::Pointwise: return f.envelope();
    case ModelKind::Matrix: return envelope_transpose(*f.envelope());
    case ModelKind::Transported: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Pointwise: return "pointwise";
    case ModelKind::Matrix: return "matrix";
    case ModelKind::Transported: return "transported";
  }
  return "unknown";
}

void Mutation::apply(const std::string& key, const std::string& value) {
  if (key == "involution") {
    if (value == "transpose") involution = Involution::Transpose;
    else if (value == "standard" || value == "none") involution = Involution::Standard;
    else throw std::invalid_argument("unknown involution mutation '" + value + "'");
  } else if (key == "product") {
    if (value == "dropconj") product = Product::DropConjugation;
    else if (value == "standard" || value == "none") product = Product::Standard;
    else throw std::invalid_argument("unknown product mutation '" + value + "'");
  } else {
    throw std::invalid_argument("unknown mutation key '" + key + "'");
  }
}

std::string Mutation::describe() const {
  std::string out;
  if (involution == Involution::Transpose) out += "involution=transpose";
  if (product == Product::DropConjugation) out += std::string(out.empty() ? "" : ",") + "product=dropconj";
  return out.empty() ? "none" : out;
}

void AlgebraModel::check_shape(const GradedElement& f, const char* what) const {
  if (f.trunc() != shape()) throw std::invalid_argument(std::string(what) + ": element shape does not match model " + name());
}

std::size_t AlgebraModel::basis_size() const {
  std::size_t n = 1;
  for (auto d : shape()) n *= d;
  return n;
}

GradedElement AlgebraModel::basis(std::size_t i) const {
  std::vector<Complex> c(basis_size(), 0.0);
  c.at(i) = 1.0;
  return GradedElement(shape(), std::move(c));
}

// ---------------------------------------------------------------------------

PointwiseModel::PointwiseModel(std::size_t dim, Mutation mutation) : dim_(dim), mutation_(mutation) {
  if (dim < 1) throw std::invalid_argument("pointwise model needs dim >= 1");
}

std::string PointwiseModel::name() const {
  return "pointwise(d=" + std::to_string(dim_) + (mutation_.any() ? "," + mutation_.describe() : "") + ")";
}

GradedElement PointwiseModel::product(const GradedElement& f, const GradedElement& g) const {
  check_shape(f, "product");
  check_shape(g, "product");
  std::vector<Complex> c(dim_);
  const bool drop = mutation_.product == Mutation::Product::DropConjugation;
  for (std::size_t m = 0; m < dim_; ++m) c[m] = f[m] * (drop ? std::conj(g[m]) : g[m]);
  return GradedElement({dim_}, std::move(c), mutation_.any() ? std::nullopt : product_envelope(*this, f, g));
}

GradedElement PointwiseModel::involution(const GradedElement& f) const {
  check_shape(f, "involution");
  std::vector<Complex> c(f.coeffs().begin(), f.coeffs().end());
  if (mutation_.involution == Mutation::Involution::Standard)
    for (auto& x : c) x = std::conj(x);
  return GradedElement({dim_}, std::move(c), involution_envelope(*this, f));
}

GradedElement PointwiseModel::sample(std::uint64_t seed, std::size_t index) const {
  return random_rapid({dim_}, seed, index, 0.05);
}

std::vector<GradedElement> PointwiseModel::probes() const {
  std::vector<GradedElement> out;
  const MultiIndex box{dim_};
  out.push_back(GradedElement::from_generator(gen::seq(gen::exponential(1.0)), box));
  for (std::size_t j : {0, 1, 3})
    if (j < dim_) out.push_back(GradedElement::from_generator(gen::seq(gen::delta(j)), box));
  out.push_back(GradedElement::from_generator(gen::seq(gen::exponential(0.5)), box));
  for (std::size_t i = 0; i < 4; ++i) out.push_back(random_rapid(box, 0x9e0be5, i, 0.3));
  return out;
}

// ---------------------------------------------------------------------------

MatrixModel::MatrixModel(std::size_t dim, Mutation mutation) : dim_(dim), mutation_(mutation) {
  if (dim < 1) throw std::invalid_argument("matrix model needs dim >= 1");
}

std::string MatrixModel::name() const {
  return "matrix(d=" + std::to_string(dim_) + (mutation_.any() ? "," + mutation_.describe() : "") + ")";
}

GradedElement MatrixModel::product(const GradedElement& f, const GradedElement& g) const {
  check_shape(f, "product");
  check_shape(g, "product");
  RowMajorMatrix p = mutation_.product == Mutation::Product::DropConjugation
                         ? RowMajorMatrix(as_matrix(f) * as_matrix(g).conjugate())
                         : RowMajorMatrix(as_matrix(f) * as_matrix(g));
  return GradedElement(shape(), to_coeffs(p), mutation_.any() ? std::nullopt : product_envelope(*this, f, g));
}

GradedElement MatrixModel::involution(const GradedElement& f) const {
  check_shape(f, "involution");
  RowMajorMatrix t = mutation_.involution == Mutation::Involution::Transpose ? RowMajorMatrix(as_matrix(f).transpose())
                                                                             : RowMajorMatrix(as_matrix(f).adjoint());
  return GradedElement(shape(), to_coeffs(t), involution_envelope(*this, f));
}

GradedElement MatrixModel::sample(std::uint64_t seed, std::size_t index) const {
  return random_rapid(shape(), seed, index, 0.15);
}

std::vector<GradedElement> MatrixModel::probes() const {
  std::vector<GradedElement> out;
  const MultiIndex box = shape();
  out.push_back(GradedElement::from_generator(gen::diag(gen::exponential(1.0)), box));
  out.push_back(GradedElement::from_generator(gen::full_exponential(1.0), box));
  out.push_back(GradedElement::from_generator(gen::outer(gen::exponential(1.0), gen::exponential(1.0)), box));
  for (auto [j, k] : {std::pair<std::size_t, std::size_t>{0, 0}, {0, 1}, {1, 0}, {1, 1}})
    if (j < dim_ && k < dim_) out.push_back(GradedElement::from_generator(gen::matrix_unit(j, k), box));
  for (std::size_t i = 0; i < 4; ++i) out.push_back(random_rapid(box, 0x9e0be5, i, 0.3));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Unit-disk draw for entry m of corpus element `index`; independent of the box.
Complex disk_draw(std::uint64_t seed, std::size_t index, const MultiIndex& m) {
  const std::uint64_t h =
      rng::hash(seed, {index, m[0], m.size() > 1 ? m[1] + 1 : 0});
  const double radius = std::sqrt(rng::uniform(h));
  const double angle = 2.0 * M_PI * rng::uniform(rng::splitmix(h));
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

template <class Weight>
GradedElement random_element(const MultiIndex& trunc, std::uint64_t seed, std::size_t index, Weight weight,
                             EnvelopeClass env) {
  std::size_t n = 1;
  for (auto d : trunc) n *= d;
  std::vector<Complex> c(n);
  MultiIndex m(trunc.size(), 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rest = flat;
    for (std::size_t i = trunc.size(); i-- > 0;) {
      m[i] = rest % trunc[i];
      rest /= trunc[i];
    }
    c[flat] = disk_draw(seed, index, m) * weight(m);
  }
  return GradedElement(trunc, std::move(c), std::move(env));
}

}  // namespace

GradedElement random_rapid(const MultiIndex& trunc, std::uint64_t seed, std::size_t index, double rate) {
  if (rate <= 0) throw std::invalid_argument("random_rapid needs a positive rate");
  auto weight = [rate](const MultiIndex& m) {
    double s = 0.0;
    for (auto mi : m) s += static_cast<double>(mi);
    return std::exp(-rate * s);
  };
  return random_element(trunc, seed, index, weight, EnvelopeClass::uniform(std::vector<double>(trunc.size(), 0.0), rate, 1.0));
}

GradedElement random_tempered(const MultiIndex& trunc, std::uint64_t seed, std::size_t index, double p) {
  auto weight = [p](const MultiIndex& m) {
    double w = 1.0;
    for (auto mi : m) w *= std::pow(1.0 + static_cast<double>(mi), p);
    return w;
  };
  return random_element(trunc, seed, index, weight, EnvelopeClass::uniform(std::vector<double>(trunc.size(), p), 0.0, 1.0));
}

GradedElement random_gaussian(const MultiIndex& trunc, std::uint64_t seed, std::size_t index, double width) {
  if (width <= 0) throw std::invalid_argument("random_gaussian needs a positive width");
  const double s2 = width * width;
  auto weight = [s2](const MultiIndex& m) {
    double q = 0.0;
    for (auto mi : m) q += static_cast<double>(mi) * static_cast<double>(mi);
    return std::exp(-q / (2.0 * s2));
  };
  // m^2 >= 2m - 1  =>  exp(-m^2/(2 s^2)) <= exp(1/(2 s^2)) exp(-m/s^2)
  const double axes = static_cast<double>(trunc.size());
  auto env = EnvelopeClass::uniform(std::vector<double>(trunc.size(), 0.0), 1.0 / s2, std::exp(axes / (2.0 * s2)));
  return random_element(trunc, seed, index, weight, std::move(env));
}

// ---------------------------------------------------------------------------
// Axioms

bool AxiomReport::all_pass() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.pass; });
}

Triple corpus_triple(const AlgebraModel& model, const CorpusSpec& corpus, std::size_t i) {
  return {model.sample(corpus.seed, 3 * i), model.sample(corpus.seed, 3 * i + 1), model.sample(corpus.seed, 3 * i + 2)};
}

double involution_adjoint_residual(const AlgebraModel& model, const GradedElement& f, const GradedElement& g) {
  const Complex lhs = model.inner(model.involution(g), model.involution(f));
  const Complex rhs = model.inner(f, g);
  return relative_residual(lhs, rhs, model.norm(f) * model.norm(g));
}

double product_adjoint_residual(const AlgebraModel& model, const GradedElement& f, const GradedElement& g,
                                const GradedElement& h) {
  const Complex lhs = model.inner(model.product(f, g), h);
  const Complex via_left = model.inner(g, model.product(model.involution(f), h));
  const Complex via_right = model.inner(f, model.product(h, model.involution(g)));
  const double scale = model.norm(f) * model.norm(g) * model.norm(h);
  return std::max(relative_residual(lhs, via_left, scale), relative_residual(lhs, via_right, scale));
}

AxiomReport check_hilbert_axioms(const AlgebraModel& model, const CorpusSpec& corpus, double tol) {
  if (corpus.samples == 0) throw std::invalid_argument("check_hilbert_axioms: empty corpus");
  if (!(tol > 0)) throw std::invalid_argument("check_hilbert_axioms: tolerance must be positive");

  AxiomReport report;
  report.model = model.name();
  report.seed = corpus.seed;
  report.samples = corpus.samples;
  report.tol = tol;

  AxiomResult inv, prod, cont, total;
  inv.axiom = "involution_adjoint";
  prod.axiom = "product_adjoint";
  cont.axiom = "continuity";
  total.axiom = "totality";
  const std::size_t dim = model.basis_size();
  Eigen::MatrixXcd span(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(3 * corpus.samples));
  double worst_constant = 0.0;

  auto note = [tol](AxiomResult& r, double residual, std::size_t i) {
    r.residual = std::max(r.residual, residual);
    if (!(residual <= tol) && r.pass) {
      r.pass = false;
      r.witness = {i};
    }
  };

  for (std::size_t i = 0; i < corpus.samples; ++i) {
    const auto t = corpus_triple(model, corpus, i);
    note(inv, involution_adjoint_residual(model, t.f, t.g), i);
    note(prod, product_adjoint_residual(model, t.f, t.g, t.h), i);

    const auto fg = model.product(t.f, t.g);
    const auto fh = model.product(t.f, t.h);
    const double cf = std::max(model.norm(fg) / model.norm(t.g), model.norm(fh) / model.norm(t.h));
    const double ratio = cf / model.norm(t.f);
    worst_constant = std::max(worst_constant, ratio);
    if (!std::isfinite(cf) && cont.pass) {
      cont.pass = false;
      cont.witness = {i};
    }

    const GradedElement products[3] = {fg, model.product(t.g, t.h), model.product(t.h, t.f)};
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t r = 0; r < dim; ++r) span(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(3 * i + p)) = products[p][r];
  }
  cont.residual = worst_constant;
  cont.detail = "max over corpus of C_f / ||f||_B with C_f = sup ||f#g||_B / ||g||_B";

  // Totality: numerical rank of the span of sampled products. Rows are
  // equilibrated first so that the decay of the grading does not read as
  // rank deficiency; row scaling leaves the exact rank unchanged.
  Eigen::VectorXd row_scale(span.rows());
  for (Eigen::Index r = 0; r < span.rows(); ++r) {
    const double m = span.row(r).cwiseAbs().maxCoeff();
    row_scale(r) = m > 0 ? 1.0 / m : 1.0;
  }
  const Eigen::MatrixXcd scaled = row_scale.asDiagonal() * span;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(scaled, Eigen::ComputeFullU);
  const Eigen::VectorXd sigma = svd.singularValues();
  const double smax = sigma.size() ? sigma(0) : 0.0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > 1e-8 * smax) ++rank;
  const std::size_t target = model.algebra_dimension();
  total.residual = static_cast<double>(target > rank ? target - rank : 0);
  total.detail = "numerical rank " + std::to_string(rank) + " of " + std::to_string(3 * corpus.samples) +
                 " products, algebra dimension " + std::to_string(target);
  if (rank < target) {
    total.pass = false;
    // basis direction least covered by the span
    const Eigen::VectorXcd weakest = svd.matrixU().col(svd.matrixU().cols() - 1);
    Eigen::Index worst = 0;
    weakest.cwiseAbs().maxCoeff(&worst);
    total.witness = {static_cast<std::size_t>(worst)};
  }

  report.axioms = {inv, prod, cont, total};
  return report;
}

// ---------------------------------------------------------------------------
// Extensions

std::vector<std::size_t> default_ladder(const GradedElement& a) {
  const std::size_t d = *std::min_element(a.trunc().begin(), a.trunc().end());
  std::vector<std::size_t> ladder;
  for (std::size_t l : {d / 4, d / 2, d})
    if (l >= 1 && (ladder.empty() || ladder.back() != l)) ladder.push_back(l);
  return ladder;
}

namespace {

GrowthClass model_class(const GradedElement& a, const AlgebraModel& model) {
  const auto view = model.graded_view(a);
  return classify(view, default_ladder(view)).verdict;
}

void require_dual(const GradedElement& f, const AlgebraModel& model, const char* op) {
  const auto c = model_class(f, model);
  if (!in_dual(c)) throw Rejected(std::string(op) + ": operand is " + to_string(c) + ", not in the dual space");
}

void require_algebra(const GradedElement& g, const AlgebraModel& model, const char* op) {
  const auto c = model_class(g, model);
  if (!in_algebra(c)) throw Rejected(std::string(op) + ": operand is " + to_string(c) + ", not RapidDecay");
}

// Riesz representative of a conjugate-linear functional: F = sum_m phi(b_m) b_m.
template <class Functional>
GradedElement riesz(const AlgebraModel& model, Functional phi, std::optional<EnvelopeClass> env) {
  const std::size_t n = model.basis_size();
  std::vector<Complex> out(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    const auto b = model.basis(m);
    const Complex value = phi(b);
    if (value == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r)
      if (b[r] != 0.0) out[r] += value * b[r];
  }
  return GradedElement(model.shape(), std::move(out), std::move(env));
}

}  // namespace

GradedElement extend_product_right(const GradedElement& f, const GradedElement& g, const AlgebraModel& model) {
  model.check_shape(f, "extend_product_right");
  model.check_shape(g, "extend_product_right");
  require_dual(f, model, "extend_product_right");
  require_algebra(g, model, "extend_product_right");
  const auto g_star = model.involution(g);
  return riesz(model, [&](const GradedElement& h) { return model.inner(f, model.product(h, g_star)); },
               product_envelope(model, f, g));
}

GradedElement extend_product_left(const GradedElement& g, const GradedElement& f, const AlgebraModel& model) {
  model.check_shape(f, "extend_product_left");
  model.check_shape(g, "extend_product_left");
  require_algebra(g, model, "extend_product_left");
  require_dual(f, model, "extend_product_left");
  const auto g_star = model.involution(g);
  return riesz(model, [&](const GradedElement& h) { return model.inner(f, model.product(g_star, h)); },
               product_envelope(model, g, f));
}

GradedElement extend_involution(const GradedElement& f, const AlgebraModel& model) {
  model.check_shape(f, "extend_involution");
  require_dual(f, model, "extend_involution");
  return riesz(model, [&](const GradedElement& h) { return std::conj(model.inner(f, model.involution(h))); },
               involution_envelope(model, f));
}

GradedElement moyal_extend(const GradedElement& f, const MembershipVerdict& right_certificate, const GradedElement& g,
                           const AlgebraModel& model) {
  model.check_shape(f, "moyal_extend");
  model.check_shape(g, "moyal_extend");
  if (!right_certificate.member_on(Side::Right))
    throw Rejected("moyal_extend: no right Moyal membership certificate (" + right_certificate.summary() + ")");
  require_dual(g, model, "moyal_extend");
  const auto f_star = extend_involution(f, model);
  return riesz(model, [&](const GradedElement& h) { return model.inner(g, model.product(f_star, h)); },
               product_envelope(model, f, g));
}

GradedElement moyal_extend_left(const GradedElement& g, const GradedElement& f, const MembershipVerdict& left_certificate,
                                const AlgebraModel& model) {
  model.check_shape(f, "moyal_extend_left");
  model.check_shape(g, "moyal_extend_left");
  if (!left_certificate.member_on(Side::Left))
    throw Rejected("moyal_extend_left: no left Moyal membership certificate (" + left_certificate.summary() + ")");
  require_dual(g, model, "moyal_extend_left");
  const auto f_star = extend_involution(f, model);
  return riesz(model, [&](const GradedElement& h) { return model.inner(g, model.product(h, f_star)); },
               product_envelope(model, g, f));
}

}  // namespace fhlab
