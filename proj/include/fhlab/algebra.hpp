#pragma once

// Algebra models (product, involution, inner product), the Hilbert-algebra
// axiom verifier, and extensions of # and ^# to the dual by transposition.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fhlab/graded.hpp"

namespace fhlab {

enum class ModelKind { Pointwise, Matrix, Transported };

std::string to_string(ModelKind k);

/// Planted defects for verifier self-tests.
struct Mutation {
  enum class Involution { Standard, Transpose };  // Transpose: conjugation dropped from ^#
  enum class Product { Standard, DropConjugation };  // f # g computed as f . (g^*)^T = f . conj(g)
  Involution involution = Involution::Standard;
  Product product = Product::Standard;

  bool any() const { return involution != Involution::Standard || product != Product::Standard; }
  /// Parses "involution=transpose" / "product=dropconj" style settings.
  void apply(const std::string& key, const std::string& value);
  std::string describe() const;
};

/// Product/involution/inner-product triple over elements of one fixed shape.
class AlgebraModel {
 public:
  virtual ~AlgebraModel() = default;

  virtual ModelKind kind() const = 0;
  virtual std::string name() const = 0;
  /// Truncation box of the carrier elements.
  virtual MultiIndex shape() const = 0;

  virtual GradedElement product(const GradedElement& f, const GradedElement& g) const = 0;
  virtual GradedElement involution(const GradedElement& f) const = 0;
  virtual Complex inner(const GradedElement& f, const GradedElement& g) const { return pairing(f, g); }

  /// p_k in the model's grading.
  virtual double seminorm(const GradedElement& f, int k) const { return fhlab::seminorm(f, k); }
  /// Coordinates in which the grading (and classification) is read.
  virtual GradedElement graded_view(const GradedElement& f) const { return f; }
  /// Inverse of graded_view: carrier element with the given graded coordinates.
  virtual GradedElement from_graded(const GradedElement& a) const { return a; }

  /// Orthonormal basis of the carrier for the inner product.
  virtual std::size_t basis_size() const;
  virtual GradedElement basis(std::size_t i) const;
  /// Dimension of the algebra at truncation (target rank for totality).
  virtual std::size_t algebra_dimension() const { return basis_size(); }

  /// Random RapidDecay element #index of the corpus drawn from `seed`.
  virtual GradedElement sample(std::uint64_t seed, std::size_t index) const = 0;
  /// Fixed probe set of RapidDecay elements.
  virtual std::vector<GradedElement> probes() const = 0;

  /// Whether the symbolic catalog calculus applies (and in which product).
  virtual bool catalog_matrix_product() const { return false; }

  double norm(const GradedElement& f) const { return std::sqrt(std::max(0.0, inner(f, f).real())); }
  void check_shape(const GradedElement& f, const char* what) const;
};

/// (f#g)_m = f_m g_m, f^#_m = conj(f_m); one axis.
class PointwiseModel final : public AlgebraModel {
 public:
  explicit PointwiseModel(std::size_t dim, Mutation mutation = {});
  ModelKind kind() const override { return ModelKind::Pointwise; }
  std::string name() const override;
  MultiIndex shape() const override { return {dim_}; }
  GradedElement product(const GradedElement& f, const GradedElement& g) const override;
  GradedElement involution(const GradedElement& f) const override;
  GradedElement sample(std::uint64_t seed, std::size_t index) const override;
  std::vector<GradedElement> probes() const override;

 private:
  std::size_t dim_;
  Mutation mutation_;
};

/// Matrix product at truncation, conjugate transpose; two axes.
class MatrixModel final : public AlgebraModel {
 public:
  explicit MatrixModel(std::size_t dim, Mutation mutation = {});
  ModelKind kind() const override { return ModelKind::Matrix; }
  std::string name() const override;
  MultiIndex shape() const override { return {dim_, dim_}; }
  GradedElement product(const GradedElement& f, const GradedElement& g) const override;
  GradedElement involution(const GradedElement& f) const override;
  GradedElement sample(std::uint64_t seed, std::size_t index) const override;
  std::vector<GradedElement> probes() const override;
  bool catalog_matrix_product() const override { return true; }

 private:
  std::size_t dim_;
  Mutation mutation_;
};

/// Random RapidDecay element with a certified exponential envelope, identical
/// on overlapping boxes for every truncation (counter-based draws).
GradedElement random_rapid(const MultiIndex& trunc, std::uint64_t seed, std::size_t index, double rate);

/// Random Tempered element: z_m * prod(1+m_i)^p with |z_m| <= 1.
GradedElement random_tempered(const MultiIndex& trunc, std::uint64_t seed, std::size_t index, double p);

/// Gaussian-decay matrix exp(-(m^2+n^2)/(2 s^2)) z_mn with a certified exponential envelope.
GradedElement random_gaussian(const MultiIndex& trunc, std::uint64_t seed, std::size_t index, double width);

// ---------------------------------------------------------------------------
// Axiom verification

struct CorpusSpec {
  std::uint64_t seed = 0;
  std::size_t samples = 200;  // number of (f, g, h) triples
};

struct AxiomResult {
  std::string axiom;  // "involution_adjoint", "product_adjoint", "continuity", "totality"
  bool pass = true;
  double residual = 0.0;            // worst residual (or rank deficit for totality)
  std::vector<std::size_t> witness;  // triple index (lowest failing), empty on pass
  std::string detail;
};

struct AxiomReport {
  std::string model;
  std::string mutation;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double tol = 0.0;
  std::vector<AxiomResult> axioms;
  bool all_pass() const;
};

/// Corpus triple i is (sample(3i), sample(3i+1), sample(3i+2)).
struct Triple {
  GradedElement f, g, h;
};
Triple corpus_triple(const AlgebraModel& model, const CorpusSpec& corpus, std::size_t i);

AxiomReport check_hilbert_axioms(const AlgebraModel& model, const CorpusSpec& corpus, double tol);

/// Residuals of axioms 1 and 2 on one triple (used to re-evaluate witnesses).
double involution_adjoint_residual(const AlgebraModel& model, const GradedElement& f, const GradedElement& g);
double product_adjoint_residual(const AlgebraModel& model, const GradedElement& f, const GradedElement& g,
                                const GradedElement& h);

// ---------------------------------------------------------------------------
// Duality extensions. Results are the Riesz representatives at truncation.

/// <f#g, h> := <f, h # g^#>, f in A†, g in A.
GradedElement extend_product_right(const GradedElement& f, const GradedElement& g, const AlgebraModel& model);
/// <g#f, h> := <f, g^# # h>, g in A, f in A†.
GradedElement extend_product_left(const GradedElement& g, const GradedElement& f, const AlgebraModel& model);
/// <f^#, h> := conj(<f, h^#>), f in A†.
GradedElement extend_involution(const GradedElement& f, const AlgebraModel& model);

struct MembershipVerdict;

/// f # g for f in M_R, g in A†:  <f#g, h> := <g, f^# # h>.
GradedElement moyal_extend(const GradedElement& f, const MembershipVerdict& right_certificate,
                           const GradedElement& g, const AlgebraModel& model);
/// g # f for g in A†, f in M_L:  <g#f, h> := <g, h # f^#>.
GradedElement moyal_extend_left(const GradedElement& g, const GradedElement& f,
                                const MembershipVerdict& left_certificate, const AlgebraModel& model);

/// Default ladder used to classify operands of the extension operations.
std::vector<std::size_t> default_ladder(const GradedElement& a);

}  // namespace fhlab
