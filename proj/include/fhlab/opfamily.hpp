#pragma once

// Square-integrable operator families on H = C^d over a finite point set,
// the analysis map Phi(T)(s) = Tr[pi_s T], the quantization
// Pi(f) = sum_s mu_s f(s) pi_s^*, and the algebra transported onto symbols.
//
// Vectorization is row-major: vec(T)_{i*d+j} = T_ij. With v_s = vec(pi_s^*),
// Phi(T)(s) = v_s^H vec(T), and tightness reads sum_s mu_s v_s v_s^H = I.

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fhlab/algebra.hpp"
#include "fhlab/moyal.hpp"

namespace fhlab {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct OperatorFamily {
  std::size_t d = 0;
  std::vector<double> weights;    // mu_s > 0
  std::vector<CMatrix> matrices;  // pi_s, d x d
  std::string label;

  std::size_t size() const { return weights.size(); }
  /// Throws std::invalid_argument on inconsistent shapes or non-positive weights.
  void validate() const;
};

struct TightnessReport {
  bool pass = false;
  double frobenius_residual = 0.0;  // ||sum mu v v^H - I||_F
  double sampled_residual = 0.0;    // max over unit pairs |sum mu |<pi u, v>|^2 - 1|
  std::size_t samples = 0;
  std::string detail;
};

TightnessReport verify_tightness(const OperatorFamily& fam, double tol, std::uint64_t seed = 0,
                                 std::size_t samples = 32);

/// Range of Phi inside l^2(Sigma, mu).
class SymbolSpace {
 public:
  explicit SymbolSpace(const OperatorFamily& fam);

  const OperatorFamily& family() const { return *fam_; }
  std::size_t points() const { return fam_->size(); }
  std::size_t dim() const { return fam_->d; }

  /// N x d^2, row s = v_s^H.
  const CMatrix& analysis() const { return analysis_; }
  /// P = A A^H M, N x N.
  CMatrix projector() const;
  std::size_t rank(double rel_tol = 1e-10) const;

  CVector phi(const CMatrix& t) const;
  CMatrix pi(const CVector& f) const;
  /// mu-weighted inner product sum_s mu_s f_s conj(g_s).
  Complex inner(const CVector& f, const CVector& g) const;
  double norm(const CVector& f) const;

  struct Projection {
    CVector symbol;
    double discarded = 0.0;  // mu-norm of the removed component
  };
  Projection project(const CVector& f) const;

  CVector star(const CVector& f, const CVector& g) const;
  CVector invol(const CVector& f) const;

 private:
  std::shared_ptr<const OperatorFamily> fam_;
  CMatrix analysis_;
  Eigen::VectorXd mu_;
};

CVector phi(const CMatrix& t, const OperatorFamily& fam);
CMatrix pi(const CVector& f, const OperatorFamily& fam);
CVector star(const CVector& f, const CVector& g, const OperatorFamily& fam);
CVector invol(const CVector& f, const OperatorFamily& fam);

/// |Tr[Pi(f) Pi(g)^*] - <f, g>_mu| / (1 + ||f||_mu ||g||_mu), after projecting
/// both onto the symbol space. Projection losses are returned alongside.
struct ParsevalResult {
  double residual = 0.0;
  double discarded_f = 0.0;
  double discarded_g = 0.0;
};
ParsevalResult parseval_check(const CVector& f, const CVector& g, const OperatorFamily& fam);

/// Clock and shift: pi(a, b) = X^a Z^b at index s = a + n b, mu = 1/n.
OperatorFamily build_weyl_heisenberg(std::size_t n);

/// N Gaussian matrices, tightened by the inverse square root of the frame operator.
OperatorFamily build_random_tight(std::size_t n_points, std::size_t d, std::uint64_t seed);

/// Symbols of length N; star = Phi(Pi f Pi g), invol = Phi(Pi(f)^*), mu-inner
/// product. The grading is read on Pi(f) in the d x d matrix grading.
class TransportedModel final : public AlgebraModel {
 public:
  explicit TransportedModel(OperatorFamily fam, double tol = 1e-10);

  ModelKind kind() const override { return ModelKind::Transported; }
  std::string name() const override;
  MultiIndex shape() const override { return {space_.points()}; }
  GradedElement product(const GradedElement& f, const GradedElement& g) const override;
  GradedElement involution(const GradedElement& f) const override;
  Complex inner(const GradedElement& f, const GradedElement& g) const override;
  double seminorm(const GradedElement& f, int k) const override;
  GradedElement graded_view(const GradedElement& f) const override;
  GradedElement from_graded(const GradedElement& a) const override;
  std::size_t basis_size() const override { return space_.points(); }
  GradedElement basis(std::size_t i) const override;
  std::size_t algebra_dimension() const override { return space_.dim() * space_.dim(); }
  GradedElement sample(std::uint64_t seed, std::size_t index) const override;
  std::vector<GradedElement> probes() const override;
  bool catalog_matrix_product() const override { return true; }

  const SymbolSpace& space() const { return space_; }
  CVector to_vector(const GradedElement& f) const;
  GradedElement from_vector(const CVector& v) const;

 private:
  SymbolSpace space_;
};

struct TransportedSetup {
  std::shared_ptr<TransportedModel> model;
  GelfandTriple triple;
};

/// Rejects (Rejected) families that fail verify_tightness at `tol`.
TransportedSetup transported_model(const OperatorFamily& fam, const WeightSystem& weights, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Representation check over a Weyl-Heisenberg ladder.

struct RepresentationOptions {
  std::uint64_t seed = 0;
  std::size_t gaussian_samples = 4;  // Gaussian-decay a, a' pairs per level
  double gaussian_width = 2.0;
  double tol = 1e-10;
};

struct RepresentationCase {
  std::size_t n = 0;
  std::string multiplier;  // describe(F)
  std::string a, a_prime;  // short labels
  GrowthClass sandwich_class = GrowthClass::Inconclusive;  // a#F#a'
  Verdict left = Verdict::Inconclusive;                    // a#F in M_L
  Verdict right = Verdict::Inconclusive;                   // F#a' in M_R
  double transport_residual = 0.0;  // ||Pi(Phi a # Phi F # Phi a') - a F a'||_F / (1 + ||a F a'||_F)
  double envelope_excess = 0.0;     // max |entry| / bound on the transported result
};

struct RepresentationLevel {
  std::size_t n = 0;
  std::size_t cases = 0;
  std::size_t rapid = 0;
  std::size_t left_members = 0;
  std::size_t right_members = 0;
  std::size_t inconclusive = 0;
  double max_residual = 0.0;
  double max_envelope_excess = 0.0;
};

struct RepresentationReport {
  std::vector<std::size_t> ladder;
  std::vector<std::string> multipliers;
  std::vector<RepresentationLevel> levels;
  std::vector<RepresentationCase> cases;
  bool pass = false;
};

/// Ladder of WH(n) sizes (at least 3 levels) and matrix-side multipliers F.
/// Rejects multipliers that are not in the dual space.
RepresentationReport representation_check(std::span<const std::size_t> ladder, std::span<const Generator> multipliers,
                                          const WeightSystem& weights, const RepresentationOptions& options = {});

/// identity, diag((1+m)^3), (1+m)(1+n), e_0 v^*, v e_0^* with v = 1.
std::vector<Generator> default_multipliers();

}  // namespace fhlab
