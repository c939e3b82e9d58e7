#pragma once

#include <optional>
#include <vector>

#include "taw/common.hpp"

namespace taw::hilbert {

/// Antilinear map v -> m * conj(v). Compositions resolve to explicit linear
/// or antilinear matrices at construction time.
struct AntilinearMap {
  Matrix m;

  Vector apply(const Vector& v) const { return m * v.conjugate(); }
  /// this ∘ other is linear with matrix m * conj(other.m).
  Matrix compose(const AntilinearMap& other) const { return m * other.m.conjugate(); }
  /// Adjoint antilinear map (w.r.t. <Au,v> = <A†v,u>) has the transposed matrix.
  AntilinearMap adjoint() const { return {m.transpose()}; }
  bool is_involution(double tol) const {
    return (m * m.conjugate() - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < tol;
  }
};

enum class BasisMode { ComplexLinear, RealOrthonormal };

struct SubspaceSpec {
  // eigen-data form: lambda_i > 0 with an index involution bar, lambda_bar(i) = 1/lambda_i
  std::optional<std::vector<double>> eigenvalues;
  std::optional<std::vector<int>> pairing;  // 0-based involution i -> bar(i)
  // raw form
  std::optional<Matrix> delta;
  std::optional<Matrix> j;  // antilinear matrix of J
  BasisMode mode = BasisMode::ComplexLinear;
  std::optional<Matrix> generators;  // complex-linear mode: arbitrary basis (default identity)
  double tolerance = 1e-10;
};

struct StandardSubspace {
  int dim = 0;
  Matrix delta;
  AntilinearMap J, S, Sstar;
  BasisMode mode = BasisMode::ComplexLinear;
  Matrix generators;  // columns e_1..e_d (ambient coordinates)
  Matrix duals;       // columns f_1..f_d with <f_i, e_j> = delta_ij
  double s_norm = 1.0;      // ||S|| = ||Delta||^{1/2}
  double delta_norm = 1.0;  // largest eigenvalue of Delta
  std::vector<double> spectrum;  // ascending, with multiplicity
  std::optional<std::vector<int>> bar;  // index involution when J permutes the basis
  bool positivity_warning = false;      // min eigenvalue inside the warning band

  bool tracial(double tol = 1e-12) const;
  /// Pairing matrix K(a,b) = <S e_a, e_b> on the ambient basis.
  Matrix contraction_pairing() const { return S.m.adjoint(); }
  /// Covariance matrix A = E^{-1} Delta^{-1} E of the generator basis.
  Matrix covariance_A() const;
};

StandardSubspace build_standard_subspace(const SubspaceSpec& spec);

// ---- factor type ----

struct FactorType {
  enum class Tag { II1, IIIlambda, III1 };
  enum class Confidence { Exact, Numerical };
  Tag tag = Tag::II1;
  double lambda = 0.0;  // in (0,1) iff tag == IIIlambda
  Confidence confidence = Confidence::Exact;
};

struct Rational {
  long long num = 1;
  long long den = 1;
};

FactorType classify_factor_type(const std::vector<Rational>& eigenvalues);
FactorType classify_factor_type(double base, const std::vector<long long>& exponents);
FactorType classify_factor_type_numerical(const std::vector<double>& eigenvalues,
                                          double tolerance = 1e-10, int denominator_bound = 64);

// ---- non-injectivity ----

struct NoninjectivityResult {
  bool holds = false;
  double best_C = 1.0;
  double best_ratio = 0.0;  // dim E([1,C]) / C at best_C
  double rhs = 0.0;         // 16 / (1-q)^2
};

/// Scans the spectral thresholds C >= 1 for dim E_Delta([1,C]) / C > 16/(1-q)^2.
NoninjectivityResult noninjectivity_criterion(const std::vector<double>& spectrum, double q);

}  // namespace taw::hilbert
