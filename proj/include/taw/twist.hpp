#pragma once

#include <optional>
#include <vector>

#include "taw/common.hpp"
#include "taw/hilbert.hpp"
#include "taw/parallel.hpp"

namespace taw::twist {

struct Flag {
  bool pass = false;
  double residual = 0.0;
};

struct ValidationReport {
  Flag self_adjoint, norm_lt_one, braided, compatible, crossing_symmetric;
  Flag strictly_positive;
  int strict_positivity_checked_to_level = 0;
  double crossing_secondary_residual = 0.0;  // field-form identity on random vectors
  /// Gate used by downstream commands.
  bool usable() const { return braided.pass && compatible.pass && crossing_symmetric.pass; }
  bool all_pass() const {
    return usable() && self_adjoint.pass && norm_lt_one.pass && strictly_positive.pass;
  }
};

struct Twist {
  int d = 0;
  Matrix matrix;  // d^2 x d^2 on H (x) H, basis e_i (x) e_j at index i*d+j
  double q = 0.0;  // operator norm
  std::optional<ValidationReport> report;
};

Twist make_qflip(int d, double q);
Twist make_qij(const Matrix& qcoef, const hilbert::StandardSubspace& H);

enum class Dim2Family { Diag, Anti, Mixed };
struct Dim2Params {
  double q1 = 0, q2 = 0, q12 = 0;  // Diag: (q1,q2,q12)
  double c = 0;                    // Anti: (q1,c)
  int eps = 1;                     // Mixed: (q1,q2,eps)
};
Twist make_dim2(Dim2Family family, const Dim2Params& p, const hilbert::StandardSubspace& H);

/// Twist T = c m* m on M_n(C) with weight h, in the normalized elementary
/// basis E_{ij}/sqrt(h_j) ordered row-major.
Twist make_matrix_algebra(int n, const std::vector<double>& h, double c);
/// The matching standard subspace (Hermitian matrices in L^2(M_n, Tr(h .))).
hilbert::SubspaceSpec matrix_algebra_subspace(int n, const std::vector<double>& h,
                                              hilbert::BasisMode mode);

Twist make_raw(const Matrix& m);

Matrix embed_dense(const Twist& T, int k, int n, const Settings& s);
Vector apply_embed(const Twist& T, const Vector& v, int k, int n, Exec ex = Exec::Parallel);

/// T_{i,j} = T_i T_{i+1} ... T_{j-1}; identity when j <= i.
Matrix ranged_product_dense(const Twist& T, int i, int j, int n, const Settings& s);
Vector apply_ranged(const Twist& T, Vector v, int i, int j, int n, Exec ex = Exec::Parallel);
/// Adjoint chain (T_{i,j})^* applied to v.
Vector apply_ranged_adjoint(const Twist& T, Vector v, int i, int j, int n,
                            Exec ex = Exec::Parallel);

ValidationReport validate_twist(const Twist& T, const hilbert::StandardSubspace& H, int level,
                                const Settings& s);

}  // namespace taw::twist
