#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "taw/common.hpp"
#include "taw/hilbert.hpp"
#include "taw/twist.hpp"

namespace taw::fock {

/// Per-level kernels R_{T,n}, P_{T,n} with Hermitian factorizations, built
/// once per level behind a mutex and shared read-only afterwards.
class KernelCache {
 public:
  KernelCache(const twist::Twist& T, const Settings& s);

  int d() const { return d_; }
  const twist::Twist& twist() const { return twist_; }
  const Settings& settings() const { return settings_; }

  const Matrix& R(int n);
  const Matrix& P(int n);
  /// Solve P_{T,n} x = rhs. Throws NotStrictlyPositive below the tolerance.
  Vector solve(int n, const Vector& rhs);
  double min_eig(int n);
  double max_eig(int n);

  /// Matrix-free applications (no size cap).
  Vector apply_R(int n, const Vector& v, Exec ex = Exec::Parallel);
  Vector apply_P(int n, const Vector& v, Exec ex = Exec::Parallel);

 private:
  struct Level {
    std::once_flag dense_once, eig_once;
    Matrix R, P;
    Eigen::LDLT<Matrix> ldlt;
    double min_eig = 0, max_eig = 0;
    bool dense_ok = false;
  };
  Level& level(int n);

  twist::Twist twist_;
  Settings settings_;
  int d_;
  std::unique_ptr<std::mutex> mu_;  // keeps the cache movable
  std::map<int, std::unique_ptr<Level>> levels_;
};

/// Graded vector on ⊕_{n<=N} H^{on} in plain tensor coordinates.
struct FockVector {
  int d = 0;
  int trunc = 0;
  std::vector<Vector> levels;  // levels[n] has size d^n

  static FockVector zero(int d, int N);
  static FockVector vacuum(int d, int N);
  FockVector& operator+=(const FockVector& o);
  FockVector& operator*=(Complex c);
  double plain_norm() const;
};

Complex twisted_inner(const FockVector& f, const FockVector& g, KernelCache& kc);
double twisted_norm(const FockVector& f, KernelCache& kc);

/// Graded operator with finitely many nonzero blocks A_{m,n}: H^{on} -> H^{om}.
struct FockOperator {
  int d = 0;
  int trunc = 0;
  std::map<std::pair<int, int>, Matrix> blocks;

  static FockOperator identity(int d, int N);
  static FockOperator zero(int d, int N);
  FockVector apply(const FockVector& v) const;
  FockOperator compose(const FockOperator& o) const;
  FockOperator& operator+=(const FockOperator& o);
  FockOperator& operator*=(Complex c);
};

enum class LadderKind { Create, Annihilate, Field };

/// a_T^*(xi), a_T(xi) or X_T(xi) = a_T^*(xi) + a_T(S xi) as graded blocks.
/// Creation annihilates the top level (documented truncation semantics).
FockOperator ladder(LadderKind kind, const Vector& xi, int N,
                    const hilbert::StandardSubspace& H, KernelCache& kc);

/// Preservation operator Lambda_T(A): level-n block Lambda(A) R_{T,n}.
FockOperator preservation(const Matrix& A, int N, KernelCache& kc);

/// Adjoint w.r.t. <.,.>_T: (A†)_{n,m} = P_n^{-1} (A_{m,n})^* P_m.
FockOperator twisted_adjoint(const FockOperator& A, KernelCache& kc);

/// In-place application of X_T(xi) to a truncated Fock vector.
void apply_field(FockVector& v, const Vector& xi, const hilbert::StandardSubspace& H,
                 KernelCache& kc);

/// <Omega, X_T(e_{w_1}) ... X_T(e_{w_k}) Omega> with letters indexing the
/// generator basis of H. Exact once N >= |w|.
Complex vacuum_moment(const Word& w, const hilbert::StandardSubspace& H, KernelCache& kc,
                      int N = -1);

/// ||A restricted to level n||_T via P^{1/2}-conjugation (dense, desk sizes).
double twisted_level_norm(const FockOperator& A, int n, KernelCache& kc);

/// Library-wide bundle: a standard subspace, a twist and the caches they share.
struct Model {
  hilbert::StandardSubspace H;
  twist::Twist T;
  Settings settings;
  KernelCache kernels;

  Model(hilbert::StandardSubspace h, twist::Twist t, Settings s = {})
      : H(std::move(h)), T(std::move(t)), settings(s), kernels(T, s) {
    require(H.dim == T.d, Errc::ShapeMismatch, "twist and subspace dimensions disagree");
  }
};

}  // namespace taw::fock
