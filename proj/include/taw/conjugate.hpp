#pragma once

#include <map>

#include "taw/common.hpp"
#include "taw/fock.hpp"
#include "taw/wick.hpp"

namespace taw::conjugate {

/// Element of C<x> (x) C<x>: finitely supported map on word pairs.
struct BiPolynomial {
  int d = 0;
  std::map<std::pair<Word, Word>, Complex> coef;

  BiPolynomial& add(const Word& u, const Word& v, Complex c);
  void prune(double threshold = 1e-14);
  double max_coeff_diff(const BiPolynomial& o) const;
};

/// Free difference quotient d_i on polynomials.
BiPolynomial free_dq(const wick::NCPolynomial& P, int i);

/// Pair-graded element of F_T (x) F_T: component (a,b) is a tensor on
/// H^{oa} (x) H^{ob} in plain coordinates.
struct BiGradedVector {
  int d = 0;
  std::map<std::pair<int, int>, Vector> comps;

  void add(int a, int b, const Vector& v);
  Complex vacuum_component() const;  // <Omega (x) Omega, .>
  double max_abs_diff(const BiGradedVector& o) const;
};

/// Partial gradient: pairs slot k of a level-n tensor against the dual vector
/// f_i and returns the (k-1, n-k) component.
BiGradedVector nabla(int i, int k, const Vector& tensor, int n,
                     const hilbert::StandardSubspace& H);

/// d_i Phi(tensor) as a pair-graded vector, summed over matchings pi and
/// singletons k in the interval intersection of p(pi).
BiGradedVector dq_wick(const Vector& tensor, int n, int i, fock::Model& M);

/// All generator indices at once; the W_pi applications are shared.
std::vector<BiGradedVector> dq_wick_all(const Vector& tensor, int n, fock::Model& M);

struct ConjugateResult {
  int M = 0;                      // series truncation: levels 1,3,..,2M+1
  std::vector<fock::FockVector> xi;      // per generator i
  std::vector<double> tail_bound;        // (2n+1)!-based bound, per i
  std::vector<double> tail_bound_sharp;  // |B(2n+1)| = n! refinement, per i
  double fisher = 0.0;
  double fisher_lo = 0.0, fisher_hi = 0.0;
};

/// Truncated conjugate-variable series with certified tail bounds and the
/// free Fisher information.
ConjugateResult conjugate_variables(int M, fock::Model& M_);

/// Same series with f_i replaced by e_i (quasi-free conjugates Theta_i), plus
/// the linear-combination route through Xi for cross-checking.
struct QuasiFreeResult {
  int M = 0;
  std::vector<fock::FockVector> theta;          // direct series
  std::vector<fock::FockVector> theta_from_xi;  // sum_k <e_k,e_j> Xi_k
  std::vector<double> tail_bound;
};
QuasiFreeResult quasi_free(int M, fock::Model& M_);

double omega(double q);

/// Certified bound on the T-norm of the level-(2n+1) series term.
double term_bound(int n, int d, double q, double s_norm, double f_norm);
double term_bound_sharp(int n, int d, double q, double s_norm, double f_norm);

// ---- power-series norms and potentials (real-orthonormal mode) ----

double rnorm(const wick::NCPolynomial& P, double R);

/// sigma-cyclic rearrangement rho(X_{j1}..X_{jm}) = sigma_{-i}(X_{jm}) X_{j1}..X_{jm-1}.
wick::NCPolynomial rho(const wick::NCPolynomial& P, const Matrix& A);

struct SigmaRnorm {
  double value = 0.0;
  bool stabilized = true;  // sup attained inside the window (or exact period found)
};
SigmaRnorm sigma_rnorm(const wick::NCPolynomial& P, double R, const Matrix& A, int window = 64);

/// Sigma-cyclic derivative D_i.
wick::NCPolynomial cyclic_derivative(const wick::NCPolynomial& P, int i, const Matrix& A);

struct PotentialResult {
  wick::NCPolynomial V, V0, W;
  double W_rnorm = 0.0;
  double W_tail = 0.0;                         // closed-form tail for levels > M
  std::vector<double> theta_minus_x_rnorm;     // per generator, computed part
  std::vector<double> theta_tail;              // per generator, closed-form tail
  double sigma_W_rnorm = 0.0;
  bool sigma_stabilized = true;
  bool regime_ok = false;  // ||W||_R + tail < C_R
  bool r_large_enough = false;  // R > 4||A|| + 1
};

PotentialResult potential(int M, double R, double C_R, fock::Model& M_);

/// One term of the closed-form transport tail series at index m.
double transport_tail_term(int m, int d, double q, double s_norm, double R);
/// Sum of the series for m > M.
double transport_tail(int M, int d, double q, double s_norm, double R);

}  // namespace taw::conjugate
