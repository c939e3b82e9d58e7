#pragma once

#include <map>

#include "taw/common.hpp"
#include "taw/fock.hpp"

namespace taw::wick {

/// Finitely supported map from words over {1..d} to coefficients; the word w
/// stands for the monomial x_{w_1}...x_{w_k} with x_i <-> X_T(e_i).
struct NCPolynomial {
  int d = 0;
  std::map<Word, Complex> coef;

  static NCPolynomial constant(int d, Complex c);
  static NCPolynomial generator(int d, int i);

  int degree() const;
  NCPolynomial& add(const Word& w, Complex c);
  NCPolynomial& operator+=(const NCPolynomial& o);
  NCPolynomial& operator*=(Complex c);
  NCPolynomial times(const NCPolynomial& o) const;  // word concatenation
  NCPolynomial degree_part(int n) const;
  void prune(double threshold = 1e-14);
  double max_coeff_diff(const NCPolynomial& o) const;
};

/// T-Wick polynomial of a level-n tensor: sum over incomplete matchings of
/// (-1)^{|p(pi)|} W_pi^T, expanded in the generator basis.
NCPolynomial wick_polynomial(const Vector& tensor, int n, fock::Model& M);

/// Independent route: the recursion
/// Phi(xi (x) tail) = X_T(xi) Phi(tail) - Phi(a_T(S xi) tail).
NCPolynomial wick_recursive(const Vector& tensor, int n, fock::Model& M);

/// Sum of products of field operators, as a graded operator.
fock::FockOperator evaluate(const NCPolynomial& P, int N, fock::Model& M);

/// The cheaper action on the vacuum (word-by-word field application).
fock::FockVector evaluate_on_vacuum(const NCPolynomial& P, int N, fock::Model& M);

/// Coefficients of a level-n tensor in the generator tensor basis e_w.
std::map<Word, Complex> expand_in_generators(const Vector& tensor, int n, int d,
                                             const Matrix& generators, double prune = 1e-14);

/// e_w as a level-|w| tensor.
Vector generator_tensor(const Word& w, const Matrix& generators);

}  // namespace taw::wick
