#pragma once

#include <functional>

#include "taw/common.hpp"
#include "taw/parallel.hpp"

namespace taw::kern {

// Coordinates on H^{on} are plain tensor coordinates with the first slot most
// significant: index(a_1..a_n) = sum a_t d^{n-t}. Slots are 1-based.

/// (1^{k-1} (x) M (x) 1^{n-k-1}) v for a d^2 x d^2 matrix M acting on slots k,k+1.
Vector apply_slot_pair(const Matrix& M, const Vector& v, int d, int n, int k,
                       Exec ex = Exec::Parallel);
Vector apply_slot_pair_serial(const Matrix& M, const Vector& v, int d, int n, int k);

/// Same operator applied to every column of a dense matrix (in place).
void apply_slot_pair_matrix(const Matrix& M, Matrix& A, int d, int n, int k,
                            Exec ex = Exec::Parallel);

/// Contraction C_i with pairing matrix K(a,b) = <S e_a, e_b>:
/// H^{ok} -> H^{o(k-2)}, out[l,r] = sum_{a,b} K(a,b) v[l,a,b,r].
Vector apply_contraction(const Matrix& K, const Vector& v, int d, int k, int i,
                         Exec ex = Exec::Parallel);
Vector apply_contraction_serial(const Matrix& K, const Vector& v, int d, int k, int i);

/// Adjoint C_i^*: H^{o(k-2)} -> H^{ok}, inserts conj(K) at slot i.
Vector apply_contraction_adjoint(const Matrix& K, const Vector& v, int d, int k, int i,
                                 Exec ex = Exec::Parallel);

/// Dual-pairing slot removal: out[l,r] = sum_a conj(f(a)) v[l,a,r] for slot k of n.
Vector apply_dual_pair(const Vector& f, const Vector& v, int d, int n, int k,
                       Exec ex = Exec::Parallel);

/// a(h): H^{on} -> H^{o(n-1)}, contracts the first slot against h.
Vector apply_annihilator(const Vector& h, const Vector& v, int d, int n);

/// h (x) v: H^{on} -> H^{o(n+1)}.
Vector apply_creator(const Vector& h, const Vector& v, int d, int n);

/// (A (x) 1^{n-1}) v: the free preservation direction on the first slot.
Vector apply_first_slot(const Matrix& A, const Vector& v, int d, int n,
                        Exec ex = Exec::Parallel);

/// Slice by the first slot: v = sum_a e_a (x) slice(v,a).
Vector slice_first_slot(const Vector& v, int d, int n, int a);

Matrix kronecker(const Matrix& A, const Matrix& B);

/// Largest singular value of a linear map given by apply/apply_adjoint,
/// via power iteration on A*A with relative tolerance rel_tol.
double operator_norm_power(const std::function<Vector(const Vector&)>& apply,
                           const std::function<Vector(const Vector&)>& apply_adjoint,
                           std::int64_t domain_dim, double rel_tol = 1e-8,
                           int max_iter = 500);

}  // namespace taw::kern
