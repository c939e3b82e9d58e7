#pragma once

#include <random>

#include "taw/fock.hpp"
#include "taw/hilbert.hpp"
#include "taw/twist.hpp"

namespace tawtest {

using namespace taw;

inline hilbert::StandardSubspace tracial(int d,
                                         hilbert::BasisMode mode = hilbert::BasisMode::RealOrthonormal) {
  hilbert::SubspaceSpec spec;
  spec.eigenvalues = std::vector<double>(d, 1.0);
  spec.mode = mode;
  return hilbert::build_standard_subspace(spec);
}

/// d=2 nontracial with spectrum {lambda, 1/lambda} and J swapping the eigenbasis.
inline hilbert::StandardSubspace nontracial2(double lambda,
                                             hilbert::BasisMode mode = hilbert::BasisMode::ComplexLinear) {
  hilbert::SubspaceSpec spec;
  spec.eigenvalues = std::vector<double>{lambda, 1.0 / lambda};
  spec.pairing = std::vector<int>{1, 0};
  spec.mode = mode;
  return hilbert::build_standard_subspace(spec);
}

inline Vector random_vector(std::int64_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (std::int64_t i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v;
}

/// Random crossing-symmetric q_ij coefficient matrix for the given pairing.
inline Matrix random_qij_passing(int d, const std::vector<int>& bar, std::mt19937_64& rng,
                                 double scale = 0.25) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix q = Matrix::Zero(d, d);
  std::vector<std::vector<bool>> seen(d, std::vector<bool>(d, false));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (seen[i][j]) continue;
      const Complex val(g(rng), g(rng));
      // orbit of (i,j) under (a,b) -> (bar b, a)
      int a = i, b = j;
      for (int t = 0; t < 8; ++t) {
        if (!seen[a][b]) q(a, b) = val;
        seen[a][b] = true;
        const int na = bar[b], nb = a;
        a = na;
        b = nb;
      }
    }
  q = 0.5 * (q + q.adjoint()).eval();  // hermitize, stays in the symmetry class
  // re-impose the orbit relation exactly after hermitization
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Complex v = q(i, j);
      q(bar[j], i) = v;
      q(bar[i], bar[j]) = v;
      q(j, bar[i]) = v;
    }
  return q;
}

inline twist::Twist scaled(twist::Twist t, double target_norm) {
  if (t.q > 0) {
    t.matrix *= target_norm / t.q;
    t.q = target_norm;
  }
  return t;
}

}  // namespace tawtest
