#include "taw/twist.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "taw/fock.hpp"
#include "taw/tensor_ops.hpp"

namespace taw::twist {

namespace {

double operator_norm(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

Twist finish(int d, Matrix m) {
  Twist t;
  t.d = d;
  t.q = operator_norm(m);
  t.matrix = std::move(m);
  return t;
}

}  // namespace

Twist make_qflip(int d, double q) {
  require(std::abs(q) < 1, Errc::BadParams, "q-flip needs |q| < 1");
  Matrix m = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(j * d + i, i * d + j) = q;
  return finish(d, std::move(m));
}

Twist make_qij(const Matrix& qcoef, const hilbert::StandardSubspace& H) {
  const int d = H.dim;
  require(qcoef.rows() == d && qcoef.cols() == d, Errc::BadParams, "coefficient shape mismatch");
  require((qcoef - qcoef.adjoint()).cwiseAbs().maxCoeff() < 1e-12, Errc::BadParams,
          "q_ij twist needs a Hermitian coefficient matrix");
  require(H.bar.has_value(), Errc::BadParams,
          "q_ij twist needs an eigenbasis with J permuting it");
  Matrix m = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(j * d + i, i * d + j) = qcoef(i, j);
  return finish(d, std::move(m));
}

Twist make_dim2(Dim2Family family, const Dim2Params& p, const hilbert::StandardSubspace& H) {
  require(H.dim == 2 && H.tracial(), Errc::BadParams, "dim2 families need a tracial d=2 subspace");
  Matrix m = Matrix::Zero(4, 4);
  switch (family) {
    case Dim2Family::Diag:
      m(0, 0) = p.q1;
      m(3, 3) = p.q2;
      m(1, 2) = m(2, 1) = p.q12;
      break;
    case Dim2Family::Anti:
      m(0, 0) = m(3, 3) = p.q1;
      m(0, 3) = m(3, 0) = p.c;
      m(1, 1) = m(2, 2) = p.c;
      m(1, 2) = m(2, 1) = -p.q1;
      break;
    case Dim2Family::Mixed: {
      require(p.eps == 1 || p.eps == -1, Errc::BadParams, "eps must be +1 or -1");
      const double mid = 0.5 * (p.q1 + p.q2);
      const double s = p.eps * std::sqrt(0.5 * (p.q1 * p.q1 + p.q2 * p.q2));
      m(0, 0) = p.q1;
      m(3, 3) = p.q2;
      m(0, 3) = m(3, 0) = mid;
      m(1, 1) = m(2, 2) = mid;
      m(1, 2) = m(2, 1) = s;
      break;
    }
  }
  return finish(2, std::move(m));
}

hilbert::SubspaceSpec matrix_algebra_subspace(int n, const std::vector<double>& h,
                                              hilbert::BasisMode mode) {
  require(n >= 1 && static_cast<int>(h.size()) == n, Errc::BadParams, "weight size mismatch");
  hilbert::SubspaceSpec spec;
  spec.mode = mode;
  std::vector<double> lam(n * n);
  std::vector<int> bar(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      require(h[i] > 0, Errc::BadParams, "weight must be positive");
      lam[i * n + j] = h[i] / h[j];
      bar[i * n + j] = j * n + i;
    }
  spec.eigenvalues = lam;
  spec.pairing = bar;
  return spec;
}

Twist make_matrix_algebra(int n, const std::vector<double>& h, double c) {
  require(n >= 1 && static_cast<int>(h.size()) == n, Errc::BadParams, "weight size mismatch");
  double tr = 0;
  for (double v : h) {
    require(v > 0, Errc::BadParams, "weight must be positive");
    tr += 1.0 / v;
  }
  require(c >= -1.0 / tr, Errc::BadParams, "c below -1/Tr(h^{-1})");
  const int d = n * n;
  // m*(E_{ij}/sqrt(h_j)) = sum_k h_k^{-1/2} (E_{ik}/sqrt(h_k)) (x) (E_{kj}/sqrt(h_j))
  Matrix mstar = Matrix::Zero(d * d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        mstar((i * n + k) * d + (k * n + j), i * n + j) += 1.0 / std::sqrt(h[k]);
  Matrix m = c * (mstar * mstar.adjoint());
  return finish(d, std::move(m));
}

Twist make_raw(const Matrix& m) {
  const double dr = std::sqrt(static_cast<double>(m.rows()));
  const int d = static_cast<int>(std::lround(dr));
  require(m.rows() == m.cols() && static_cast<Eigen::Index>(d) * d == m.rows(), Errc::BadParams,
          "raw twist must be d^2 x d^2");
  return finish(d, m);
}

Matrix embed_dense(const Twist& T, int k, int n, const Settings& s) {
  require(k >= 1 && k <= n - 1, Errc::IndexOutOfRange, "embedding slot out of range");
  const std::int64_t dim = level_dim(T.d, n);
  require(dim * dim <= s.dense_entry_cap, Errc::SizeCapExceeded, "dense embedding above cap");
  const Matrix left = Matrix::Identity(level_dim(T.d, k - 1), level_dim(T.d, k - 1));
  const Matrix right = Matrix::Identity(level_dim(T.d, n - k - 1), level_dim(T.d, n - k - 1));
  return kern::kronecker(kern::kronecker(left, T.matrix), right);
}

Vector apply_embed(const Twist& T, const Vector& v, int k, int n, Exec ex) {
  return kern::apply_slot_pair(T.matrix, v, T.d, n, k, ex);
}

Matrix ranged_product_dense(const Twist& T, int i, int j, int n, const Settings& s) {
  require(i >= 1 && j <= n && i <= j, Errc::IndexOutOfRange, "ranged product out of range");
  const std::int64_t dim = level_dim(T.d, n);
  require(dim * dim <= s.dense_entry_cap, Errc::SizeCapExceeded, "dense ranged product above cap");
  Matrix out = Matrix::Identity(dim, dim);
  for (int k = j - 1; k >= i; --k) kern::apply_slot_pair_matrix(T.matrix, out, T.d, n, k);
  return out;
}

Vector apply_ranged(const Twist& T, Vector v, int i, int j, int n, Exec ex) {
  for (int k = j - 1; k >= i; --k) v = kern::apply_slot_pair(T.matrix, v, T.d, n, k, ex);
  return v;
}

Vector apply_ranged_adjoint(const Twist& T, Vector v, int i, int j, int n, Exec ex) {
  const Matrix adj = T.matrix.adjoint();
  for (int k = i; k <= j - 1; ++k) v = kern::apply_slot_pair(adj, v, T.d, n, k, ex);
  return v;
}

namespace {

// dense C_i on H^{o3} -> H, from the ambient pairing K(a,b) = <S e_a, e_b>
Matrix dense_contraction3(const Matrix& K, int d, int i) {
  Matrix out = Matrix::Zero(d, d * d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        if (i == 1)
          out(c, (a * d + b) * d + c) += K(a, b);
        else
          out(a, (a * d + b) * d + c) += K(b, c);
      }
  return out;
}

}  // namespace

ValidationReport validate_twist(const Twist& T, const hilbert::StandardSubspace& H, int level,
                                const Settings& s) {
  require(T.d == H.dim, Errc::ShapeMismatch, "twist and subspace dimensions disagree");
  const int d = T.d;
  const double tol = s.tolerance;
  ValidationReport rep;

  rep.self_adjoint.residual = (T.matrix - T.matrix.adjoint()).cwiseAbs().maxCoeff();
  rep.self_adjoint.pass = rep.self_adjoint.residual < tol;

  rep.norm_lt_one.residual = std::max(0.0, T.q - 1.0);
  rep.norm_lt_one.pass = T.q < 1.0;

  const Matrix K = H.contraction_pairing();
  // the d^9-flop dense checks are exact at desk sizes; above that the
  // identities are probed matrix-free on seeded unit vectors
  if (d <= 8) {
    Settings loose = s;
    loose.dense_entry_cap = std::max<std::int64_t>(loose.dense_entry_cap, 1 << 20);
    const Matrix T1 = embed_dense(T, 1, 3, loose);
    const Matrix T2 = embed_dense(T, 2, 3, loose);
    rep.braided.residual = (T1 * T2 * T1 - T2 * T1 * T2).cwiseAbs().maxCoeff();

    const Matrix dd = kern::kronecker(H.delta, H.delta);
    rep.compatible.residual = (dd * T.matrix - T.matrix * dd).cwiseAbs().maxCoeff();

    const Matrix C1 = dense_contraction3(K, d, 1);
    const Matrix C2 = dense_contraction3(K, d, 2);
    rep.crossing_symmetric.residual = (C1 * T2 - C2 * T1).cwiseAbs().maxCoeff();
  } else {
    std::mt19937_64 rng(0xbadcafeULL);
    std::normal_distribution<double> g(0.0, 1.0);
    auto rnd = [&](std::int64_t n) {
      Vector v(n);
      for (std::int64_t i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
      v.normalize();
      return v;
    };
    double br = 0, cp = 0, cs = 0;
    const std::int64_t d3 = level_dim(d, 3);
    const Matrix dd = kern::kronecker(H.delta, H.delta);
    for (int t = 0; t < 32; ++t) {
      const Vector v = rnd(d3);
      Vector lhs = apply_embed(T, apply_embed(T, apply_embed(T, v, 1, 3), 2, 3), 1, 3);
      Vector rhs = apply_embed(T, apply_embed(T, apply_embed(T, v, 2, 3), 1, 3), 2, 3);
      br = std::max(br, (lhs - rhs).cwiseAbs().maxCoeff());
      lhs = kern::apply_contraction(K, apply_embed(T, v, 2, 3), d, 3, 1);
      rhs = kern::apply_contraction(K, apply_embed(T, v, 1, 3), d, 3, 2);
      cs = std::max(cs, (lhs - rhs).cwiseAbs().maxCoeff());
      const Vector w = rnd(static_cast<std::int64_t>(d) * d);
      cp = std::max(cp, (dd * (T.matrix * w) - T.matrix * (dd * w)).cwiseAbs().maxCoeff());
    }
    rep.braided.residual = br;
    rep.compatible.residual = cp;
    rep.crossing_symmetric.residual = cs;
  }
  rep.braided.pass = rep.braided.residual < tol;
  rep.compatible.pass = rep.compatible.residual < tol;
  rep.crossing_symmetric.pass = rep.crossing_symmetric.residual < tol;

  // secondary form (random vectors): S a(phi1) T(phi2 (x) phi3) = a(phi3) T(S phi2 (x) phi1)
  {
    std::mt19937_64 rng(0xc05eedULL);
    std::normal_distribution<double> g(0.0, 1.0);
    auto rnd = [&] {
      Vector v(d);
      for (int i = 0; i < d; ++i) v[i] = Complex(g(rng), g(rng));
      return v;
    };
    double worst = 0;
    for (int trial = 0; trial < 8; ++trial) {
      const Vector p1 = rnd(), p2 = rnd(), p3 = rnd();
      Vector lhs = H.S.apply(kern::apply_annihilator(p1, T.matrix * kern::apply_creator(p2, p3, d, 1), d, 2));
      Vector rhs = kern::apply_annihilator(p3, T.matrix * kern::apply_creator(H.S.apply(p2), p1, d, 1), d, 2);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    rep.crossing_secondary_residual = worst;
  }

  // strict positivity of P_{T,n} for n <= level, within the dimension guard
  fock::KernelCache kernels(T, s);
  double worst_neg = std::numeric_limits<double>::infinity();
  int checked = 0;
  for (int n = 1; n <= level; ++n) {
    if (level_dim(d, n) > s.strict_dim_cap) break;
    const double mn = kernels.min_eig(n);
    worst_neg = std::min(worst_neg, mn);
    checked = n;
  }
  rep.strict_positivity_checked_to_level = checked;
  rep.strictly_positive.residual = std::max(0.0, -worst_neg);
  rep.strictly_positive.pass = worst_neg > 0;
  return rep;
}

}  // namespace taw::twist
