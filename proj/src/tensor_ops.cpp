#include "taw/tensor_ops.hpp"

#include <random>

namespace taw::kern {

namespace {

using RowMap = Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstRowMap =
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

}  // namespace

Vector apply_slot_pair_serial(const Matrix& M, const Vector& v, int d, int n, int k) {
  require(k >= 1 && k <= n - 1, Errc::IndexOutOfRange, "slot index out of range");
  const std::int64_t L = level_dim(d, k - 1);
  const std::int64_t R = level_dim(d, n - k - 1);
  const int d2 = d * d;
  Vector out = Vector::Zero(v.size());
  for (std::int64_t l = 0; l < L; ++l) {
    for (int mo = 0; mo < d2; ++mo) {
      for (int mi = 0; mi < d2; ++mi) {
        const Complex c = M(mo, mi);
        if (c == Complex(0, 0)) continue;
        const std::int64_t src = (l * d2 + mi) * R;
        const std::int64_t dst = (l * d2 + mo) * R;
        for (std::int64_t r = 0; r < R; ++r) out[dst + r] += c * v[src + r];
      }
    }
  }
  return out;
}

Vector apply_slot_pair(const Matrix& M, const Vector& v, int d, int n, int k, Exec ex) {
  require(k >= 1 && k <= n - 1, Errc::IndexOutOfRange, "slot index out of range");
  if (ex == Exec::Serial) return apply_slot_pair_serial(M, v, d, n, k);
  const std::int64_t L = level_dim(d, k - 1);
  const std::int64_t R = level_dim(d, n - k - 1);
  const int d2 = d * d;
  Vector out(v.size());
  // work grid (l, column chunk of R); handles both edge slots, where one of
  // the outer indices collapses to size one
  const std::int64_t chunk = std::max<std::int64_t>(
      64, R / std::max<std::int64_t>(1, 2 * max_threads() / std::max<std::int64_t>(L, 1)));
  const std::int64_t rblocks = (R + chunk - 1) / chunk;
  const std::int64_t tasks = L * rblocks;
#pragma omp parallel for schedule(static) if (tasks > 1 && v.size() >= kParallelGrain)
  for (std::int64_t t = 0; t < tasks; ++t) {
    const std::int64_t l = t / rblocks;
    const std::int64_t c0 = (t % rblocks) * chunk;
    const std::int64_t len = std::min(chunk, R - c0);
    ConstRowMap B(v.data() + l * d2 * R, d2, R);
    RowMap O(out.data() + l * d2 * R, d2, R);
    O.middleCols(c0, len).noalias() = M * B.middleCols(c0, len);
  }
  return out;
}

void apply_slot_pair_matrix(const Matrix& M, Matrix& A, int d, int n, int k, Exec ex) {
  const std::int64_t cols = A.cols();
#pragma omp parallel for schedule(static) if (ex == Exec::Parallel && cols > 1)
  for (std::int64_t c = 0; c < cols; ++c) {
    Vector col = A.col(c);
    A.col(c) = apply_slot_pair(M, col, d, n, k, Exec::Serial);
  }
}

Vector apply_contraction_serial(const Matrix& K, const Vector& v, int d, int k, int i) {
  require(k >= 2 && i >= 1 && i < k, Errc::IndexOutOfRange, "contraction index out of range");
  const std::int64_t L = level_dim(d, i - 1);
  const std::int64_t R = level_dim(d, k - i - 1);
  Vector out = Vector::Zero(L * R);
  for (std::int64_t l = 0; l < L; ++l)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const Complex c = K(a, b);
        if (c == Complex(0, 0)) continue;
        const std::int64_t src = ((l * d + a) * d + b) * R;
        const std::int64_t dst = l * R;
        for (std::int64_t r = 0; r < R; ++r) out[dst + r] += c * v[src + r];
      }
  return out;
}

Vector apply_contraction(const Matrix& K, const Vector& v, int d, int k, int i, Exec ex) {
  if (ex == Exec::Serial || v.size() < kParallelGrain)
    return apply_contraction_serial(K, v, d, k, i);
  const std::int64_t L = level_dim(d, i - 1);
  const std::int64_t R = level_dim(d, k - i - 1);
  Vector out = Vector::Zero(L * R);
#pragma omp parallel for schedule(static) if (L > 1)
  for (std::int64_t l = 0; l < L; ++l)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const Complex c = K(a, b);
        if (c == Complex(0, 0)) continue;
        out.segment(l * R, R) += c * v.segment(((l * d + a) * d + b) * R, R);
      }
  return out;
}

Vector apply_contraction_adjoint(const Matrix& K, const Vector& v, int d, int k, int i, Exec ex) {
  require(k >= 2 && i >= 1 && i < k, Errc::IndexOutOfRange, "contraction index out of range");
  const std::int64_t L = level_dim(d, i - 1);
  const std::int64_t R = level_dim(d, k - i - 1);
  Vector out = Vector::Zero(L * d * d * R);
#pragma omp parallel for schedule(static) if (ex == Exec::Parallel && L > 1 && out.size() >= kParallelGrain)
  for (std::int64_t l = 0; l < L; ++l)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const Complex c = std::conj(K(a, b));
        if (c == Complex(0, 0)) continue;
        out.segment(((l * d + a) * d + b) * R, R) = c * v.segment(l * R, R);
      }
  return out;
}

Vector apply_dual_pair(const Vector& f, const Vector& v, int d, int n, int k, Exec ex) {
  require(k >= 1 && k <= n, Errc::IndexOutOfRange, "slot index out of range");
  const std::int64_t L = level_dim(d, k - 1);
  const std::int64_t R = level_dim(d, n - k);
  Vector out = Vector::Zero(L * R);
#pragma omp parallel for schedule(static) if (ex == Exec::Parallel && L > 1 && v.size() >= kParallelGrain)
  for (std::int64_t l = 0; l < L; ++l)
    for (int a = 0; a < d; ++a) {
      const Complex c = std::conj(f[a]);
      if (c == Complex(0, 0)) continue;
      out.segment(l * R, R) += c * v.segment((l * d + a) * R, R);
    }
  return out;
}

Vector apply_annihilator(const Vector& h, const Vector& v, int d, int n) {
  require(n >= 1, Errc::IndexOutOfRange, "annihilator needs level >= 1");
  const std::int64_t R = level_dim(d, n - 1);
  Vector out = Vector::Zero(R);
  for (int a = 0; a < d; ++a) out += std::conj(h[a]) * v.segment(a * R, R);
  return out;
}

Vector apply_creator(const Vector& h, const Vector& v, int d, int n) {
  const std::int64_t R = level_dim(d, n);
  Vector out(d * R);
  for (int a = 0; a < d; ++a) out.segment(a * R, R) = h[a] * v;
  return out;
}

Vector apply_first_slot(const Matrix& A, const Vector& v, int d, int n, Exec ex) {
  require(n >= 1, Errc::IndexOutOfRange, "needs level >= 1");
  const std::int64_t R = level_dim(d, n - 1);
  Vector out = Vector::Zero(v.size());
#pragma omp parallel for schedule(static) if (ex == Exec::Parallel && v.size() >= kParallelGrain)
  for (int ao = 0; ao < d; ++ao) {
    for (int ai = 0; ai < d; ++ai) {
      const Complex c = A(ao, ai);
      if (c == Complex(0, 0)) continue;
      out.segment(ao * R, R) += c * v.segment(ai * R, R);
    }
  }
  return out;
}

Vector slice_first_slot(const Vector& v, int d, int n, int a) {
  const std::int64_t R = level_dim(d, n - 1);
  return v.segment(a * R, R);
}

Matrix kronecker(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

double operator_norm_power(const std::function<Vector(const Vector&)>& apply,
                           const std::function<Vector(const Vector&)>& apply_adjoint,
                           std::int64_t domain_dim, double rel_tol, int max_iter) {
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector x(domain_dim);
  for (std::int64_t i = 0; i < domain_dim; ++i) x[i] = Complex(gauss(rng), gauss(rng));
  x.normalize();
  double lam = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector y = apply_adjoint(apply(x));
    double next = y.norm();
    if (next == 0.0) return 0.0;
    y /= next;
    if (it > 2 && std::abs(next - lam) <= rel_tol * next) {
      lam = next;
      break;
    }
    lam = next;
    x = y;
  }
  return std::sqrt(lam);
}

}  // namespace taw::kern
