#include "taw/fock.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "taw/tensor_ops.hpp"

namespace taw::fock {

KernelCache::KernelCache(const twist::Twist& T, const Settings& s)
    : twist_(T), settings_(s), d_(T.d), mu_(std::make_unique<std::mutex>()) {}

KernelCache::Level& KernelCache::level(int n) {
  std::lock_guard<std::mutex> lock(*mu_);
  auto& slot = levels_[n];
  if (!slot) slot = std::make_unique<Level>();
  return *slot;
}

const Matrix& KernelCache::R(int n) {
  require(n >= 1, Errc::IndexOutOfRange, "kernel level must be >= 1");
  Level& lv = level(n);
  std::call_once(lv.dense_once, [&] {
    const std::int64_t dim = level_dim(d_, n);
    require(dim * dim <= settings_.dense_entry_cap, Errc::SizeCapExceeded,
            "dense kernel above the size cap");
    // R_{T,n} = 1 + T_1(1 + T_2(1 + ... (1 + T_{n-1})))
    Matrix R = Matrix::Identity(dim, dim);
    for (int j = n - 1; j >= 1; --j) {
      kern::apply_slot_pair_matrix(twist_.matrix, R, d_, n, j);
      R += Matrix::Identity(dim, dim);
    }
    // P_{T,n} = (1 (x) P_{T,n-1}) R_{T,n}, symmetrized
    Matrix P;
    if (n == 1) {
      P = R;
    } else {
      const Matrix& Pprev = this->P(n - 1);
      const std::int64_t blk = dim / d_;
      P.resize(dim, dim);
#pragma omp parallel for schedule(static) if (dim > 64)
      for (std::int64_t c = 0; c < dim; ++c)
        for (int b = 0; b < d_; ++b)
          P.block(b * blk, c, blk, 1).noalias() = Pprev * R.block(b * blk, c, blk, 1);
    }
    lv.R = std::move(R);
    lv.P = 0.5 * (P + P.adjoint());
    lv.dense_ok = true;
  });
  return lv.R;
}

const Matrix& KernelCache::P(int n) {
  R(n);
  return level(n).P;
}

namespace {

void ensure_eig(const Matrix& P, std::once_flag& flag, double& mn, double& mx,
                Eigen::LDLT<Matrix>& ldlt) {
  std::call_once(flag, [&] {
    Eigen::SelfAdjointEigenSolver<Matrix> es(P, Eigen::EigenvaluesOnly);
    mn = es.eigenvalues().minCoeff();
    mx = es.eigenvalues().maxCoeff();
    ldlt.compute(P);
  });
}

}  // namespace

double KernelCache::min_eig(int n) {
  const Matrix& Pm = P(n);
  Level& lv = level(n);
  ensure_eig(Pm, lv.eig_once, lv.min_eig, lv.max_eig, lv.ldlt);
  return lv.min_eig;
}

double KernelCache::max_eig(int n) {
  const Matrix& Pm = P(n);
  Level& lv = level(n);
  ensure_eig(Pm, lv.eig_once, lv.min_eig, lv.max_eig, lv.ldlt);
  return lv.max_eig;
}

Vector KernelCache::solve(int n, const Vector& rhs) {
  if (n == 0) return rhs;
  const Matrix& Pm = P(n);
  Level& lv = level(n);
  ensure_eig(Pm, lv.eig_once, lv.min_eig, lv.max_eig, lv.ldlt);
  require(lv.min_eig > settings_.tolerance, Errc::NotStrictlyPositive,
          "P_{T,n} min eigenvalue below tolerance");
  return lv.ldlt.solve(rhs);
}

Vector KernelCache::apply_R(int n, const Vector& v, Exec ex) {
  if (n <= 1) return v;
  Vector u = v;
  for (int j = n - 1; j >= 1; --j) {
    u = kern::apply_slot_pair(twist_.matrix, u, d_, n, j, ex);
    u += v;
  }
  return u;
}

Vector KernelCache::apply_P(int n, const Vector& v, Exec ex) {
  if (n <= 1) return v;
  Vector u = apply_R(n, v, ex);
  // (1 (x) P_{n-1}) u, recursively
  const std::int64_t blk = level_dim(d_, n - 1);
  Vector out(u.size());
  for (int b = 0; b < d_; ++b) out.segment(b * blk, blk) = apply_P(n - 1, u.segment(b * blk, blk), ex);
  return out;
}

// ---------------------------------------------------------------------------

FockVector FockVector::zero(int d, int N) {
  FockVector v;
  v.d = d;
  v.trunc = N;
  v.levels.resize(N + 1);
  for (int n = 0; n <= N; ++n) v.levels[n] = Vector::Zero(level_dim(d, n));
  return v;
}

FockVector FockVector::vacuum(int d, int N) {
  FockVector v = zero(d, N);
  v.levels[0][0] = 1.0;
  return v;
}

FockVector& FockVector::operator+=(const FockVector& o) {
  require(d == o.d && trunc == o.trunc, Errc::ShapeMismatch, "Fock vector shape mismatch");
  for (int n = 0; n <= trunc; ++n) levels[n] += o.levels[n];
  return *this;
}

FockVector& FockVector::operator*=(Complex c) {
  for (auto& l : levels) l *= c;
  return *this;
}

double FockVector::plain_norm() const {
  double s = 0;
  for (const auto& l : levels) s += l.squaredNorm();
  return std::sqrt(s);
}

Complex twisted_inner(const FockVector& f, const FockVector& g, KernelCache& kc) {
  require(f.d == g.d && f.trunc == g.trunc, Errc::ShapeMismatch, "Fock vector shape mismatch");
  Complex s = std::conj(f.levels[0][0]) * g.levels[0][0];
  for (int n = 1; n <= f.trunc; ++n) {
    if (f.levels[n].isZero(0) || g.levels[n].isZero(0)) continue;
    s += f.levels[n].dot(kc.apply_P(n, g.levels[n]));
  }
  return s;
}

double twisted_norm(const FockVector& f, KernelCache& kc) {
  return std::sqrt(std::max(0.0, twisted_inner(f, f, kc).real()));
}

// ---------------------------------------------------------------------------

FockOperator FockOperator::identity(int d, int N) {
  FockOperator op;
  op.d = d;
  op.trunc = N;
  for (int n = 0; n <= N; ++n)
    op.blocks[{n, n}] = Matrix::Identity(level_dim(d, n), level_dim(d, n));
  return op;
}

FockOperator FockOperator::zero(int d, int N) {
  FockOperator op;
  op.d = d;
  op.trunc = N;
  return op;
}

FockVector FockOperator::apply(const FockVector& v) const {
  require(v.d == d && v.trunc == trunc, Errc::ShapeMismatch, "operator/vector shape mismatch");
  FockVector out = FockVector::zero(d, trunc);
  for (const auto& [mn, blk] : blocks) {
    const auto [m, n] = mn;
    out.levels[m] += blk * v.levels[n];
  }
  return out;
}

FockOperator FockOperator::compose(const FockOperator& o) const {
  require(o.d == d && o.trunc == trunc, Errc::ShapeMismatch, "operator shape mismatch");
  FockOperator out = zero(d, trunc);
  for (const auto& [mn, A] : blocks)
    for (const auto& [kl, B] : o.blocks) {
      if (mn.second != kl.first) continue;
      auto key = std::make_pair(mn.first, kl.second);
      auto it = out.blocks.find(key);
      if (it == out.blocks.end())
        out.blocks[key] = A * B;
      else
        it->second += A * B;
    }
  return out;
}

FockOperator& FockOperator::operator+=(const FockOperator& o) {
  require(o.d == d && o.trunc == trunc, Errc::ShapeMismatch, "operator shape mismatch");
  for (const auto& [mn, B] : o.blocks) {
    auto it = blocks.find(mn);
    if (it == blocks.end())
      blocks[mn] = B;
    else
      it->second += B;
  }
  return *this;
}

FockOperator& FockOperator::operator*=(Complex c) {
  for (auto& [mn, B] : blocks) B *= c;
  return *this;
}

namespace {

Matrix creation_block(const Vector& xi, int d, int n) {
  // h (x) . : C^{d^n} -> C^{d^{n+1}}
  Matrix out = Matrix::Zero(level_dim(d, n + 1), level_dim(d, n));
  const std::int64_t blk = level_dim(d, n);
  for (int a = 0; a < d; ++a)
    out.block(a * blk, 0, blk, blk) = xi[a] * Matrix::Identity(blk, blk);
  return out;
}

Matrix annihilation_block(const Vector& xi, int d, int n, KernelCache& kc) {
  // a(xi) R_{T,n}: C^{d^n} -> C^{d^{n-1}}
  const std::int64_t blk = level_dim(d, n - 1);
  Matrix free_part = Matrix::Zero(blk, level_dim(d, n));
  for (int a = 0; a < d; ++a)
    free_part.block(0, a * blk, blk, blk) = std::conj(xi[a]) * Matrix::Identity(blk, blk);
  return free_part * kc.R(n);
}

}  // namespace

FockOperator ladder(LadderKind kind, const Vector& xi, int N,
                    const hilbert::StandardSubspace& H, KernelCache& kc) {
  require(N >= 1, Errc::TruncationTooSmall, "truncation must be >= 1");
  require(xi.size() == H.dim, Errc::ShapeMismatch, "vector dimension mismatch");
  const int d = H.dim;
  FockOperator op = FockOperator::zero(d, N);
  if (kind == LadderKind::Create || kind == LadderKind::Field) {
    for (int n = 0; n <= N - 1; ++n) op.blocks[{n + 1, n}] = creation_block(xi, d, n);
  }
  if (kind == LadderKind::Annihilate) {
    for (int n = 1; n <= N; ++n) op.blocks[{n - 1, n}] = annihilation_block(xi, d, n, kc);
  }
  if (kind == LadderKind::Field) {
    const Vector sxi = H.S.apply(xi);
    for (int n = 1; n <= N; ++n) {
      auto key = std::make_pair(n - 1, n);
      op.blocks[key] = annihilation_block(sxi, d, n, kc);
    }
  }
  return op;
}

FockOperator preservation(const Matrix& A, int N, KernelCache& kc) {
  require(N >= 1, Errc::TruncationTooSmall, "truncation must be >= 1");
  const int d = kc.d();
  require(A.rows() == d && A.cols() == d, Errc::ShapeMismatch, "matrix dimension mismatch");
  FockOperator op = FockOperator::zero(d, N);
  for (int n = 1; n <= N; ++n) {
    const std::int64_t blk = level_dim(d, n - 1);
    Matrix lam = Matrix::Zero(level_dim(d, n), level_dim(d, n));
    for (int ao = 0; ao < d; ++ao)
      for (int ai = 0; ai < d; ++ai)
        if (A(ao, ai) != Complex(0, 0))
          lam.block(ao * blk, ai * blk, blk, blk) = A(ao, ai) * Matrix::Identity(blk, blk);
    op.blocks[{n, n}] = lam * kc.R(n);
  }
  return op;
}

FockOperator twisted_adjoint(const FockOperator& A, KernelCache& kc) {
  FockOperator out = FockOperator::zero(A.d, A.trunc);
  for (const auto& [mn, blk] : A.blocks) {
    const auto [m, n] = mn;
    Matrix adj = blk.adjoint();  // C^{d^m} -> C^{d^n}
    if (m >= 1) adj = adj * kc.P(m);
    Matrix res(adj.rows(), adj.cols());
    for (Eigen::Index c = 0; c < adj.cols(); ++c) res.col(c) = kc.solve(n, adj.col(c));
    out.blocks[{n, m}] = std::move(res);
  }
  return out;
}

void apply_field(FockVector& v, const Vector& xi, const hilbert::StandardSubspace& H,
                 KernelCache& kc) {
  const int d = v.d;
  const Vector sxi = H.S.apply(xi);
  FockVector out = FockVector::zero(d, v.trunc);
  for (int n = 0; n <= v.trunc; ++n) {
    if (v.levels[n].isZero(0)) continue;
    if (n + 1 <= v.trunc) out.levels[n + 1] += kern::apply_creator(xi, v.levels[n], d, n);
    if (n >= 1)
      out.levels[n - 1] += kern::apply_annihilator(sxi, kc.apply_R(n, v.levels[n]), d, n);
  }
  v = std::move(out);
}

Complex vacuum_moment(const Word& w, const hilbert::StandardSubspace& H, KernelCache& kc,
                      int N) {
  const int len = static_cast<int>(w.size());
  if (N < 0) N = len;
  require(N >= len, Errc::TruncationTooSmall, "vacuum moment needs N >= |w|");
  if (len == 0) return 1.0;
  FockVector v = FockVector::vacuum(H.dim, N);
  for (int t = len - 1; t >= 0; --t) {
    require(w[t] >= 1 && w[t] <= H.dim, Errc::IndexOutOfRange, "letter out of range");
    apply_field(v, H.generators.col(w[t] - 1), H, kc);
  }
  return v.levels[0][0];
}

double twisted_level_norm(const FockOperator& A, int n, KernelCache& kc) {
  // sup ||A v||_T / ||v||_T over level n; A must map level n to a single level m
  int m = -1;
  const Matrix* blk = nullptr;
  for (const auto& [mn, B] : A.blocks)
    if (mn.second == n) {
      require(m < 0, Errc::BadParams, "level norm needs a single-block column");
      m = mn.first;
      blk = &B;
    }
  if (!blk) return 0.0;
  auto half_power = [&](int lev, double p) -> Matrix {
    if (lev == 0) return Matrix::Identity(1, 1);
    Eigen::SelfAdjointEigenSolver<Matrix> es(kc.P(lev));
    Vector vals = es.eigenvalues().cast<Complex>();
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      vals[i] = std::pow(std::max(es.eigenvalues()[i], 0.0), p);
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
  };
  const Matrix M = half_power(m, 0.5) * (*blk) * half_power(n, -0.5);
  return Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
}

}  // namespace taw::fock
