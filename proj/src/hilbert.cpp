#include "taw/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace taw::hilbert {

namespace {

Matrix hermitian_power(const Matrix& A, double p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  Vector vals = es.eigenvalues().cast<Complex>();
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    vals[i] = std::pow(std::max(es.eigenvalues()[i], 0.0), p);
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

// Re-orthonormal basis of H = fix(S) built from eigen-data: fixed indices give
// single columns, (i, bar(i)) pairs give two.
Matrix real_orthonormal_from_eigendata(const std::vector<double>& lam,
                                       const std::vector<int>& bar) {
  const int d = static_cast<int>(lam.size());
  Matrix E = Matrix::Zero(d, d);
  int col = 0;
  std::vector<bool> done(d, false);
  for (int i = 0; i < d; ++i) {
    if (done[i]) continue;
    if (bar[i] == i) {
      E(i, col++) = 1.0;
      done[i] = true;
    } else {
      const int j = bar[i];
      const double b = 1.0 / std::sqrt(1.0 + 1.0 / lam[i]);
      E(i, col) = b / std::sqrt(lam[i]);
      E(j, col) = b;
      ++col;
      E(i, col) = Complex(0, -1.0) * b / std::sqrt(lam[i]);
      E(j, col) = Complex(0, 1.0) * b;
      ++col;
      done[i] = done[j] = true;
    }
  }
  return E;
}

// General fallback: Re-orthonormal basis of the real fixed space of S,
// computed over R^{2d}.
Matrix real_orthonormal_from_S(const AntilinearMap& S, double tol) {
  const int d = static_cast<int>(S.m.rows());
  // S as an R-linear map on (Re v, Im v): S v = M conj(v)
  RealMatrix M(2 * d, 2 * d);
  M.topLeftCorner(d, d) = S.m.real();
  M.topRightCorner(d, d) = S.m.imag();
  M.bottomLeftCorner(d, d) = S.m.imag();
  M.bottomRightCorner(d, d) = -S.m.real();
  RealMatrix K = M - RealMatrix::Identity(2 * d, 2 * d);
  Eigen::FullPivLU<RealMatrix> lu(K);
  lu.setThreshold(std::sqrt(tol));
  RealMatrix null = lu.kernel();
  require(null.cols() == d, Errc::ModularMismatch, "fixed space of S has wrong dimension");
  Eigen::HouseholderQR<RealMatrix> qr(null);
  RealMatrix Q = qr.householderQ() * RealMatrix::Identity(2 * d, d);
  Matrix E(d, d);
  E = Q.topRows(d).cast<Complex>() + Complex(0, 1) * Q.bottomRows(d).cast<Complex>();
  return E;
}

}  // namespace

bool StandardSubspace::tracial(double tol) const {
  return (delta - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < tol;
}

Matrix StandardSubspace::covariance_A() const {
  require(mode == BasisMode::RealOrthonormal, Errc::WrongBasisMode,
          "covariance A needs the real-orthonormal basis mode");
  return generators.partialPivLu().solve(delta.inverse() * generators);
}

StandardSubspace build_standard_subspace(const SubspaceSpec& spec) {
  StandardSubspace H;
  H.mode = spec.mode;
  const double tol = spec.tolerance;

  if (spec.eigenvalues) {
    const auto& lam = *spec.eigenvalues;
    const int d = static_cast<int>(lam.size());
    require(d >= 1, Errc::BadParams, "empty eigenvalue list");
    std::vector<int> bar(d);
    if (spec.pairing) {
      bar = *spec.pairing;
      require(static_cast<int>(bar.size()) == d, Errc::BadParams, "pairing size mismatch");
    } else {
      std::iota(bar.begin(), bar.end(), 0);
    }
    for (int i = 0; i < d; ++i) {
      require(lam[i] > 0, Errc::NotPositive, "eigenvalue must be positive");
      require(bar[i] >= 0 && bar[i] < d && bar[bar[i]] == i, Errc::BadParams,
              "pairing is not an involution");
      require(std::abs(lam[bar[i]] - 1.0 / lam[i]) <= tol * std::max(1.0, 1.0 / lam[i]),
              Errc::BadPairing, "paired eigenvalue is not the reciprocal");
    }
    H.dim = d;
    H.delta = Matrix::Zero(d, d);
    Matrix P = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      H.delta(i, i) = lam[i];
      P(bar[i], i) = 1.0;
    }
    H.J = AntilinearMap{P};
    H.bar = bar;
  } else {
    require(spec.delta.has_value() && spec.j.has_value(), Errc::BadParams,
            "need either eigen-data or raw Delta and J");
    H.delta = *spec.delta;
    H.J = AntilinearMap{*spec.j};
    H.dim = static_cast<int>(H.delta.rows());
    require(H.delta.cols() == H.dim && H.J.m.rows() == H.dim && H.J.m.cols() == H.dim,
            Errc::ShapeMismatch, "Delta / J dimensions disagree");
    require((H.delta - H.delta.adjoint()).cwiseAbs().maxCoeff() < tol, Errc::NotPositive,
            "Delta is not Hermitian");
    // detect a permutation J so the q_ij constructor can recover the bar map
    std::vector<int> bar(H.dim, -1);
    bool is_perm = true;
    for (int i = 0; i < H.dim && is_perm; ++i) {
      int hit = -1;
      for (int r = 0; r < H.dim; ++r) {
        const Complex v = H.J.m(r, i);
        if (std::abs(v) > tol) {
          if (hit >= 0 || std::abs(v - Complex(1, 0)) > tol) {
            is_perm = false;
            break;
          }
          hit = r;
        }
      }
      bar[i] = hit;
    }
    if (is_perm) H.bar = bar;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(H.delta);
  const double min_eig = es.eigenvalues().minCoeff();
  require(min_eig > -tol, Errc::NotPositive, "Delta has a negative eigenvalue");
  require(min_eig > 0, Errc::NotPositive, "Delta is singular");
  H.positivity_warning = min_eig < tol;
  H.spectrum.assign(es.eigenvalues().data(), es.eigenvalues().data() + H.dim);
  H.delta_norm = es.eigenvalues().maxCoeff();
  H.s_norm = std::sqrt(H.delta_norm);

  require(H.J.is_involution(tol), Errc::NotInvolutive, "J is not an antilinear involution");
  require((H.J.m.adjoint() * H.J.m - Matrix::Identity(H.dim, H.dim)).cwiseAbs().maxCoeff() < tol,
          Errc::NotInvolutive, "J is not antiunitary");
  // J Delta J = Delta^{-1}; for antilinear J this reads M_J conj(Delta) conj(M_J)
  const Matrix jdj = H.J.m * H.delta.conjugate() * H.J.m.conjugate();
  require((jdj - H.delta.inverse()).cwiseAbs().maxCoeff() <
              tol * std::max(1.0, H.delta_norm),
          Errc::ModularMismatch, "J Delta J != Delta^{-1}");

  const Matrix sqrt_delta = hermitian_power(H.delta, 0.5);
  H.S = AntilinearMap{H.J.m * sqrt_delta.conjugate()};
  H.Sstar = H.S.adjoint();  // = J Delta^{-1/2}

  if (spec.mode == BasisMode::RealOrthonormal) {
    require(!spec.generators.has_value(), Errc::BadParams,
            "real-orthonormal mode derives its own basis");
    if (spec.eigenvalues)
      H.generators = real_orthonormal_from_eigendata(*spec.eigenvalues,
                                                     H.bar.value());
    else
      H.generators = real_orthonormal_from_S(H.S, tol);
    H.duals = 0.5 * (Matrix::Identity(H.dim, H.dim) + H.delta) * H.generators;
  } else {
    H.generators = spec.generators.value_or(Matrix::Identity(H.dim, H.dim));
    require(H.generators.rows() == H.dim && H.generators.cols() == H.dim,
            Errc::ShapeMismatch, "generator basis has wrong shape");
    require(std::abs(H.generators.determinant()) > tol, Errc::BadParams,
            "generators do not form a basis");
    // Gram solve: F^H E = I
    H.duals = H.generators.inverse().adjoint();
  }
  return H;
}

// ---------------------------------------------------------------------------
// factor type
// ---------------------------------------------------------------------------

namespace {

// prime exponent vector of a positive rational
std::vector<std::pair<long long, long long>> factorize(long long num, long long den) {
  std::vector<std::pair<long long, long long>> out;  // (prime, exponent)
  auto add = [&](long long p, long long e) {
    for (auto& [q, f] : out)
      if (q == p) {
        f += e;
        return;
      }
    out.emplace_back(p, e);
  };
  auto run = [&](long long v, long long sign) {
    for (long long p = 2; p * p <= v; ++p)
      while (v % p == 0) {
        add(p, sign);
        v /= p;
      }
    if (v > 1) add(v, sign);
  };
  run(num, 1);
  run(den, -1);
  std::sort(out.begin(), out.end());
  out.erase(std::remove_if(out.begin(), out.end(), [](auto& pe) { return pe.second == 0; }),
            out.end());
  return out;
}

long long llgcd(long long a, long long b) { return std::gcd(std::llabs(a), std::llabs(b)); }

}  // namespace

FactorType classify_factor_type(const std::vector<Rational>& eigenvalues) {
  std::vector<std::vector<std::pair<long long, long long>>> vecs;
  for (const auto& r : eigenvalues) {
    require(r.num > 0 && r.den > 0, Errc::NonPositiveEigenvalue, "eigenvalue must be positive");
    auto v = factorize(r.num, r.den);
    if (!v.empty()) vecs.push_back(std::move(v));
  }
  if (vecs.empty()) return {FactorType::Tag::II1, 0.0, FactorType::Confidence::Exact};
  // rank-1 test: every exponent vector must be an integer multiple of the
  // primitive direction of the first
  const auto& v0 = vecs.front();
  long long g0 = 0;
  for (auto& [p, e] : v0) g0 = llgcd(g0, e);
  std::vector<std::pair<long long, long long>> prim = v0;
  const long long sign0 = v0.front().second > 0 ? 1 : -1;
  for (auto& [p, e] : prim) e /= g0 * sign0;  // primitive, first entry positive
  std::vector<long long> mults{g0 * sign0};
  for (size_t vi = 1; vi < vecs.size(); ++vi) {
    const auto& v = vecs[vi];
    if (v.size() != prim.size()) return {FactorType::Tag::III1, 0.0, FactorType::Confidence::Exact};
    for (size_t t = 0; t < v.size(); ++t) {
      if (v[t].first != prim[t].first ||
          v[t].second * prim.front().second != v.front().second * prim[t].second)
        return {FactorType::Tag::III1, 0.0, FactorType::Confidence::Exact};
    }
    // parallel to a primitive integer vector forces an integer multiple
    mults.push_back(v.front().second / prim.front().second);
  }
  long long g = 0;
  for (long long c : mults) g = llgcd(g, c);
  double log_lambda = 0;
  for (auto& [p, e] : prim) log_lambda += static_cast<double>(e) * std::log(static_cast<double>(p));
  log_lambda *= static_cast<double>(g);
  const double lambda = std::exp(-std::abs(log_lambda));
  return {FactorType::Tag::IIIlambda, lambda, FactorType::Confidence::Exact};
}

FactorType classify_factor_type(double base, const std::vector<long long>& exponents) {
  require(base > 0, Errc::NonPositiveEigenvalue, "base must be positive");
  long long g = 0;
  for (long long k : exponents) g = llgcd(g, k);
  if (g == 0 || std::abs(std::log(base)) == 0.0)
    return {FactorType::Tag::II1, 0.0, FactorType::Confidence::Exact};
  const double lambda = std::exp(-std::abs(static_cast<double>(g) * std::log(base)));
  return {FactorType::Tag::IIIlambda, lambda, FactorType::Confidence::Exact};
}

namespace {

// best rational approximation p/q of x with q <= bound, by continued fractions
std::pair<long long, long long> rational_approx(double x, int bound) {
  long long p0 = 1, q0 = 0, p1 = static_cast<long long>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  while (frac > 1e-15) {
    const double inv = 1.0 / frac;
    const long long a = static_cast<long long>(std::floor(inv));
    frac = inv - std::floor(inv);
    const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > bound) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return {p1, q1};
}

}  // namespace

FactorType classify_factor_type_numerical(const std::vector<double>& eigenvalues,
                                          double tolerance, int denominator_bound) {
  std::vector<double> logs;
  for (double v : eigenvalues) {
    require(v > 0, Errc::NonPositiveEigenvalue, "eigenvalue must be positive");
    const double l = std::log(v);
    if (std::abs(l) > tolerance) logs.push_back(l);
  }
  if (logs.empty()) return {FactorType::Tag::II1, 0.0, FactorType::Confidence::Numerical};
  double unit = std::abs(logs[0]);
  for (size_t i = 1; i < logs.size(); ++i) {
    const double ratio = logs[i] / unit;
    const auto [p, q] = rational_approx(std::abs(ratio), denominator_bound);
    if (p == 0 || std::abs(std::abs(ratio) - static_cast<double>(p) / q) >
                      tolerance * std::max(1.0, std::abs(ratio)))
      return {FactorType::Tag::III1, 0.0, FactorType::Confidence::Numerical};
    unit /= static_cast<double>(q);
  }
  // group generator: unit * gcd of the integer multiples
  long long g = 0;
  for (double l : logs) {
    const long long m = std::llround(std::abs(l) / unit);
    if (m != 0) g = llgcd(g, m);
    if (std::abs(std::abs(l) - m * unit) > tolerance * std::max(1.0, std::abs(l)))
      return {FactorType::Tag::III1, 0.0, FactorType::Confidence::Numerical};
  }
  const double lambda = std::exp(-unit * static_cast<double>(g));
  return {FactorType::Tag::IIIlambda, lambda, FactorType::Confidence::Numerical};
}

NoninjectivityResult noninjectivity_criterion(const std::vector<double>& spectrum, double q) {
  require(q >= 0 && q < 1, Errc::InvalidNorm, "twist norm must be in [0,1)");
  NoninjectivityResult res;
  res.rhs = 16.0 / ((1.0 - q) * (1.0 - q));
  std::vector<double> cands{1.0};
  for (double v : spectrum) {
    require(v > 0, Errc::NonPositiveEigenvalue, "eigenvalue must be positive");
    if (v >= 1.0) cands.push_back(v);
  }
  for (double C : cands) {
    long dim = 0;
    for (double v : spectrum)
      if (v >= 1.0 && v <= C * (1 + 1e-14)) ++dim;
    const double ratio = static_cast<double>(dim) / C;
    if (ratio > res.best_ratio) {
      res.best_ratio = ratio;
      res.best_C = C;
    }
  }
  res.holds = res.best_ratio > res.rhs;
  return res;
}

}  // namespace taw::hilbert
