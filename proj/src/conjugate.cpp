#include "taw/conjugate.hpp"

#include <algorithm>
#include <cmath>

#include "taw/contraction.hpp"
#include "taw/matchings.hpp"
#include "taw/tensor_ops.hpp"

namespace taw::conjugate {

BiPolynomial& BiPolynomial::add(const Word& u, const Word& v, Complex c) {
  coef[{u, v}] += c;
  return *this;
}

void BiPolynomial::prune(double threshold) {
  for (auto it = coef.begin(); it != coef.end();)
    it = std::abs(it->second) <= threshold ? coef.erase(it) : std::next(it);
}

double BiPolynomial::max_coeff_diff(const BiPolynomial& o) const {
  double worst = 0;
  for (const auto& [w, c] : coef) {
    auto it = o.coef.find(w);
    worst = std::max(worst, std::abs(c - (it == o.coef.end() ? Complex(0, 0) : it->second)));
  }
  for (const auto& [w, c] : o.coef)
    if (!coef.count(w)) worst = std::max(worst, std::abs(c));
  return worst;
}

BiPolynomial free_dq(const wick::NCPolynomial& P, int i) {
  BiPolynomial out;
  out.d = P.d;
  for (const auto& [w, c] : P.coef)
    for (size_t m = 0; m < w.size(); ++m) {
      if (w[m] != i) continue;
      Word left(w.begin(), w.begin() + m);
      Word right(w.begin() + m + 1, w.end());
      out.add(left, right, c);
    }
  out.prune();
  return out;
}

void BiGradedVector::add(int a, int b, const Vector& v) {
  auto it = comps.find({a, b});
  if (it == comps.end())
    comps[{a, b}] = v;
  else
    it->second += v;
}

Complex BiGradedVector::vacuum_component() const {
  auto it = comps.find({0, 0});
  return it == comps.end() ? Complex(0, 0) : it->second[0];
}

double BiGradedVector::max_abs_diff(const BiGradedVector& o) const {
  double worst = 0;
  auto scan = [&](const BiGradedVector& x, const BiGradedVector& y) {
    for (const auto& [ab, v] : x.comps) {
      auto it = y.comps.find(ab);
      if (it == y.comps.end())
        worst = std::max(worst, v.cwiseAbs().maxCoeff());
      else
        worst = std::max(worst, (v - it->second).cwiseAbs().maxCoeff());
    }
  };
  scan(*this, o);
  scan(o, *this);
  return worst;
}

BiGradedVector nabla(int i, int k, const Vector& tensor, int n,
                     const hilbert::StandardSubspace& H) {
  require(k >= 1 && k <= n, Errc::IndexOutOfRange, "slot out of range");
  require(i >= 1 && i <= H.dim, Errc::IndexOutOfRange, "generator index out of range");
  BiGradedVector out;
  out.d = H.dim;
  const Vector paired = kern::apply_dual_pair(H.duals.col(i - 1), tensor, H.dim, n, k);
  out.add(k - 1, n - k, paired);
  return out;
}

std::vector<BiGradedVector> dq_wick_all(const Vector& tensor, int n, fock::Model& M) {
  const int d = M.H.dim;
  require(tensor.size() == level_dim(d, n), Errc::ShapeMismatch, "tensor level mismatch");
  const auto pis = matchings::enumerate_matchings(n, M.settings.matching_cap);
  std::vector<BiGradedVector> out(d);
  for (auto& bg : out) bg.d = d;
  for (const auto& pi : pis) {
    const auto ks = matchings::interval_intersection(pi);
    if (ks.empty()) continue;
    const auto& plan = contraction::cached_plan(pi);
    const Vector w = contraction::apply_plan(plan, M.T, M.H, tensor);
    const double sign = (pi.num_pairs() % 2 == 0) ? 1.0 : -1.0;
    const int m = pi.num_singletons();
    for (int k : ks) {
      // k in the interval intersection is automatically a singleton
      const int pos = matchings::singleton_position(pi, k);
      for (int i = 1; i <= d; ++i) {
        const Vector paired = kern::apply_dual_pair(M.H.duals.col(i - 1), w, d, m, pos);
        Vector scaled = sign * paired;
        out[i - 1].add(pos - 1, m - pos, scaled);
      }
    }
  }
  for (auto& bg : out)
    for (auto it = bg.comps.begin(); it != bg.comps.end();)
      it = it->second.isZero(M.settings.prune) ? bg.comps.erase(it) : std::next(it);
  return out;
}

BiGradedVector dq_wick(const Vector& tensor, int n, int i, fock::Model& M) {
  require(i >= 1 && i <= M.H.dim, Errc::IndexOutOfRange, "generator index out of range");
  return dq_wick_all(tensor, n, M)[i - 1];
}

// ---------------------------------------------------------------------------
// conjugate series
// ---------------------------------------------------------------------------

double omega(double q) {
  require(q >= 0 && q < 1, Errc::InvalidNorm, "omega needs 0 <= q < 1");
  if (q == 0) return 1.0;
  double prod = 1.0;
  double qk = q;
  while (true) {
    const double factor = (1.0 - qk) / (1.0 + qk);
    prod *= factor;
    if (std::abs(factor - 1.0) < 1e-16) break;
    qk *= q;
    if (qk < 1e-300) break;
  }
  const double omega2 = prod / (1.0 - q * q);
  return std::sqrt(omega2);
}

namespace {

double log_factorial(double n) { return std::lgamma(n + 1.0); }

double bound_impl(int n, int d, double q, double s_norm, double f_norm, bool sharp) {
  if (n == 0) return f_norm;
  if (q == 0) return 0.0;
  const double w = omega(q);
  double lg = sharp ? log_factorial(n) : log_factorial(2 * n + 1);
  lg += -(2.0 * n + 1.0) * std::log(w);
  lg += 0.5 * n * std::log(static_cast<double>(d));
  lg += n * std::log(std::max(s_norm, 1e-300));
  lg += 0.5 * n * (n + 1.0) * std::log(q);
  lg += std::log(std::max(f_norm, 1e-300));
  if (lg > 700.0) return std::numeric_limits<double>::infinity();
  return std::exp(lg);
}

}  // namespace

double term_bound(int n, int d, double q, double s_norm, double f_norm) {
  return bound_impl(n, d, q, s_norm, f_norm, false);
}

double term_bound_sharp(int n, int d, double q, double s_norm, double f_norm) {
  return bound_impl(n, d, q, s_norm, f_norm, true);
}

namespace {

double tail_sum(int M, int d, double q, double s_norm, double f_norm, bool sharp) {
  if (q == 0) return 0.0;
  double sum = 0;
  for (int n = M + 1; n < M + 2000; ++n) {
    const double t = bound_impl(n, d, q, s_norm, f_norm, sharp);
    if (std::isinf(t)) return t;
    sum += t;
    if (t < 1e-18 * std::max(sum, 1.0)) break;
  }
  return sum;
}

// level-(2n+1) series component for a given level-1 seed vector
Vector series_term(int n, const Vector& seed, fock::Model& M) {
  const int lev = 2 * n + 1;
  const auto bs = matchings::enumerate_B(lev, 2 * M.settings.matching_cap + 1);
  Vector acc = Vector::Zero(level_dim(M.H.dim, lev));
  for (const auto& pi : bs) {
    const auto& plan = contraction::cached_plan(pi);
    acc += contraction::apply_plan_adjoint(plan, M.T, M.H, seed);
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * M.kernels.solve(lev, acc);
}

}  // namespace

ConjugateResult conjugate_variables(int M_order, fock::Model& M) {
  require(M_order >= 0, Errc::BadParams, "series order must be >= 0");
  const int d = M.H.dim;
  const int top = 2 * M_order + 1;
  require(level_dim(d, top) * level_dim(d, top) <= M.settings.dense_entry_cap,
          Errc::SizeCapExceeded, "conjugate series level above the size cap");
  ConjugateResult res;
  res.M = M_order;
  res.fisher = 0;
  double lo = 0, hi = 0;
  for (int i = 1; i <= d; ++i) {
    fock::FockVector xi = fock::FockVector::zero(d, top);
    const Vector f = M.H.duals.col(i - 1);
    for (int n = 0; n <= M_order; ++n) xi.levels[2 * n + 1] = series_term(n, f, M);
    const double fnorm = f.norm();
    res.tail_bound.push_back(tail_sum(M_order, d, M.T.q, M.H.s_norm, fnorm, false));
    res.tail_bound_sharp.push_back(tail_sum(M_order, d, M.T.q, M.H.s_norm, fnorm, true));
    const double nrm = fock::twisted_norm(xi, M.kernels);
    res.fisher += nrm * nrm;
    const double t = res.tail_bound.back();
    lo += std::max(0.0, nrm - t) * std::max(0.0, nrm - t);
    hi += (nrm + t) * (nrm + t);
    res.xi.push_back(std::move(xi));
  }
  res.fisher_lo = lo;
  res.fisher_hi = hi;
  return res;
}

QuasiFreeResult quasi_free(int M_order, fock::Model& M) {
  require(M.H.mode == hilbert::BasisMode::RealOrthonormal, Errc::WrongBasisMode,
          "quasi-free conjugates need the real-orthonormal basis mode");
  const int d = M.H.dim;
  const int top = 2 * M_order + 1;
  QuasiFreeResult res;
  res.M = M_order;
  ConjugateResult conj = conjugate_variables(M_order, M);
  const Matrix gram = M.H.generators.adjoint() * M.H.generators;  // <e_k, e_j> = G(k,j)
  for (int j = 1; j <= d; ++j) {
    fock::FockVector theta = fock::FockVector::zero(d, top);
    const Vector e = M.H.generators.col(j - 1);
    for (int n = 0; n <= M_order; ++n) theta.levels[2 * n + 1] = series_term(n, e, M);
    res.tail_bound.push_back(tail_sum(M_order, d, M.T.q, M.H.s_norm, e.norm(), false));
    // Theta_j = sum_k <e_k, e_j> Xi_k
    fock::FockVector from_xi = fock::FockVector::zero(d, top);
    for (int k = 1; k <= d; ++k) {
      fock::FockVector scaled = conj.xi[k - 1];
      scaled *= gram(k - 1, j - 1);
      from_xi += scaled;
    }
    res.theta.push_back(std::move(theta));
    res.theta_from_xi.push_back(std::move(from_xi));
  }
  return res;
}

// ---------------------------------------------------------------------------
// power-series norms, rho, potentials
// ---------------------------------------------------------------------------

double rnorm(const wick::NCPolynomial& P, double R) {
  double sum = 0;
  for (const auto& [w, c] : P.coef) sum += std::abs(c) * std::pow(R, static_cast<double>(w.size()));
  return sum;
}

wick::NCPolynomial rho(const wick::NCPolynomial& P, const Matrix& A) {
  wick::NCPolynomial out;
  out.d = P.d;
  for (const auto& [w, c] : P.coef) {
    if (w.empty()) {
      out.coef[w] += c;
      continue;
    }
    const int last = w.back();
    Word head(w.begin(), w.end() - 1);
    for (int k = 1; k <= P.d; ++k) {
      const Complex a = A(last - 1, k - 1);
      if (a == Complex(0, 0)) continue;
      Word nw;
      nw.reserve(w.size());
      nw.push_back(k);
      nw.insert(nw.end(), head.begin(), head.end());
      out.coef[nw] += c * a;
    }
  }
  out.prune();
  return out;
}

SigmaRnorm sigma_rnorm(const wick::NCPolynomial& P, double R, const Matrix& A, int window) {
  SigmaRnorm res;
  double total = 0;
  bool stabilized_all = true;
  for (int n = 0; n <= P.degree(); ++n) {
    wick::NCPolynomial part = P.degree_part(n);
    if (part.coef.empty()) continue;
    const wick::NCPolynomial first = part;
    double sup = rnorm(part, R);
    bool periodic = false;
    int k = 0;
    for (k = 1; k < window; ++k) {
      part = rho(part, A);
      sup = std::max(sup, rnorm(part, R));
      if (part.max_coeff_diff(first) < 1e-13) {
        periodic = true;
        break;
      }
    }
    if (!periodic) stabilized_all = false;
    total += sup;
  }
  res.value = total;
  res.stabilized = stabilized_all;
  return res;
}

wick::NCPolynomial cyclic_derivative(const wick::NCPolynomial& P, int i, const Matrix& A) {
  // D_i(X_{k_1}..X_{k_n}) = sum_l [2/(1+A)]_{i k_l} sigma_{-i}(X_{k_{l+1}}..X_{k_n}) X_{k_1}..X_{k_{l-1}}
  const int d = P.d;
  const Matrix B = 2.0 * (Matrix::Identity(d, d) + A).inverse();
  wick::NCPolynomial out;
  out.d = d;
  for (const auto& [w, c] : P.coef) {
    for (size_t l = 0; l < w.size(); ++l) {
      const Complex b = B(i - 1, w[l] - 1);
      if (b == Complex(0, 0)) continue;
      // sigma_{-i} of the suffix, extended multiplicatively
      wick::NCPolynomial suffix = wick::NCPolynomial::constant(d, 1.0);
      for (size_t t = l + 1; t < w.size(); ++t) {
        wick::NCPolynomial letter;
        letter.d = d;
        for (int k = 1; k <= d; ++k)
          if (A(w[t] - 1, k - 1) != Complex(0, 0)) letter.coef[{k}] = A(w[t] - 1, k - 1);
        suffix = suffix.times(letter);
      }
      Word head(w.begin(), w.begin() + l);
      wick::NCPolynomial headpoly;
      headpoly.d = d;
      headpoly.coef[head] = 1.0;
      wick::NCPolynomial term = suffix.times(headpoly);
      term *= c * b;
      out += term;
    }
  }
  out.prune();
  return out;
}

double transport_tail_term(int m, int d, double q, double s_norm, double R) {
  if (q == 0) return 0.0;
  const double w = omega(q);
  double lg = (3.5 * m + 0.5) * std::log(static_cast<double>(d));
  lg += 2.0 * log_factorial(2 * m + 1);
  lg += -(2.0 * m + 1.0) * std::log(w);
  lg += 0.5 * m * (m + 1.0) * std::log(q);
  lg += (3.0 * m + 5.0) * std::log(std::max(s_norm, 1e-300));
  lg += (2.0 * m + 1.0) * std::log(R);
  if (lg > 700.0) return std::numeric_limits<double>::infinity();
  return std::exp(lg);
}

double transport_tail(int M, int d, double q, double s_norm, double R) {
  if (q == 0) return 0.0;
  double sum = 0;
  for (int m = M + 1; m < M + 4000; ++m) {
    const double t = transport_tail_term(m, d, q, s_norm, R);
    if (std::isinf(t)) return t;
    sum += t;
    if (t < 1e-18 * std::max(sum, 1.0) && m > M + 4) break;
  }
  return sum;
}

PotentialResult potential(int M_order, double R, double C_R, fock::Model& M) {
  require(M.H.mode == hilbert::BasisMode::RealOrthonormal, Errc::WrongBasisMode,
          "the potential needs the real-orthonormal basis mode");
  require(R > 1, Errc::BadParams, "R must be > 1");
  const int d = M.H.dim;
  const Matrix A = M.H.covariance_A();
  PotentialResult res;
  res.r_large_enough =
      R > 4.0 * Eigen::JacobiSVD<Matrix>(A).singularValues()(0) + 1.0;

  QuasiFreeResult qf = quasi_free(M_order, M);

  // Phi(Theta_k) as polynomials, level by level
  std::vector<wick::NCPolynomial> phis;
  for (int k = 1; k <= d; ++k) {
    wick::NCPolynomial phi;
    phi.d = d;
    for (int n = 0; n <= M_order; ++n) {
      const int lev = 2 * n + 1;
      if (qf.theta[k - 1].levels[lev].isZero(0)) continue;
      phi += wick::wick_polynomial(qf.theta[k - 1].levels[lev], lev, M);
    }
    phi.prune(M.settings.prune);
    phis.push_back(std::move(phi));
  }

  // ||Phi(Theta_i) - x_i||_R with the closed-form tail
  for (int i = 1; i <= d; ++i) {
    wick::NCPolynomial diff = phis[i - 1];
    diff.coef[{i}] -= 1.0;
    diff.prune(M.settings.prune);
    res.theta_minus_x_rnorm.push_back(rnorm(diff, R));
    res.theta_tail.push_back(transport_tail(M_order, d, M.T.q, M.H.s_norm, R));
  }

  // V = N^{-1}( sum_{jk} [(1+A)/2]_{jk} Phi(Theta_k) x_j ), V0 its free part.
  // The coefficient is pinned by V(T=0) = V0.
  const Matrix C = 0.5 * (Matrix::Identity(d, d) + A);
  wick::NCPolynomial V;
  V.d = d;
  for (int j = 1; j <= d; ++j)
    for (int k = 1; k <= d; ++k) {
      if (C(j - 1, k - 1) == Complex(0, 0)) continue;
      wick::NCPolynomial xj = wick::NCPolynomial::generator(d, j);
      wick::NCPolynomial term = phis[k - 1].times(xj);
      term *= C(j - 1, k - 1);
      V += term;
    }
  // number-operator inverse: scale degree-n words by 1/n
  for (auto& [w, c] : V.coef)
    if (!w.empty()) c /= static_cast<double>(w.size());
  V.prune(M.settings.prune);

  wick::NCPolynomial V0;
  V0.d = d;
  for (int j = 1; j <= d; ++j)
    for (int k = 1; k <= d; ++k) {
      if (C(j - 1, k - 1) == Complex(0, 0)) continue;
      Word w{k, j};
      V0.coef[w] += 0.5 * C(j - 1, k - 1);
    }
  V0.prune(M.settings.prune);

  wick::NCPolynomial W = V;
  for (const auto& [w, c] : V0.coef) W.coef[w] -= c;
  W.prune(M.settings.prune);

  res.W_rnorm = rnorm(W, R);
  // W = N^{-1} sum c_{jk} (Phi(Theta_k) - x_k) x_j; bound the missing levels
  double coefsum = 0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) coefsum += std::abs(C(j, k));
  res.W_tail = coefsum * R * transport_tail(M_order, d, M.T.q, M.H.s_norm, R);
  const auto sig = sigma_rnorm(W, R, A, M.settings.rho_window);
  res.sigma_W_rnorm = sig.value;
  res.sigma_stabilized = sig.stabilized;
  res.regime_ok = std::isfinite(res.W_tail) && (res.W_rnorm + res.W_tail < C_R);
  res.V = std::move(V);
  res.V0 = std::move(V0);
  res.W = std::move(W);
  return res;
}

}  // namespace taw::conjugate
