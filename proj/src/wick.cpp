#include "taw/wick.hpp"

#include <algorithm>

#include "taw/contraction.hpp"
#include "taw/matchings.hpp"
#include "taw/tensor_ops.hpp"

namespace taw::wick {

NCPolynomial NCPolynomial::constant(int d, Complex c) {
  NCPolynomial p;
  p.d = d;
  if (c != Complex(0, 0)) p.coef[{}] = c;
  return p;
}

NCPolynomial NCPolynomial::generator(int d, int i) {
  require(i >= 1 && i <= d, Errc::IndexOutOfRange, "generator index out of range");
  NCPolynomial p;
  p.d = d;
  p.coef[{i}] = 1.0;
  return p;
}

int NCPolynomial::degree() const {
  int deg = 0;
  for (const auto& [w, c] : coef) deg = std::max(deg, static_cast<int>(w.size()));
  return deg;
}

NCPolynomial& NCPolynomial::add(const Word& w, Complex c) {
  coef[w] += c;
  return *this;
}

NCPolynomial& NCPolynomial::operator+=(const NCPolynomial& o) {
  for (const auto& [w, c] : o.coef) coef[w] += c;
  return *this;
}

NCPolynomial& NCPolynomial::operator*=(Complex c) {
  for (auto& [w, v] : coef) v *= c;
  return *this;
}

NCPolynomial NCPolynomial::times(const NCPolynomial& o) const {
  NCPolynomial out;
  out.d = d;
  for (const auto& [u, cu] : coef)
    for (const auto& [v, cv] : o.coef) {
      Word w = u;
      w.insert(w.end(), v.begin(), v.end());
      out.coef[w] += cu * cv;
    }
  return out;
}

NCPolynomial NCPolynomial::degree_part(int n) const {
  NCPolynomial out;
  out.d = d;
  for (const auto& [w, c] : coef)
    if (static_cast<int>(w.size()) == n) out.coef[w] = c;
  return out;
}

void NCPolynomial::prune(double threshold) {
  for (auto it = coef.begin(); it != coef.end();)
    it = std::abs(it->second) <= threshold ? coef.erase(it) : std::next(it);
}

double NCPolynomial::max_coeff_diff(const NCPolynomial& o) const {
  double worst = 0;
  for (const auto& [w, c] : coef) {
    auto it = o.coef.find(w);
    worst = std::max(worst, std::abs(c - (it == o.coef.end() ? Complex(0, 0) : it->second)));
  }
  for (const auto& [w, c] : o.coef)
    if (!coef.count(w)) worst = std::max(worst, std::abs(c));
  return worst;
}

std::map<Word, Complex> expand_in_generators(const Vector& tensor, int n, int d,
                                             const Matrix& generators, double prune) {
  // coefficient of e_w is obtained by applying E^{-1} to every slot
  Vector cur = tensor;
  const bool trivial = generators.isIdentity(0.0);
  const Matrix Einv = trivial ? generators : generators.inverse().eval();
  for (int k = 1; k <= n && !trivial; ++k) {
    // apply Einv on slot k
    const std::int64_t L = level_dim(d, k - 1);
    const std::int64_t R = level_dim(d, n - k);
    Vector next = Vector::Zero(cur.size());
    for (std::int64_t l = 0; l < L; ++l)
      for (int ao = 0; ao < d; ++ao)
        for (int ai = 0; ai < d; ++ai) {
          const Complex c = Einv(ao, ai);
          if (c == Complex(0, 0)) continue;
          next.segment((l * d + ao) * R, R) += c * cur.segment((l * d + ai) * R, R);
        }
    cur = std::move(next);
  }
  std::map<Word, Complex> out;
  for (std::int64_t idx = 0; idx < cur.size(); ++idx) {
    if (std::abs(cur[idx]) <= prune) continue;
    Word w(n);
    std::int64_t t = idx;
    for (int k = n - 1; k >= 0; --k) {
      w[k] = static_cast<int>(t % d) + 1;
      t /= d;
    }
    out[w] = cur[idx];
  }
  return out;
}

Vector generator_tensor(const Word& w, const Matrix& generators) {
  const int d = static_cast<int>(generators.rows());
  Vector out = Vector::Ones(1);
  int lev = 0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    require(*it >= 1 && *it <= d, Errc::IndexOutOfRange, "letter out of range");
    out = kern::apply_creator(generators.col(*it - 1), out, d, lev++);
  }
  return out;
}

NCPolynomial wick_polynomial(const Vector& tensor, int n, fock::Model& M) {
  const int d = M.H.dim;
  require(tensor.size() == level_dim(d, n), Errc::ShapeMismatch, "tensor level mismatch");
  const auto pis = matchings::enumerate_matchings(n, M.settings.matching_cap);
  NCPolynomial out;
  out.d = d;
  // terms are independent; combine in enumeration order for determinism
  std::vector<std::pair<int, Vector>> terms(pis.size());
#pragma omp parallel for schedule(dynamic) if (pis.size() > 8 && tensor.size() >= 256)
  for (std::size_t t = 0; t < pis.size(); ++t) {
    const auto& plan = contraction::cached_plan(pis[t]);
    terms[t] = {pis[t].num_pairs(),
                contraction::apply_plan(plan, M.T, M.H, tensor, Exec::Serial)};
  }
  for (std::size_t t = 0; t < pis.size(); ++t) {
    const auto& [npairs, v] = terms[t];
    const double sign = (npairs % 2 == 0) ? 1.0 : -1.0;
    const int m = pis[t].num_singletons();
    for (auto& [w, c] : expand_in_generators(v, m, d, M.H.generators, 0.0))
      out.coef[w] += sign * c;
  }
  out.prune(M.settings.prune);
  return out;
}

namespace {

NCPolynomial wick_rec_impl(const Vector& tensor, int n, fock::Model& M) {
  const int d = M.H.dim;
  if (n == 0) return NCPolynomial::constant(d, tensor[0]);
  // X_T(e_a^std) as a linear combination of the generators
  const Matrix Einv = M.H.generators.inverse();
  NCPolynomial out;
  out.d = d;
  for (int a = 0; a < d; ++a) {
    const Vector va = kern::slice_first_slot(tensor, d, n, a);
    if (va.isZero(0)) continue;
    NCPolynomial tail = wick_rec_impl(va, n - 1, M);
    NCPolynomial lin;
    lin.d = d;
    for (int i = 0; i < d; ++i)
      if (Einv(i, a) != Complex(0, 0)) lin.coef[{i + 1}] = Einv(i, a);
    out += lin.times(tail);
    if (n >= 2) {
      // a_T(S e_a) applied to the tail tensor
      Vector ea = Vector::Zero(d);
      ea[a] = 1.0;
      const Vector sea = M.H.S.apply(ea);
      Vector reduced = kern::apply_annihilator(sea, M.kernels.apply_R(n - 1, va), d, n - 1);
      if (!reduced.isZero(0)) {
        NCPolynomial sub = wick_rec_impl(reduced, n - 2, M);
        sub *= Complex(-1.0, 0.0);
        out += sub;
      }
    }
  }
  return out;
}

}  // namespace

NCPolynomial wick_recursive(const Vector& tensor, int n, fock::Model& M) {
  require(tensor.size() == level_dim(M.H.dim, n), Errc::ShapeMismatch, "tensor level mismatch");
  require(n <= M.settings.matching_cap, Errc::CapExceeded, "level above the enumeration cap");
  NCPolynomial out = wick_rec_impl(tensor, n, M);
  out.prune(M.settings.prune);
  return out;
}

fock::FockOperator evaluate(const NCPolynomial& P, int N, fock::Model& M) {
  require(N >= P.degree(), Errc::TruncationTooSmall, "truncation below polynomial degree");
  const int d = M.H.dim;
  fock::FockOperator out = fock::FockOperator::zero(d, N);
  std::map<int, fock::FockOperator> fields;
  for (int i = 1; i <= d; ++i)
    fields.emplace(i, fock::ladder(fock::LadderKind::Field, M.H.generators.col(i - 1), N, M.H,
                                   M.kernels));
  for (const auto& [w, c] : P.coef) {
    fock::FockOperator term = fock::FockOperator::identity(d, N);
    for (auto it = w.rbegin(); it != w.rend(); ++it) term = fields.at(*it).compose(term);
    term *= c;
    out += term;
  }
  return out;
}

fock::FockVector evaluate_on_vacuum(const NCPolynomial& P, int N, fock::Model& M) {
  require(N >= P.degree(), Errc::TruncationTooSmall, "truncation below polynomial degree");
  const int d = M.H.dim;
  fock::FockVector out = fock::FockVector::zero(d, N);
  // suffix cache: X_w Omega built by extending cached tails
  std::map<Word, fock::FockVector> cache;
  cache[{}] = fock::FockVector::vacuum(d, N);
  for (const auto& [w, c] : P.coef) {
    // find longest cached suffix
    Word suffix = w;
    while (!cache.count(suffix) && !suffix.empty()) suffix.erase(suffix.begin());
    fock::FockVector v = cache.at(suffix);
    for (int t = static_cast<int>(w.size()) - static_cast<int>(suffix.size()) - 1; t >= 0; --t) {
      fock::apply_field(v, M.H.generators.col(w[t] - 1), M.H, M.kernels);
      Word key(w.begin() + t, w.end());
      cache.emplace(std::move(key), v);
    }
    fock::FockVector scaled = v;
    scaled *= c;
    out += scaled;
  }
  return out;
}

}  // namespace taw::wick
