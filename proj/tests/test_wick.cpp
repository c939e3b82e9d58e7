#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "taw/contraction.hpp"
#include "taw/tensor_ops.hpp"
#include "taw/wick.hpp"

using namespace taw;
using namespace taw::wick;
using tawtest::random_vector;

namespace {

std::vector<fock::Model> models() {
  std::vector<fock::Model> out;
  std::mt19937_64 rng(91);
  {
    auto H = tawtest::tracial(2, hilbert::BasisMode::ComplexLinear);
    out.emplace_back(H, twist::make_qflip(2, 0.5));
    twist::Dim2Params ap;
    ap.q1 = 0.3;
    ap.c = 0.2;
    out.emplace_back(H, twist::make_dim2(twist::Dim2Family::Anti, ap, H));
  }
  {
    auto H = tawtest::nontracial2(2.0);
    out.emplace_back(H, twist::make_qij(tawtest::random_qij_passing(2, {1, 0}, rng), H));
  }
  {
    // real-orthonormal mode exercises a non-trivial generator basis
    auto H = tawtest::nontracial2(3.0, hilbert::BasisMode::RealOrthonormal);
    out.emplace_back(H, twist::make_qflip(2, 0.4));
  }
  return out;
}

}  // namespace

TEST_CASE("polynomial carrier basics") {
  auto p = NCPolynomial::generator(3, 2);
  auto q = NCPolynomial::generator(3, 1);
  auto prod = p.times(q);
  REQUIRE(prod.coef.size() == 1);
  CHECK(prod.coef.count(Word{2, 1}) == 1);
  CHECK(prod.degree() == 2);
  prod *= Complex(0, 1);
  prod += prod;
  CHECK(std::abs(prod.coef.at(Word{2, 1}) - Complex(0, 2)) < 1e-15);
  prod.prune(3.0);
  CHECK(prod.coef.empty());
}

TEST_CASE("degree one: Phi(xi) = sum_i xi^i x_i") {
  for (auto& M : models()) {
    std::mt19937_64 rng(5);
    const Vector xi = random_vector(2, rng);
    const auto poly = wick_polynomial(xi, 1, M);
    // coefficients in the generator basis: E c = xi
    const Vector c = M.H.generators.partialPivLu().solve(xi);
    for (int i = 1; i <= 2; ++i) {
      auto it = poly.coef.find(Word{i});
      const Complex got = it == poly.coef.end() ? Complex(0, 0) : it->second;
      CHECK(std::abs(got - c[i - 1]) < 1e-12);
    }
  }
}

TEST_CASE("degree two subtracts the pairing constant") {
  for (auto& M : models()) {
    std::mt19937_64 rng(15);
    const Vector xi = random_vector(2, rng), eta = random_vector(2, rng);
    const Vector prod = kern::apply_creator(xi, eta, 2, 1);
    const auto poly = wick_polynomial(prod, 2, M);
    // Phi(xi (x) eta) = X(xi)X(eta) - <S xi, eta> 1
    const Complex pairing = M.H.S.apply(xi).dot(eta);
    auto it = poly.coef.find(Word{});
    const Complex c0 = it == poly.coef.end() ? Complex(0, 0) : it->second;
    CHECK(std::abs(c0 + pairing) < 1e-11);
  }
}

TEST_CASE("degree three structure") {
  // Phi(x1 (x) x2 (x) x3) = XXX - <Sx1,x2> X(x3) - <Sx2,x3> X(x1) - X(a(Sx1)T(x2 (x) x3))
  for (auto& M : models()) {
    std::mt19937_64 rng(25);
    const Vector x1 = random_vector(2, rng), x2 = random_vector(2, rng),
                 x3 = random_vector(2, rng);
    Vector ten = kern::apply_creator(x1, kern::apply_creator(x2, x3, 2, 1), 2, 2);
    const auto poly = wick_polynomial(ten, 3, M);

    NCPolynomial expect;
    expect.d = 2;
    auto X = [&](const Vector& v) {
      NCPolynomial lin;
      lin.d = 2;
      const Vector c = M.H.generators.partialPivLu().solve(v);
      for (int i = 1; i <= 2; ++i)
        if (std::abs(c[i - 1]) > 0) lin.coef[{i}] = c[i - 1];
      return lin;
    };
    expect += X(x1).times(X(x2)).times(X(x3));
    {
      NCPolynomial t = X(x3);
      t *= -M.H.S.apply(x1).dot(x2);
      expect += t;
    }
    {
      NCPolynomial t = X(x1);
      t *= -M.H.S.apply(x2).dot(x3);
      expect += t;
    }
    {
      const Vector t23 = M.T.matrix * kern::apply_creator(x2, x3, 2, 1);
      const Vector red = kern::apply_annihilator(M.H.S.apply(x1), t23, 2, 2);
      NCPolynomial t = X(red);
      t *= -1.0;
      expect += t;
    }
    expect.prune(1e-13);
    CHECK(poly.max_coeff_diff(expect) < 1e-10);
  }
}

TEST_CASE("combinatorial and recursive Wick agree") {
  for (auto& M : models()) {
    std::mt19937_64 rng(35);
    for (int n = 1; n <= 5; ++n) {
      for (int t = 0; t < 3; ++t) {
        const Vector ten = random_vector(level_dim(2, n), rng);
        const auto a = wick_polynomial(ten, n, M);
        const auto b = wick_recursive(ten, n, M);
        CHECK(a.max_coeff_diff(b) < 1e-10);
      }
    }
  }
}

TEST_CASE("vacuum round trip on basis and random tensors") {
  for (auto& M : models()) {
    std::mt19937_64 rng(45);
    for (int n = 1; n <= 4; ++n) {
      for (std::int64_t idx = 0; idx < level_dim(2, n); ++idx) {
        Vector ten = Vector::Zero(level_dim(2, n));
        ten[idx] = 1.0;
        const auto poly = wick_polynomial(ten, n, M);
        const auto vac = evaluate_on_vacuum(poly, n, M);
        for (int l = 0; l <= n; ++l) {
          const Vector ref = l == n ? ten : Vector::Zero(level_dim(2, l));
          CHECK((vac.levels[l] - ref).cwiseAbs().maxCoeff() < 1e-9);
        }
      }
    }
    for (int t = 0; t < 10; ++t) {
      const Vector ten = random_vector(32, rng);
      const auto poly = wick_polynomial(ten, 5, M);
      const auto vac = evaluate_on_vacuum(poly, 5, M);
      CHECK((vac.levels[5] - ten).cwiseAbs().maxCoeff() < 1e-9);
      for (int l = 0; l < 5; ++l) CHECK(vac.levels[l].cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("evaluate as a graded operator") {
  auto all = models();
  auto& M = all.front();
  SUBCASE("constants and generators") {
    const auto id = evaluate(NCPolynomial::constant(2, 1.0), 3, M);
    for (int n = 0; n <= 3; ++n) {
      const std::int64_t dim = level_dim(2, n);
      CHECK((id.blocks.at({n, n}) - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() == 0.0);
    }
    const auto x1 = evaluate(NCPolynomial::generator(2, 1), 3, M);
    const auto field =
        fock::ladder(fock::LadderKind::Field, M.H.generators.col(0), 3, M.H, M.kernels);
    for (const auto& [mn, blk] : field.blocks)
      CHECK((blk - x1.blocks.at(mn)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("operator route matches the vacuum route") {
    std::mt19937_64 rng(55);
    const Vector ten = random_vector(8, rng);
    const auto poly = wick_polynomial(ten, 3, M);
    const auto op = evaluate(poly, 3, M);
    const auto via_op = op.apply(fock::FockVector::vacuum(2, 3));
    const auto via_words = evaluate_on_vacuum(poly, 3, M);
    for (int l = 0; l <= 3; ++l)
      CHECK((via_op.levels[l] - via_words.levels[l]).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(
      (void)evaluate(NCPolynomial::generator(2, 1).times(NCPolynomial::generator(2, 2)), 1, M),
      Error);
}

TEST_CASE("linearity, degree and parity") {
  auto all = models();
  auto& M = all[2];
  std::mt19937_64 rng(65);
  for (int n = 1; n <= 4; ++n) {
    const Vector a = random_vector(level_dim(2, n), rng);
    const Vector b = random_vector(level_dim(2, n), rng);
    const Complex alpha(0.7, -0.3);
    auto pa = wick_polynomial(a, n, M);
    auto pb = wick_polynomial(b, n, M);
    auto pab = wick_polynomial(alpha * a + b, n, M);
    pa *= alpha;
    pa += pb;
    CHECK(pab.max_coeff_diff(pa) < 1e-10);

    CHECK(pab.degree() == n);
    for (const auto& [w, c] : pab.coef) CHECK((static_cast<int>(w.size()) - n) % 2 == 0);
  }
}

TEST_CASE("q-Hermite start: d=1, Phi(e (x) e) = x^2 - 1") {
  Settings s;
  fock::Model M(tawtest::tracial(1), twist::make_qflip(1, 0.6), s);
  Vector ten = Vector::Ones(1);
  const auto poly = wick_polynomial(ten, 2, M);
  CHECK(std::abs(poly.coef.at(Word{1, 1}) - 1.0) < 1e-13);
  CHECK(std::abs(poly.coef.at(Word{}) + 1.0) < 1e-13);
  // next level: Phi(e^{(x)3}) = x^3 - (2+q) x
  const auto p3 = wick_polynomial(Vector::Ones(1), 3, M);
  CHECK(std::abs(p3.coef.at(Word{1, 1, 1}) - 1.0) < 1e-13);
  CHECK(std::abs(p3.coef.at(Word{1}) + (2.0 + 0.6)) < 1e-13);
}
