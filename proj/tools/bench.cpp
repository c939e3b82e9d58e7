// Benchmark comparing the serial reference kernels against the OpenMP paths:
// slot application of an embedded twist, dense kernel assembly, and W_pi
// plan application.

#include <chrono>
#include <cstdio>
#include <random>

#include "taw/contraction.hpp"
#include "taw/fock.hpp"
#include "taw/hilbert.hpp"
#include "taw/matchings.hpp"
#include "taw/tensor_ops.hpp"
#include "taw/twist.hpp"

using namespace taw;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Vector random_vector(std::int64_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (std::int64_t i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v;
}

struct Case {
  int d, n;
};

}  // namespace

int main(int argc, char** argv) {
  int reps = 5;
  if (argc > 1) reps = std::atoi(argv[1]);
  std::mt19937_64 rng(1234);

  std::printf("threads available: %d\n\n", max_threads());
  std::printf("%-34s %10s %10s %8s %10s\n", "kernel", "serial ms", "omp ms", "speedup",
              "max |diff|");

  for (const Case c : {Case{2, 14}, Case{2, 16}, Case{3, 9}, Case{4, 7}}) {
    hilbert::SubspaceSpec spec;
    spec.eigenvalues = std::vector<double>(c.d, 1.0);
    auto H = hilbert::build_standard_subspace(spec);
    // dense Hermitian twist: the generic (worst) case for the slot kernels
    Matrix m(c.d * c.d, c.d * c.d);
    for (Eigen::Index i = 0; i < m.size(); ++i)
      m(i / m.cols(), i % m.cols()) = Complex(std::cos(0.7 * i), std::sin(0.3 * i));
    m = 0.5 * (m + m.adjoint()).eval();
    auto T = twist::make_raw(m);
    T.matrix *= 0.5 / T.q;
    T.q = 0.5;
    const std::int64_t dim = level_dim(c.d, c.n);
    Vector v = random_vector(dim, rng);

    // slot application T_k
    const int k = c.n / 2;
    Vector rs, rp;
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) rs = kern::apply_slot_pair(T.matrix, v, c.d, c.n, k, Exec::Serial);
    const double ser = ms_since(t0) / reps;
    t0 = Clock::now();
    for (int r = 0; r < reps; ++r) rp = kern::apply_slot_pair(T.matrix, v, c.d, c.n, k, Exec::Parallel);
    const double par = ms_since(t0) / reps;
    std::printf("%-34s %10.3f %10.3f %8.2f %10.2e\n",
                ("T_k slot apply d=" + std::to_string(c.d) + " n=" + std::to_string(c.n)).c_str(),
                ser, par, ser / par, (rs - rp).cwiseAbs().maxCoeff());

    // W_pi plan application for a mid-size matching
    if (c.n >= 6) {
      auto pi = matchings::IncompleteMatching::make(
          c.n, {{1, c.n / 2 + 1}, {2, c.n - 1}, {3, c.n / 2 + 2}});
      const auto& plan = contraction::cached_plan(pi);
      Vector ws, wp;
      t0 = Clock::now();
      for (int r = 0; r < reps; ++r) ws = contraction::apply_plan(plan, T, H, v, Exec::Serial);
      const double wser = ms_since(t0) / reps;
      t0 = Clock::now();
      for (int r = 0; r < reps; ++r) wp = contraction::apply_plan(plan, T, H, v, Exec::Parallel);
      const double wpar = ms_since(t0) / reps;
      std::printf("%-34s %10.3f %10.3f %8.2f %10.2e\n",
                  ("W_pi plan apply d=" + std::to_string(c.d) + " n=" + std::to_string(c.n)).c_str(),
                  wser, wpar, wser / wpar, (ws - wp).cwiseAbs().maxCoeff());
    }
  }

  // dense kernel assembly (single-shot timings; the cache memoizes)
  std::printf("\n%-34s %10s\n", "dense assembly", "ms");
  for (const Case c : {Case{2, 10}, Case{3, 6}, Case{4, 5}}) {
    auto T = twist::make_qflip(c.d, 0.5);
    Settings s;
    fock::KernelCache kc(T, s);
    auto t0 = Clock::now();
    kc.P(c.n);
    std::printf("%-34s %10.3f\n",
                ("P_{T,n} d=" + std::to_string(c.d) + " n=" + std::to_string(c.n)).c_str(),
                ms_since(t0));
  }
  return 0;
}
