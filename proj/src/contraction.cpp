#include "taw/contraction.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/SVD>

#include "taw/tensor_ops.hpp"

namespace taw::contraction {

long ContractionPlan::twist_factors() const {
  long t = 0;
  for (const auto& st : steps) t += std::max(0, st.chain_end - st.c_pos - 1);
  return t;
}

ContractionPlan make_plan(const matchings::IncompleteMatching& pi,
                          const matchings::AdmissibleOrder& order) {
  require(matchings::is_admissible(pi, order), Errc::NotAdmissible, "order is not admissible");
  ContractionPlan plan;
  plan.n = pi.n;
  std::vector<int> done;  // endpoints of earlier pairings, sorted
  for (int idx : order) {
    const auto [i, j] = pi.pairs[idx];
    const auto ri = std::lower_bound(done.begin(), done.end(), i) - done.begin();
    const auto rj = std::lower_bound(done.begin(), done.end(), j) - done.begin();
    plan.steps.push_back({static_cast<int>(i - ri), static_cast<int>(j - rj)});
    done.insert(std::upper_bound(done.begin(), done.end(), i), i);
    done.insert(std::upper_bound(done.begin(), done.end(), j), j);
  }
  return plan;
}

namespace {

std::string plan_key(const matchings::IncompleteMatching& pi) {
  std::string key = std::to_string(pi.n);
  for (auto [i, j] : pi.pairs) {
    key += ',';
    key += std::to_string(i);
    key += '-';
    key += std::to_string(j);
  }
  return key;
}

std::mutex g_plan_mu;
std::map<std::string, std::unique_ptr<ContractionPlan>> g_plans;

}  // namespace

const ContractionPlan& cached_plan(const matchings::IncompleteMatching& pi) {
  const std::string key = plan_key(pi);
  std::lock_guard<std::mutex> lock(g_plan_mu);
  auto& slot = g_plans[key];
  if (!slot)
    slot = std::make_unique<ContractionPlan>(make_plan(pi, matchings::left_standard(pi)));
  return *slot;
}

Matrix contraction_op(int i, int k, const hilbert::StandardSubspace& H, const Settings& s) {
  require(k >= 2 && i >= 1 && i < k, Errc::IndexOutOfRange, "contraction index out of range");
  const std::int64_t rows = level_dim(H.dim, k - 2), cols = level_dim(H.dim, k);
  require(rows * cols <= s.dense_entry_cap, Errc::SizeCapExceeded,
          "dense contraction above the size cap");
  const Matrix K = H.contraction_pairing();
  Matrix out(rows, cols);
  for (std::int64_t c = 0; c < cols; ++c) {
    Vector basis = Vector::Zero(cols);
    basis[c] = 1.0;
    out.col(c) = kern::apply_contraction_serial(K, basis, H.dim, k, i);
  }
  return out;
}

Vector apply_plan(const ContractionPlan& plan, const twist::Twist& T,
                  const hilbert::StandardSubspace& H, const Vector& v, Exec ex) {
  const int d = T.d;
  require(v.size() == level_dim(d, plan.n), Errc::ShapeMismatch, "vector level mismatch");
  const Matrix K = H.contraction_pairing();
  Vector cur = v;
  int lev = plan.n;
  for (const auto& st : plan.steps) {
    cur = twist::apply_ranged(T, std::move(cur), st.c_pos + 1, st.chain_end, lev, ex);
    cur = kern::apply_contraction(K, cur, d, lev, st.c_pos, ex);
    lev -= 2;
  }
  return cur;
}

Vector apply_plan_adjoint(const ContractionPlan& plan, const twist::Twist& T,
                          const hilbert::StandardSubspace& H, const Vector& v, Exec ex) {
  const int d = T.d;
  require(v.size() == level_dim(d, plan.out_level()), Errc::ShapeMismatch,
          "vector level mismatch");
  const Matrix K = H.contraction_pairing();
  Vector cur = v;
  int lev = plan.out_level();
  for (auto it = plan.steps.rbegin(); it != plan.steps.rend(); ++it) {
    lev += 2;
    cur = kern::apply_contraction_adjoint(K, cur, d, lev, it->c_pos, ex);
    cur = twist::apply_ranged_adjoint(T, std::move(cur), it->c_pos + 1, it->chain_end, lev, ex);
  }
  return cur;
}

Matrix twisted_contraction(const matchings::IncompleteMatching& pi,
                           const std::optional<matchings::AdmissibleOrder>& order, int n,
                           const twist::Twist& T, const hilbert::StandardSubspace& H,
                           const Settings& s) {
  require(pi.n == n, Errc::ShapeMismatch, "partition is not on [n]");
  const ContractionPlan plan =
      order ? make_plan(pi, *order) : make_plan(pi, matchings::left_standard(pi));
  const std::int64_t cols = level_dim(T.d, n);
  const std::int64_t rows = level_dim(T.d, plan.out_level());
  require(rows * cols <= s.dense_entry_cap, Errc::SizeCapExceeded,
          "dense twisted contraction above the size cap");
  Matrix out(rows, cols);
#pragma omp parallel for schedule(dynamic) if (cols >= 64)
  for (std::int64_t c = 0; c < cols; ++c) {
    Vector basis = Vector::Zero(cols);
    basis[c] = 1.0;
    out.col(c) = apply_plan(plan, T, H, basis, Exec::Serial);
  }
  return out;
}

double c1_norm(const hilbert::StandardSubspace& H) {
  // C_1 on H (x) H -> C has matrix row vec(K); its norm is the Frobenius norm of K
  return H.contraction_pairing().norm();
}

double w_norm_bound(const matchings::IncompleteMatching& pi, double q, double c1) {
  const auto cn = matchings::crossing_numbers(pi, matchings::left_standard(pi));
  return std::pow(c1, pi.num_pairs()) * std::pow(q, static_cast<double>(cn.total));
}

}  // namespace taw::contraction
