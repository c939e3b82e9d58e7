#pragma once

#include <optional>

#include "taw/common.hpp"
#include "taw/hilbert.hpp"
#include "taw/matchings.hpp"
#include "taw/parallel.hpp"
#include "taw/twist.hpp"

namespace taw::contraction {

/// One twisted contraction C_a T_{a+1,b}: the chain T_{b-1}...T_{a+1} is
/// applied first, then the contraction at slot a. Empty chain when b <= a+1.
struct PlanStep {
  int c_pos = 0;
  int chain_end = 0;
};

struct ContractionPlan {
  int n = 0;
  std::vector<PlanStep> steps;  // in application order
  int out_level() const { return n - 2 * static_cast<int>(steps.size()); }
  long twist_factors() const;  // = Cr(pi)
};

/// Compile the plan of W^T_{pi,order} from the r_k offsets.
ContractionPlan make_plan(const matchings::IncompleteMatching& pi,
                          const matchings::AdmissibleOrder& order);

/// Plan for the left standard order, cached per (pi, n).
const ContractionPlan& cached_plan(const matchings::IncompleteMatching& pi);

/// Dense contraction operator C_i: H^{ok} -> H^{o(k-2)}.
Matrix contraction_op(int i, int k, const hilbert::StandardSubspace& H, const Settings& s);

Vector apply_plan(const ContractionPlan& plan, const twist::Twist& T,
                  const hilbert::StandardSubspace& H, const Vector& v,
                  Exec ex = Exec::Parallel);

/// (W^T_pi)^* v, walking the plan backwards with adjoint factors.
Vector apply_plan_adjoint(const ContractionPlan& plan, const twist::Twist& T,
                          const hilbert::StandardSubspace& H, const Vector& v,
                          Exec ex = Exec::Parallel);

/// Dense W^T_pi (defaults to the left standard order).
Matrix twisted_contraction(const matchings::IncompleteMatching& pi,
                           const std::optional<matchings::AdmissibleOrder>& order, int n,
                           const twist::Twist& T, const hilbert::StandardSubspace& H,
                           const Settings& s);

/// ||C_1|| for the subspace (largest singular value of the pairing block).
double c1_norm(const hilbert::StandardSubspace& H);

/// The bound ||C_1||^{|p(pi)|} q^{Cr(pi)}.
double w_norm_bound(const matchings::IncompleteMatching& pi, double q, double c1);

}  // namespace taw::contraction
