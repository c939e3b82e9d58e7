#pragma once

#include <tuple>
#include <utility>
#include <vector>

#include "taw/common.hpp"

namespace taw::matchings {

/// Partition of [n] into pairs and singletons. Elements are 1-based; pairs are
/// stored with i < j, sorted by left endpoint; singletons sorted.
struct IncompleteMatching {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> singletons;

  static IncompleteMatching make(int n, std::vector<std::pair<int, int>> pairs);

  int num_pairs() const { return static_cast<int>(pairs.size()); }
  int num_singletons() const { return static_cast<int>(singletons.size()); }
  bool is_singleton(int k) const;
  bool operator==(const IncompleteMatching&) const = default;
  bool operator<(const IncompleteMatching& o) const {
    return std::tie(n, pairs) < std::tie(o.n, o.pairs);
  }
};

/// Permutation of pair indices: order[t] is the index (into pairs) of the
/// (t+1)-th pairing in the admissible sequence.
using AdmissibleOrder = std::vector<int>;

std::vector<IncompleteMatching> enumerate_matchings(int n, int cap = 10);

/// Nested order: {i,j} < {k,l}  iff  i < k < l < j.
bool nested_less(const std::pair<int, int>& outer, const std::pair<int, int>& inner);
bool is_admissible(const IncompleteMatching& pi, const AdmissibleOrder& order);
AdmissibleOrder left_standard(const IncompleteMatching& pi);
AdmissibleOrder right_standard(const IncompleteMatching& pi);
std::vector<AdmissibleOrder> admissible_orders(const IncompleteMatching& pi,
                                               long cap = 10000);

struct CrossingNumbers {
  std::vector<long> per_pair;  // in the order's sequence
  long total = 0;
};
CrossingNumbers crossing_numbers(const IncompleteMatching& pi, const AdmissibleOrder& order);

/// B(2n+1): incomplete matchings of [2n+1] with n+1 a singleton and every
/// k <= n paired into {n+2..2n+1}. Exactly n! of them.
std::vector<IncompleteMatching> enumerate_B(int m, int cap = 11);

struct Decomposition {
  IncompleteMatching pi_m;  // pairs straddling k, on [n]
  int k = 0;
  IncompleteMatching sigma_l;  // renumbered partition of the left singletons of pi_m
  IncompleteMatching sigma_r;
};

Decomposition dcp(const IncompleteMatching& pi, int k);
std::pair<IncompleteMatching, int> dcp_inverse(const Decomposition& dec);

/// d_s: delete the singleton {1} and shift down. Requires {1} in s(pi).
IncompleteMatching d_s(const IncompleteMatching& pi);
IncompleteMatching d_s_inverse(const IncompleteMatching& sigma);

/// D_p: delete the pair {1, j_1} and shift; returns (d_p(pi), j_1 - 1).
std::pair<IncompleteMatching, int> D_p(const IncompleteMatching& pi);
IncompleteMatching D_p_inverse(const IncompleteMatching& sigma, int k);

/// Intersection of the open intervals of all pairs; [n] when there are none.
std::vector<int> interval_intersection(const IncompleteMatching& pi);

/// Position of the singleton k among the sorted singletons (1-based).
int singleton_position(const IncompleteMatching& pi, int k);

}  // namespace taw::matchings
