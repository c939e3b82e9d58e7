#include "taw/matchings.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace taw::matchings {

IncompleteMatching IncompleteMatching::make(int n, std::vector<std::pair<int, int>> pairs) {
  require(n >= 0, Errc::BadParams, "negative ground set");
  IncompleteMatching pi;
  pi.n = n;
  std::vector<bool> used(n + 1, false);
  for (auto& [i, j] : pairs) {
    if (i > j) std::swap(i, j);
    require(i >= 1 && j <= n && i != j, Errc::BadParams, "pair out of range");
    require(!used[i] && !used[j], Errc::BadParams, "element in two blocks");
    used[i] = used[j] = true;
  }
  std::sort(pairs.begin(), pairs.end());
  pi.pairs = std::move(pairs);
  for (int k = 1; k <= n; ++k)
    if (!used[k]) pi.singletons.push_back(k);
  return pi;
}

bool IncompleteMatching::is_singleton(int k) const {
  return std::binary_search(singletons.begin(), singletons.end(), k);
}

namespace {

void enumerate_rec(int lo, int n, std::vector<bool>& used,
                   std::vector<std::pair<int, int>>& acc,
                   std::vector<IncompleteMatching>& out) {
  int first = 0;
  for (int k = lo; k <= n; ++k)
    if (!used[k]) {
      first = k;
      break;
    }
  if (first == 0) {
    out.push_back(IncompleteMatching::make(n, acc));
    return;
  }
  used[first] = true;
  // first stays a singleton
  enumerate_rec(first + 1, n, used, acc, out);
  // or pairs with any later free element
  for (int j = first + 1; j <= n; ++j) {
    if (used[j]) continue;
    used[j] = true;
    acc.emplace_back(first, j);
    enumerate_rec(first + 1, n, used, acc, out);
    acc.pop_back();
    used[j] = false;
  }
  used[first] = false;
}

}  // namespace

std::vector<IncompleteMatching> enumerate_matchings(int n, int cap) {
  require(n >= 0 && n <= cap, Errc::CapExceeded, "matching enumeration cap exceeded");
  std::vector<IncompleteMatching> out;
  std::vector<bool> used(n + 1, false);
  std::vector<std::pair<int, int>> acc;
  enumerate_rec(1, n, used, acc, out);
  return out;
}

bool nested_less(const std::pair<int, int>& outer, const std::pair<int, int>& inner) {
  return outer.first < inner.first && inner.second < outer.second;
}

bool is_admissible(const IncompleteMatching& pi, const AdmissibleOrder& order) {
  const int s = pi.num_pairs();
  if (static_cast<int>(order.size()) != s) return false;
  std::vector<int> pos(s, -1);
  for (int t = 0; t < s; ++t) {
    if (order[t] < 0 || order[t] >= s || pos[order[t]] >= 0) return false;
    pos[order[t]] = t;
  }
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b)
      if (nested_less(pi.pairs[a], pi.pairs[b]) && pos[a] > pos[b]) return false;
  return true;
}

AdmissibleOrder left_standard(const IncompleteMatching& pi) {
  AdmissibleOrder order(pi.num_pairs());
  std::iota(order.begin(), order.end(), 0);  // pairs are stored sorted by left endpoint
  return order;
}

AdmissibleOrder right_standard(const IncompleteMatching& pi) {
  AdmissibleOrder order(pi.num_pairs());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return pi.pairs[a].second > pi.pairs[b].second;
  });
  return order;
}

namespace {

void orders_rec(const IncompleteMatching& pi, std::vector<bool>& placed, AdmissibleOrder& acc,
                std::vector<AdmissibleOrder>& out, long cap) {
  const int s = pi.num_pairs();
  if (static_cast<int>(acc.size()) == s) {
    require(static_cast<long>(out.size()) < cap, Errc::CapExceeded,
            "admissible order enumeration cap exceeded");
    out.push_back(acc);
    return;
  }
  for (int c = 0; c < s; ++c) {
    if (placed[c]) continue;
    bool minimal = true;  // all not-yet-placed predecessors must already be placed
    for (int a = 0; a < s; ++a)
      if (!placed[a] && a != c && nested_less(pi.pairs[a], pi.pairs[c])) {
        minimal = false;
        break;
      }
    if (!minimal) continue;
    placed[c] = true;
    acc.push_back(c);
    orders_rec(pi, placed, acc, out, cap);
    acc.pop_back();
    placed[c] = false;
  }
}

}  // namespace

std::vector<AdmissibleOrder> admissible_orders(const IncompleteMatching& pi, long cap) {
  require(pi.num_pairs() <= 8, Errc::CapExceeded, "too many pairs for full order enumeration");
  std::vector<AdmissibleOrder> out;
  std::vector<bool> placed(pi.num_pairs(), false);
  AdmissibleOrder acc;
  orders_rec(pi, placed, acc, out, cap);
  return out;
}

CrossingNumbers crossing_numbers(const IncompleteMatching& pi, const AdmissibleOrder& order) {
  require(is_admissible(pi, order), Errc::NotAdmissible, "order is not admissible");
  CrossingNumbers cn;
  std::vector<int> done;  // endpoints of already processed pairs, sorted
  for (int idx : order) {
    const auto [i, j] = pi.pairs[idx];
    const auto ri = std::lower_bound(done.begin(), done.end(), i) - done.begin();
    const auto rj = std::lower_bound(done.begin(), done.end(), j) - done.begin();
    const long cr = (j - i - 1) - static_cast<long>(rj - ri);
    cn.per_pair.push_back(cr);
    cn.total += cr;
    done.insert(std::upper_bound(done.begin(), done.end(), i), i);
    done.insert(std::upper_bound(done.begin(), done.end(), j), j);
  }
  return cn;
}

std::vector<IncompleteMatching> enumerate_B(int m, int cap) {
  require(m >= 1 && m % 2 == 1, Errc::NotOdd, "B(m) requires odd m");
  require(m <= cap, Errc::CapExceeded, "B enumeration cap exceeded");
  const int n = (m - 1) / 2;
  // each 1<=k<=n pairs with a distinct element of {n+2..2n+1}; n+1 is a singleton
  std::vector<IncompleteMatching> out;
  std::vector<int> right(n);
  std::iota(right.begin(), right.end(), n + 2);
  std::sort(right.begin(), right.end());
  do {
    std::vector<std::pair<int, int>> pairs;
    for (int k = 1; k <= n; ++k) pairs.emplace_back(k, right[k - 1]);
    out.push_back(IncompleteMatching::make(m, pairs));
  } while (std::next_permutation(right.begin(), right.end()));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// counting map: sorted elements of set -> positions 1..|set|
IncompleteMatching renumber(const std::vector<int>& set,
                            const std::vector<std::pair<int, int>>& pairs) {
  std::map<int, int> pos;
  for (size_t t = 0; t < set.size(); ++t) pos[set[t]] = static_cast<int>(t) + 1;
  std::vector<std::pair<int, int>> rp;
  for (auto [i, j] : pairs) rp.emplace_back(pos.at(i), pos.at(j));
  return IncompleteMatching::make(static_cast<int>(set.size()), rp);
}

}  // namespace

Decomposition dcp(const IncompleteMatching& pi, int k) {
  require(pi.is_singleton(k), Errc::NotASingleton, "k is not a singleton of pi");
  Decomposition dec;
  dec.k = k;
  std::vector<std::pair<int, int>> straddle, left, right;
  for (auto [i, j] : pi.pairs) {
    if (i < k && k < j)
      straddle.emplace_back(i, j);
    else if (j < k)
      left.emplace_back(i, j);
    else
      right.emplace_back(i, j);
  }
  dec.pi_m = IncompleteMatching::make(pi.n, straddle);
  std::vector<int> sl, sr;
  for (int t : dec.pi_m.singletons) {
    if (t < k) sl.push_back(t);
    if (t > k) sr.push_back(t);
  }
  dec.sigma_l = renumber(sl, left);
  dec.sigma_r = renumber(sr, right);
  return dec;
}

std::pair<IncompleteMatching, int> dcp_inverse(const Decomposition& dec) {
  const auto& pm = dec.pi_m;
  const int k = dec.k;
  for (auto [i, j] : pm.pairs)
    require(i < k && k < j, Errc::InconsistentSizes, "pi_m has a pair not straddling k");
  require(pm.is_singleton(k), Errc::NotASingleton, "k is not a singleton of pi_m");
  std::vector<int> sl, sr;
  for (int t : pm.singletons) {
    if (t < k) sl.push_back(t);
    if (t > k) sr.push_back(t);
  }
  require(dec.sigma_l.n == static_cast<int>(sl.size()) &&
              dec.sigma_r.n == static_cast<int>(sr.size()),
          Errc::InconsistentSizes, "sigma sizes do not match the singleton counts");
  std::vector<std::pair<int, int>> pairs = pm.pairs;
  for (auto [i, j] : dec.sigma_l.pairs) pairs.emplace_back(sl[i - 1], sl[j - 1]);
  for (auto [i, j] : dec.sigma_r.pairs) pairs.emplace_back(sr[i - 1], sr[j - 1]);
  return {IncompleteMatching::make(pm.n, pairs), k};
}

IncompleteMatching d_s(const IncompleteMatching& pi) {
  require(pi.n >= 2, Errc::WrongCase, "d_s needs n >= 2");
  require(pi.is_singleton(1), Errc::WrongCase, "{1} is not a singleton");
  std::vector<std::pair<int, int>> pairs;
  for (auto [i, j] : pi.pairs) pairs.emplace_back(i - 1, j - 1);
  return IncompleteMatching::make(pi.n - 1, pairs);
}

IncompleteMatching d_s_inverse(const IncompleteMatching& sigma) {
  std::vector<std::pair<int, int>> pairs;
  for (auto [i, j] : sigma.pairs) pairs.emplace_back(i + 1, j + 1);
  return IncompleteMatching::make(sigma.n + 1, pairs);
}

std::pair<IncompleteMatching, int> D_p(const IncompleteMatching& pi) {
  require(pi.n >= 3, Errc::WrongCase, "D_p needs n >= 3");
  require(!pi.is_singleton(1), Errc::WrongCase, "{1} is a singleton");
  int j1 = 0;
  for (auto [i, j] : pi.pairs)
    if (i == 1) j1 = j;
  std::vector<std::pair<int, int>> pairs;
  auto shift = [&](int t) { return t - 1 - (t > j1 ? 1 : 0); };
  for (auto [i, j] : pi.pairs) {
    if (i == 1) continue;
    pairs.emplace_back(shift(i), shift(j));
  }
  return {IncompleteMatching::make(pi.n - 2, pairs), j1 - 1};
}

IncompleteMatching D_p_inverse(const IncompleteMatching& sigma, int k) {
  const int n = sigma.n + 2;
  require(k >= 1 && k <= n - 1, Errc::IndexOutOfRange, "insertion point out of range");
  auto unshift = [&](int t) { return t + 1 + (t + 1 > k ? 1 : 0); };
  std::vector<std::pair<int, int>> pairs{{1, k + 1}};
  for (auto [i, j] : sigma.pairs) pairs.emplace_back(unshift(i), unshift(j));
  return IncompleteMatching::make(n, pairs);
}

std::vector<int> interval_intersection(const IncompleteMatching& pi) {
  int lo = 1, hi = pi.n;
  for (auto [i, j] : pi.pairs) {
    lo = std::max(lo, i + 1);
    hi = std::min(hi, j - 1);
  }
  std::vector<int> out;
  for (int k = lo; k <= hi; ++k) out.push_back(k);
  return out;
}

int singleton_position(const IncompleteMatching& pi, int k) {
  require(pi.is_singleton(k), Errc::NotASingleton, "k is not a singleton");
  const auto it = std::lower_bound(pi.singletons.begin(), pi.singletons.end(), k);
  return static_cast<int>(it - pi.singletons.begin()) + 1;
}

}  // namespace taw::matchings
