#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "psvote/types.hpp"

namespace psvote {

/// sw(a, U): column sum of U at alternative a.
template <class T>
T social_welfare(const UtilityMatrix<T>& u, int a) {
  if (a < 0 || a >= u.m) throw InputError("social_welfare: alternative index out of range");
  T total(0);
  for (size_t i = 0; i < u.rows.size(); ++i) total += u.rows[i][a] * T(u.counts[i]);
  return total;
}

template <class T>
std::vector<T> welfare_vector(const UtilityMatrix<T>& u) {
  std::vector<T> sw(u.m, T(0));
  for (size_t i = 0; i < u.rows.size(); ++i)
    for (int a = 0; a < u.m; ++a) sw[a] += u.rows[i][a] * T(u.counts[i]);
  return sw;
}

/// v_i(a) = (1 - gamma_i) u_i(a) + gamma_i sw(a, U) / n.
template <class T>
PSValueMatrix<T> ps_values(const PSVector<T>& gamma, const UtilityMatrix<T>& u) {
  if (gamma.values.size() != u.rows.size())
    throw InputError("ps_values: gamma length does not match utility rows");
  PSValueMatrix<T> v;
  v.m = u.m;
  v.counts = u.counts;
  v.n = u.voters();
  v.welfare = welfare_vector(u);
  v.provenance = "ps_values";
  std::vector<T> avg(u.m);
  for (int a = 0; a < u.m; ++a) avg[a] = v.welfare[a] / T(v.n);
  v.rows.resize(u.rows.size());
  for (size_t i = 0; i < u.rows.size(); ++i) {
    const T& g = gamma.values[i];
    v.rows[i].resize(u.m);
    for (int a = 0; a < u.m; ++a) v.rows[i][a] = (T(1) - g) * u.rows[i][a] + g * avg[a];
  }
  return v;
}

/// True iff the ranking respects every strict PS-value comparison of `values`.
template <class T>
bool ranking_consistent(const std::vector<T>& values, const Ranking& r) {
  const int m = static_cast<int>(values.size());
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k)
      if (definitely_less(values[r.order[j]], values[r.order[k]])) return false;
  return true;
}

template <class T>
bool profile_consistent(const PSValueMatrix<T>& v, const Profile& p) {
  if (p.rows.size() != v.rows.size() || p.counts != v.counts) return false;
  for (size_t i = 0; i < p.rows.size(); ++i)
    if (!ranking_consistent(v.rows[i], p.rows[i])) return false;
  return true;
}

namespace detail {

/// Indices 0..m-1 grouped by descending value; ties (within tolerance chains)
/// share a group.
template <class T>
std::vector<std::vector<int>> tie_groups(const std::vector<T>& values) {
  const int m = static_cast<int>(values.size());
  std::vector<int> idx(m);
  for (int a = 0; a < m; ++a) idx[a] = a;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  std::vector<std::vector<int>> groups;
  for (int a : idx) {
    if (groups.empty() || definitely_less(values[a], values[groups.back().back()]))
      groups.push_back({a});
    else
      groups.back().push_back(a);
  }
  return groups;
}

template <class T>
Ranking break_ties(const PSValueMatrix<T>& v, size_t row, TiePolicy::Kind kind) {
  auto groups = tie_groups(v.rows[row]);
  Ranking r;
  for (auto& g : groups) {
    if (kind == TiePolicy::Kind::welfare_adversarial) {
      std::stable_sort(g.begin(), g.end(), [&](int a, int b) {
        if (v.welfare[a] != v.welfare[b]) return v.welfare[a] < v.welfare[b];
        return a < b;
      });
    } else {
      std::sort(g.begin(), g.end());
    }
    r.order.insert(r.order.end(), g.begin(), g.end());
  }
  return r;
}

inline unsigned long long saturating_mul(unsigned long long a, unsigned long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > ~0ULL / b) return ~0ULL;
  return a * b;
}

inline unsigned long long factorial_sat(int k) {
  unsigned long long f = 1;
  for (int i = 2; i <= k; ++i) f = saturating_mul(f, static_cast<unsigned long long>(i));
  return f;
}

}  // namespace detail

/// Re-creatable stream of profiles consistent with a PS-value matrix.
///
/// lexicographic / welfare_adversarial: yields exactly one profile.
/// enumerate_all: yields every profile obtainable by permuting tied groups,
/// voter by voter (weighted rows with ties are expanded, since identical
/// voters may break ties differently). Exceeding the cap sets overflowed()
/// and the stream yields nothing.
template <class T>
class ConsistentProfiles {
 public:
  ConsistentProfiles(const PSValueMatrix<T>& v, TiePolicy policy) : v_(v), policy_(policy) {
    if (policy_.cap < 1) throw InputError("TiePolicy: enumeration cap must be >= 1");
    if (policy_.kind != TiePolicy::Kind::enumerate_all) return;
    total_ = 1;
    for (size_t i = 0; i < v_.rows.size(); ++i) {
      auto groups = detail::tie_groups(v_.rows[i]);
      unsigned long long per_voter = 1;
      for (const auto& g : groups)
        per_voter = detail::saturating_mul(per_voter, detail::factorial_sat((int)g.size()));
      for (long long c = 0; c < v_.counts[i]; ++c) {
        total_ = detail::saturating_mul(total_, per_voter);
        if (total_ > static_cast<unsigned long long>(policy_.cap)) {
          overflow_ = true;
          return;
        }
      }
    }
    // Rows with ties are expanded per voter (identical voters may break ties
    // differently); tie-free rows stay weighted.
    for (size_t i = 0; i < v_.rows.size(); ++i) {
      auto groups = detail::tie_groups(v_.rows[i]);
      for (auto& g : groups) std::sort(g.begin(), g.end());
      bool has_tie = false;
      for (const auto& g : groups) has_tie = has_tie || g.size() > 1;
      if (has_tie) {
        for (long long c = 0; c < v_.counts[i]; ++c) states_.push_back({groups, 1});
      } else {
        states_.push_back({groups, v_.counts[i]});
      }
    }
  }

  bool overflowed() const { return overflow_; }
  unsigned long long total_count() const { return total_; }

  std::optional<Profile> next() {
    if (policy_.kind != TiePolicy::Kind::enumerate_all) {
      if (done_) return std::nullopt;
      done_ = true;
      Profile p;
      p.m = v_.m;
      p.counts = v_.counts;
      for (size_t i = 0; i < v_.rows.size(); ++i)
        p.rows.push_back(detail::break_ties(v_, i, policy_.kind));
      return p;
    }
    if (overflow_ || done_) return std::nullopt;
    Profile p;
    p.m = v_.m;
    for (const auto& st : states_) {
      Ranking r;
      for (const auto& g : st.groups) r.order.insert(r.order.end(), g.begin(), g.end());
      p.rows.push_back(r);
      p.counts.push_back(st.count);
    }
    advance();
    return p;
  }

 private:
  struct RowState {
    std::vector<std::vector<int>> groups;  // current permutation per tie group
    long long count;
  };

  void advance() {
    // Odometer over per-row, per-group permutations.
    for (auto& st : states_) {
      for (auto& g : st.groups) {
        if (std::next_permutation(g.begin(), g.end())) return;
        // wrapped: g is sorted again, carry into the next group
      }
    }
    done_ = true;
  }

  const PSValueMatrix<T>& v_;
  TiePolicy policy_;
  std::vector<RowState> states_;
  bool overflow_ = false;
  bool done_ = false;
  unsigned long long total_ = 1;
};

/// Single profile under a deterministic tie policy.
template <class T>
Profile consistent_profile(const PSValueMatrix<T>& v, TiePolicy policy = TiePolicy::lex()) {
  if (policy.kind == TiePolicy::Kind::enumerate_all)
    throw InputError("consistent_profile: use ConsistentProfiles for enumeration");
  ConsistentProfiles<T> it(v, policy);
  return *it.next();
}

/// tally[a][b] = number of voters ranking a ahead of b.
inline std::vector<std::vector<long long>> pairwise_tally(const Profile& p) {
  std::vector<std::vector<long long>> tally(p.m, std::vector<long long>(p.m, 0));
  for (size_t i = 0; i < p.rows.size(); ++i) {
    const auto& ord = p.rows[i].order;
    const long long c = p.counts[i];
    for (int j = 0; j < p.m; ++j)
      for (int k = j + 1; k < p.m; ++k) tally[ord[j]][ord[k]] += c;
  }
  return tally;
}

inline bool dominates(const std::vector<std::vector<long long>>& tally, long long n, int a, int b) {
  return 2 * tally[a][b] > n;
}

inline bool weakly_dominates(const std::vector<std::vector<long long>>& tally, long long n, int a,
                             int b) {
  return 2 * tally[a][b] >= n;
}

/// The alternative pairwise-dominating all others, if one exists.
inline std::optional<int> condorcet_winner(const Profile& p) {
  auto tally = pairwise_tally(p);
  const long long n = p.voters();
  for (int a = 0; a < p.m; ++a) {
    bool wins_all = true;
    for (int b = 0; b < p.m && wins_all; ++b)
      if (b != a && !dominates(tally, n, a, b)) wins_all = false;
    if (wins_all) return a;
  }
  return std::nullopt;
}

/// m equal groups, group k ranking k > k+1 > ... > k-1 (cyclic shifts).
/// Every alternative's worst pairwise defeat is by an (m-1)/m fraction, which
/// witnesses kappa_f <= 1/m whenever m divides n.
inline Profile cyclic_groups_profile(long long n, int m) {
  if (m < 2 || n % m != 0) throw InputError("cyclic_groups_profile: need m >= 2 and m | n");
  Profile p;
  p.m = m;
  for (int k = 0; k < m; ++k) {
    Ranking r;
    for (int j = 0; j < m; ++j) r.order.push_back((k + j) % m);
    p.rows.push_back(r);
    p.counts.push_back(n / m);
  }
  return p;
}

}  // namespace psvote
