#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psvote/distortion.hpp"

namespace psvote {

/// Reinterprets PS-values as a utility matrix (entries are nonnegative, being
/// convex combinations of utilities and welfare).
template <class T>
UtilityMatrix<T> utility_from_ps(const PSValueMatrix<T>& v) {
  return UtilityMatrix<T>::weighted(v.m, v.rows, v.counts);
}

template <class T>
struct ComposeResult {
  PSValueMatrix<T> composed;  // V(g2, V(g1, U))
  T equivalent_gamma;         // g1 + g2 - g1*g2
  bool identity_holds;        // composed == V(equivalent_gamma, U) entrywise
};

/// Applying public spirit g1 and then g2 equals applying g1 + g2 - g1*g2.
template <class T>
ComposeResult<T> compose_ps(const T& g1, const T& g2, const UtilityMatrix<T>& u) {
  if (g1 < T(0) || g1 > T(1) || g2 < T(0) || g2 > T(1))
    throw InputError("compose_ps: gamma outside [0,1]");
  auto v1 = ps_values(PSVector<T>::uniform(g1, u.rows.size()), u);
  auto inner = utility_from_ps(v1);
  ComposeResult<T> res;
  res.composed = ps_values(PSVector<T>::uniform(g2, inner.rows.size()), inner);
  res.equivalent_gamma = g1 + g2 - g1 * g2;
  auto direct = ps_values(PSVector<T>::uniform(res.equivalent_gamma, u.rows.size()), u);
  res.identity_holds = true;
  for (size_t i = 0; i < direct.rows.size() && res.identity_holds; ++i)
    for (int a = 0; a < u.m; ++a)
      if (!nearly_equal(res.composed.rows[i][a], direct.rows[i][a])) {
        res.identity_holds = false;
        break;
      }
  return res;
}

/// U~ = V(g*, U) with g* = (g_big - g_small)/(1 - g_small), so that
/// V(g_small, U~) = V(g_big, U) entrywise and all column sums are preserved.
template <class T>
UtilityMatrix<T> uniform_reduction(const UtilityMatrix<T>& u, const T& gamma_small,
                                   const T& gamma_big) {
  if (gamma_small < T(0) || gamma_big > T(1) || gamma_small > gamma_big)
    throw InputError("uniform_reduction: need 0 <= gamma_small <= gamma_big <= 1");
  if (gamma_small == T(1)) throw InputError("uniform_reduction: gamma_small = 1 leaves gamma* undefined");
  T gstar = (gamma_big - gamma_small) / (T(1) - gamma_small);
  return utility_from_ps(ps_values(PSVector<T>::uniform(gstar, u.rows.size()), u));
}

template <class T>
struct M2TransformResult {
  UtilityMatrix<T> u;
  bool changed = false;   // false when voter 1's comparison never flips
  bool tie_case = false;  // both comparisons tie; returned unchanged, flagged
  int high = -1, low = -1;  // the (a, b) of the proof: a preferred under gamma
};

/// m = 2 welfare-preserving repair: given gamma~ differing from gamma only at
/// `voter` (strictly lower there), builds U~ with sw(a, U~) = sw(a, U) for
/// both alternatives and every (gamma, U)-consistent profile also consistent
/// with (gamma~, U~). Utility mass is moved off voters preferring the
/// higher-welfare alternative onto the flipped voter, filled greedily in row
/// order up to each voter's slack.
template <class T>
M2TransformResult<T> nonuniform_m2_transform(const UtilityMatrix<T>& u, const PSVector<T>& gamma,
                                             const PSVector<T>& gamma_tilde, size_t voter) {
  if (u.m != 2) throw InputError("nonuniform_m2_transform: only m = 2 is supported");
  if (gamma.values.size() != u.rows.size() || gamma_tilde.values.size() != u.rows.size())
    throw InputError("nonuniform_m2_transform: gamma shape mismatch");
  if (voter >= u.rows.size() || u.counts[voter] != 1)
    throw InputError("nonuniform_m2_transform: voter must name a unit-count row");
  for (size_t i = 0; i < u.rows.size(); ++i) {
    if (i == voter) {
      if (!(gamma_tilde.values[i] < gamma.values[i]))
        throw InputError("nonuniform_m2_transform: gamma~ must be strictly lower at the voter");
    } else if (gamma_tilde.values[i] != gamma.values[i]) {
      throw InputError("nonuniform_m2_transform: gamma~ may differ only at the voter");
    }
  }

  M2TransformResult<T> res;
  res.u = u;
  auto v_old = ps_values(gamma, u);
  auto v_new = ps_values(gamma_tilde, u);
  const auto& r_old = v_old.rows[voter];
  const auto& r_new = v_new.rows[voter];

  bool old_ge = r_old[0] >= r_old[1], old_le = r_old[1] >= r_old[0];
  bool new_ge = r_new[0] >= r_new[1], new_le = r_new[1] >= r_new[0];
  if (old_ge && old_le) {
    // Exact tie under gamma; returned unchanged and flagged (the proof leaves
    // this case implicit).
    res.tie_case = true;
    return res;
  }
  if ((old_ge && new_ge) || (old_le && new_le)) return res;  // ordinally consistent already

  // Voter prefers `high` under gamma, `low` under gamma~; by the demotion
  // lemma sw(low) < sw(high), and u_voter(low) > u_voter(high).
  int high = old_ge ? 0 : 1;
  int low = 1 - high;
  res.high = high;
  res.low = low;
  T gap = u.rows[voter][low] - u.rows[voter][high];  // > 0
  std::vector<T> delta(u.rows.size(), T(0));
  T remaining = gap;
  for (size_t i = 0; i < u.rows.size() && remaining > T(0); ++i) {
    if (i == voter) continue;
    T slack = u.rows[i][high] - u.rows[i][low];
    if (slack <= T(0)) continue;
    T capacity = slack * T(u.counts[i]);
    T take = std::min(capacity, remaining);
    delta[i] = take / T(u.counts[i]);  // uniform within the weighted row
    remaining -= take;
  }
  if (remaining > T(0))
    throw VerificationError("nonuniform_m2_transform: insufficient slack (welfare ordering violated?)");
  T moved(0);
  for (size_t i = 0; i < u.rows.size(); ++i) {
    if (delta[i] == T(0)) continue;
    res.u.rows[i][high] -= delta[i];
    moved += delta[i] * T(u.counts[i]);
  }
  res.u.rows[voter][high] += moved;
  res.changed = true;
  return res;
}

// ---------------------------------------------------------------------------
// Demotion lemma check: lowering one voter's public spirit never promotes a
// weakly-higher-welfare alternative over a lower one in that voter's ranking
// (ties resolved identically on both sides).
// ---------------------------------------------------------------------------

template <class T>
struct DemotionViolation {
  int promoted, over;
};

template <class T>
std::vector<DemotionViolation<T>> demotion_property_check(const UtilityMatrix<T>& u,
                                                          const PSVector<T>& gamma, size_t voter,
                                                          const T& new_gamma) {
  if (voter >= u.rows.size()) throw InputError("demotion_property_check: bad voter index");
  if (!(new_gamma < gamma.values[voter]))
    throw InputError("demotion_property_check: new gamma must be strictly lower");
  PSVector<T> lowered = gamma;
  lowered.values[voter] = new_gamma;
  auto v_old = ps_values(gamma, u);
  auto v_new = ps_values(lowered, u);
  const auto& sw = v_old.welfare;
  std::vector<DemotionViolation<T>> out;
  for (int ap = 0; ap < u.m; ++ap)
    for (int a = 0; a < u.m; ++a) {
      if (a == ap || !(sw[a] >= sw[ap])) continue;
      // a' weakly ahead of the higher-welfare a must stay weakly ahead.
      if (v_old.rows[voter][ap] >= v_old.rows[voter][a] &&
          v_new.rows[voter][ap] < v_new.rows[voter][a])
        out.push_back({a, ap});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Instance-wise PS-monotonicity counterexample search.
// ---------------------------------------------------------------------------

struct InstancewiseWitness {
  UtilityMatrix<Rat> u;
  PSVector<Rat> gamma;
  PSVector<Rat> gamma_prime;  // componentwise >= gamma
  Rat dist_low, dist_high;    // dist(f, gamma, U) < dist(f, gamma', U), exact
  long long samples_used = 0;
};

namespace mono_detail {

struct ExactDist {
  Rat value;
  bool infinite = false;

  bool operator>(const ExactDist& o) const {
    if (infinite) return !o.infinite;
    if (o.infinite) return false;
    return value > o.value;
  }
};

/// Exact sup over all consistent profiles, or nullopt when enumeration
/// overflows the cap or the instance is degenerate.
inline std::optional<ExactDist> exact_distortion(const VotingRule& rule,
                                                 const PSVector<Rat>& gamma,
                                                 const UtilityMatrix<Rat>& u, long long cap) {
  auto v = ps_values(gamma, u);
  const auto& sw = v.welfare;
  int astar = argmax_welfare(sw);
  if (sw[astar] == 0) return std::nullopt;
  ConsistentProfiles<Rat> it(v, TiePolicy::enumerate(cap));
  if (it.overflowed()) return std::nullopt;
  ExactDist best{Rat(0), false};
  while (auto p = it.next()) {
    int w = rule.winner(*p);
    if (sw[w] == 0)
      best.infinite = true;
    else if (!best.infinite)
      best.value = std::max(best.value, Rat(sw[astar] / sw[w]));
  }
  return best;
}

/// Hand-shaped families where one voter's raised public spirit swaps a single
/// adjacent pair, flipping a knife-edge election to a lower-welfare winner.
/// Parameters are jittered per sample; every hit is re-verified exactly.
inline void guided_candidate(int variant, Rng& rng, int n, int m, UtilityMatrix<Rat>& u,
                             PSVector<Rat>& g, PSVector<Rat>& gp) {
  auto jitter = [&](long long den) { return Rat(rng.below(5), den); };
  std::vector<std::vector<Rat>> rows;
  if (variant == 0) {
    // Plurality-shaped: tops (1,1,2,2,0); raising voter 3's gamma moves their
    // top from 2 to 0, and the first-places tie breaks toward 0.
    rows = {
        {Rat(1, 4), Rat(1), Rat(0)},
        {Rat(1, 4) + jitter(100), Rat(1), Rat(0)},
        {Rat(0), Rat(1, 4), Rat(1)},
        {Rat(1, 2), Rat(0), Rat(11, 20) + jitter(1000)},
        {Rat(6, 5) + jitter(100), Rat(0), Rat(1, 10)},
    };
  } else {
    // Borda-shaped: voter 3 swaps (0,2) mid-ranking, lifting 0 into a point
    // tie with 1 that the index order resolves for 0.
    rows = {
        {Rat(1, 2), Rat(1), Rat(0)},
        {Rat(1, 2), Rat(1), Rat(0)},
        {Rat(1, 2) + jitter(1000), Rat(1), Rat(0)},
        {Rat(1, 2), Rat(0), Rat(3, 5) + jitter(1000)},
        {Rat(1), Rat(1, 2), Rat(0)},
    };
  }
  while (static_cast<int>(rows.size()) < n) rows.push_back(std::vector<Rat>(m, Rat(0)));
  for (auto& r : rows) r.resize(m, Rat(0));
  rows.resize(n);
  u = UtilityMatrix<Rat>::dense(rows);
  g = PSVector<Rat>::uniform(Rat(0), n);
  gp = g;
  static const Rat levels[] = {Rat(1, 2), Rat(5, 8), Rat(3, 4)};
  gp.values[std::min<size_t>(3, n - 1)] = levels[rng.below(3)];
}

inline void random_candidate(Rng& rng, int n, int m, UtilityMatrix<Rat>& u, PSVector<Rat>& g,
                             PSVector<Rat>& gp) {
  std::vector<std::vector<Rat>> rows(n, std::vector<Rat>(m));
  for (auto& r : rows)
    for (auto& x : r) x = Rat(rng.below(33), 16);
  u = UtilityMatrix<Rat>::dense(rows);
  g.values.assign(n, Rat(0));
  gp = g;
  if (rng.below(2) == 0) {
    // Single-voter bump (the measure-thin shape of the known witnesses).
    gp.values[rng.below(n)] = Rat(1 + rng.below(7), 8);
  } else {
    for (int i = 0; i < n; ++i) {
      g.values[i] = Rat(rng.below(5), 8);
      gp.values[i] = g.values[i] + Rat(rng.below(4), 8);
      if (gp.values[i] > 1) gp.values[i] = Rat(1);
    }
  }
}

}  // namespace mono_detail

/// Randomized hunt for (U, gamma <= gamma') with a strict distortion increase
/// under the rule; witnesses are re-verified exactly before return. Returns
/// nullopt when the budget runs out (dictatorships never yield a witness).
inline std::optional<InstancewiseWitness> instancewise_counterexample_search(
    const VotingRule& rule, int n, int m, long long budget, uint64_t seed,
    long long enumeration_cap = 5000) {
  if (m < 3) throw InputError("instancewise_counterexample_search: need m >= 3");
  if (n < 1 || budget < 1) throw InputError("instancewise_counterexample_search: bad parameters");
  Rng rng(seed);
  for (long long sample = 0; sample < budget; ++sample) {
    UtilityMatrix<Rat> u;
    PSVector<Rat> g, gp;
    if (sample < 64 && n >= 4 && m >= 3)
      mono_detail::guided_candidate(static_cast<int>(sample % 2), rng, n, m, u, g, gp);
    else
      mono_detail::random_candidate(rng, n, m, u, g, gp);
    bool leq = true;
    for (size_t i = 0; i < g.values.size(); ++i) leq = leq && g.values[i] <= gp.values[i];
    if (!leq) continue;
    auto d0 = mono_detail::exact_distortion(rule, g, u, enumeration_cap);
    if (!d0 || d0->infinite) continue;
    auto d1 = mono_detail::exact_distortion(rule, gp, u, enumeration_cap);
    if (!d1 || d1->infinite) continue;
    if (d1->value > d0->value) {
      InstancewiseWitness w;
      w.u = u;
      w.gamma = g;
      w.gamma_prime = gp;
      w.dist_low = d0->value;
      w.dist_high = d1->value;
      w.samples_used = sample + 1;
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace psvote
