#pragma once

#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "psvote/rng.hpp"
#include "psvote/rules.hpp"

namespace psvote {

/// Per-instance distortion. +infinity (sw(winner) = 0 < sw(a*)) is a
/// first-class outcome, not an error.
template <class T>
struct DistortionResult {
  T value{1};
  bool infinite = false;
  Profile witness;      // consistent profile attaining the reported value
  int winner = -1;      // f(witness), or the tied winner used when flagged
  int optimal = -1;     // a* = argmax_a sw(a, U)
  bool exact = true;    // sup fully enumerated vs. heuristic lower estimate

  bool at_least(const DistortionResult& o) const {
    if (infinite) return true;
    if (o.infinite) return false;
    return value >= o.value;
  }
};

template <class T>
int argmax_welfare(const std::vector<T>& sw) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(sw.size()); ++a)
    if (sw[a] > sw[best]) best = a;
  return best;
}

struct DistortionOptions {
  /// Also maximize over the rule's tied winner set (pre-tie-break), the
  /// semantics used for COPELAND at odd n.
  bool include_tied_winners = false;
};

namespace detail {

template <class T>
void fold_profile(const Profile& p, const RuleId& rule, const std::vector<T>& sw, int astar,
                  const DistortionOptions& opts, DistortionResult<T>& best, bool& first) {
  std::vector<int> winners;
  if (opts.include_tied_winners)
    winners = rule.tied_winners(p);
  else
    winners = {rule.winner(p)};
  for (int w : winners) {
    DistortionResult<T> cand;
    cand.witness = p;
    cand.winner = w;
    cand.optimal = astar;
    if (sw[w] == T(0)) {
      cand.infinite = true;
    } else {
      cand.value = sw[astar] / sw[w];
    }
    // First strict maximizer kept, so the witness is enumeration-stable.
    bool better = first || (cand.infinite && !best.infinite) ||
                  (!cand.infinite && !best.infinite && cand.value > best.value);
    if (better) {
      bool keep_exact = best.exact;  // exactness is decided by the caller
      best = cand;
      best.exact = keep_exact;
      first = false;
    }
  }
}

}  // namespace detail

/// dist(f, gamma, U) restricted to the profiles the tie policy produces:
/// exact sup under enumerate_all (cap permitting), a lower estimate flagged
/// inexact otherwise.
template <class T>
DistortionResult<T> instance_distortion(const RuleId& rule, const PSVector<T>& gamma,
                                        const UtilityMatrix<T>& u, TiePolicy policy,
                                        DistortionOptions opts = {}) {
  auto v = ps_values(gamma, u);
  const auto& sw = v.welfare;
  int astar = argmax_welfare(sw);
  if (sw[astar] == T(0))
    throw UndefinedDistortion("instance_distortion: every alternative has zero welfare");

  DistortionResult<T> best;
  bool first = true;
  if (policy.kind == TiePolicy::Kind::enumerate_all) {
    ConsistentProfiles<T> it(v, policy);
    if (!it.overflowed()) {
      best.exact = true;
      while (auto p = it.next()) detail::fold_profile(*p, rule, sw, astar, opts, best, first);
      return best;
    }
    // Cap exceeded: fall back to the deterministic policies, flagged inexact.
    best.exact = false;
    for (auto k : {TiePolicy::Kind::lexicographic, TiePolicy::Kind::welfare_adversarial}) {
      Profile p = consistent_profile(v, TiePolicy{k, policy.cap});
      detail::fold_profile(p, rule, sw, astar, opts, best, first);
    }
    return best;
  }
  best.exact = false;
  Profile p = consistent_profile(v, policy);
  detail::fold_profile(p, rule, sw, astar, opts, best, first);
  return best;
}

/// Distortion of an explicitly given consistent profile (e.g. the predicted
/// profile of a generated construction). Throws if the profile is not
/// consistent with (gamma, U).
template <class T>
DistortionResult<T> profile_distortion(const RuleId& rule, const PSVector<T>& gamma,
                                       const UtilityMatrix<T>& u, const Profile& p,
                                       DistortionOptions opts = {}) {
  auto v = ps_values(gamma, u);
  if (!profile_consistent(v, p))
    throw VerificationError("profile_distortion: profile is not consistent with the PS-values");
  const auto& sw = v.welfare;
  int astar = argmax_welfare(sw);
  if (sw[astar] == T(0)) throw UndefinedDistortion("profile_distortion: all-zero welfare");
  DistortionResult<T> best;
  bool first = true;
  best.exact = true;
  detail::fold_profile(p, rule, sw, astar, opts, best, first);
  return best;
}

// ---------------------------------------------------------------------------
// kappa_f: minimum fraction of voters ranking the winner ahead of any other
// alternative, over all profiles.
// ---------------------------------------------------------------------------

struct KappaResult {
  Rat value;
  Profile witness;
  int winner = -1;
  int against = -1;  // alternative realizing the min tally
  unsigned long long profiles = 0;
  bool exact = true;
};

namespace detail {

inline std::vector<Ranking> all_rankings(int m) {
  std::vector<int> perm(m);
  for (int a = 0; a < m; ++a) perm[a] = a;
  std::vector<Ranking> all;
  do {
    all.push_back(Ranking{perm});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return all;
}

template <class Fn>
void for_each_profile(int n, int m, unsigned long long budget, Fn&& fn) {
  auto rankings = all_rankings(m);
  const unsigned long long r = rankings.size();
  unsigned long long total = 1;
  for (int i = 0; i < n; ++i) {
    total = detail::saturating_mul(total, r);
    if (total > budget)
      throw BudgetExceeded("profile enumeration: m!^n = " + std::to_string(total) +
                           "+ exceeds budget " + std::to_string(budget));
  }
  std::vector<size_t> idx(n, 0);
  Profile p;
  p.m = m;
  p.counts.assign(n, 1);
  p.rows.assign(n, rankings[0]);
  for (;;) {
    for (int i = 0; i < n; ++i) p.rows[i] = rankings[idx[i]];
    fn(p);
    int i = 0;
    while (i < n && ++idx[i] == r) idx[i++] = 0;
    if (i == n) break;
  }
}

inline void kappa_consider(const RuleId& rule, const Profile& p, KappaResult& out, bool& first) {
  auto tally = pairwise_tally(p);
  int w = rule.winner(p);
  for (int a = 0; a < p.m; ++a) {
    if (a == w) continue;
    Rat frac(tally[w][a], p.voters());
    if (first || frac < out.value) {
      out.value = frac;
      out.witness = p;
      out.winner = w;
      out.against = a;
      first = false;
    }
  }
}

}  // namespace detail

/// Exact kappa_f by exhausting all (m!)^n profiles. Refuses above budget.
inline KappaResult kappa_bruteforce(const RuleId& rule, int n, int m,
                                    unsigned long long budget = 10000000ULL) {
  KappaResult out;
  bool first = true;
  unsigned long long count = 0;
  detail::for_each_profile(n, m, budget, [&](const Profile& p) {
    ++count;
    detail::kappa_consider(rule, p, out, first);
  });
  out.profiles = count;
  out.exact = true;
  return out;
}

/// Sampled lower-bound hunt for kappa_f: uniform random profiles plus the
/// cyclic-groups family (the known minimizer shape). Flagged inexact.
inline KappaResult kappa_sampled(const RuleId& rule, int n, int m, long long samples,
                                 uint64_t seed) {
  KappaResult out;
  bool first = true;
  if (n % m == 0) detail::kappa_consider(rule, cyclic_groups_profile(n, m), out, first);
  Rng rng(seed);
  auto rankings = detail::all_rankings(m);
  Profile p;
  p.m = m;
  p.counts.assign(n, 1);
  p.rows.assign(n, rankings[0]);
  for (long long s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) p.rows[i] = rankings[rng.below((long long)rankings.size())];
    detail::kappa_consider(rule, p, out, first);
  }
  out.profiles = static_cast<unsigned long long>(samples);
  out.exact = false;
  return out;
}

// ---------------------------------------------------------------------------
// Key lemma check: sw(b)/sw(a) <= z * n / |{i : a > b}| + 1 for every pair
// with at least one supporter of a over b, where z = (1-gamma_min)/gamma_min.
// ---------------------------------------------------------------------------

template <class T>
struct KeyLemmaViolation {
  int a, b;
  T lhs, rhs;
};

template <class T>
std::vector<KeyLemmaViolation<T>> check_key_lemma(const PSVector<T>& gamma,
                                                  const UtilityMatrix<T>& u, const Profile& p,
                                                  T tolerance = T(0)) {
  T gmin = gamma.min();
  if (!(gmin > T(0))) throw InputError("check_key_lemma: gamma_min must be positive");
  auto v = ps_values(gamma, u);
  if (!profile_consistent(v, p))
    throw VerificationError("check_key_lemma: profile is not consistent with (gamma, U)");
  const auto& sw = v.welfare;
  auto tally = pairwise_tally(p);
  const T n = T(p.voters());
  T z = (T(1) - gmin) / gmin;
  std::vector<KeyLemmaViolation<T>> out;
  for (int a = 0; a < p.m; ++a) {
    if (!(sw[a] > T(0))) continue;
    for (int b = 0; b < p.m; ++b) {
      if (b == a || tally[a][b] < 1) continue;
      T lhs = sw[b] / sw[a];
      T rhs = z * n / T(tally[a][b]) + T(1);
      if (lhs > rhs + tolerance) out.push_back({a, b, lhs, rhs});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table-of-bounds evaluation.
// ---------------------------------------------------------------------------

template <class T>
struct BoundReport {
  std::string rule;
  T gamma_min{};
  int m = 0;
  T z{};                      // (1 - gamma_min) / gamma_min
  std::optional<T> upper;     // finite closed form when known
  bool upper_unbounded = false;
  std::string upper_asymptotic;  // e.g. "O(m^(2/3))"
  std::optional<T> lower;
  bool lower_infinite = false;
  std::string lower_asymptotic;  // e.g. "Omega(sqrt(m))"
  std::optional<T> observed;
};

/// Closed-form upper/lower distortion bounds per rule; lower bounds are for
/// uniform gamma. gamma_min = 0 renders the uppers unbounded.
template <class T>
BoundReport<T> theoretical_bounds(RuleKind kind, const T& gamma_min, int m) {
  if (gamma_min < T(0) || gamma_min > T(1)) throw InputError("theoretical_bounds: gamma_min outside [0,1]");
  BoundReport<T> r;
  r.rule = rule_kind_name(kind);
  r.gamma_min = gamma_min;
  r.m = m;
  bool zero = gamma_min == T(0);
  r.z = zero ? T(0) : (T(1) - gamma_min) / gamma_min;
  auto uncovered_bound = [&] { return (T(2) * r.z + T(1)) * (T(2) * r.z + T(1)); };
  switch (kind) {
    case RuleKind::copeland:
    case RuleKind::slater:
      if (zero)
        r.upper_unbounded = true;
      else
        r.upper = uncovered_bound();
      r.lower = zero ? std::optional<T>{} : std::optional<T>(uncovered_bound());
      if (zero) r.lower_infinite = true;
      break;
    case RuleKind::plurality:
      if (zero) {
        r.upper_unbounded = true;
        r.lower_infinite = true;
      } else {
        r.upper = T(m) * r.z + T(1);
        r.lower = T(m) * r.z + T(1);
      }
      break;
    case RuleKind::borda:
    case RuleKind::maximin:
      if (zero) {
        r.upper_unbounded = true;
        r.lower_infinite = true;
      } else {
        r.upper = T(m) * r.z + T(1);
        r.lower = T(m - 1) * r.z + T(1);
      }
      break;
    case RuleKind::veto:
      r.upper_unbounded = true;  // kappa_veto = 1/n, no m-only upper bound
      r.lower_infinite = true;
      break;
    case RuleKind::piecewise:
      r.upper_asymptotic = "O(m^(2/3))";
      r.lower_asymptotic = "Omega(sqrt(m))";
      if (zero) r.upper_unbounded = true;
      break;
    case RuleKind::custom_positional:
      r.lower_asymptotic = "Omega(sqrt(m))";
      r.upper_unbounded = true;  // no generic closed form without kappa
      break;
  }
  return r;
}

/// Universal upper bound (from a measured kappa): (1-g)/(g*kappa) + 1.
template <class T>
T universal_upper_bound(const T& gamma_min, const T& kappa) {
  if (!(gamma_min > T(0))) throw InputError("universal_upper_bound: gamma_min must be positive");
  if (!(kappa > T(0))) throw InputError("universal_upper_bound: kappa must be positive");
  return (T(1) - gamma_min) / (gamma_min * kappa) + T(1);
}

// ---------------------------------------------------------------------------
// Randomized worst-case search over utility matrices (restart hill climbing).
// Lower estimates only; never claimed as the sup.
// ---------------------------------------------------------------------------

struct SearchOptions {
  long long budget = 10000;  // candidate evaluations across all restarts
  uint64_t seed = 0;
  int restarts = 8;
  int threads = 1;  // restarts are independent; results identical at any thread count
  DistortionOptions distortion;
  std::optional<UtilityMatrix<double>> warm_start;  // used by restart 0
};

struct SearchResult {
  DistortionResult<double> best;
  UtilityMatrix<double> witness_u;
  long long evaluations = 0;
};

namespace detail {

inline double search_objective(const RuleId& rule, const PSVector<double>& gamma,
                               const UtilityMatrix<double>& u, const DistortionOptions& opts,
                               DistortionResult<double>* out) {
  // Cheap lower estimate: both deterministic tie policies.
  auto v = ps_values(gamma, u);
  const auto& sw = v.welfare;
  int astar = argmax_welfare(sw);
  if (sw[astar] <= 0.0) return -1.0;
  DistortionResult<double> best;
  bool first = true;
  for (auto k : {TiePolicy::Kind::lexicographic, TiePolicy::Kind::welfare_adversarial}) {
    Profile p = consistent_profile(v, TiePolicy{k, 1});
    fold_profile(p, rule, sw, astar, opts, best, first);
  }
  best.exact = false;
  if (out) *out = best;
  if (best.infinite) return std::numeric_limits<double>::infinity();
  return best.value;
}

}  // namespace detail

namespace detail {

struct RestartOutcome {
  bool valid = false;
  DistortionResult<double> best;
  UtilityMatrix<double> witness_u;
  long long evaluations = 0;
};

inline RestartOutcome run_restart(const RuleId& rule, const PSVector<double>& gamma, int n, int m,
                                  const SearchOptions& opts, int restart, long long steps) {
  Rng rng(opts.seed, static_cast<uint64_t>(restart) + 1);
  RestartOutcome out;
  UtilityMatrix<double> u;
  if (restart == 0 && opts.warm_start) {
    u = *opts.warm_start;
  } else {
    std::vector<std::vector<double>> rows(n, std::vector<double>(m));
    for (auto& row : rows)
      for (double& x : row) x = rng.uniform();
    u = UtilityMatrix<double>::dense(rows);
  }
  DistortionResult<double> cur_res;
  double cur = search_objective(rule, gamma, u, opts.distortion, &cur_res);
  ++out.evaluations;
  if (cur >= 0) {
    out.valid = true;
    out.best = cur_res;
    out.witness_u = u;
  }
  for (long long step = 1; step < steps; ++step) {
    UtilityMatrix<double> cand = u;
    // Moves mirror the shape of the known worst cases: sparse,
    // group-structured matrices with a few large entries.
    int move = static_cast<int>(rng.below(4));
    size_t i = static_cast<size_t>(rng.below((long long)cand.rows.size()));
    int a = static_cast<int>(rng.below(m));
    switch (move) {
      case 0:  // additive entry noise
        cand.rows[i][a] = std::max(0.0, cand.rows[i][a] + rng.uniform(-0.5, 0.5));
        break;
      case 1:  // multiplicative entry scaling
        cand.rows[i][a] *= std::exp(rng.uniform(-1.5, 1.5));
        break;
      case 2: {  // column scaling
        double f = std::exp(rng.uniform(-1.0, 1.0));
        for (auto& row : cand.rows) row[a] *= f;
        break;
      }
      case 3:  // sparsify
        cand.rows[i][a] = 0.0;
        break;
    }
    DistortionResult<double> cand_res;
    double val = search_objective(rule, gamma, cand, opts.distortion, &cand_res);
    ++out.evaluations;
    if (val > cur) {
      u = cand;
      cur = val;
      cur_res = cand_res;
      if (!out.valid || cand_res.at_least(out.best)) {
        out.valid = true;
        out.best = cand_res;
        out.witness_u = u;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Restart hill climbing over nonnegative utility matrices. Each restart owns
/// stream (seed, restart) and a fixed step share, so the outcome is the same
/// at any thread count; ties between restarts resolve to the lowest index.
inline SearchResult worst_case_search(const RuleId& rule, const PSVector<double>& gamma, int n,
                                      int m, const SearchOptions& opts) {
  if (opts.budget < 1) throw InputError("worst_case_search: budget must be >= 1");
  if (static_cast<int>(gamma.values.size()) != n)
    throw InputError("worst_case_search: gamma length != n");
  int restarts = std::max(1, opts.restarts);
  std::vector<long long> share(restarts, opts.budget / restarts);
  for (long long r = 0; r < opts.budget % restarts; ++r) ++share[r];
  std::vector<detail::RestartOutcome> outcomes(restarts);

  auto work = [&](int k) {
    if (share[k] > 0)
      outcomes[k] = detail::run_restart(rule, gamma, n, m, opts, k, share[k]);
  };
  int threads = std::max(1, opts.threads);
  if (threads <= 1) {
    for (int k = 0; k < restarts; ++k) work(k);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < std::min(threads, restarts); ++t)
      pool.emplace_back([&] {
        for (int k = next.fetch_add(1); k < restarts; k = next.fetch_add(1)) work(k);
      });
    for (auto& th : pool) th.join();
  }

  SearchResult result;
  bool have_best = false;
  auto strictly_better = [](const DistortionResult<double>& a, const DistortionResult<double>& b) {
    if (a.infinite != b.infinite) return a.infinite;
    return !a.infinite && a.value > b.value;
  };
  for (const auto& o : outcomes) {
    result.evaluations += o.evaluations;
    if (o.valid && (!have_best || strictly_better(o.best, result.best))) {
      result.best = o.best;
      result.witness_u = o.witness_u;
      have_best = true;
    }
  }
  if (!have_best)
    throw UndefinedDistortion("worst_case_search: no candidate had positive optimal welfare");
  result.best.exact = false;
  return result;
}

// ---------------------------------------------------------------------------
// Mechanical check of the uncovered-set upper-bound argument: every
// uncovered-set member reaches a* by a weak one- or two-hop domination chain,
// and its welfare gap obeys (2z+1)^2.
// ---------------------------------------------------------------------------

template <class T>
struct UncoveredChainCheck {
  int member = -1;
  bool one_hop = false;
  int via = -1;  // intermediate alternative for the two-hop case
  bool chain_found = false;
  T ratio{};  // sw(a*) / sw(member); 0 when sw(member) = 0
  bool ratio_finite = true;
  bool bound_ok = false;
};

template <class T>
struct UncoveredReport {
  std::vector<UncoveredChainCheck<T>> checks;
  T bound{};
  bool ok = true;
};

template <class T>
UncoveredReport<T> verify_uncovered_upper(const PSVector<T>& gamma, const UtilityMatrix<T>& u,
                                          TiePolicy policy = TiePolicy::lex(),
                                          T tolerance = T(0)) {
  T gmin = gamma.min();
  if (!(gmin > T(0))) throw InputError("verify_uncovered_upper: gamma_min must be positive");
  auto v = ps_values(gamma, u);
  Profile p = consistent_profile(v, policy);
  const auto& sw = v.welfare;
  int astar = argmax_welfare(sw);
  auto tally = pairwise_tally(p);
  const long long n = p.voters();
  T z = (T(1) - gmin) / gmin;
  UncoveredReport<T> rep;
  rep.bound = (T(2) * z + T(1)) * (T(2) * z + T(1));
  for (int a : uncovered_set(p)) {
    UncoveredChainCheck<T> c;
    c.member = a;
    if (a == astar || weakly_dominates(tally, n, a, astar)) {
      c.one_hop = true;
      c.chain_found = true;
    } else {
      for (int mid = 0; mid < p.m; ++mid) {
        if (mid == a || mid == astar) continue;
        if (weakly_dominates(tally, n, a, mid) && weakly_dominates(tally, n, mid, astar)) {
          c.via = mid;
          c.chain_found = true;
          break;
        }
      }
    }
    if (sw[a] > T(0)) {
      c.ratio = sw[astar] / sw[a];
      c.bound_ok = c.ratio <= rep.bound + tolerance;
    } else {
      c.ratio_finite = false;
      c.bound_ok = false;
    }
    rep.ok = rep.ok && c.chain_found && c.bound_ok;
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace psvote
