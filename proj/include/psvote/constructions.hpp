#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psvote/distortion.hpp"

namespace psvote {

/// A generated lower-bound instance bundled with its predicted profile,
/// winner, and closed-form distortion. Alternative indices follow a fixed
/// convention per family, recorded in `roles`.
struct ConstructionSpec {
  std::string family;
  RuleId target_rule;
  int m = 0;
  Rat gamma;
  Rat epsilon;  // 0 where the construction has no perturbation parameter
  UtilityMatrix<Rat> u;
  PSVector<Rat> gamma_vec;  // uniform, aligned with u rows
  Profile predicted;
  int predicted_winner = 0;
  Rat predicted_distortion;  // exact value at this epsilon
  Rat limit_distortion;      // closed form as epsilon -> 0
  bool limit_infinite = false;
  std::map<std::string, std::string> roles;
  std::vector<std::string> notes;
  bool trivial = false;  // degenerate case (e.g. gamma = 1)
};

namespace cons_detail {

/// Least n making every row fraction an integer voter count.
inline long long derive_n(const std::vector<Rat>& fractions) {
  Rat sum(0);
  for (const auto& f : fractions) sum += f;
  if (sum != 1) throw VerificationError("construction: group fractions do not sum to 1");
  BigInt l(1);
  for (const auto& f : fractions)
    if (f != 0) l = lcm_big(l, denominator(f));
  if (l > BigInt(1) << 50) throw VerificationError("construction: derived n is astronomically large");
  return l.convert_to<long long>();
}

inline std::vector<std::vector<int>> cycle_orders(const std::vector<int>& bloc) {
  std::vector<std::vector<int>> out;
  const int L = static_cast<int>(bloc.size());
  for (int k = 0; k < L; ++k) {
    std::vector<int> o;
    for (int j = 0; j < L; ++j) o.push_back(bloc[(k + j) % L]);
    out.push_back(o);
  }
  return out;
}

/// A fixed order plus its reverse; splitting a group evenly between the two
/// makes every within-bloc pairwise election an exact tie.
inline std::vector<std::vector<int>> mirror_orders(const std::vector<int>& bloc) {
  std::vector<int> rev(bloc.rbegin(), bloc.rend());
  if (bloc.size() <= 1) return {bloc};
  return {bloc, rev};
}

struct RowBuild {
  Rat fraction;
  std::vector<Rat> utilities;
  Ranking ranking;
};

inline void assemble(ConstructionSpec& spec, const std::vector<RowBuild>& rows) {
  std::vector<Rat> fractions;
  for (const auto& r : rows) fractions.push_back(r.fraction);
  long long n = derive_n(fractions);
  std::vector<std::vector<Rat>> urows;
  std::vector<long long> counts;
  std::vector<Ranking> rankings;
  for (const auto& r : rows) {
    Rat cnt = r.fraction * n;
    if (denominator(cnt) != 1) throw VerificationError("construction: non-integral voter count");
    urows.push_back(r.utilities);
    counts.push_back(numerator(cnt).convert_to<long long>());
    rankings.push_back(r.ranking);
  }
  spec.u = UtilityMatrix<Rat>::weighted(spec.m, urows, counts);
  spec.gamma_vec = PSVector<Rat>::uniform(spec.gamma, urows.size());
  spec.predicted = Profile(spec.m, rankings, spec.u.counts);
}

/// Strictness assertions over the realized PS-values; a failure names the
/// inequality from the construction's proof chain.
struct StrictCheck {
  size_t row;
  int ahead, behind;
  std::string label;
  bool allow_tie = false;
};

inline void enforce(const ConstructionSpec& spec, const std::vector<StrictCheck>& checks) {
  auto v = ps_values(spec.gamma_vec, spec.u);
  for (const auto& c : checks) {
    const auto& row = v.rows.at(c.row);
    if (row[c.ahead] < row[c.behind] || (!c.allow_tie && row[c.ahead] == row[c.behind]))
      throw VerificationError("gen_" + spec.family + ": inequality '" + c.label +
                              "' fails (alternatives " + std::to_string(c.ahead) + " vs " +
                              std::to_string(c.behind) + ")");
  }
}

inline ConstructionSpec trivial_spec(const std::string& family, const RuleId& rule, int m,
                                     const Rat& gamma) {
  ConstructionSpec spec;
  spec.family = family;
  spec.target_rule = rule;
  spec.m = m;
  spec.gamma = gamma;
  spec.trivial = true;
  spec.predicted_distortion = 1;
  spec.limit_distortion = 1;
  std::vector<std::vector<Rat>> rows{std::vector<Rat>(m, Rat(1))};
  spec.u = UtilityMatrix<Rat>::weighted(m, rows, {1});
  spec.gamma_vec = PSVector<Rat>::uniform(gamma, 1);
  std::vector<int> order(m);
  for (int a = 0; a < m; ++a) order[a] = a;
  spec.predicted = Profile(m, {Ranking{order}}, {1});
  spec.predicted_winner = 0;
  spec.notes.push_back("degenerate case: all alternatives tie, bound is 1");
  return spec;
}

inline Ranking concat(std::initializer_list<std::vector<int>> parts) {
  Ranking r;
  for (const auto& p : parts) r.order.insert(r.order.end(), p.begin(), p.end());
  return r;
}

}  // namespace cons_detail

// ---------------------------------------------------------------------------
// COPELAND lower bound: (2(1-g)/g + 1)^2.
//
// Indices: a' = 0, a* = 1, A = {2, 3}, everything else the zero-welfare bloc.
// Three voter groups with fractions (1/2-eps, 1/2-eps, 2eps); blocs are split
// half-and-half between a fixed order and its reverse so that within-bloc
// pairwise elections tie exactly (this also keeps every group size even).
// ---------------------------------------------------------------------------
inline ConstructionSpec gen_copeland_lb(const Rat& gamma, int m, const Rat& eps) {
  RuleId rule;
  rule.kind = RuleKind::copeland;
  if (m < 6) throw InputError("gen_copeland_lb: need m >= 6");
  if (gamma <= 0 || gamma > 1) throw InputError("gen_copeland_lb: need gamma in (0,1]");
  if (gamma == 1) return cons_detail::trivial_spec("copeland_lb", rule, m, gamma);
  if (eps <= 0 || eps >= Rat(1, 4)) throw InputError("gen_copeland_lb: need 0 < eps < 1/4");

  ConstructionSpec spec;
  spec.family = "copeland_lb";
  spec.target_rule = rule;
  spec.m = m;
  spec.gamma = gamma;
  spec.epsilon = eps;

  Rat x = Rat(gamma / 2) / Rat(1 - gamma / 2);
  Rat y = x * x;
  // Large enough for the strictness chain; depends on gamma but not eps.
  Rat w = std::max({Rat(1), Rat((x + y) / 2), Rat(gamma * (1 - y) / (2 * (1 - gamma)))}) + 1;

  std::vector<int> blocA{2, 3};
  std::vector<int> blocZ;
  for (int a = 4; a < m; ++a) blocZ.push_back(a);

  std::vector<Rat> uA(m, Rat(0)), uB(m, Rat(0)), uC(m, Rat(0));
  uA[1] = 1;
  uA[0] = y;
  for (int a : blocA) uB[a] = x;
  uC[0] = w;
  for (int a : blocA) uC[a] = x;

  auto ordersA = cons_detail::mirror_orders(blocA);
  auto ordersZ = cons_detail::mirror_orders(blocZ);
  size_t variants = std::max(ordersA.size(), ordersZ.size());

  std::vector<cons_detail::RowBuild> rows;
  Rat fA = (Rat(1, 2) - eps) / Rat((long long)variants);
  Rat fC = 2 * eps / Rat((long long)variants);
  for (size_t k = 0; k < variants; ++k) {
    const auto& oa = ordersA[k % ordersA.size()];
    const auto& oz = ordersZ.empty() ? std::vector<int>{} : ordersZ[k % ordersZ.size()];
    rows.push_back({fA, uA, cons_detail::concat({{1}, {0}, oa, oz})});
    rows.push_back({fA, uB, cons_detail::concat({oa, {1}, {0}, oz})});
    rows.push_back({fC, uC, cons_detail::concat({{0}, oa, {1}, oz})});
  }
  cons_detail::assemble(spec, rows);

  spec.predicted_winner = 0;
  spec.predicted_distortion =
      (Rat(1, 2) - eps) / (y * (Rat(1, 2) - eps) + 2 * eps * w);
  Rat z = (1 - gamma) / gamma;
  spec.limit_distortion = (2 * z + 1) * (2 * z + 1);
  spec.roles = {{"a_prime", "0"}, {"a_star", "1"}, {"bloc_A", "2,3"}, {"bloc_zero", "4.." + std::to_string(m - 1)}};

  // Claim-1 strictness chain, named per group (rows repeat per bloc variant,
  // so checking the first variant of each group suffices).
  std::vector<cons_detail::StrictCheck> checks = {
      {0, 1, 0, "group A: a* ahead of a'"},
      {0, 0, 2, "group A: a' ahead of A"},
      {0, 2, 4, "group A: A ahead of zero bloc"},
      {1, 2, 1, "group B: A ahead of a*"},
      {1, 1, 0, "group B: a* ahead of a'"},
      {1, 0, 4, "group B: a' ahead of zero bloc"},
      {2, 0, 2, "group C: a' ahead of A"},
      {2, 2, 1, "group C: A ahead of a*"},
      {2, 1, 4, "group C: a* ahead of zero bloc"},
  };
  cons_detail::enforce(spec, checks);
  return spec;
}

// ---------------------------------------------------------------------------
// SLATER lower bound: same instance, but blocs keep one fixed sub-ordering
// for all voters (2 before 3, and the zero bloc in index order).
// ---------------------------------------------------------------------------
inline ConstructionSpec gen_slater_lb(const Rat& gamma, int m, const Rat& eps) {
  RuleId rule;
  rule.kind = RuleKind::slater;
  if (m < 6 || m > 8)
    throw InputError("gen_slater_lb: need 6 <= m <= 8 (exhaustive m! verification)");
  if (gamma <= 0 || gamma > 1) throw InputError("gen_slater_lb: need gamma in (0,1]");
  if (gamma == 1) return cons_detail::trivial_spec("slater_lb", rule, m, gamma);
  if (eps <= 0 || eps >= Rat(1, 4)) throw InputError("gen_slater_lb: need 0 < eps < 1/4");

  ConstructionSpec spec = gen_copeland_lb(gamma, m, eps);
  spec.family = "slater_lb";
  spec.target_rule = rule;

  // Rebuild the profile with consistent sub-orderings.
  std::vector<int> blocA{2, 3};
  std::vector<int> blocZ;
  for (int a = 4; a < m; ++a) blocZ.push_back(a);
  std::vector<cons_detail::RowBuild> rows = {
      {Rat(1, 2) - eps, spec.u.rows[0], cons_detail::concat({{1}, {0}, blocA, blocZ})},
      {Rat(1, 2) - eps, spec.u.rows[1], cons_detail::concat({blocA, {1}, {0}, blocZ})},
      {2 * eps, spec.u.rows[2], cons_detail::concat({{0}, blocA, {1}, blocZ})},
  };
  cons_detail::assemble(spec, rows);
  spec.notes.push_back("blocs ordered consistently (not cycled) for the Slater argument");
  return spec;
}

// ---------------------------------------------------------------------------
// Scoring-gap lower bound for a positional rule with top gap D = s_1 - s_2:
// distortion -> (1-g)/(gD) + 1, infinite when D = 0 (VETO).
//
// Indices: a' = 0, a* = 1, bloc A = {2..m-1} (cycled).
// ---------------------------------------------------------------------------
inline ConstructionSpec gen_scoring_gap_lb(const ScoreVector& s, const Rat& gamma,
                                           const Rat& eps) {
  s.validate();
  const int m = s.m();
  RuleId rule;
  rule.kind = RuleKind::custom_positional;
  rule.custom = s;
  if (m < 3) throw InputError("gen_scoring_gap_lb: need m >= 3");
  if (gamma <= 0 || gamma >= 1) throw InputError("gen_scoring_gap_lb: need gamma in (0,1)");
  Rat delta = s.top_gap();
  if (eps <= 0 || delta + eps >= 1)
    throw InputError("gen_scoring_gap_lb: need 0 < eps < 1 - Delta_f");

  ConstructionSpec spec;
  spec.family = "scoring_gap_lb";
  spec.target_rule = rule;
  spec.m = m;
  spec.gamma = gamma;
  spec.epsilon = eps;

  Rat x = gamma * (1 - delta) / (1 - gamma + gamma * delta);

  std::vector<int> bloc;
  for (int a = 2; a < m; ++a) bloc.push_back(a);
  std::vector<Rat> uA(m, Rat(0)), uB(m, Rat(0));
  uA[0] = x;
  for (int a : bloc) uA[a] = x;
  uB[1] = 1;

  auto orders = cons_detail::cycle_orders(bloc);
  std::vector<cons_detail::RowBuild> rows;
  Rat fA = (delta + eps) / Rat((long long)orders.size());
  Rat fB = (1 - delta - eps) / Rat((long long)orders.size());
  for (const auto& o : orders) {
    rows.push_back({fA, uA, cons_detail::concat({{0}, o, {1}})});
    rows.push_back({fB, uB, cons_detail::concat({{1}, {0}, o})});
  }
  cons_detail::assemble(spec, rows);

  spec.predicted_winner = 0;
  Rat sw_aprime = x * (delta + eps);           // per-voter average
  Rat sw_astar = 1 - delta - eps;
  if (!(sw_aprime <= sw_astar))
    throw VerificationError("gen_scoring_gap_lb: 'sw(a') <= sw(a*)' fails; shrink eps");
  spec.predicted_distortion = sw_astar / sw_aprime;
  if (delta == 0) {
    spec.limit_infinite = true;
    spec.notes.push_back("Delta_f = 0: distortion diverges as eps -> 0");
  } else {
    spec.limit_distortion = (1 - gamma) / (gamma * delta) + 1;
  }
  spec.roles = {{"a_prime", "0"}, {"a_star", "1"}, {"bloc_A", "2.." + std::to_string(m - 1)}};

  cons_detail::enforce(spec, {
      {0, 0, 1, "group A: a' (and bloc) ahead of a*"},
      {0, 2, 1, "group A: bloc ahead of a*"},
      {0, 0, 2, "group A: a' weakly ahead of bloc", true},
      {1, 1, 0, "group B: a* ahead of a'"},
      {1, 0, 2, "group B: a' weakly ahead of bloc", true},
  });
  return spec;
}

// ---------------------------------------------------------------------------
// PLURALITY lower bound: distortion -> m(1-g)/g + 1.
//
// Indices: a' = 0, bloc A = {1..m-1} (cycled); a* is any bloc member, 1 by
// convention. eps = 0 is allowed: the tie at group (A) is then broken toward
// a' by index precedence.
// ---------------------------------------------------------------------------
inline ConstructionSpec gen_plurality_lb(const Rat& gamma, int m, const Rat& eps) {
  RuleId rule;
  rule.kind = RuleKind::plurality;
  if (m < 2) throw InputError("gen_plurality_lb: need m >= 2");
  if (gamma <= 0 || gamma > 1) throw InputError("gen_plurality_lb: need gamma in (0,1]");
  if (gamma == 1) return cons_detail::trivial_spec("plurality_lb", rule, m, gamma);
  if (eps < 0 || eps >= Rat(1, m) * (m - 1))
    throw InputError("gen_plurality_lb: need 0 <= eps < (m-1)/m");

  ConstructionSpec spec;
  spec.family = "plurality_lb";
  spec.target_rule = rule;
  spec.m = m;
  spec.gamma = gamma;
  spec.epsilon = eps;

  Rat x = gamma * (m - 1) / (m * (1 - gamma) + gamma);

  std::vector<int> bloc;
  for (int a = 1; a < m; ++a) bloc.push_back(a);
  std::vector<Rat> uA(m, Rat(0)), uB(m, Rat(0));
  uA[0] = x;
  for (int a : bloc) uB[a] = 1;

  auto orders = cons_detail::cycle_orders(bloc);
  std::vector<cons_detail::RowBuild> rows;
  Rat fA = (Rat(1, m) + eps) / Rat((long long)orders.size());
  Rat fB = (Rat(m - 1, m) - eps) / Rat((long long)orders.size());
  for (const auto& o : orders) {
    rows.push_back({fA, uA, cons_detail::concat({{0}, o})});
    rows.push_back({fB, uB, cons_detail::concat({o, {0}})});
  }
  cons_detail::assemble(spec, rows);

  spec.predicted_winner = 0;
  Rat sw_aprime = x * (Rat(1, m) + eps);
  Rat sw_bloc = Rat(m - 1, m) - eps;
  if (!(sw_aprime <= sw_bloc))
    throw VerificationError("gen_plurality_lb: 'sw(a') <= sw(A)' fails; shrink eps");
  spec.predicted_distortion = sw_bloc / sw_aprime;
  spec.limit_distortion = Rat(m) * (1 - gamma) / gamma + 1;
  spec.roles = {{"a_prime", "0"}, {"a_star", "1"}, {"bloc_A", "1.." + std::to_string(m - 1)}};

  cons_detail::enforce(spec, {
      {0, 0, 1, "group A: a' ahead of bloc", /*allow_tie=*/eps == 0},
      {1, 1, 0, "group B: bloc ahead of a'"},
  });
  return spec;
}

// ---------------------------------------------------------------------------
// MAXIMIN lower bound: distortion = ((1-g)(m-1) + g)/g = (m-1)(1-g)/g + 1,
// exact (no perturbation parameter). Indices: a' = 0, cycled bloc {1..m-1}.
// Group (A) holds a 1/(m-1) fraction and ties a' with the bloc exactly.
// ---------------------------------------------------------------------------
inline ConstructionSpec gen_maximin_lb(const Rat& gamma, int m) {
  RuleId rule;
  rule.kind = RuleKind::maximin;
  if (m < 3) throw InputError("gen_maximin_lb: need m >= 3");
  if (gamma <= 0 || gamma > 1) throw InputError("gen_maximin_lb: need gamma in (0,1]");
  if (gamma == 1) return cons_detail::trivial_spec("maximin_lb", rule, m, gamma);

  ConstructionSpec spec;
  spec.family = "maximin_lb";
  spec.target_rule = rule;
  spec.m = m;
  spec.gamma = gamma;

  Rat uprime = gamma * (m - 2) / ((1 - gamma) * (m - 1) + gamma);

  std::vector<int> bloc;
  for (int a = 1; a < m; ++a) bloc.push_back(a);
  std::vector<Rat> uA(m, Rat(0)), uB(m, Rat(0));
  uA[0] = uprime;
  for (int a : bloc) uB[a] = 1;

  auto orders = cons_detail::cycle_orders(bloc);
  std::vector<cons_detail::RowBuild> rows;
  Rat fA = Rat(1, m - 1) / Rat(m - 1);
  Rat fB = Rat(m - 2, m - 1) / Rat(m - 1);
  for (const auto& o : orders) {
    rows.push_back({fA, uA, cons_detail::concat({{0}, o})});
    rows.push_back({fB, uB, cons_detail::concat({o, {0}})});
  }
  cons_detail::assemble(spec, rows);

  spec.predicted_winner = 0;
  Rat sw_aprime = uprime / (m - 1);
  Rat sw_bloc = Rat(m - 2, m - 1);
  spec.predicted_distortion = sw_bloc / sw_aprime;
  spec.limit_distortion = spec.predicted_distortion;
  spec.roles = {{"a_prime", "0"}, {"a_star", "1"}, {"bloc", "1.." + std::to_string(m - 1)}};

  // The a'-vs-bloc tie in group (A) is structural; verify it is exact.
  auto v = ps_values(spec.gamma_vec, spec.u);
  if (v.rows[0][0] != v.rows[0][1])
    throw VerificationError("gen_maximin_lb: group A tie between a' and bloc is not exact");
  cons_detail::enforce(spec, {
      {0, 0, 1, "group A: a' weakly ahead of bloc", true},
      {1, 1, 0, "group B: bloc ahead of a'"},
  });
  return spec;
}

// ---------------------------------------------------------------------------
// sqrt(m) lower bound for an arbitrary positional scoring rule.
//
// s0 = ceil(sqrt(m)) stands in for sqrt(m) so every quantity stays rational.
// t is the first position in {1..s0} with minimal score gap s_t - s_{t+1}.
// Group (A), a C/s0 fraction, ranks a' first (utility x = 1/(1-g)), the bloc
// cycled, a* last. Group (B) ranks cycled bloc members over the first t-1
// positions (utility x), a* at t (utility 1 for everyone), a' at t+1
// (utility y = C'/s0), and the rest of the bloc behind. The generator solves
// for the minimal valid C' when one is not supplied.
// ---------------------------------------------------------------------------
inline ConstructionSpec gen_sqrtm_lb(const ScoreVector& s, const Rat& gamma, int m,
                                     std::optional<Rat> C_opt = std::nullopt,
                                     std::optional<Rat> Cprime_opt = std::nullopt) {
  s.validate();
  if (s.m() != m) throw InputError("gen_sqrtm_lb: score vector length != m");
  if (gamma < 0 || gamma >= 1) throw InputError("gen_sqrtm_lb: need gamma in [0,1)");
  if (m < 4) throw InputError("gen_sqrtm_lb: need m >= 4");
  RuleId rule;
  rule.kind = RuleKind::custom_positional;
  rule.custom = s;

  int s0 = 1;
  while (static_cast<long long>(s0) * s0 < m) ++s0;

  Rat C = C_opt.value_or(Rat(5, 4));
  if (C <= 1) throw InputError("gen_sqrtm_lb: need C > 1");
  if (C / s0 > Rat(1, 2))
    throw InputError("gen_sqrtm_lb: infeasible parameters, need C/ceil(sqrt(m)) <= 1/2");

  // Position with minimal gap among the first s0 gaps (1-indexed).
  int t = 1;
  for (int j = 2; j <= s0; ++j)
    if (s.s[j - 1] - s.s[j] < s.s[t - 1] - s.s[t]) t = j;

  Rat x = Rat(1) / (1 - gamma);
  Rat fA = C / s0;
  Rat fB = 1 - fA;

  // Minimal C' with sw(a') >= sw(bloc member), below the strict cap keeping
  // a* ahead of a' in group (B).
  Rat lower = x * s0 * Rat(t - 1, m - 2);
  Rat denom = (1 - gamma) / s0 + gamma * fB / s0;
  Rat rhs = 1 - gamma * x * fA;
  if (rhs <= 0)
    throw VerificationError("gen_sqrtm_lb: infeasible parameters (gamma too close to 1 for C)");
  Rat upper = rhs / denom;
  if (lower >= upper)
    throw VerificationError("gen_sqrtm_lb: no valid C' for these parameters");
  Rat Cprime = Cprime_opt.value_or(lower + (upper - lower) / 100);
  if (Cprime <= 0 || Cprime < lower || Cprime >= upper)
    throw VerificationError("gen_sqrtm_lb: supplied C' outside the valid range (" +
                            rat_to_string(lower) + ", " + rat_to_string(upper) + ")");
  Rat y = Cprime / s0;

  ConstructionSpec spec;
  spec.family = "sqrtm_lb";
  spec.target_rule = rule;
  spec.m = m;
  spec.gamma = gamma;

  std::vector<int> bloc;
  for (int a = 2; a < m; ++a) bloc.push_back(a);
  auto orders = cons_detail::cycle_orders(bloc);

  std::vector<Rat> uA(m, Rat(0));
  uA[0] = x;
  uA[1] = 1;
  for (int a : bloc) uA[a] = x;

  std::vector<cons_detail::RowBuild> rows;
  Rat fa = fA / Rat((long long)orders.size());
  Rat fb = fB / Rat((long long)orders.size());
  for (const auto& o : orders) {
    rows.push_back({fa, uA, cons_detail::concat({{0}, o, {1}})});
    // Group (B): first t-1 bloc members (utility x), a*, a', the rest.
    std::vector<int> head(o.begin(), o.begin() + (t - 1));
    std::vector<int> tail(o.begin() + (t - 1), o.end());
    std::vector<Rat> uB(m, Rat(0));
    uB[1] = 1;
    uB[0] = y;
    for (int a : head) uB[a] = x;
    rows.push_back({fb, uB, cons_detail::concat({head, {1}, {0}, tail})});
  }
  cons_detail::assemble(spec, rows);

  spec.predicted_winner = 0;
  Rat sw_aprime = x * fA + fB * y;
  spec.predicted_distortion = Rat(1) / sw_aprime;
  spec.limit_distortion = spec.predicted_distortion;  // Theta(sqrt(m)); constants existential
  spec.roles = {{"a_prime", "0"}, {"a_star", "1"}, {"bloc", "2.." + std::to_string(m - 1)},
                {"t", std::to_string(t)}, {"C", rat_to_string(C)}, {"Cprime", rat_to_string(Cprime)}};
  spec.notes.push_back("s0 = ceil(sqrt(m)) = " + std::to_string(s0));

  cons_detail::enforce(spec, {
      {0, 0, 2, "group A: a' weakly ahead of bloc", true},
      {0, 2, 1, "group A: bloc weakly ahead of a*", true},
      {1, 1, 0, "group B: a* ahead of a'"},
      {1, 0, (t + 1 < m ? spec.predicted.rows[1].order[t + 1] : 1),
       "group B: a' weakly ahead of trailing bloc", true},
  });
  return spec;
}

// ---------------------------------------------------------------------------
// Verifier: recomputes everything the construction claims.
// ---------------------------------------------------------------------------

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool ok = true;
  std::string first_failure;
  Rat realized_distortion;
  bool realized_infinite = false;

  void add(const std::string& name, bool pass, const std::string& detail = "") {
    checks.push_back({name, pass, detail});
    if (!pass && ok) {
      ok = false;
      first_failure = name + (detail.empty() ? "" : (": " + detail));
    }
  }
};

/// Confirms the predicted profile is consistent, the predicted winner is the
/// rule winner, and the realized distortion equals the closed form exactly
/// (and approaches the limit). Family-specific claims are re-derived.
inline VerifyReport verify_construction(const ConstructionSpec& spec,
                                        TiePolicy policy = TiePolicy::lex(),
                                        Rat limit_tolerance = Rat(0)) {
  VerifyReport rep;
  auto v = ps_values(spec.gamma_vec, spec.u);
  const auto& sw = v.welfare;

  rep.add("predicted-profile-consistent", profile_consistent(v, spec.predicted));

  int winner = -1;
  try {
    winner = spec.target_rule.winner(spec.predicted);
    rep.add("predicted-winner", winner == spec.predicted_winner,
            "rule selects " + std::to_string(winner) + ", predicted " +
                std::to_string(spec.predicted_winner));
  } catch (const std::exception& e) {
    rep.add("predicted-winner", false, e.what());
    return rep;
  }

  int astar = argmax_welfare(sw);
  if (sw[astar] == 0) {
    rep.add("welfare-nonzero", false, "all alternatives have zero welfare");
    return rep;
  }
  if (sw[winner] == 0) {
    rep.realized_infinite = true;
    rep.add("realized-distortion-exact", false, "winner has zero welfare");
    return rep;
  }
  rep.realized_distortion = sw[astar] / sw[winner];
  rep.add("realized-distortion-exact", rep.realized_distortion == spec.predicted_distortion,
          rat_to_string(rep.realized_distortion) + " vs predicted " +
              rat_to_string(spec.predicted_distortion));

  if (!spec.limit_infinite) {
    Rat gap = rep.realized_distortion - spec.limit_distortion;
    if (gap < 0) gap = -gap;
    bool near = limit_tolerance == 0 ? true : gap <= limit_tolerance * spec.limit_distortion;
    rep.add("distortion-near-limit", near,
            "realized " + rat_to_string(rep.realized_distortion) + ", limit " +
                rat_to_string(spec.limit_distortion));
  }

  if (spec.trivial) return rep;

  // Family-specific claims.
  if (spec.family == "copeland_lb") {
    auto cr = copeland(spec.predicted);
    bool scores_ok = cr.scores[0] == spec.m - 2 && cr.scores[1] == spec.m - 3 &&
                     cr.scores[2] == spec.m - 3 && cr.scores[3] == spec.m - 3;
    for (int a = 4; a < spec.m; ++a) scores_ok = scores_ok && cr.scores[a] == 0;
    rep.add("copeland-scores", scores_ok, "a' gets m-2, a* and A get m-3, zero bloc gets 0");
    rep.add("copeland-winner-unique", cr.tied.size() == 1 && cr.tied[0] == 0);
    auto uc = uncovered_set(spec.predicted);
    rep.add("a-prime-in-uncovered-set",
            std::find(uc.begin(), uc.end(), 0) != uc.end());
    // Under the lexicographic tie policy the sup is still attained at a'.
    auto id = instance_distortion(spec.target_rule, spec.gamma_vec, spec.u, policy);
    rep.add("policy-distortion-matches", !id.infinite && id.value == rep.realized_distortion,
            "instance_distortion under the given policy");
  } else if (spec.family == "slater_lb") {
    auto sr = slater(spec.predicted);
    rep.add("slater-winner", sr.winner == 0 && sr.tied.size() == 1);
    rep.add("slater-min-disagreements", sr.disagreements == 1,
            std::to_string(sr.disagreements) + " vs expected 1");
    // Candidate rankings over {a', A, a*} with the zero bloc last.
    std::vector<int> blocA{2, 3}, blocZ;
    for (int a = 4; a < spec.m; ++a) blocZ.push_back(a);
    std::vector<Ranking> cands = {
        cons_detail::concat({{0}, blocA, {1}, blocZ}), cons_detail::concat({{0}, {1}, blocA, blocZ}),
        cons_detail::concat({{1}, {0}, blocA, blocZ}), cons_detail::concat({{1}, blocA, {0}, blocZ}),
        cons_detail::concat({blocA, {1}, {0}, blocZ}), cons_detail::concat({blocA, {0}, {1}, blocZ}),
    };
    std::vector<long long> expected{1, 3, 2, 4, 2, 3};
    auto tally = pairwise_tally(spec.predicted);
    long long n = spec.predicted.voters();
    bool counts_ok = true;
    std::string detail;
    for (size_t i = 0; i < cands.size(); ++i) {
      long long d = slater_disagreements(cands[i], tally, n);
      detail += (i ? "," : "") + std::to_string(d);
      counts_ok = counts_ok && d == expected[i];
    }
    rep.add("slater-candidate-disagreements", counts_ok, detail + " vs expected 1,3,2,4,2,3");
    auto id = instance_distortion(spec.target_rule, spec.gamma_vec, spec.u, policy);
    rep.add("policy-distortion-matches", !id.infinite && id.value == rep.realized_distortion);
  } else if (spec.family == "plurality_lb") {
    std::vector<long long> firsts(spec.m, 0);
    for (size_t i = 0; i < spec.predicted.rows.size(); ++i)
      firsts[spec.predicted.rows[i].order[0]] += spec.predicted.counts[i];
    bool ok = true;
    for (int a = 1; a < spec.m; ++a) ok = ok && firsts[0] >= firsts[a];
    rep.add("plurality-first-counts", ok, "a' holds a weak plurality of first places");
  } else if (spec.family == "maximin_lb") {
    auto mr = maximin(spec.predicted);
    long long n = spec.predicted.voters();
    long long expected = n * (spec.m - 2) / (spec.m - 1);
    bool all_equal = true;
    for (int a = 0; a < spec.m; ++a) all_equal = all_equal && mr.minimax[a] == expected;
    rep.add("maximin-worst-defeats", all_equal,
            "every alternative's worst defeat is n(m-2)/(m-1) = " + std::to_string(expected));
    rep.add("maximin-a-prime-among-winners",
            std::find(mr.tied.begin(), mr.tied.end(), 0) != mr.tied.end());
  } else if (spec.family == "scoring_gap_lb" || spec.family == "sqrtm_lb") {
    auto pr = positional_winner(spec.predicted, spec.target_rule.score_vector(spec.m));
    rep.add("positional-points-favor-a-prime", pr.winner == 0);
    if (spec.family == "sqrtm_lb") {
      bool beats_astar = pr.points[0] > pr.points[1];
      rep.add("a-prime-outscores-a-star", beats_astar,
              rat_to_string(pr.points[0]) + " vs " + rat_to_string(pr.points[1]));
    }
  }

  return rep;
}

}  // namespace psvote
