#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psvote/distortion.hpp"

namespace psvote {

/// Effective PS-values under per-alternative public spirit and multiplicative
/// misestimation: v~_i(a) = (1 - G_ia) d_ia u_i(a) + G_ia e_ia sw(a, U)/n.
template <class T>
PSValueMatrix<T> effective_ps_values(const PSMatrix<T>& gamma, const UtilityMatrix<T>& u,
                                     const ErrorMatrices<T>& errors) {
  if (gamma.rows.size() != u.rows.size() || errors.delta.size() != u.rows.size())
    throw InputError("effective_ps_values: shape mismatch");
  if (gamma.m != u.m || errors.m != u.m) throw InputError("effective_ps_values: m mismatch");
  errors.validate();
  PSValueMatrix<T> v;
  v.m = u.m;
  v.counts = u.counts;
  v.n = u.voters();
  v.welfare = welfare_vector(u);
  v.provenance = "effective_ps_values";
  std::vector<T> avg(u.m);
  for (int a = 0; a < u.m; ++a) avg[a] = v.welfare[a] / T(v.n);
  v.rows.resize(u.rows.size());
  for (size_t i = 0; i < u.rows.size(); ++i) {
    v.rows[i].resize(u.m);
    for (int a = 0; a < u.m; ++a) {
      const T& g = gamma.rows[i][a];
      v.rows[i][a] =
          (T(1) - g) * errors.delta[i][a] * u.rows[i][a] + g * errors.eta[i][a] * avg[a];
    }
  }
  return v;
}

/// Robust key-lemma bound: for every pair with at least one supporter,
/// sw(b)/sw(a) <= d* (1-gmin)/gmin * n/|{i: a > b}| + e*/gmin.
template <class T>
std::vector<KeyLemmaViolation<T>> check_robust_lemma(const PSMatrix<T>& gamma,
                                                     const UtilityMatrix<T>& u,
                                                     const ErrorMatrices<T>& errors,
                                                     const Profile& p, T tolerance = T(0)) {
  T gmin = gamma.min();
  if (!(gmin > T(0))) throw InputError("check_robust_lemma: gamma_min must be positive");
  auto v = effective_ps_values(gamma, u, errors);
  if (!profile_consistent(v, p))
    throw VerificationError("check_robust_lemma: profile inconsistent with effective PS-values");
  const auto& sw = v.welfare;
  auto tally = pairwise_tally(p);
  const T n = T(p.voters());
  T dstar = errors.delta_star();
  T estar = errors.eta_star();
  T z = dstar * (T(1) - gmin) / gmin;
  std::vector<KeyLemmaViolation<T>> out;
  for (int a = 0; a < p.m; ++a) {
    if (!(sw[a] > T(0))) continue;
    for (int b = 0; b < p.m; ++b) {
      if (b == a || tally[a][b] < 1) continue;
      T lhs = sw[b] / sw[a];
      T rhs = z * n / T(tally[a][b]) + estar / gmin;
      if (lhs > rhs + tolerance) out.push_back({a, b, lhs, rhs});
    }
  }
  return out;
}

/// Robust universal upper bound (measured or known kappa):
/// d*(1-gmin)/(gmin k) + e*/gmin.
template <class T>
T robust_universal_bound(const T& gamma_min, const T& kappa, const T& delta_star,
                         const T& eta_star) {
  if (!(gamma_min > T(0)) || !(kappa > T(0)))
    throw InputError("robust_universal_bound: gamma_min and kappa must be positive");
  return delta_star * (T(1) - gamma_min) / (gamma_min * kappa) + eta_star / gamma_min;
}

/// Robust uncovered-set bound: (2 d* (1-gmin)/gmin + e*/gmin)^2.
template <class T>
T robust_uncovered_bound(const T& gamma_min, const T& delta_star, const T& eta_star) {
  if (!(gamma_min > T(0))) throw InputError("robust_uncovered_bound: gamma_min must be positive");
  T inner = T(2) * delta_star * (T(1) - gamma_min) / gamma_min + eta_star / gamma_min;
  return inner * inner;
}

// ---------------------------------------------------------------------------
// Randomized search for high-distortion robust instances (lower estimates).
// ---------------------------------------------------------------------------

struct RobustSearchResult {
  double best = 1.0;
  bool infinite = false;
  UtilityMatrix<double> witness_u;
  ErrorMatrices<double> witness_errors;
  long long evaluations = 0;
};

namespace robust_detail {

inline double objective(const RuleId& rule, const PSMatrix<double>& gamma,
                        const UtilityMatrix<double>& u, const ErrorMatrices<double>& errors,
                        bool* infinite) {
  auto v = effective_ps_values(gamma, u, errors);
  const auto& sw = v.welfare;
  int astar = argmax_welfare(sw);
  if (sw[astar] <= 0) return -1;
  double best = -1;
  for (auto k : {TiePolicy::Kind::lexicographic, TiePolicy::Kind::welfare_adversarial}) {
    Profile p = consistent_profile(v, TiePolicy{k, 1});
    int w = rule.winner(p);
    if (sw[w] <= 0) {
      if (infinite) *infinite = true;
      return std::numeric_limits<double>::infinity();
    }
    best = std::max(best, sw[astar] / sw[w]);
  }
  return best;
}

}  // namespace robust_detail

/// Hill-climbs over (U, delta, eta) with delta in [1, d*]^{n x m} and eta in
/// [1, e*]^{n x m}, maximizing sw(a*, U)/sw(f(pi), U) over profiles consistent
/// with the effective PS-values. Restart 0 is seeded with the tightness
/// sketch: full error on a designated alternative, none elsewhere.
inline RobustSearchResult robust_distortion(const RuleId& rule, const PSMatrix<double>& gamma,
                                            double delta_star, double eta_star, int n, int m,
                                            long long budget, uint64_t seed, int restarts = 6) {
  if (delta_star < 1 || eta_star < 1)
    throw InputError("robust_distortion: delta*, eta* must be >= 1");
  if (static_cast<int>(gamma.rows.size()) != n || gamma.m != m)
    throw InputError("robust_distortion: gamma shape mismatch");
  RobustSearchResult result;
  long long per_restart = std::max<long long>(1, budget / std::max(1, restarts));
  for (int restart = 0; restart < restarts; ++restart) {
    Rng rng(seed, static_cast<uint64_t>(restart) + 101);
    std::vector<std::vector<double>> rows(n, std::vector<double>(m));
    for (auto& r : rows)
      for (auto& x : r) x = rng.uniform();
    UtilityMatrix<double> u = UtilityMatrix<double>::dense(rows);
    ErrorMatrices<double> err = ErrorMatrices<double>::ones(m, n);
    if (restart == 0) {
      int target = 0;  // tightness sketch: boost the would-be winner's estimates
      for (int i = 0; i < n; ++i) {
        err.delta[i][target] = delta_star;
        err.eta[i][target] = eta_star;
      }
    }
    bool inf = false;
    double cur = robust_detail::objective(rule, gamma, u, err, &inf);
    ++result.evaluations;
    auto consider = [&](double val, bool infinite, const UtilityMatrix<double>& cu,
                        const ErrorMatrices<double>& ce) {
      if (infinite && !result.infinite) {
        result.infinite = true;
        result.witness_u = cu;
        result.witness_errors = ce;
      } else if (!result.infinite && val > result.best) {
        result.best = val;
        result.witness_u = cu;
        result.witness_errors = ce;
      }
    };
    if (cur >= 0) consider(cur, inf, u, err);
    for (long long step = 1; step < per_restart; ++step) {
      UtilityMatrix<double> cu = u;
      ErrorMatrices<double> ce = err;
      int move = static_cast<int>(rng.below(5));
      size_t i = static_cast<size_t>(rng.below(n));
      int a = static_cast<int>(rng.below(m));
      switch (move) {
        case 0: cu.rows[i][a] = std::max(0.0, cu.rows[i][a] + rng.uniform(-0.5, 0.5)); break;
        case 1: cu.rows[i][a] *= std::exp(rng.uniform(-1.5, 1.5)); break;
        case 2: cu.rows[i][a] = 0.0; break;
        case 3: ce.delta[i][a] = 1.0 + (delta_star - 1.0) * rng.uniform(); break;
        case 4: ce.eta[i][a] = 1.0 + (eta_star - 1.0) * rng.uniform(); break;
      }
      bool cinf = false;
      double val = robust_detail::objective(rule, gamma, cu, ce, &cinf);
      ++result.evaluations;
      if (val > cur) {
        u = cu;
        err = ce;
        cur = val;
        consider(val, cinf, u, err);
      }
      if (result.evaluations >= budget) break;
    }
    if (result.evaluations >= budget) break;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Zeroed-gamma experiment: degrade a c-fraction of voters to gamma = 0,
// adversarially among those ranking the winner over a*, and compare observed
// distortion against the degraded bounds.
// ---------------------------------------------------------------------------

struct ZeroedGammaReport {
  std::string rule;
  double gamma = 0;
  double c = 0;
  long long zero_budget = 0;        // voters eligible for zeroing
  double best_observed = 1.0;
  bool observed_infinite = false;
  std::optional<double> general_bound;    // (1-g)/(g (1-c) kappa) + 1
  std::optional<double> uncovered_bound;  // ((1-g)/(g (1/2 - c)) + 1)^2
  bool diverged = false;                  // c >= 1/2 for uncovered-set rules
  bool within_bounds = true;
  long long evaluations = 0;
};

inline ZeroedGammaReport zeroed_gamma_experiment(const RuleId& rule, double gamma_level, double c,
                                                 int n, int m, long long budget, uint64_t seed) {
  if (c < 0 || c >= 1) throw InputError("zeroed_gamma_experiment: need 0 <= c < 1");
  if (!(gamma_level > 0) || gamma_level > 1)
    throw InputError("zeroed_gamma_experiment: need gamma in (0,1]");
  ZeroedGammaReport rep;
  rep.rule = rule.name();
  rep.gamma = gamma_level;
  rep.c = c;

  bool uncovered_rule = rule.kind == RuleKind::copeland || rule.kind == RuleKind::slater;
  bool kappa_known = rule.kind == RuleKind::plurality || rule.kind == RuleKind::borda ||
                     rule.kind == RuleKind::maximin;
  if (!uncovered_rule && !kappa_known)
    throw InputError("zeroed_gamma_experiment: no kappa characterization for rule '" +
                     rule.name() + "'");
  double kappa = 1.0 / m;
  if (uncovered_rule) {
    if (c < 0.5)
      rep.uncovered_bound = std::pow((1 - gamma_level) / (gamma_level * (0.5 - c)) + 1, 2);
    else
      rep.diverged = true;
    rep.zero_budget = static_cast<long long>(c * n);
  } else {
    rep.general_bound = (1 - gamma_level) / (gamma_level * (1 - c) * kappa) + 1;
    rep.zero_budget = static_cast<long long>(c * kappa * n);
  }

  Rng rng(seed, 777);
  for (long long it = 0; it < budget; ++it) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(m));
    for (auto& r : rows)
      for (auto& x : r) x = rng.below(4) == 0 ? 0.0 : rng.uniform();
    UtilityMatrix<double> u;
    try {
      u = UtilityMatrix<double>::dense(rows);
    } catch (const InputError&) {
      continue;
    }
    auto sw = welfare_vector(u);
    int astar = argmax_welfare(sw);
    if (sw[astar] <= 0) continue;
    // Full-gamma profile decides who gets zeroed.
    PSVector<double> g = PSVector<double>::uniform(gamma_level, n);
    auto v = ps_values(g, u);
    Profile p = consistent_profile(v, TiePolicy::lex());
    int w = rule.winner(p);
    PSVector<double> gz = g;
    long long zeroed = 0;
    for (int i = 0; i < n && zeroed < rep.zero_budget; ++i)
      if (w != astar && p.rows[i].prefers(w, astar)) {
        gz.values[i] = 0.0;
        ++zeroed;
      }
    auto vz = ps_values(gz, u);
    Profile pz = consistent_profile(vz, TiePolicy::lex());
    int wz = rule.winner(pz);
    ++rep.evaluations;
    if (sw[wz] <= 0) {
      rep.observed_infinite = true;
    } else {
      rep.best_observed = std::max(rep.best_observed, sw[astar] / sw[wz]);
    }
  }
  double bound = rep.uncovered_bound ? *rep.uncovered_bound
                                     : rep.general_bound.value_or(
                                           std::numeric_limits<double>::infinity());
  if (rep.diverged) bound = std::numeric_limits<double>::infinity();
  rep.within_bounds = !rep.observed_infinite && rep.best_observed <= bound + 1e-9;
  return rep;
}

}  // namespace psvote
