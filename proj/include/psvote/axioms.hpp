#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psvote/distortion.hpp"

namespace psvote {

/// Verdict of a brute-force axiom check at a fixed (n, m). A "violated"
/// verdict always carries a replayable witness (the first one in enumeration
/// order, which is deterministic).
struct AxiomReport {
  std::string axiom;
  std::string rule;
  int n = 0, m = 0;
  bool holds = true;
  std::vector<Profile> witnesses;  // profile (and modified profile, when relevant)
  unsigned long long evaluations = 0;
  std::optional<int> dictator;

  void violate(std::initializer_list<Profile> ws) {
    if (holds) {
      holds = false;
      witnesses.assign(ws.begin(), ws.end());
    }
  }
};

namespace axiom_detail {

inline unsigned long long profile_space(int n, int m, unsigned long long budget,
                                        bool squared = false) {
  unsigned long long r = detail::factorial_sat(m);
  unsigned long long total = 1;
  for (int i = 0; i < n; ++i) total = detail::saturating_mul(total, r);
  unsigned long long work = squared ? detail::saturating_mul(total, total) : total;
  if (work > budget)
    throw BudgetExceeded("axiom check: profile space exceeds budget (axioms are universal claims; "
                         "no sampling fallback)");
  return total;
}

inline AxiomReport start(const std::string& axiom, const VotingRule& rule, int n, int m) {
  AxiomReport rep;
  rep.axiom = axiom;
  rep.rule = rule.name;
  rep.n = n;
  rep.m = m;
  return rep;
}

}  // namespace axiom_detail

/// Weak unanimity: an alternative ranked behind some fixed alternative by
/// every voter never wins.
inline AxiomReport check_weak_unanimity(const VotingRule& rule, int n, int m,
                                        unsigned long long budget = 10000000ULL) {
  auto rep = axiom_detail::start("weak-unanimity", rule, n, m);
  axiom_detail::profile_space(n, m, budget);
  detail::for_each_profile(n, m, budget, [&](const Profile& p) {
    if (!rep.holds) return;
    int w = rule.winner(p);
    ++rep.evaluations;
    auto tally = pairwise_tally(p);
    for (int a = 0; a < m; ++a)
      if (a != w && tally[a][w] == p.voters()) rep.violate({p});
  });
  return rep;
}

/// Monotonicity: promoting the winner by one adjacent swap preserves it.
inline AxiomReport check_monotonic(const VotingRule& rule, int n, int m,
                                   unsigned long long budget = 10000000ULL) {
  auto rep = axiom_detail::start("monotonic", rule, n, m);
  axiom_detail::profile_space(n, m, budget, true);
  detail::for_each_profile(n, m, budget, [&](const Profile& p) {
    if (!rep.holds) return;
    int w = rule.winner(p);
    ++rep.evaluations;
    for (size_t i = 0; i < p.rows.size() && rep.holds; ++i)
      for (int j = 0; j + 1 < m && rep.holds; ++j)
        if (p.rows[i].order[j + 1] == w) {
          Profile q = p;
          std::swap(q.rows[i].order[j], q.rows[i].order[j + 1]);
          ++rep.evaluations;
          if (rule.winner(q) != w) rep.violate({p, q});
        }
  });
  return rep;
}

/// Swap invariance: adjacently swapping two non-winning alternatives in one
/// ranking preserves the winner.
inline AxiomReport check_swap_invariant(const VotingRule& rule, int n, int m,
                                        unsigned long long budget = 10000000ULL) {
  auto rep = axiom_detail::start("swap-invariant", rule, n, m);
  axiom_detail::profile_space(n, m, budget, true);
  detail::for_each_profile(n, m, budget, [&](const Profile& p) {
    if (!rep.holds) return;
    int w = rule.winner(p);
    ++rep.evaluations;
    for (size_t i = 0; i < p.rows.size() && rep.holds; ++i)
      for (int j = 0; j + 1 < m && rep.holds; ++j) {
        if (p.rows[i].order[j] == w || p.rows[i].order[j + 1] == w) continue;
        Profile q = p;
        std::swap(q.rows[i].order[j], q.rows[i].order[j + 1]);
        ++rep.evaluations;
        if (rule.winner(q) != w) rep.violate({p, q});
      }
  });
  return rep;
}

/// Maskin monotonicity: if the winner's pairwise standing weakly improves
/// against everything for every voter, it stays the winner.
inline AxiomReport check_maskin(const VotingRule& rule, int n, int m,
                                unsigned long long budget = 10000000ULL) {
  auto rep = axiom_detail::start("maskin", rule, n, m);
  axiom_detail::profile_space(n, m, budget, true);
  detail::for_each_profile(n, m, budget, [&](const Profile& p) {
    if (!rep.holds) return;
    int w = rule.winner(p);
    ++rep.evaluations;
    auto pos_p = std::vector<std::vector<int>>();
    for (const auto& r : p.rows) pos_p.push_back(r.positions());
    detail::for_each_profile(n, m, budget, [&](const Profile& q) {
      if (!rep.holds) return;
      // w's dominion must weakly grow voter by voter.
      for (int i = 0; i < n; ++i) {
        const auto pos_q = q.rows[i].positions();
        for (int b = 0; b < m; ++b)
          if (b != w && pos_p[i][w] < pos_p[i][b] && pos_q[w] >= pos_q[b]) return;
      }
      ++rep.evaluations;
      if (rule.winner(q) != w) rep.violate({p, q});
    });
  });
  return rep;
}

/// Dictatorship: some voter's top choice always wins.
inline AxiomReport check_dictatorship(const VotingRule& rule, int n, int m,
                                      unsigned long long budget = 10000000ULL) {
  auto rep = axiom_detail::start("dictatorship", rule, n, m);
  axiom_detail::profile_space(n, m, budget);
  std::vector<bool> candidate(n, true);
  detail::for_each_profile(n, m, budget, [&](const Profile& p) {
    int w = rule.winner(p);
    ++rep.evaluations;
    for (int i = 0; i < n; ++i)
      if (candidate[i] && p.rows[i].order[0] != w) candidate[i] = false;
  });
  rep.holds = false;
  for (int i = 0; i < n; ++i)
    if (candidate[i]) {
      rep.holds = true;  // "holds" = is a dictatorship
      rep.dictator = i;
      break;
    }
  return rep;
}

/// Condorcet consistency: the Condorcet winner is selected whenever it exists.
inline AxiomReport check_condorcet_consistent(const VotingRule& rule, int n, int m,
                                              unsigned long long budget = 10000000ULL) {
  auto rep = axiom_detail::start("condorcet-consistent", rule, n, m);
  axiom_detail::profile_space(n, m, budget);
  detail::for_each_profile(n, m, budget, [&](const Profile& p) {
    if (!rep.holds) return;
    auto cw = condorcet_winner(p);
    if (!cw) return;
    ++rep.evaluations;
    if (rule.winner(p) != *cw) rep.violate({p});
  });
  return rep;
}

inline AxiomReport check_axiom(const std::string& axiom, const VotingRule& rule, int n, int m,
                               unsigned long long budget = 10000000ULL) {
  if (axiom == "weak-unanimity") return check_weak_unanimity(rule, n, m, budget);
  if (axiom == "monotonic") return check_monotonic(rule, n, m, budget);
  if (axiom == "swap-invariant") return check_swap_invariant(rule, n, m, budget);
  if (axiom == "maskin") return check_maskin(rule, n, m, budget);
  if (axiom == "dictatorship") return check_dictatorship(rule, n, m, budget);
  if (axiom == "condorcet-consistent") return check_condorcet_consistent(rule, n, m, budget);
  throw InputError("unknown axiom '" + axiom + "'");
}

inline const std::vector<std::string>& axiom_names() {
  static const std::vector<std::string> names = {
      "weak-unanimity", "monotonic", "swap-invariant", "maskin", "dictatorship",
      "condorcet-consistent"};
  return names;
}

}  // namespace psvote
