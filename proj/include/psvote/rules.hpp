#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "psvote/core.hpp"

namespace psvote {

enum class RuleKind {
  plurality,
  borda,
  veto,
  piecewise,
  copeland,
  slater,
  maximin,
  custom_positional,
};

inline std::string rule_kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::plurality: return "plurality";
    case RuleKind::borda: return "borda";
    case RuleKind::veto: return "veto";
    case RuleKind::piecewise: return "piecewise";
    case RuleKind::copeland: return "copeland";
    case RuleKind::slater: return "slater";
    case RuleKind::maximin: return "maximin";
    case RuleKind::custom_positional: return "positional";
  }
  return "?";
}

/// Weakly decreasing scores with s_1 = 1 and s_m = 0. Kept rational so that
/// point totals (and hence winners) are exact for every profile.
struct ScoreVector {
  std::vector<Rat> s;

  int m() const { return static_cast<int>(s.size()); }

  void validate() const {
    if (s.size() < 2) throw InputError("ScoreVector: need m >= 2");
    if (s.front() != 1 || s.back() != 0)
      throw InputError("ScoreVector: need s_1 = 1 and s_m = 0");
    for (size_t j = 0; j + 1 < s.size(); ++j)
      if (s[j] < s[j + 1]) throw InputError("ScoreVector: scores must be weakly decreasing");
  }

  /// Delta_f = s_1 - s_2, the gap between the first two positions.
  Rat top_gap() const { return s[0] - s[1]; }
};

/// PIECEWISE keeps k = ceil(m^{2/3}) linearly spaced nonzero slots. For m <= 3
/// that many slots would collide with the s_m = 0 normalization, so k is
/// clamped to m-1 (the rule then coincides with BORDA).
inline int piecewise_nonzero_slots(int m) {
  int k = 1;
  while (static_cast<long long>(k) * k * k < static_cast<long long>(m) * m) ++k;
  return std::min(k, m - 1);
}

inline ScoreVector make_score_vector(RuleKind kind, int m) {
  if (m < 2) throw InputError("make_score_vector: need m >= 2");
  ScoreVector sv;
  sv.s.resize(m);
  switch (kind) {
    case RuleKind::plurality:
      sv.s.assign(m, Rat(0));
      sv.s[0] = 1;
      break;
    case RuleKind::borda:
      for (int j = 0; j < m; ++j) sv.s[j] = Rat(m - 1 - j, m - 1);
      break;
    case RuleKind::veto:
      sv.s.assign(m, Rat(1));
      sv.s[m - 1] = 0;
      break;
    case RuleKind::piecewise: {
      int k = piecewise_nonzero_slots(m);
      for (int j = 0; j < m; ++j) sv.s[j] = j < k ? Rat(k - j, k) : Rat(0);
      break;
    }
    default:
      throw InputError("make_score_vector: not a positional rule kind");
  }
  sv.validate();
  return sv;
}

/// Deterministic tie order: winner among tied alternatives is the first in
/// `order`; empty means ascending index.
struct TieBreak {
  std::vector<int> priority;  // priority[a] = rank, lower wins

  static TieBreak by_index() { return {}; }

  int pick(const std::vector<int>& tied) const {
    int best = tied.front();
    for (int a : tied)
      if (rank(a) < rank(best)) best = a;
    return best;
  }

  int rank(int a) const { return priority.empty() ? a : priority[a]; }
};

template <class Score>
std::vector<int> argmax_set(const std::vector<Score>& xs) {
  std::vector<int> best{0};
  for (int a = 1; a < static_cast<int>(xs.size()); ++a) {
    if (xs[a] > xs[best[0]])
      best = {a};
    else if (xs[a] == xs[best[0]])
      best.push_back(a);
  }
  return best;
}

struct PositionalResult {
  int winner = -1;
  std::vector<Rat> points;
  std::vector<int> tied;  // full argmax set before tie-breaking
};

inline std::vector<Rat> positional_points(const Profile& p, const ScoreVector& sv) {
  if (sv.m() != p.m) throw InputError("positional_points: score vector length mismatch");
  std::vector<Rat> pts(p.m, Rat(0));
  for (size_t i = 0; i < p.rows.size(); ++i) {
    const auto& ord = p.rows[i].order;
    for (int j = 0; j < p.m; ++j) pts[ord[j]] += sv.s[j] * Rat(p.counts[i]);
  }
  return pts;
}

inline PositionalResult positional_winner(const Profile& p, const ScoreVector& sv,
                                          const TieBreak& tb = TieBreak::by_index()) {
  PositionalResult res;
  res.points = positional_points(p, sv);
  res.tied = argmax_set(res.points);
  res.winner = tb.pick(res.tied);
  return res;
}

struct CopelandResult {
  int winner = -1;
  std::vector<int> scores;  // number of alternatives strictly pairwise-dominated
  std::vector<int> tied;
};

inline CopelandResult copeland(const Profile& p, const TieBreak& tb = TieBreak::by_index()) {
  auto tally = pairwise_tally(p);
  const long long n = p.voters();
  CopelandResult res;
  res.scores.assign(p.m, 0);
  for (int a = 0; a < p.m; ++a)
    for (int b = 0; b < p.m; ++b)
      if (b != a && dominates(tally, n, a, b)) ++res.scores[a];
  res.tied = argmax_set(res.scores);
  res.winner = tb.pick(res.tied);
  return res;
}

/// Uncovered set: alternatives a with no b that pairwise-dominates a together
/// with everything a pairwise-dominates. `weak` switches the covering
/// relation to weak domination (the classic result is stated for tournaments;
/// with pairwise ties either reading is defensible, so both are exposed).
inline std::vector<int> uncovered_set(const Profile& p, bool weak = false) {
  auto tally = pairwise_tally(p);
  const long long n = p.voters();
  auto dom = [&](int a, int b) {
    return weak ? weakly_dominates(tally, n, a, b) : dominates(tally, n, a, b);
  };
  std::vector<int> result;
  for (int a = 0; a < p.m; ++a) {
    bool covered = false;
    for (int b = 0; b < p.m && !covered; ++b) {
      if (b == a || !dom(b, a)) continue;
      bool covers = true;
      for (int c = 0; c < p.m && covers; ++c)
        if (c != a && c != b && dom(a, c) && !dom(b, c)) covers = false;
      if (covers) covered = true;
    }
    if (!covered) result.push_back(a);
  }
  return result;
}

struct SlaterResult {
  int winner = -1;
  Ranking best;              // an optimal ranking whose top element wins tie-break
  long long disagreements = 0;  // pairwise outcomes the ranking contradicts
  std::vector<int> tied;     // top elements across all optimal rankings
};

inline long long slater_disagreements(const Ranking& r,
                                      const std::vector<std::vector<long long>>& tally,
                                      long long n) {
  long long d = 0;
  for (int j = 0; j < r.m(); ++j)
    for (int k = j + 1; k < r.m(); ++k)
      if (dominates(tally, n, r.order[k], r.order[j])) ++d;
  return d;
}

/// Exhaustive m! search; m above the cap is refused rather than approximated.
inline SlaterResult slater(const Profile& p, const TieBreak& tb = TieBreak::by_index(),
                           int max_m = 8) {
  if (p.m > max_m)
    throw BudgetExceeded("slater: m = " + std::to_string(p.m) + " exceeds exhaustive-search cap " +
                         std::to_string(max_m));
  auto tally = pairwise_tally(p);
  const long long n = p.voters();
  std::vector<int> perm(p.m);
  for (int a = 0; a < p.m; ++a) perm[a] = a;
  SlaterResult res;
  res.disagreements = -1;
  std::set<int> tops;
  std::vector<Ranking> optima;
  do {
    Ranking r{perm};
    long long d = slater_disagreements(r, tally, n);
    if (res.disagreements < 0 || d < res.disagreements) {
      res.disagreements = d;
      optima = {r};
      tops = {r.order[0]};
    } else if (d == res.disagreements) {
      optima.push_back(r);
      tops.insert(r.order[0]);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  res.tied.assign(tops.begin(), tops.end());
  res.winner = tb.pick(res.tied);
  for (const auto& r : optima)
    if (r.order[0] == res.winner) {
      res.best = r;
      break;
    }
  return res;
}

struct MaximinResult {
  int winner = -1;
  std::vector<long long> minimax;  // worst pairwise defeat per alternative
  std::vector<int> tied;
};

inline MaximinResult maximin(const Profile& p, const TieBreak& tb = TieBreak::by_index()) {
  if (p.m < 2) throw InputError("maximin: need m >= 2");
  auto tally = pairwise_tally(p);
  MaximinResult res;
  res.minimax.assign(p.m, 0);
  for (int a = 0; a < p.m; ++a) {
    long long worst = 0;
    for (int b = 0; b < p.m; ++b)
      if (b != a) worst = std::max(worst, tally[b][a]);
    res.minimax[a] = worst;
  }
  std::vector<long long> neg(p.m);
  for (int a = 0; a < p.m; ++a) neg[a] = -res.minimax[a];
  res.tied = argmax_set(neg);
  res.winner = tb.pick(res.tied);
  return res;
}

/// A resolute rule plus the pre-tie-break winner set (needed where the
/// distortion is taken as a sup over tied rule winners).
struct RuleId {
  RuleKind kind = RuleKind::plurality;
  ScoreVector custom;  // only for custom_positional
  TieBreak tiebreak;
  int slater_cap = 8;

  std::string name() const { return rule_kind_name(kind); }

  ScoreVector score_vector(int m) const {
    if (kind == RuleKind::custom_positional) {
      if (custom.m() != m) throw InputError("RuleId: custom score vector length mismatch");
      return custom;
    }
    return make_score_vector(kind, m);
  }

  bool positional() const {
    return kind == RuleKind::plurality || kind == RuleKind::borda || kind == RuleKind::veto ||
           kind == RuleKind::piecewise || kind == RuleKind::custom_positional;
  }

  int winner(const Profile& p) const {
    switch (kind) {
      case RuleKind::copeland: return copeland(p, tiebreak).winner;
      case RuleKind::slater: return slater(p, tiebreak, slater_cap).winner;
      case RuleKind::maximin: return maximin(p, tiebreak).winner;
      default: return positional_winner(p, score_vector(p.m), tiebreak).winner;
    }
  }

  std::vector<int> tied_winners(const Profile& p) const {
    switch (kind) {
      case RuleKind::copeland: return copeland(p, tiebreak).tied;
      case RuleKind::slater: return slater(p, tiebreak, slater_cap).tied;
      case RuleKind::maximin: return maximin(p, tiebreak).tied;
      default: return positional_winner(p, score_vector(p.m), tiebreak).tied;
    }
  }
};

inline RuleId rule_from_name(const std::string& name) {
  RuleId r;
  if (name == "plurality") r.kind = RuleKind::plurality;
  else if (name == "borda") r.kind = RuleKind::borda;
  else if (name == "veto") r.kind = RuleKind::veto;
  else if (name == "piecewise") r.kind = RuleKind::piecewise;
  else if (name == "copeland") r.kind = RuleKind::copeland;
  else if (name == "slater") r.kind = RuleKind::slater;
  else if (name == "maximin") r.kind = RuleKind::maximin;
  else throw InputError("unknown rule '" + name + "'");
  return r;
}

/// Any resolute rule, for axiom checkers and searches that must also accept
/// synthetic rules (dictatorships, fixtures).
struct VotingRule {
  std::string name;
  std::function<int(const Profile&)> winner;

  static VotingRule from(const RuleId& id) {
    return {id.name(), [id](const Profile& p) { return id.winner(p); }};
  }

  static VotingRule dictatorship(int voter_row) {
    return {"dictator" + std::to_string(voter_row),
            [voter_row](const Profile& p) { return p.rows.at(voter_row).order[0]; }};
  }

  static VotingRule constant(int alt) {
    return {"constant" + std::to_string(alt), [alt](const Profile&) { return alt; }};
  }
};

inline const std::vector<RuleKind>& standard_rule_kinds() {
  static const std::vector<RuleKind> kinds = {
      RuleKind::plurality, RuleKind::borda,  RuleKind::veto,    RuleKind::piecewise,
      RuleKind::copeland,  RuleKind::slater, RuleKind::maximin,
  };
  return kinds;
}

}  // namespace psvote
