#include "doctest.h"
#include "oracles.hpp"
#include "psvote/rules.hpp"

#include <set>

using namespace psvote;

TEST_CASE("make_score_vector: the four named rules") {
  auto borda3 = make_score_vector(RuleKind::borda, 3);
  CHECK(borda3.s == std::vector<Rat>{Rat(1), Rat(1, 2), Rat(0)});

  auto veto4 = make_score_vector(RuleKind::veto, 4);
  CHECK(veto4.s == std::vector<Rat>{Rat(1), Rat(1), Rat(1), Rat(0)});

  auto plur5 = make_score_vector(RuleKind::plurality, 5);
  CHECK(plur5.s == std::vector<Rat>{Rat(1), Rat(0), Rat(0), Rat(0), Rat(0)});

  // PIECEWISE m = 8: k = ceil(8^(2/3)) = 4 nonzero slots spaced by 1/4.
  auto pw8 = make_score_vector(RuleKind::piecewise, 8);
  CHECK(pw8.s == std::vector<Rat>{Rat(1), Rat(3, 4), Rat(1, 2), Rat(1, 4), Rat(0), Rat(0), Rat(0),
                                  Rat(0)});
}

TEST_CASE("piecewise slot count: ceil(m^(2/3)), clamped so s_m = 0 survives") {
  CHECK(piecewise_nonzero_slots(8) == 4);
  CHECK(piecewise_nonzero_slots(27) == 9);
  CHECK(piecewise_nonzero_slots(64) == 16);
  CHECK(piecewise_nonzero_slots(5) == 3);
  CHECK(piecewise_nonzero_slots(3) == 2);  // clamp: coincides with BORDA
  CHECK(piecewise_nonzero_slots(2) == 1);
  for (int m = 2; m <= 64; ++m) {
    auto sv = make_score_vector(RuleKind::piecewise, m);
    sv.validate();
  }
}

TEST_CASE("score vector validation") {
  ScoreVector bad1{{Rat(1), Rat(2), Rat(0)}};
  CHECK_THROWS_AS(bad1.validate(), InputError);
  ScoreVector bad2{{Rat(1), Rat(1, 2), Rat(1, 4)}};
  CHECK_THROWS_AS(bad2.validate(), InputError);
  CHECK_THROWS_AS(make_score_vector(RuleKind::borda, 1), InputError);
}

TEST_CASE("positional_winner: unanimous profiles and a hand-tallied case") {
  Profile unanimous =
      Profile::from_rankings(3, {Ranking{{1, 2, 0}}, Ranking{{1, 2, 0}}});
  for (auto kind : {RuleKind::plurality, RuleKind::borda, RuleKind::piecewise})
    CHECK(positional_winner(unanimous, make_score_vector(kind, 3)).winner == 1);

  // Rankings abc, abc, bca: plurality gives a two points.
  Profile p = Profile::from_rankings(
      3, {Ranking{{0, 1, 2}}, Ranking{{0, 1, 2}}, Ranking{{1, 2, 0}}});
  auto res = positional_winner(p, make_score_vector(RuleKind::plurality, 3));
  CHECK(res.winner == 0);
  CHECK(res.points[0] == Rat(2));
  CHECK(res.points[1] == Rat(1));
  CHECK(res.points[2] == Rat(0));
}

TEST_CASE("borda point gap: a sub-1/m supporter fraction forces a deficit") {
  // Whenever c is ranked ahead of a by fewer than n/m voters, c's Borda total
  // falls short of a's.
  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + (int)rng.below(7), m = 3 + (int)rng.below(3);
    Profile p = oracle::random_profile(rng, n, m);
    auto pts = positional_points(p, make_score_vector(RuleKind::borda, m));
    auto t = pairwise_tally(p);
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a)
        if (c != a && t[c][a] * m < n) CHECK(pts[c] < pts[a]);
  }
}

TEST_CASE("borda winner equals average-rank minimization") {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + (int)rng.below(6), m = 2 + (int)rng.below(4);
    Profile p = oracle::random_profile(rng, n, m);
    auto res = positional_winner(p, make_score_vector(RuleKind::borda, m));
    // Rank sums, independently accumulated.
    std::vector<long long> rank_sum(m, 0);
    for (size_t i = 0; i < p.rows.size(); ++i)
      for (int j = 0; j < m; ++j) rank_sum[p.rows[i].order[j]] += j * p.counts[i];
    int best = 0;
    for (int a = 1; a < m; ++a)
      if (rank_sum[a] < rank_sum[best]) best = a;
    CHECK(rank_sum[res.winner] == rank_sum[best]);
    CHECK(res.winner == best);  // identical tie order (lowest index)
  }
}

TEST_CASE("copeland: condorcet winners score m-1; cycles flatten") {
  Profile unanimous =
      Profile::from_rankings(4, {Ranking{{2, 0, 1, 3}}, Ranking{{2, 3, 1, 0}}, Ranking{{2, 1, 0, 3}}});
  auto res = copeland(unanimous);
  CHECK(res.winner == 2);
  CHECK(res.scores[2] == 3);

  auto cyc = copeland(cyclic_groups_profile(3, 3));
  CHECK(cyc.scores == std::vector<int>{1, 1, 1});
  CHECK(cyc.tied == std::vector<int>{0, 1, 2});
  CHECK(cyc.winner == 0);
}

TEST_CASE("uncovered_set: condorcet winner is the whole set; cycles keep all") {
  Profile unanimous =
      Profile::from_rankings(3, {Ranking{{1, 0, 2}}, Ranking{{1, 2, 0}}, Ranking{{1, 0, 2}}});
  CHECK(uncovered_set(unanimous) == std::vector<int>{1});
  CHECK(uncovered_set(cyclic_groups_profile(3, 3)) == std::vector<int>{0, 1, 2});
}

TEST_CASE("uncovered_set always contains the copeland winner (random)") {
  Rng rng(61);
  for (int trial = 0; trial < 150; ++trial) {
    Profile p = oracle::random_profile(rng, 1 + (int)rng.below(7), 2 + (int)rng.below(5));
    auto uc = uncovered_set(p);
    auto cw = copeland(p);
    CHECK(std::find(uc.begin(), uc.end(), cw.winner) != uc.end());
    // every tied copeland winner too
    for (int w : cw.tied) CHECK(std::find(uc.begin(), uc.end(), w) != uc.end());
  }
}

TEST_CASE("uncovered_set: weak-covering variant is a subset of the strict one") {
  // Under exact pairwise ties, weak covering can even empty the set (two
  // everywhere-tied alternatives cover each other); only the containment is
  // guaranteed.
  Rng rng(62);
  for (int trial = 0; trial < 80; ++trial) {
    Profile p = oracle::random_profile(rng, 2 + (int)rng.below(5), 3 + (int)rng.below(3));
    auto strict = uncovered_set(p, false);
    auto weak = uncovered_set(p, true);
    for (int a : weak) CHECK(std::find(strict.begin(), strict.end(), a) != strict.end());
    CHECK(!strict.empty());
  }
}

TEST_CASE("slater: transitive majority gives the condorcet order with zero disagreements") {
  Profile unanimous = Profile::from_rankings(
      4, {Ranking{{3, 1, 0, 2}}, Ranking{{3, 1, 0, 2}}, Ranking{{3, 1, 0, 2}}});
  auto res = slater(unanimous);
  CHECK(res.disagreements == 0);
  CHECK(res.best.order == std::vector<int>{3, 1, 0, 2});
  CHECK(res.winner == 3);

  auto cyc = slater(cyclic_groups_profile(3, 3));
  CHECK(cyc.disagreements == 1);
}

TEST_CASE("slater equals the exhaustive-permutation oracle (random, m <= 5)") {
  Rng rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    Profile p = oracle::random_profile(rng, 1 + (int)rng.below(6), 2 + (int)rng.below(4));
    auto res = slater(p);
    auto ref = oracle::slater(p);
    CHECK(res.disagreements == ref.best);
    bool found = false;
    for (const auto& r : ref.optima) found = found || r == res.best;
    CHECK(found);
    int best_top = p.m;
    std::set<int> tops;
    for (const auto& r : ref.optima) tops.insert(r.order[0]);
    for (int a : tops) best_top = std::min(best_top, a);
    CHECK(res.winner == best_top);
    CHECK(std::vector<int>(tops.begin(), tops.end()) == res.tied);
  }
}

TEST_CASE("slater refuses m beyond the exhaustive cap") {
  Profile p = cyclic_groups_profile(9, 9);
  CHECK_THROWS_AS(slater(p), BudgetExceeded);
}

TEST_CASE("maximin: condorcet winners win; cycles tie at 2 of 3") {
  Profile p =
      Profile::from_rankings(3, {Ranking{{0, 1, 2}}, Ranking{{0, 2, 1}}, Ranking{{1, 0, 2}}});
  auto res = maximin(p);
  CHECK(res.winner == 0);  // condorcet winner: worst defeat below n/2
  CHECK(res.minimax[0] == 1);

  auto cyc = maximin(cyclic_groups_profile(3, 3));
  CHECK(cyc.minimax == std::vector<long long>{2, 2, 2});
  CHECK(cyc.winner == 0);
}

TEST_CASE("maximin winner is ranked ahead of everything by at least n/m voters") {
  // Exhaustive over all 3-voter, 3-alternative profiles, then sampled larger.
  auto rankings = oracle::all_rankings(3);
  for (const auto& r1 : rankings)
    for (const auto& r2 : rankings)
      for (const auto& r3 : rankings) {
        Profile p = Profile::from_rankings(3, {r1, r2, r3});
        auto res = maximin(p);
        auto t = pairwise_tally(p);
        long long least = p.voters();
        for (int a = 0; a < 3; ++a)
          if (a != res.winner) least = std::min(least, t[res.winner][a]);
        CHECK(least * 3 >= p.voters());
        // Some alternative always clears the n/m floor.
        bool exists = false;
        for (int c = 0; c < 3; ++c) {
          long long mn = p.voters();
          for (int a = 0; a < 3; ++a)
            if (a != c) mn = std::min(mn, t[c][a]);
          if (mn * 3 >= p.voters()) exists = true;
        }
        CHECK(exists);
      }
  Rng rng(81);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + (int)rng.below(8), m = 2 + (int)rng.below(4);
    Profile p = oracle::random_profile(rng, n, m);
    auto res = maximin(p);
    auto t = pairwise_tally(p);
    for (int a = 0; a < m; ++a)
      if (a != res.winner) CHECK(t[res.winner][a] * m >= p.voters());
  }
}

TEST_CASE("condorcet consistency of copeland, slater, maximin (exhaustive n <= 4, m = 3)") {
  auto rankings = oracle::all_rankings(3);
  for (int n = 1; n <= 4; ++n) {
    std::vector<size_t> idx(n, 0);
    for (;;) {
      std::vector<Ranking> rows;
      for (int i = 0; i < n; ++i) rows.push_back(rankings[idx[i]]);
      Profile p = Profile::from_rankings(3, rows);
      if (auto cw = condorcet_winner(p)) {
        CHECK(copeland(p).winner == *cw);
        CHECK(slater(p).winner == *cw);
        CHECK(maximin(p).winner == *cw);
      }
      int i = 0;
      while (i < n && ++idx[i] == rankings.size()) idx[i++] = 0;
      if (i == n) break;
    }
  }
}

TEST_CASE("custom tie-break order is honored") {
  Profile p = cyclic_groups_profile(3, 3);  // everything ties
  TieBreak tb;
  tb.priority = {2, 0, 1};  // alternative 1 wins ties
  CHECK(copeland(p, tb).winner == 1);
  CHECK(maximin(p, tb).winner == 1);
  CHECK(positional_winner(p, make_score_vector(RuleKind::borda, 3), tb).winner == 1);
}

TEST_CASE("rule_from_name round-trips and rejects unknowns") {
  for (const char* name : {"plurality", "borda", "veto", "piecewise", "copeland", "slater",
                           "maximin"}) {
    CHECK(rule_from_name(name).name() == name);
  }
  CHECK_THROWS_AS(rule_from_name("approval"), InputError);
}
