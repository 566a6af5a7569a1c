#include "doctest.h"
#include "oracles.hpp"
#include "psvote/core.hpp"

#include <set>

using namespace psvote;

namespace {

UtilityMatrix<Rat> rmat(std::vector<std::vector<Rat>> rows) {
  return UtilityMatrix<Rat>::dense(std::move(rows));
}

}  // namespace

TEST_CASE("ps_values: gamma = 0 reproduces the utility matrix") {
  Rng rng(11);
  auto u = oracle::random_matrix(rng, 4, 3);
  auto v = ps_values(PSVector<Rat>::uniform(Rat(0), 4), u);
  for (size_t i = 0; i < u.rows.size(); ++i)
    for (int a = 0; a < u.m; ++a) CHECK(v.rows[i][a] == u.rows[i][a]);
}

TEST_CASE("ps_values: gamma = 1 collapses every row to average welfare") {
  Rng rng(12);
  auto u = oracle::random_matrix(rng, 5, 4);
  auto v = ps_values(PSVector<Rat>::uniform(Rat(1), 5), u);
  for (int a = 0; a < u.m; ++a) {
    Rat avg = oracle::welfare(u, a) / Rat(u.voters());
    for (size_t i = 0; i < u.rows.size(); ++i) CHECK(v.rows[i][a] == avg);
  }
}

TEST_CASE("ps_values: 2x2 identity at gamma = 1/2") {
  auto u = rmat({{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
  auto v = ps_values(PSVector<Rat>::uniform(Rat(1, 2), 2), u);
  CHECK(v.rows[0][0] == Rat(3, 4));
  CHECK(v.rows[0][1] == Rat(1, 4));
  CHECK(v.rows[1][0] == Rat(1, 4));
  CHECK(v.rows[1][1] == Rat(3, 4));
}

TEST_CASE("ps_values: agrees with the scalar oracle on random instances") {
  Rng rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + (int)rng.below(5), m = 2 + (int)rng.below(4);
    auto u = oracle::random_matrix(rng, n, m);
    auto g = oracle::random_gamma(rng, n);
    auto v = ps_values(g, u);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < m; ++a) CHECK(v.rows[i][a] == oracle::ps_value(u, g, i, a));
  }
}

TEST_CASE("ps_values: dimension mismatch rejected") {
  auto u = rmat({{Rat(1), Rat(0)}});
  CHECK_THROWS_AS(ps_values(PSVector<Rat>::uniform(Rat(0), 3), u), InputError);
}

TEST_CASE("ps_values: uniform gamma preserves column sums") {
  Rng rng(13);
  auto u = oracle::random_matrix(rng, 6, 4);
  for (int k = 0; k <= 4; ++k) {
    auto v = ps_values(PSVector<Rat>::uniform(Rat(k, 4), 6), u);
    for (int a = 0; a < u.m; ++a) {
      Rat col(0);
      for (size_t i = 0; i < v.rows.size(); ++i) col += v.rows[i][a] * Rat(v.counts[i]);
      CHECK(col == oracle::welfare(u, a));
    }
  }
}

TEST_CASE("social_welfare: the two-bloc introduction instance") {
  // 50 voters value a at 1, 50 value b at 100; the ratio is 100.
  auto u = UtilityMatrix<Rat>::weighted(2, {{Rat(1), Rat(0)}, {Rat(0), Rat(100)}}, {50, 50});
  CHECK(social_welfare(u, 0) == Rat(50));
  CHECK(social_welfare(u, 1) == Rat(5000));
  CHECK(social_welfare(u, 1) / social_welfare(u, 0) == Rat(100));
}

TEST_CASE("social_welfare: zeros, column sums, and range errors") {
  auto zero = rmat({{Rat(0), Rat(0)}, {Rat(0), Rat(0)}});
  CHECK(social_welfare(zero, 0) == Rat(0));
  CHECK(social_welfare(zero, 1) == Rat(0));
  auto u = rmat({{Rat(1, 5), Rat(4, 5)}, {Rat(3, 10), Rat(1, 10)}});
  CHECK(social_welfare(u, 0) == Rat(1, 2));
  CHECK(social_welfare(u, 1) == Rat(9, 10));
  CHECK_THROWS_AS(social_welfare(u, 2), InputError);
  CHECK_THROWS_AS(social_welfare(u, -1), InputError);
}

TEST_CASE("consistent profiles: distinct values force a unique profile") {
  auto u = rmat({{Rat(3), Rat(2), Rat(1)}, {Rat(1), Rat(5), Rat(2)}});
  auto v = ps_values(PSVector<Rat>::uniform(Rat(0), 2), u);
  for (auto policy : {TiePolicy::lex(), TiePolicy::adversarial()}) {
    Profile p = consistent_profile(v, policy);
    CHECK(p.rows[0].order == std::vector<int>{0, 1, 2});
    CHECK(p.rows[1].order == std::vector<int>{1, 2, 0});
  }
  ConsistentProfiles<Rat> it(v, TiePolicy::enumerate());
  CHECK(it.total_count() == 1);
  int count = 0;
  while (it.next()) ++count;
  CHECK(count == 1);
}

TEST_CASE("consistent profiles: constant row enumerates all m! rankings") {
  auto u = rmat({{Rat(1), Rat(1), Rat(1)}});
  auto v = ps_values(PSVector<Rat>::uniform(Rat(1, 2), 1), u);
  ConsistentProfiles<Rat> it(v, TiePolicy::enumerate());
  CHECK(it.total_count() == 6);
  std::set<std::vector<int>> seen;
  while (auto p = it.next()) {
    CHECK(profile_consistent(v, *p));
    seen.insert(p->rows[0].order);
  }
  CHECK(seen.size() == 6);
}

TEST_CASE("consistent profiles: lexicographic tie-break by index") {
  auto u = rmat({{Rat(1, 2), Rat(1, 2), Rat(1, 10)}});
  auto v = ps_values(PSVector<Rat>::uniform(Rat(0), 1), u);
  Profile p = consistent_profile(v, TiePolicy::lex());
  CHECK(p.rows[0].order == std::vector<int>{0, 1, 2});
}

TEST_CASE("consistent profiles: adversarial heuristic puts low welfare first among ties") {
  // Voter 0 is indifferent between 0 and 1; alternative 1 has lower welfare.
  auto u = UtilityMatrix<Rat>::weighted(2, {{Rat(1), Rat(1)}, {Rat(1), Rat(0)}}, {1, 1});
  auto v = ps_values(PSVector<Rat>::uniform(Rat(0), 2), u);
  Profile p = consistent_profile(v, TiePolicy::adversarial());
  CHECK(p.rows[0].order == std::vector<int>{1, 0});
}

TEST_CASE("consistent profiles: enumeration cap overflow is reported") {
  // 10 voters all fully indifferent: 6^10 consistent profiles.
  auto u = UtilityMatrix<Rat>::weighted(3, {{Rat(1), Rat(1), Rat(1)}}, {10});
  auto v = ps_values(PSVector<Rat>::uniform(Rat(0), 1), u);
  ConsistentProfiles<Rat> it(v, TiePolicy::enumerate(1000));
  CHECK(it.overflowed());
  CHECK(!it.next().has_value());
}

TEST_CASE("consistent profiles: identical voters may break ties differently") {
  auto u = UtilityMatrix<Rat>::weighted(2, {{Rat(1), Rat(1)}}, {2});
  auto v = ps_values(PSVector<Rat>::uniform(Rat(0), 1), u);
  ConsistentProfiles<Rat> it(v, TiePolicy::enumerate());
  CHECK(it.total_count() == 4);
  int mixed = 0, count = 0;
  while (auto p = it.next()) {
    ++count;
    CHECK(p->voters() == 2);
    if (p->rows.size() == 2 && !(p->rows[0] == p->rows[1])) ++mixed;
  }
  CHECK(count == 4);
  CHECK(mixed == 2);
}

TEST_CASE("consistent profiles respect every strict comparison (random)") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + (int)rng.below(4), m = 2 + (int)rng.below(3);
    auto u = oracle::random_matrix(rng, n, m, 6, 4);
    auto g = oracle::random_gamma(rng, n);
    auto v = ps_values(g, u);
    ConsistentProfiles<Rat> it(v, TiePolicy::enumerate(2000));
    if (it.overflowed()) continue;
    while (auto p = it.next()) {
      for (size_t i = 0; i < p->rows.size(); ++i)
        for (int j = 0; j < m; ++j)
          for (int k = j + 1; k < m; ++k) {
            int a = p->rows[i].order[j], b = p->rows[i].order[k];
            CHECK(v.rows[i][a] >= v.rows[i][b]);
          }
    }
  }
}

TEST_CASE("pairwise_tally matches the definition") {
  Profile single = Profile::from_rankings(3, {Ranking{{0, 1, 2}}});
  auto t = pairwise_tally(single);
  CHECK(t[0][1] == 1);
  CHECK(t[0][2] == 1);
  CHECK(t[1][2] == 1);
  CHECK(t[1][0] == 0);
  CHECK(t[2][0] == 0);
  CHECK(t[2][1] == 0);

  Profile opposite = Profile::from_rankings(2, {Ranking{{0, 1}}, Ranking{{1, 0}}});
  auto t2 = pairwise_tally(opposite);
  CHECK(t2[0][1] == 1);
  CHECK(t2[1][0] == 1);
}

TEST_CASE("pairwise_tally: cyclic three-voter profile has every alternative losing 2-1") {
  Profile p = cyclic_groups_profile(3, 3);
  auto t = pairwise_tally(p);
  for (int a = 0; a < 3; ++a) {
    long long worst = 0;
    for (int b = 0; b < 3; ++b)
      if (b != a) worst = std::max(worst, t[b][a]);
    CHECK(worst == 2);
  }
  CHECK(!condorcet_winner(p).has_value());
}

TEST_CASE("cyclic groups: worst defeat is (m-1)/m of the electorate") {
  for (int m = 2; m <= 5; ++m) {
    Profile p = cyclic_groups_profile(4LL * m, m);
    auto t = pairwise_tally(p);
    for (int a = 0; a < m; ++a) {
      long long worst = 0;
      for (int b = 0; b < m; ++b)
        if (b != a) worst = std::max(worst, t[b][a]);
      CHECK(worst == 4LL * (m - 1));
    }
  }
}

TEST_CASE("pairwise_tally: antisymmetry and oracle agreement (random)") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + (int)rng.below(6), m = 2 + (int)rng.below(4);
    Profile p = oracle::random_profile(rng, n, m);
    auto t = pairwise_tally(p);
    auto t_oracle = oracle::tally(p);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        CHECK(t[a][b] == t_oracle[a][b]);
        if (a != b) CHECK(t[a][b] + t[b][a] == p.voters());
      }
    CHECK(t[0][0] == 0);
  }
}

TEST_CASE("condorcet_winner: unanimous, cyclic, and majority cases") {
  Profile unanimous =
      Profile::from_rankings(3, {Ranking{{2, 0, 1}}, Ranking{{2, 0, 1}}, Ranking{{2, 0, 1}}});
  CHECK(condorcet_winner(unanimous) == 2);

  Profile p =
      Profile::from_rankings(3, {Ranking{{0, 1, 2}}, Ranking{{0, 2, 1}}, Ranking{{1, 0, 2}}});
  CHECK(condorcet_winner(p) == oracle::condorcet(p));
  CHECK(condorcet_winner(p) == 0);
}

TEST_CASE("condorcet_winner agrees with the oracle (random)") {
  Rng rng(41);
  for (int trial = 0; trial < 80; ++trial) {
    Profile p = oracle::random_profile(rng, 1 + (int)rng.below(7), 2 + (int)rng.below(4));
    CHECK(condorcet_winner(p) == oracle::condorcet(p));
  }
}

TEST_CASE("type validation: utilities, gamma, policies") {
  CHECK_THROWS_AS(rmat({{Rat(-1), Rat(0)}}), InputError);
  CHECK_THROWS_AS(UtilityMatrix<Rat>::dense({}), InputError);
  CHECK_THROWS_AS(rmat({{Rat(1)}}), InputError);  // m = 1
  CHECK_THROWS_AS(PSVector<Rat>({Rat(3, 2)}), InputError);
  CHECK_THROWS_AS(PSVector<Rat>({Rat(-1, 2)}), InputError);
  auto u = rmat({{Rat(1), Rat(0)}});
  auto v = ps_values(PSVector<Rat>::uniform(Rat(0), 1), u);
  CHECK_THROWS_AS(ConsistentProfiles<Rat>(v, TiePolicy{TiePolicy::Kind::enumerate_all, 0}),
                  InputError);
}

TEST_CASE("weighted rows: everything agrees with the expanded matrix") {
  auto weighted =
      UtilityMatrix<Rat>::weighted(3, {{Rat(2), Rat(1), Rat(0)}, {Rat(0), Rat(1), Rat(2)}}, {3, 2});
  auto expanded = rmat({{Rat(2), Rat(1), Rat(0)},
                        {Rat(2), Rat(1), Rat(0)},
                        {Rat(2), Rat(1), Rat(0)},
                        {Rat(0), Rat(1), Rat(2)},
                        {Rat(0), Rat(1), Rat(2)}});
  CHECK(weighted.voters() == expanded.voters());
  for (int a = 0; a < 3; ++a) CHECK(social_welfare(weighted, a) == social_welfare(expanded, a));
  auto vw = ps_values(PSVector<Rat>::uniform(Rat(1, 3), 2), weighted);
  auto ve = ps_values(PSVector<Rat>::uniform(Rat(1, 3), 5), expanded);
  CHECK(vw.rows[0] == ve.rows[0]);
  CHECK(vw.rows[1] == ve.rows[4]);
  Profile pw = consistent_profile(vw, TiePolicy::lex());
  Profile pe = consistent_profile(ve, TiePolicy::lex());
  CHECK(pairwise_tally(pw) == pairwise_tally(pe));
}

TEST_CASE("double path: tie tolerance treats near-equal PS-values as tied") {
  auto u = UtilityMatrix<double>::dense({{0.1 + 0.2, 0.3, 0.0}});
  auto v = ps_values(PSVector<double>::uniform(0.0, 1), u);
  ConsistentProfiles<double> it(v, TiePolicy::enumerate());
  CHECK(it.total_count() == 2);  // 0.30000000000000004 vs 0.3 tie within 1e-12
}
