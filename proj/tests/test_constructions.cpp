#include "doctest.h"
#include "oracles.hpp"
#include "psvote/constructions.hpp"

using namespace psvote;

namespace {

double rel_err(const Rat& value, const Rat& target) {
  return std::abs(to_double(Rat(value - target))) / std::abs(to_double(target));
}

}  // namespace

TEST_CASE("copeland_lb: gamma = 2/3 approaches 4, gamma = 1/2 approaches 9") {
  Rat eps(1, 1000000);
  auto spec = gen_copeland_lb(Rat(2, 3), 6, eps);
  CHECK(spec.limit_distortion == Rat(4));
  CHECK(rel_err(spec.predicted_distortion, Rat(4)) < 1e-3);
  auto rep = verify_construction(spec, TiePolicy::lex(), Rat(1, 100));
  CHECK(rep.ok);
  CHECK(rep.realized_distortion == spec.predicted_distortion);

  auto spec9 = gen_copeland_lb(Rat(1, 2), 8, eps);
  CHECK(spec9.limit_distortion == Rat(9));
  CHECK(rel_err(spec9.predicted_distortion, Rat(9)) < 1e-3);
  CHECK(verify_construction(spec9, TiePolicy::lex(), Rat(1, 100)).ok);
}

TEST_CASE("copeland_lb: majority structure matches the proof") {
  auto spec = gen_copeland_lb(Rat(2, 3), 7, Rat(1, 1000));
  auto t = pairwise_tally(spec.predicted);
  long long n = spec.predicted.voters();
  // a* beats a'; a' beats the bloc; each bloc member beats a*.
  CHECK(dominates(t, n, 1, 0));
  CHECK(dominates(t, n, 0, 2));
  CHECK(dominates(t, n, 0, 3));
  CHECK(dominates(t, n, 2, 1));
  CHECK(dominates(t, n, 3, 1));
  // within-bloc elections are exact ties
  CHECK(2 * t[2][3] == n);
  CHECK(2 * t[4][5] == n);
  CHECK(2 * t[4][6] == n);
  auto cr = copeland(spec.predicted);
  CHECK(cr.scores[0] == 5);
  CHECK(cr.tied == std::vector<int>{0});
  // The zero-welfare bloc never wins a pairwise election.
  for (int a = 4; a < 7; ++a) CHECK(cr.scores[a] == 0);
}

TEST_CASE("copeland_lb: uncovered set on the construction (mechanical truth)") {
  // The covering definition keeps a* uncovered here: its only dominators are
  // the bloc members, and neither dominates a'. The winner a' is uncovered.
  auto spec = gen_copeland_lb(Rat(2, 3), 6, Rat(1, 1000));
  auto uc = uncovered_set(spec.predicted);
  CHECK(std::find(uc.begin(), uc.end(), 0) != uc.end());
  CHECK(uc == std::vector<int>{0, 1, 2, 3});
  auto weak = uncovered_set(spec.predicted, true);
  CHECK(weak == std::vector<int>{0, 1});
}

TEST_CASE("copeland_lb: validation errors and the trivial gamma = 1 case") {
  CHECK_THROWS_AS(gen_copeland_lb(Rat(2, 3), 5, Rat(1, 1000)), InputError);
  CHECK_THROWS_AS(gen_copeland_lb(Rat(0), 6, Rat(1, 1000)), InputError);
  CHECK_THROWS_AS(gen_copeland_lb(Rat(2, 3), 6, Rat(1, 2)), InputError);
  auto trivial = gen_copeland_lb(Rat(1), 6, Rat(1, 1000));
  CHECK(trivial.trivial);
  CHECK(trivial.predicted_distortion == Rat(1));
  CHECK(verify_construction(trivial).ok);
}

TEST_CASE("copeland_lb: an over-large eps breaks a named inequality") {
  // gamma close to 1 makes the group-A margin collapse for coarse eps.
  CHECK_THROWS_WITH_AS(gen_copeland_lb(Rat(99, 100), 6, Rat(24, 100)),
                       doctest::Contains("inequality"), VerificationError);
}

TEST_CASE("slater_lb: winner, disagreement counts, and distortion") {
  auto spec = gen_slater_lb(Rat(2, 3), 6, Rat(1, 1000000));
  CHECK(spec.limit_distortion == Rat(4));
  CHECK(rel_err(spec.predicted_distortion, Rat(4)) < 1e-3);
  auto rep = verify_construction(spec, TiePolicy::lex(), Rat(1, 100));
  CHECK(rep.ok);
  auto sr = slater(spec.predicted);
  CHECK(sr.winner == 0);
  CHECK(sr.disagreements == 1);
  CHECK(sr.best.order == std::vector<int>{0, 2, 3, 1, 4, 5});
}

TEST_CASE("slater_lb: m = 7 keeps the same closed form") {
  auto spec = gen_slater_lb(Rat(2, 3), 7, Rat(1, 10000));
  CHECK(spec.limit_distortion == Rat(4));
  CHECK(verify_construction(spec, TiePolicy::lex(), Rat(1, 50)).ok);
  auto ref = oracle::slater(spec.predicted);
  CHECK(ref.best == 1);
  for (const auto& r : ref.optima) CHECK(r.order[0] == 0);
}

TEST_CASE("scoring_gap_lb: borda m = 5 at gamma = 1/2 approaches 5") {
  auto spec =
      gen_scoring_gap_lb(make_score_vector(RuleKind::borda, 5), Rat(1, 2), Rat(1, 1000000));
  CHECK(spec.limit_distortion == Rat(5));
  CHECK(rel_err(spec.predicted_distortion, Rat(5)) < 1e-3);
  CHECK(verify_construction(spec, TiePolicy::lex(), Rat(1, 100)).ok);
}

TEST_CASE("scoring_gap_lb: large top gaps give the loose (1-g)/(g D) + 1 form") {
  // Delta = 3/4: limit (1/2)/((1/2)(3/4)) + 1 = 7/3.
  ScoreVector s{{Rat(1), Rat(1, 4), Rat(1, 8), Rat(0)}};
  auto spec = gen_scoring_gap_lb(s, Rat(1, 2), Rat(1, 1000));
  CHECK(spec.limit_distortion == Rat(7, 3));
  CHECK(verify_construction(spec, TiePolicy::lex(), Rat(1, 10)).ok);
  // Delta = 1 (plurality) leaves no room for the second group; the formula
  // value (1-g)/g + 1 is not tight anyway (the dedicated family supersedes).
  CHECK_THROWS_AS(
      gen_scoring_gap_lb(make_score_vector(RuleKind::plurality, 4), Rat(1, 2), Rat(1, 1000)),
      InputError);
}

TEST_CASE("scoring_gap_lb: veto diverges as eps shrinks") {
  auto spec4 = gen_scoring_gap_lb(make_score_vector(RuleKind::veto, 4), Rat(1, 2), Rat(1, 10000));
  CHECK(spec4.limit_infinite);
  CHECK(spec4.predicted_distortion > Rat(1000));
  CHECK(verify_construction(spec4).ok);
  auto spec5 = gen_scoring_gap_lb(make_score_vector(RuleKind::veto, 4), Rat(1, 2), Rat(1, 100000));
  CHECK(spec5.predicted_distortion > Rat(10000));
}

TEST_CASE("plurality_lb: closed forms at several parameters") {
  auto spec = gen_plurality_lb(Rat(1, 2), 5, Rat(1, 1000000));
  CHECK(spec.limit_distortion == Rat(6));
  CHECK(rel_err(spec.predicted_distortion, Rat(6)) < 1e-3);
  CHECK(verify_construction(spec, TiePolicy::lex(), Rat(1, 100)).ok);

  auto spec13 = gen_plurality_lb(Rat(1, 4), 4, Rat(1, 100000));
  CHECK(spec13.limit_distortion == Rat(13));
  CHECK(verify_construction(spec13, TiePolicy::lex(), Rat(1, 100)).ok);

  auto trivial = gen_plurality_lb(Rat(1), 5, Rat(1, 100));
  CHECK(trivial.trivial);
  CHECK(trivial.limit_distortion == Rat(1));
}

TEST_CASE("plurality_lb: eps = 0 realizes the bound exactly under index ties") {
  auto spec = gen_plurality_lb(Rat(1, 2), 4, Rat(0));
  CHECK(spec.predicted_distortion == Rat(5));
  CHECK(spec.limit_distortion == Rat(5));
  CHECK(verify_construction(spec).ok);
}

TEST_CASE("maximin_lb: exact rational distortion, no perturbation") {
  auto spec = gen_maximin_lb(Rat(1, 2), 5);
  CHECK(spec.predicted_distortion == Rat(5));
  CHECK(spec.u.voters() == 16);
  auto rep = verify_construction(spec);
  CHECK(rep.ok);
  CHECK(rep.realized_distortion == Rat(5));

  auto spec7 = gen_maximin_lb(Rat(1, 3), 4);
  CHECK(spec7.predicted_distortion == Rat(7));
  CHECK(verify_construction(spec7).ok);

  CHECK(gen_maximin_lb(Rat(1), 5).trivial);
}

TEST_CASE("maximin_lb: every alternative's worst defeat equals n(m-2)/(m-1)") {
  auto spec = gen_maximin_lb(Rat(2, 5), 6);
  auto mr = maximin(spec.predicted);
  long long n = spec.predicted.voters();
  for (int a = 0; a < 6; ++a) CHECK(mr.minimax[a] == n * 4 / 5);
  CHECK(mr.winner == 0);
}

TEST_CASE("sqrtm_lb: borda m = 16 with solved constants") {
  auto spec = gen_sqrtm_lb(make_score_vector(RuleKind::borda, 16), Rat(0), 16);
  auto rep = verify_construction(spec);
  CHECK(rep.ok);
  CHECK(to_double(spec.predicted_distortion) >= 2.0);  // >= sqrt(16)/2
  auto pr = positional_winner(spec.predicted, spec.target_rule.score_vector(16));
  CHECK(pr.winner == 0);
}

TEST_CASE("sqrtm_lb: valid for positive gamma and for piecewise") {
  auto spec = gen_sqrtm_lb(make_score_vector(RuleKind::borda, 16), Rat(1, 4), 16);
  CHECK(verify_construction(spec).ok);

  auto pw = gen_sqrtm_lb(make_score_vector(RuleKind::piecewise, 64), Rat(1, 4), 64);
  CHECK(verify_construction(pw).ok);
  double dist = to_double(pw.predicted_distortion);
  // Between the sqrt(m) lower and m^(2/3) upper envelopes for these constants.
  CHECK(dist >= 1.0);
  CHECK(dist <= 16.0 * std::cbrt(64.0 * 64.0));
}

TEST_CASE("sqrtm_lb: infeasible parameters are refused") {
  // gamma so high that no C' satisfies the group-B ordering for this C.
  CHECK_THROWS_AS(gen_sqrtm_lb(make_score_vector(RuleKind::borda, 16), Rat(9, 10), 16, Rat(2)),
                  VerificationError);
  CHECK_THROWS_AS(gen_sqrtm_lb(make_score_vector(RuleKind::borda, 16), Rat(0), 16, Rat(1, 2)),
                  InputError);  // C <= 1
  CHECK_THROWS_AS(gen_sqrtm_lb(make_score_vector(RuleKind::borda, 16), Rat(0), 16, Rat(3)),
                  InputError);  // C/s0 > 1/2
}

TEST_CASE("constructions: predicted profiles are consistent across a parameter grid") {
  for (int mi = 6; mi <= 8; ++mi)
    for (long long gnum : {1, 2, 3}) {
      Rat g(gnum, 4);
      auto spec = gen_copeland_lb(g, mi, Rat(1, 10000));
      CHECK(profile_consistent(ps_values(spec.gamma_vec, spec.u), spec.predicted));
    }
  for (int mi = 3; mi <= 6; ++mi)
    for (long long gnum : {1, 2, 3}) {
      auto spec = gen_maximin_lb(Rat(gnum, 4), mi == 3 ? 3 : mi);
      CHECK(profile_consistent(ps_values(spec.gamma_vec, spec.u), spec.predicted));
      auto specp = gen_plurality_lb(Rat(gnum, 4), mi, Rat(1, 1000));
      CHECK(profile_consistent(ps_values(specp.gamma_vec, specp.u), specp.predicted));
    }
}

TEST_CASE("constructions: realized distortion converges to the closed form as eps -> 0") {
  double prev_gap = 1e9;
  for (long long den : {1000, 10000, 100000}) {
    auto spec = gen_copeland_lb(Rat(1, 2), 6, Rat(1, den));
    double gap = std::abs(to_double(spec.predicted_distortion) - 9.0);
    CHECK(gap < prev_gap);
    CHECK(gap <= 100.0 * 9.0 / den);
    prev_gap = gap;
  }
}

TEST_CASE("verify_construction: structured diff names the first failed claim") {
  auto spec = gen_maximin_lb(Rat(1, 2), 5);
  spec.predicted_winner = 3;  // sabotage
  auto rep = verify_construction(spec);
  CHECK(!rep.ok);
  CHECK(rep.first_failure.find("predicted-winner") == 0);

  auto spec2 = gen_plurality_lb(Rat(1, 2), 4, Rat(1, 100));
  spec2.predicted_distortion += 1;
  auto rep2 = verify_construction(spec2);
  CHECK(!rep2.ok);
  CHECK(rep2.first_failure.find("realized-distortion-exact") == 0);
}

TEST_CASE("verify_construction: degenerate all-zero welfare is reported") {
  ConstructionSpec spec;
  spec.family = "degenerate";
  spec.m = 2;
  spec.gamma = Rat(1, 2);
  spec.u = UtilityMatrix<Rat>::dense({{Rat(0), Rat(0)}});
  spec.gamma_vec = PSVector<Rat>::uniform(Rat(1, 2), 1);
  spec.predicted = Profile::from_rankings(2, {Ranking{{0, 1}}});
  spec.predicted_winner = 0;
  spec.target_rule.kind = RuleKind::plurality;
  auto rep = verify_construction(spec);
  CHECK(!rep.ok);
  CHECK(rep.first_failure.find("welfare-nonzero") == 0);
}

TEST_CASE("construction instances agree with instance_distortion under lex ties") {
  // For the copeland/slater families the lexicographic tie policy still
  // attains the construction's value.
  auto spec = gen_copeland_lb(Rat(2, 3), 6, Rat(1, 10000));
  auto id = instance_distortion(spec.target_rule, spec.gamma_vec, spec.u, TiePolicy::lex());
  CHECK(id.value == spec.predicted_distortion);
  auto specs = gen_slater_lb(Rat(1, 2), 6, Rat(1, 10000));
  auto ids = instance_distortion(specs.target_rule, specs.gamma_vec, specs.u, TiePolicy::lex());
  CHECK(ids.value == specs.predicted_distortion);
  // Under the tied-winner semantics the value can only weakly grow.
  DistortionOptions opts;
  opts.include_tied_winners = true;
  auto idt = instance_distortion(spec.target_rule, spec.gamma_vec, spec.u, TiePolicy::lex(), opts);
  CHECK(idt.value >= id.value);
}
