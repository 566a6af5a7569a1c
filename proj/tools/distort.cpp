// distort: command-line front end for the public-spirited voting toolkit.
//
// Exit codes: 0 success, 1 verification mismatch, 2 input error,
// 3 budget exceeded. PSVOTE_THREADS controls search parallelism.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "psvote/axioms.hpp"
#include "psvote/io.hpp"
#include "psvote/monotonicity.hpp"
#include "psvote/robustness.hpp"

using namespace psvote;

namespace {

int env_threads() {
  const char* v = std::getenv("PSVOTE_THREADS");
  if (!v) return 1;
  int t = std::atoi(v);
  return t >= 1 ? t : 1;
}

TiePolicy tie_policy_from(const std::string& name, long long cap) {
  if (name == "lex") return TiePolicy{TiePolicy::Kind::lexicographic, cap};
  if (name == "enumerate") return TiePolicy{TiePolicy::Kind::enumerate_all, cap};
  if (name == "adversarial") return TiePolicy{TiePolicy::Kind::welfare_adversarial, cap};
  throw InputError("unknown tie policy '" + name + "' (lex|enumerate|adversarial)");
}

void write_report(const Report& rep, const std::string& format, const std::string& out_path) {
  if (out_path.empty())
    emit_report(rep, format, std::cout);
  else
    emit_report_file(rep, format, out_path);
}

std::string bound_to_string(const BoundReport<Rat>& b, bool upper) {
  if (upper) {
    if (b.upper) return rat_to_string(*b.upper);
    if (!b.upper_asymptotic.empty()) return b.upper_asymptotic;
    return "unbounded";
  }
  if (b.lower) return rat_to_string(*b.lower);
  if (b.lower_infinite) return "inf";
  if (!b.lower_asymptotic.empty()) return b.lower_asymptotic;
  return "";
}

// ----- eval ---------------------------------------------------------------

int cmd_eval(const std::string& rule_name, const std::string& instance_path,
             const std::string& tie, long long cap, bool tied_winners, const std::string& format,
             const std::string& out_path) {
  RuleId rule = rule_from_name(rule_name);
  Instance inst = load_instance(instance_path);
  PSVector<Rat> gamma = inst.gamma_or_throw();
  DistortionOptions dopts;
  dopts.include_tied_winners = tied_winners;
  auto res = instance_distortion(rule, gamma, inst.u, tie_policy_from(tie, cap), dopts);
  Rat gmin = gamma.min();
  auto bounds = theoretical_bounds<Rat>(rule.kind, gmin, inst.u.m);

  Report rep;
  rep.command = "eval";
  rep.config = "rule=" + rule_name + " instance=" + instance_path + " tie=" + tie;
  rep.columns = {"instance", "rule", "gamma_min", "observed", "theory_upper", "theory_lower",
                 "exact_flag"};
  rep.rows.push_back({instance_path, rule_name, rat_to_string(gmin),
                      res.infinite ? "inf" : rat_to_string(res.value),
                      bound_to_string(bounds, true), bound_to_string(bounds, false),
                      res.exact ? "exact" : "heuristic"});
  write_report(rep, format, out_path);
  return 0;
}

// ----- kappa ---------------------------------------------------------------

int cmd_kappa(const std::string& rule_name, int n, int m, unsigned long long budget, bool sampled,
              long long samples, uint64_t seed, const std::string& format,
              const std::string& out_path) {
  RuleId rule = rule_from_name(rule_name);
  KappaResult k = sampled ? kappa_sampled(rule, n, m, samples, seed)
                          : kappa_bruteforce(rule, n, m, budget);
  Report rep;
  rep.command = "kappa";
  rep.config = "rule=" + rule_name + " n=" + std::to_string(n) + " m=" + std::to_string(m);
  if (sampled) rep.seed = seed;
  rep.columns = {"rule", "n", "m", "kappa", "profiles", "exact_flag"};
  rep.rows.push_back({rule_name, std::to_string(n), std::to_string(m), rat_to_string(k.value),
                      std::to_string(k.profiles), k.exact ? "exact" : "sampled"});
  write_report(rep, format, out_path);
  return 0;
}

// ----- search ---------------------------------------------------------------

int cmd_search(const std::string& rule_name, const std::string& gamma_str, int n, int m,
               long long budget, uint64_t seed, int restarts, const std::string& format,
               const std::string& out_path, const std::string& witness_path) {
  RuleId rule = rule_from_name(rule_name);
  Rat g = parse_rational(gamma_str);
  SearchOptions opts;
  opts.budget = budget;
  opts.seed = seed;
  opts.restarts = restarts;
  opts.threads = env_threads();
  auto gd = PSVector<double>::uniform(to_double(g), n);
  auto res = worst_case_search(rule, gd, n, m, opts);
  auto bounds = theoretical_bounds<Rat>(rule.kind, g, m);

  Report rep;
  rep.command = "search";
  rep.config = "rule=" + rule_name + " gamma=" + gamma_str + " n=" + std::to_string(n) +
               " m=" + std::to_string(m) + " budget=" + std::to_string(budget) +
               " restarts=" + std::to_string(restarts);
  rep.seed = seed;
  rep.columns = {"instance", "rule", "gamma_min", "observed", "theory_upper", "theory_lower",
                 "exact_flag"};
  rep.rows.push_back({"searched", rule_name, gamma_str,
                      res.best.infinite ? "inf" : format_double(res.best.value),
                      bound_to_string(bounds, true), bound_to_string(bounds, false), "heuristic"});
  write_report(rep, format, out_path);
  if (!witness_path.empty()) {
    Instance w;
    std::vector<std::vector<Rat>> rows;
    for (const auto& r : res.witness_u.rows) {
      std::vector<Rat> rr;
      for (double x : r) rr.push_back(rat_from_double(x));
      rows.push_back(rr);
    }
    w.u = UtilityMatrix<Rat>::weighted(m, rows, res.witness_u.counts);
    w.gamma = PSVector<Rat>::uniform(g, rows.size());
    save_instance(w, witness_path, false);
  }
  return 0;
}

// ----- construct -------------------------------------------------------------

ConstructionSpec build_construction(const std::string& family, const Rat& gamma, int m,
                                    const Rat& eps, const std::string& score_rule) {
  if (family == "copeland_lb") return gen_copeland_lb(gamma, m, eps);
  if (family == "slater_lb") return gen_slater_lb(gamma, m, eps);
  if (family == "plurality_lb") return gen_plurality_lb(gamma, m, eps);
  if (family == "maximin_lb") return gen_maximin_lb(gamma, m);
  if (family == "scoring_gap_lb") {
    RuleId r = rule_from_name(score_rule);
    if (!r.positional()) throw InputError("scoring_gap_lb needs a positional --score-rule");
    return gen_scoring_gap_lb(make_score_vector(r.kind, m), gamma, eps);
  }
  if (family == "sqrtm_lb") {
    RuleId r = rule_from_name(score_rule);
    if (!r.positional()) throw InputError("sqrtm_lb needs a positional --score-rule");
    return gen_sqrtm_lb(make_score_vector(r.kind, m), gamma, m);
  }
  throw InputError("unknown family '" + family +
                   "' (copeland_lb|slater_lb|scoring_gap_lb|plurality_lb|maximin_lb|sqrtm_lb)");
}

int cmd_construct(const std::string& family, const std::string& gamma_str, int m,
                  const std::string& eps_str, const std::string& score_rule,
                  const std::string& out_path, bool verify, const std::string& format,
                  const std::string& report_path) {
  Rat gamma = parse_rational(gamma_str);
  Rat eps = parse_rational(eps_str);
  ConstructionSpec spec = build_construction(family, gamma, m, eps, score_rule);
  if (!out_path.empty()) save_instance(instance_from_construction(spec), out_path, true);

  Report rep;
  rep.command = "construct";
  rep.config = "family=" + family + " gamma=" + gamma_str + " m=" + std::to_string(m) +
               " eps=" + eps_str;
  rep.columns = {"family", "rule", "n", "m", "gamma", "predicted_distortion", "limit", "verified"};
  int exit_code = 0;
  std::string verified = "skipped";
  if (verify) {
    auto vr = verify_construction(spec, TiePolicy::lex(), Rat(1, 100));
    verified = vr.ok ? "pass" : ("FAIL: " + vr.first_failure);
    if (!vr.ok) exit_code = 1;
  }
  rep.rows.push_back({spec.family, spec.target_rule.name(), std::to_string(spec.u.voters()),
                      std::to_string(spec.m), gamma_str, rat_to_string(spec.predicted_distortion),
                      spec.limit_infinite ? "inf" : rat_to_string(spec.limit_distortion),
                      verified});
  write_report(rep, format, report_path);
  return exit_code;
}

// ----- mono -------------------------------------------------------------------

int cmd_mono(const std::string& check, const std::string& rule_name, int n, int m,
             long long budget, uint64_t seed, const std::string& format,
             const std::string& out_path) {
  Report rep;
  rep.command = "mono";
  rep.config = "check=" + check + " rule=" + rule_name + " n=" + std::to_string(n) +
               " m=" + std::to_string(m);
  if (check == "compose") {
    Rng rng(seed);
    bool all_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::vector<Rat>> rows(n, std::vector<Rat>(m));
      for (auto& r : rows)
        for (auto& x : r) x = Rat(rng.below(17), 8);
      auto u = UtilityMatrix<Rat>::dense(rows);
      for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j)
          all_ok = all_ok && compose_ps(Rat(i, 10), Rat(j, 10), u).identity_holds;
    }
    rep.seed = seed;
    rep.columns = {"check", "result"};
    rep.rows.push_back({"compose", all_ok ? "identity-holds" : "VIOLATED"});
    write_report(rep, format, out_path);
    return all_ok ? 0 : 1;
  }
  if (check == "reduce") {
    RuleId rule = rule_from_name(rule_name);
    Rng rng(seed);
    bool all_ok = true;
    for (int trial = 0; trial < 25 && all_ok; ++trial) {
      std::vector<std::vector<Rat>> rows(n, std::vector<Rat>(m));
      for (auto& r : rows)
        for (auto& x : r) x = Rat(rng.below(17), 8);
      auto u = UtilityMatrix<Rat>::dense(rows);
      Rat gs(1 + rng.below(4), 8), gb = gs + Rat(1 + rng.below(4), 8);
      auto ut = uniform_reduction(u, gs, gb);
      auto d_big = instance_distortion(rule, PSVector<Rat>::uniform(gb, n), u,
                                       TiePolicy::enumerate(2000));
      auto d_small = instance_distortion(rule, PSVector<Rat>::uniform(gs, n), ut,
                                         TiePolicy::enumerate(2000));
      all_ok = d_big.exact == d_small.exact &&
               (!d_big.exact || (d_big.infinite == d_small.infinite &&
                                 (d_big.infinite || d_big.value == d_small.value)));
    }
    rep.seed = seed;
    rep.columns = {"check", "rule", "result"};
    rep.rows.push_back({"reduce", rule_name, all_ok ? "distortion-preserved" : "VIOLATED"});
    write_report(rep, format, out_path);
    return all_ok ? 0 : 1;
  }
  if (check == "counterexample") {
    RuleId rule = rule_from_name(rule_name);
    auto w = instancewise_counterexample_search(VotingRule::from(rule), n, m, budget, seed);
    rep.seed = seed;
    rep.columns = {"check", "rule", "found", "samples", "dist_low", "dist_high"};
    if (w) {
      rep.rows.push_back({"counterexample", rule_name, "yes", std::to_string(w->samples_used),
                          rat_to_string(w->dist_low), rat_to_string(w->dist_high)});
    } else {
      rep.rows.push_back({"counterexample", rule_name, "no", std::to_string(budget), "", ""});
    }
    write_report(rep, format, out_path);
    return 0;
  }
  throw InputError("unknown mono check '" + check + "' (compose|reduce|counterexample)");
}

// ----- axioms -------------------------------------------------------------------

int cmd_axioms(const std::string& rule_name, int n, int m, const std::string& axiom,
               unsigned long long budget, const std::string& format,
               const std::string& out_path) {
  RuleId rule_id = rule_from_name(rule_name);
  VotingRule rule = VotingRule::from(rule_id);
  Report rep;
  rep.command = "axioms";
  rep.config = "rule=" + rule_name + " n=" + std::to_string(n) + " m=" + std::to_string(m) +
               " axiom=" + axiom;
  rep.columns = {"rule", "axiom", "n", "m", "verdict", "evaluations", "witness"};
  std::vector<std::string> names =
      axiom == "all" ? axiom_names() : std::vector<std::string>{axiom};
  for (const auto& name : names) {
    auto r = check_axiom(name, rule, n, m, budget);
    std::string witness;
    if (!r.holds && !r.witnesses.empty()) {
      std::ostringstream os;
      for (size_t i = 0; i < r.witnesses.size(); ++i) {
        if (i) os << " -> ";
        os << profile_to_json(r.witnesses[i], -1);
      }
      witness = os.str();
    }
    if (r.dictator) witness = "dictator=" + std::to_string(*r.dictator);
    rep.rows.push_back({rule_name, name, std::to_string(n), std::to_string(m),
                        r.holds ? "holds" : "violated", std::to_string(r.evaluations), witness});
  }
  write_report(rep, format, out_path);
  return 0;
}

// ----- robust --------------------------------------------------------------------

int cmd_robust(const std::string& rule_name, const std::string& gamma_str, double delta_star,
               double eta_star, int n, int m, long long budget, uint64_t seed, double zero_c,
               bool zero_experiment, const std::string& format, const std::string& out_path) {
  RuleId rule = rule_from_name(rule_name);
  Rat g = parse_rational(gamma_str);
  Report rep;
  rep.command = "robust";
  rep.seed = seed;
  if (zero_experiment) {
    auto zr = zeroed_gamma_experiment(rule, to_double(g), zero_c, n, m, budget, seed);
    rep.config = "rule=" + rule_name + " gamma=" + gamma_str + " c=" + format_double(zero_c);
    rep.columns = {"rule", "gamma", "c", "zeroed", "observed", "bound", "within_bounds",
                   "diverged"};
    std::string bound = zr.diverged ? "divergent"
                        : zr.uncovered_bound
                            ? format_double(*zr.uncovered_bound)
                            : (zr.general_bound ? format_double(*zr.general_bound) : "");
    rep.rows.push_back({rule_name, gamma_str, format_double(zero_c),
                        std::to_string(zr.zero_budget),
                        zr.observed_infinite ? "inf" : format_double(zr.best_observed), bound,
                        zr.within_bounds ? "yes" : "NO", zr.diverged ? "yes" : "no"});
    write_report(rep, format, out_path);
    return zr.within_bounds || zr.diverged ? 0 : 1;
  }
  auto gm = PSMatrix<double>::from_vector(PSVector<double>::uniform(to_double(g), n), m);
  auto rr = robust_distortion(rule, gm, delta_star, eta_star, n, m, budget, seed);
  double gmin = to_double(g);
  double bound = rule.kind == RuleKind::copeland || rule.kind == RuleKind::slater
                     ? robust_uncovered_bound(gmin, delta_star, eta_star)
                     : robust_universal_bound(gmin, 1.0 / m, delta_star, eta_star);
  rep.config = "rule=" + rule_name + " gamma=" + gamma_str + " delta*=" +
               format_double(delta_star) + " eta*=" + format_double(eta_star);
  rep.columns = {"rule", "gamma_min", "delta_star", "eta_star", "observed", "robust_bound",
                 "exact_flag"};
  rep.rows.push_back({rule_name, gamma_str, format_double(delta_star), format_double(eta_star),
                      rr.infinite ? "inf" : format_double(rr.best), format_double(bound),
                      "heuristic"});
  write_report(rep, format, out_path);
  return 0;
}

// ----- table1 --------------------------------------------------------------------

int cmd_table1(const std::string& gammas, int m, const std::string& format,
               const std::string& out_path) {
  Report rep;
  rep.command = "table1";
  rep.config = "gammas=" + gammas + " m=" + std::to_string(m);
  rep.columns = {"rule", "gamma", "z", "upper", "lower"};
  std::vector<Rat> grid;
  std::stringstream ss(gammas);
  std::string tok;
  while (std::getline(ss, tok, ',')) grid.push_back(parse_rational(tok));
  for (RuleKind kind : standard_rule_kinds()) {
    for (const auto& g : grid) {
      auto b = theoretical_bounds<Rat>(kind, g, m);
      rep.rows.push_back({rule_kind_name(kind), rat_to_string(g), rat_to_string(b.z),
                          bound_to_string(b, true), bound_to_string(b, false)});
    }
  }
  write_report(rep, format, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distortion toolkit for public-spirited voting"};
  app.require_subcommand(1);

  std::string rule = "copeland", instance, tie = "enumerate", format = "csv", out, witness_out;
  std::string family, gamma = "1/2", eps = "1/1000000", score_rule = "borda", check = "compose";
  std::string axiom = "all";
  int n = 3, m = 3, restarts = 8;
  long long budget = 10000, cap = 100000, samples = 10000;
  unsigned long long axiom_budget = 10000000ULL, kappa_budget = 10000000ULL;
  uint64_t seed = 0;
  bool tied_winners = false, sampled = false, verify = false, zero_exp = false;
  double delta_star = 1.0, eta_star = 1.0, zero_c = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "csv|json");
    sub->add_option("--out", out, "report path (default stdout)");
  };

  auto* eval = app.add_subcommand("eval", "distortion of one instance under a rule");
  eval->add_option("--rule", rule)->required();
  eval->add_option("--instance", instance)->required();
  eval->add_option("--tie", tie, "lex|enumerate|adversarial");
  eval->add_option("--cap", cap, "enumeration cap");
  eval->add_flag("--tied-winners", tied_winners, "sup over tied rule winners");
  add_common(eval);

  auto* kappa = app.add_subcommand("kappa", "kappa_f by exhaustive profile enumeration");
  kappa->add_option("--rule", rule)->required();
  kappa->add_option("--n", n)->required();
  kappa->add_option("--m", m)->required();
  kappa->add_option("--budget", kappa_budget);
  kappa->add_flag("--sampled", sampled, "sampled estimate instead of exhaustive");
  kappa->add_option("--samples", samples);
  kappa->add_option("--seed", seed);
  add_common(kappa);

  auto* search = app.add_subcommand("search", "randomized worst-case instance search");
  search->add_option("--rule", rule)->required();
  search->add_option("--gamma", gamma, "uniform public spirit (rational or decimal)");
  search->add_option("--n", n)->required();
  search->add_option("--m", m)->required();
  search->add_option("--budget", budget);
  search->add_option("--seed", seed);
  search->add_option("--restarts", restarts);
  search->add_option("--witness-out", witness_out, "save best utility matrix as instance JSON");
  add_common(search);

  auto* construct = app.add_subcommand("construct", "generate a lower-bound instance family");
  construct->add_option("--family", family)->required();
  construct->add_option("--gamma", gamma);
  construct->add_option("--m", m);
  construct->add_option("--eps", eps);
  construct->add_option("--score-rule", score_rule, "positional rule for scoring families");
  construct->add_option("--instance-out", instance, "write the generated instance JSON here");
  construct->add_flag("--verify", verify, "run the construction verifier");
  add_common(construct);

  auto* mono = app.add_subcommand("mono", "PS-monotonicity checks");
  mono->add_option("--check", check, "compose|reduce|counterexample")->required();
  mono->add_option("--rule", rule);
  mono->add_option("--n", n);
  mono->add_option("--m", m);
  mono->add_option("--budget", budget);
  mono->add_option("--seed", seed);
  add_common(mono);

  auto* axioms = app.add_subcommand("axioms", "brute-force axiom verdicts");
  axioms->add_option("--rule", rule)->required();
  axioms->add_option("--n", n)->required();
  axioms->add_option("--m", m)->required();
  axioms->add_option("--axiom", axiom, "axiom name or 'all'");
  axioms->add_option("--budget", axiom_budget);
  add_common(axioms);

  auto* robust = app.add_subcommand("robust", "generalized-model distortion search");
  robust->add_option("--rule", rule)->required();
  robust->add_option("--gamma-min", gamma);
  robust->add_option("--delta-star", delta_star);
  robust->add_option("--eta-star", eta_star);
  robust->add_option("--n", n);
  robust->add_option("--m", m);
  robust->add_option("--budget", budget);
  robust->add_option("--seed", seed);
  robust->add_flag("--zeroed", zero_exp, "run the zeroed-gamma experiment instead");
  robust->add_option("--c", zero_c, "fraction of voters to zero");
  add_common(robust);

  auto* table1 = app.add_subcommand("table1", "closed-form bound table over a gamma grid");
  table1->add_option("--gammas", gamma, "comma-separated gamma grid");
  table1->add_option("--m", m);
  add_common(table1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval->parsed())
      return cmd_eval(rule, instance, tie, cap, tied_winners, format, out);
    if (kappa->parsed())
      return cmd_kappa(rule, n, m, kappa_budget, sampled, samples, seed, format, out);
    if (search->parsed())
      return cmd_search(rule, gamma, n, m, budget, seed, restarts, format, out, witness_out);
    if (construct->parsed())
      return cmd_construct(family, gamma, m, eps, score_rule, instance, verify, format, out);
    if (mono->parsed()) return cmd_mono(check, rule, n, m, budget, seed, format, out);
    if (axioms->parsed()) return cmd_axioms(rule, n, m, axiom, axiom_budget, format, out);
    if (robust->parsed())
      return cmd_robust(rule, gamma, delta_star, eta_star, n, m, budget, seed, zero_c, zero_exp,
                        format, out);
    if (table1->parsed()) return cmd_table1(gamma, m, format, out);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const VerificationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UndefinedDistortion& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
