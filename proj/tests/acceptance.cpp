// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>

#include "liaitp/frontend.hpp"
#include "liaitp/verify.hpp"

using namespace liaitp;

namespace {

int failures = 0;

double now_ms() {
  using namespace std::chrono;
  return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

void report(const std::string &name, bool ok, double ms) {
  std::printf("%s  %-55s (%.0f ms)\n", ok ? "PASS" : "FAIL", name.c_str(), ms);
  std::fflush(stdout);
  if (!ok) ++failures;
}

void criterion(const std::string &name, const std::function<bool()> &body) {
  double t0 = now_ms();
  bool ok = false;
  try {
    ok = body();
  } catch (const std::exception &e) {
    std::printf("      exception: %s\n", e.what());
  }
  report(name, ok, now_ms() - t0);
}

LinTerm term(std::initializer_list<std::pair<VarId, int>> monos, int constant = 0) {
  LinTerm t;
  for (const auto &[v, c] : monos) t.add_mono(v, Rat(c));
  t.constant = Rat(constant);
  return t;
}

bool box_equivalent(const FormulaPtr &a, const FormulaPtr &b, const std::set<VarId> &vars,
                    long box) {
  std::vector<VarId> vs(vars.begin(), vars.end());
  std::map<VarId, Rat> m;
  std::function<bool(size_t)> rec = [&](size_t i) {
    if (i == vs.size()) return eval_formula(a, m, {}) == eval_formula(b, m, {});
    for (long v = -box; v <= box; ++v) {
      m[vs[i]] = Rat(v);
      if (!rec(i + 1)) return false;
    }
    return true;
  };
  return rec(0);
}

LemmaPartition make_partition(std::set<Atom> b_atoms, std::set<VarId> a_vars,
                              std::set<VarId> b_vars) {
  LemmaPartition p;
  p.atom_in_B = [b = std::move(b_atoms)](const Atom &at) { return b.count(at) != 0; };
  p.var_in_A = [a = std::move(a_vars)](VarId v) { return a.count(v) != 0; };
  p.var_in_B = [b = std::move(b_vars)](VarId v) { return b.count(v) != 0; };
  return p;
}

// --- criterion 1: paper-example regressions --------------------------------

bool intro_pair() {
  bool ok = true;
  for (ItpEngine engine : {ItpEngine::Ceil, ItpEngine::ModEq}) {
    Problem p;
    VarId x = p.vars.intern("x"), y = p.vars.intern("y"), z = p.vars.intern("z");
    p.groups.push_back(f_atom(normalize_atom(term({{x, 2}, {y, -1}}, 1), RawRel::Eq)));
    p.groups.push_back(f_atom(normalize_atom(term({{y, 1}, {z, -2}}), RawRel::Eq)));
    SolveOutcome out = solve_problem(p);
    if (out.sat) return false;
    if (!check_res_proof(out.proof, *out.table, true).ok) return false;
    FormulaPtr itp = interpolant(out, 1, engine);
    ok = ok && verify_interpolant(p, 1, itp).pass();
    ok = ok && brute_force_check(p, 1, itp, Int(8)).ok;
    FormulaPtr expected = f_atom(Atom::modeq(term({{y, -1}}, 1), Int(2)));
    ok = ok && box_equivalent(itp, expected, {x, y, z}, 8);
  }
  return ok;
}

bool int_equalities() {
  Problem p;
  VarId y1 = p.vars.intern("y1"), y2 = p.vars.intern("y2"), y3 = p.vars.intern("y3");
  VarId x1 = p.vars.intern("x1"), x2 = p.vars.intern("x2"), z1 = p.vars.intern("z1");
  p.groups.push_back(f_and({
      f_atom(normalize_atom(term({{y1, -1}, {y2, -1}, {y3, -4}, {x1, 1}}, 2), RawRel::Eq)),
      f_atom(normalize_atom(term({{y3, -1}, {x1, -1}, {x2, 1}}), RawRel::Eq)),
      f_atom(normalize_atom(term({{x1, -1}, {x2, -2}}, 1), RawRel::Eq)),
  }));
  p.groups.push_back(
      f_atom(normalize_atom(term({{y1, 7}, {y2, 12}, {y3, 31}, {z1, 10}}, -17), RawRel::Eq)));
  SolveOutcome out = solve_problem(p);
  if (out.sat) return false;
  bool ok = check_res_proof(out.proof, *out.table, true).ok;
  for (ItpEngine engine : {ItpEngine::Ceil, ItpEngine::ModEq}) {
    FormulaPtr itp = interpolant(out, 1, engine);
    ok = ok && verify_interpolant(p, 1, itp).pass();
    ok = ok && brute_force_check(p, 1, itp, Int(4)).ok;
    FormulaPtr expected =
        f_atom(Atom::modeq(term({{y1, -7}, {y2, -7}, {y3, -31}}, 18), Int(5)));
    ok = ok && box_equivalent(itp, expected, {y1, y2, y3}, 8);
  }
  return ok;
}

bool itp_app_disjuncts() {
  VarTable vt;
  VarId y1 = vt.intern("y1"), x1 = vt.intern("x1"), z1 = vt.intern("z1");
  Atom a1 = Atom::leq(term({{y1, -1}, {x1, -10}}, -4));
  Atom a2 = Atom::leq(term({{y1, 1}, {x1, 10}}));
  Atom b1 = Atom::leq(term({{y1, -1}, {z1, -10}}, 1));
  Atom b2 = Atom::leq(term({{y1, 1}, {z1, 10}}, -5));
  CutProof proof;
  int c1 = proof.add_comb(1, proof.add_hyp(a2), 1, proof.add_hyp(b1));
  int st = proof.add_strengthen(c1, Int(10));
  int c2 = proof.add_comb(1, proof.add_hyp(a1), 1, proof.add_hyp(b2));
  proof.add_comb(1, st, 1, c2);
  if (!check_cut_proof(proof, {a1, a2, b1, b2}).ok) return false;

  FormulaPtr itp = annotate_modeq(proof, make_partition({b1, b2}, {y1, x1}, {y1, z1}));
  if (itp->kind != Formula::Kind::Or || itp->kids.size() != 5) return false;
  for (int j = 0; j < 5; ++j) {
    const FormulaPtr &d = itp->kids[static_cast<size_t>(j)];
    if (d->kind != Formula::Kind::Atom) return false;
    if (!(d->atom == Atom::modeq(term({{y1, 1}}, j), Int(10)))) return false;
  }
  return true;
}

bool conditional_strengthen() {
  VarTable vt;
  VarId y1 = vt.intern("y1"), y2 = vt.intern("y2"), y3 = vt.intern("y3");
  VarId x1 = vt.intern("x1"), z1 = vt.intern("z1");
  Atom a1 = Atom::leq(term({{y1, -1}, {y3, -10}}, -4));
  Atom a2 = Atom::leq(term({{y1, 1}, {y3, 10}}));
  Atom b1 = Atom::leq(term({{y1, -1}, {y2, -10}}, 1));
  Atom b2 = Atom::leq(term({{y1, 1}, {y2, 10}}, -5));
  CutProof proof;
  int c1 = proof.add_comb(1, proof.add_hyp(a2), 1, proof.add_hyp(b1));
  int st = proof.add_strengthen(c1, Int(10));
  int c2 = proof.add_comb(1, proof.add_hyp(a1), 1, proof.add_hyp(b2));
  proof.add_comb(1, st, 1, c2);
  if (!check_cut_proof(proof, {a1, a2, b1, b2}).ok) return false;

  ItpStats stats;
  LemmaPartition part = make_partition({b1, b2}, {y1, y2, y3, x1}, {y1, y2, y3, z1});
  FormulaPtr itp = annotate_modeq(proof, part, &stats);
  if (!stats.conditional_strengthen_fired) return false;
  FormulaPtr expected = f_or({
      f_and({f_atom(Atom::leq(term({{y2, 10}, {y3, -10}}, -4))),
             f_atom(Atom::leq(term({{y1, 1}, {y2, 10}})))}),
      f_atom(Atom::leq(term({{y1, -1}, {y2, -10}}, 6))),
  });
  return box_equivalent(itp, expected, {y1, y2, y3}, 6);
}

bool ceiling_example() {
  VarTable vt;
  VarId y1 = vt.intern("y1"), x1 = vt.intern("x1"), z1 = vt.intern("z1");
  Atom a_eq = Atom::eq(term({{y1, 1}, {x1, -2}}));
  Atom b_eq = normalize_atom(term({{y1, 1}, {z1, -2}}, -1), RawRel::Eq);
  CutProof p;
  int c1 = p.add_comb(1, p.add_hyp(a_eq), 1, p.add_hyp(b_eq, true));
  int d = p.add_division(c1, Int(2));
  int c2 = p.add_comb(1, p.add_hyp(a_eq, true), 1, p.add_hyp(b_eq));
  p.add_comb(2, d, 1, c2);
  if (!check_cut_proof(p, {a_eq, b_eq}).ok) return false;

  FormulaPtr itp = annotate_ceil(p, make_partition({b_eq}, {y1, x1}, {y1, z1}));
  ExtTerm expect;
  expect.add_var(y1, -1);
  ExtTerm content;
  content.add_var(y1, 1);
  expect.add_ceil(ExtTerm::make_ceil(content, Int(2)), 2);
  if (!(itp->kind == Formula::Kind::ExtLeq && itp->ext == expect)) return false;
  return box_equivalent(itp, f_ext_leq(expect), {y1}, 8);
}

bool bnb_interpolant() {
  VarTable vt;
  VarId x1 = vt.intern("x1"), y1 = vt.intern("y1"), y2 = vt.intern("y2"), y3 = vt.intern("y3"),
        z1 = vt.intern("z1");
  Atom row1 = Atom::leq(term({{y1, 1}, {y2, 5}, {y3, -5}, {x1, -2}}, 2));
  Atom row2 = Atom::leq(term({{y1, -1}, {y2, -5}, {y3, 5}, {z1, 4}}, -3));
  Atom ax1 = Atom::leq(term({{x1, 1}}));
  Atom ay1hi = Atom::leq(term({{y1, 1}}));
  Atom ay1lo = Atom::leq(term({{y1, -1}}));
  Atom ay2lo = Atom::leq(term({{y2, -1}}));
  Atom ay2hi = Atom::leq(term({{y2, 1}}, -2));
  Atom ay3lo = Atom::leq(term({{y3, -1}}));
  Atom ay3hi = Atom::leq(term({{y3, 1}}, -1));
  Atom az1 = Atom::leq(term({{z1, -1}}));
  std::vector<Atom> a_side = {row1, ax1, ay1hi, ay2hi, ay3hi};
  std::vector<Atom> b_side = {row2, az1, ay1lo, ay2lo, ay3lo};

  BnbProof bnb;
  CutProof p1;
  {
    int c = p1.add_comb(1, p1.add_hyp(row1), 2, p1.add_hyp(ax1));
    c = p1.add_comb(1, c, 1, p1.add_hyp(ay1lo));
    c = p1.add_comb(1, c, 5, p1.add_hyp(ay2lo));
    p1.add_comb(1, c, 5, p1.add_hyp(branch_atom_low(y3, Int(0))));
  }
  CutProof p2;
  {
    int c = p2.add_comb(1, p2.add_hyp(row2), 4, p2.add_hyp(az1));
    c = p2.add_comb(1, c, 1, p2.add_hyp(ay1hi));
    c = p2.add_comb(1, c, 5, p2.add_hyp(branch_atom_high(y3, Int(0))));
    p2.add_comb(1, c, 5, p2.add_hyp(branch_atom_low(y2, Int(0))));
  }
  CutProof p3;
  {
    int c = p3.add_comb(1, p3.add_hyp(row1), 2, p3.add_hyp(ax1));
    c = p3.add_comb(1, c, 1, p3.add_hyp(ay1lo));
    c = p3.add_comb(1, c, 5, p3.add_hyp(ay3hi));
    p3.add_comb(1, c, 5, p3.add_hyp(branch_atom_high(y2, Int(0))));
  }
  int l1 = bnb.add_leaf(std::move(p1));
  int l2 = bnb.add_leaf(std::move(p2));
  int l3 = bnb.add_leaf(std::move(p3));
  bnb.add_split(y3, Int(0), l1, bnb.add_split(y2, Int(0), l2, l3));

  AbstractionTable table;
  VarGroups groups;
  std::map<Atom, Lit> bindings;
  for (const Atom &a : a_side) {
    int v = table.intern_theory(a);
    table.add_group_occurrence(v, 1);
    bindings[a] = {v, true};
    for (const auto &[var, c] : a.term.coeffs) groups.add_occurrence(var, 1);
  }
  for (const Atom &a : b_side) {
    int v = table.intern_theory(a);
    table.add_group_occurrence(v, 2);
    bindings[a] = {v, true};
    for (const auto &[var, c] : a.term.coeffs) groups.add_occurrence(var, 2);
  }
  ResProof res = bnb_to_resolution(bnb, table, bindings);
  if (!check_res_proof(res, table).ok) return false;

  BoolCombineCtx ctx;
  ctx.table = &table;
  ctx.var_groups = &groups;
  ctx.ngroups = 2;
  ctx.cut = 1;
  ctx.engine = ItpEngine::Ceil;
  FormulaPtr itp = bool_combine(res, ctx);
  if (itp->kind != Formula::Kind::And) return false;
  std::set<Atom> conjuncts;
  for (const auto &k : itp->kids) {
    if (k->kind != Formula::Kind::Atom) return false;
    conjuncts.insert(k->atom);
  }
  std::set<Atom> expected = {
      Atom::leq(term({{y1, 1}})),
      Atom::leq(term({{y1, 1}, {y2, 5}, {y3, -5}}, 2)),
      Atom::leq(term({{y1, 1}, {y2, 5}}, -3)),
  };
  return conjuncts == expected;
}

// --- criterion 2: size separation ------------------------------------------

bool size_separation() {
  for (long n : {2L, 4L, 8L, 16L, 32L, 64L}) {
    VarTable vt;
    VarId y1 = vt.intern("y1"), x1 = vt.intern("x1"), z1 = vt.intern("z1");
    int nn = static_cast<int>(n);
    Atom a1 = Atom::leq(term({{y1, -1}, {x1, -2 * nn}}, -nn + 1));
    Atom a2 = Atom::leq(term({{y1, 1}, {x1, 2 * nn}}));
    Atom b1 = Atom::leq(term({{y1, -1}, {z1, -2 * nn}}, 1));
    Atom b2 = Atom::leq(term({{y1, 1}, {z1, 2 * nn}}, -nn));
    CutProof proof;
    int c1 = proof.add_comb(1, proof.add_hyp(a2), 1, proof.add_hyp(b1));
    int st = proof.add_strengthen(c1, Int(2 * n));
    int c2 = proof.add_comb(1, proof.add_hyp(a1), 1, proof.add_hyp(b2));
    proof.add_comb(1, st, 1, c2);
    if (!check_cut_proof(proof, {a1, a2, b1, b2}).ok) return false;

    LemmaPartition part = make_partition({b1, b2}, {y1, x1}, {y1, z1});
    FormulaPtr med = annotate_modeq(proof, part);
    size_t disjuncts = med->kind == Formula::Kind::Or ? med->kids.size() : 1;
    if (disjuncts < static_cast<size_t>(n)) return false;
    FormulaPtr ceil = annotate_ceil(proof, part);
    if (formula_dag_size(ceil) > 25) return false;
  }
  return true;
}

// --- criteria 3, 5, 6: the random property suite ---------------------------

struct SuiteOutcome {
  bool verdicts_ok = true;
  bool interpolants_ok = true;
  bool proofs_ok = true;
  int64_t mixed_lemma_atoms = 0;
  double max_instance_ms = 0;
  int unsat_count = 0;
  bool done = false;
};

SuiteOutcome run_property_suite() {
  SuiteOutcome so;
  for (uint64_t seed = 1; seed <= 500; ++seed) {
    double t0 = now_ms();
    Problem p = gen_random_problem(seed);
    Problem fresh = p;
    SolveOutcome out = solve_problem(p);
    so.mixed_lemma_atoms += out.laz_stats.mixed_lemma_atoms;

    std::set<VarId> vs;
    for (const auto &g : fresh.groups) collect_vars(g, vs);
    bool oracle = brute_force_sat(fresh.groups, vs, Int(8));
    if (out.sat != oracle) {
      so.verdicts_ok = false;
      std::printf("      seed %llu: solver=%s oracle=%s\n", (unsigned long long)seed,
                  out.sat ? "sat" : "unsat", oracle ? "sat" : "unsat");
    }
    if (out.sat) {
      if (!validate_model(fresh, out)) so.verdicts_ok = false;
    } else {
      ++so.unsat_count;
      if (!check_res_proof(out.proof, *out.table, true).ok) so.proofs_ok = false;
      for (ItpEngine engine : {ItpEngine::Ceil, ItpEngine::ModEq}) {
        FormulaPtr itp = interpolant(out, 1, engine);
        if (!verify_interpolant(p, 1, itp).pass() || !brute_force_check(p, 1, itp, Int(8)).ok) {
          so.interpolants_ok = false;
          std::printf("      seed %llu engine %d: interpolant check failed\n",
                      (unsigned long long)seed, engine == ItpEngine::Ceil ? 0 : 1);
        }
      }
    }
    so.max_instance_ms = std::max(so.max_instance_ms, now_ms() - t0);
  }
  so.done = true;
  return so;
}

// --- criterion 4: sequence interpolants -------------------------------------

bool sequence_chains(int64_t *mixed_atoms) {
  int found = 0;
  for (uint64_t seed = 1; seed <= 2000 && found < 50; ++seed) {
    RandomProblemOptions opts;
    opts.ngroups = 4;
    opts.nvars = 4;
    opts.nconstraints = 7;
    opts.coeff_bound = 6;
    opts.box = 5;
    Problem p = gen_random_problem(seed, opts);
    SolveOutcome out = solve_problem(p);
    *mixed_atoms += out.laz_stats.mixed_lemma_atoms;
    if (out.sat) continue;
    ++found;

    BoolCombineCtx ctx;
    ctx.table = out.table.get();
    ctx.var_groups = &out.var_groups;
    ctx.ngroups = out.ngroups;
    ctx.engine = ItpEngine::Ceil;
    std::vector<FormulaPtr> seq = sequence_interpolants(out.proof, ctx);
    if (seq.size() != 3) return false;
    for (int i = 0; i + 1 < static_cast<int>(seq.size()); ++i) {
      Problem chain;
      chain.vars = p.vars;
      chain.groups.push_back(
          f_and({seq[static_cast<size_t>(i)], p.groups[static_cast<size_t>(i + 1)],
                 f_not(seq[static_cast<size_t>(i + 1)])}));
      SolverOptions sopts;
      sopts.interpolating = false;
      if (solve_problem(chain, sopts).sat) {
        std::printf("      seed %llu: chain relation violated at i=%d\n",
                    (unsigned long long)seed, i);
        return false;
      }
    }
    // boundary conditions: A_i |= I_i and I_i /\ B_i unsat
    for (int i = 1; i <= 3; ++i)
      if (!verify_interpolant(p, i, seq[static_cast<size_t>(i - 1)]).pass()) return false;
  }
  return found == 50;
}

}  // namespace

int main() {
  criterion("1a: intro pair equivalent to the divisibility interpolant", intro_pair);
  criterion("1b: equality system matches the modular certificate", int_equalities);
  criterion("1c: strengthening example emits exactly 5 disjuncts", itp_app_disjuncts);
  criterion("1d: conditional strengthening fires and matches", conditional_strengthen);
  criterion("1e: ceiling engine reproduces the parity interpolant", ceiling_example);
  criterion("1f: branch-and-bound example gives the 3-conjunct interpolant", bnb_interpolant);
  criterion("2: modEq/ceil size separation up to n=64", size_separation);

  SuiteOutcome suite;
  {
    double t0 = now_ms();
    suite = run_property_suite();
    double ms = now_ms() - t0;
    report("3: 500 random instances: verdicts, proofs, interpolants",
           suite.done && suite.verdicts_ok && suite.proofs_ok && suite.interpolants_ok &&
               suite.unsat_count > 0,
           ms);
    std::printf("      unsat instances: %d, budget: 300000 ms single-threaded\n",
                suite.unsat_count);
    if (ms >= 300000) {
      std::printf("FAIL  3-runtime: property suite exceeded its budget\n");
      ++failures;
    }
  }

  int64_t chain_mixed = 0;
  criterion("4: 50 four-group chains satisfy the inductive relation",
            [&] { return sequence_chains(&chain_mixed); });

  report("5: zero AB-mixed lemma atoms across the suite",
         suite.done && suite.mixed_lemma_atoms + chain_mixed == 0, 0);

  report("6: no instance exceeded the 10 s smoke timeout",
         suite.done && suite.max_instance_ms < 10000, suite.max_instance_ms);

  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
  return failures == 0 ? 0 : 1;
}
