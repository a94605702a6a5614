#include <doctest.h>

#include "liaitp/frontend.hpp"
#include "liaitp/verify.hpp"
#include "test_util.hpp"

using namespace liaitp;
using liaitp::test::term;

namespace {

// mutual entailment via the solver (interpolation mode off inside verify)
bool equivalent_by_solver(const FormulaPtr &a, const FormulaPtr &b, VarTable vars) {
  {
    Problem p;
    p.vars = vars;
    p.groups.push_back(f_and({a, f_not(b)}));
    SolverOptions opts;
    opts.interpolating = false;
    if (solve_problem(p, opts).sat) return false;
  }
  {
    Problem p;
    p.vars = vars;
    p.groups.push_back(f_and({b, f_not(a)}));
    SolverOptions opts;
    opts.interpolating = false;
    if (solve_problem(p, opts).sat) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("the intro pair verifies against its modular interpolant") {
  VarTable vt;
  VarId x = vt.intern("x"), y = vt.intern("y"), z = vt.intern("z");
  FormulaPtr a = f_atom(normalize_atom(term({{x, 2}, {y, -1}}, 1), RawRel::Eq));
  FormulaPtr b = f_atom(normalize_atom(term({{y, 1}, {z, -2}}), RawRel::Eq));
  FormulaPtr itp = f_atom(Atom::modeq(term({{y, -1}}, 1), Int(2)));
  VerifyReport rep = verify_interpolant({a}, {b}, itp, vt);
  CHECK(rep.pass());
}

TEST_CASE("a trivially true interpolant passes when B alone is unsat") {
  VarTable vt;
  VarId z = vt.intern("z");
  FormulaPtr a = f_atom(Atom::leq(term({{z, 1}})));
  FormulaPtr b = f_and({f_atom(Atom::leq(term({{z, 1}}, -1))), f_atom(Atom::leq(term({{z, -1}}, 2)))});
  VerifyReport rep = verify_interpolant({a}, {b}, f_true(), vt);
  CHECK(rep.pass());
}

TEST_CASE("interpolants over B-local symbols fail the symbol condition") {
  VarTable vt;
  VarId x = vt.intern("x"), z = vt.intern("z");
  FormulaPtr a = f_atom(Atom::leq(term({{x, 1}})));
  FormulaPtr b = f_and({f_atom(Atom::leq(term({{z, 1}}, -1))), f_atom(Atom::leq(term({{z, -1}}, 2)))});
  FormulaPtr itp = f_atom(Atom::leq(term({{z, 1}})));
  VerifyReport rep = verify_interpolant({a}, {b}, itp, vt);
  CHECK(!rep.symbols_ok);
  CHECK(!rep.pass());
}

TEST_CASE("failed entailment produces a counterexample") {
  VarTable vt;
  VarId x = vt.intern("x"), y = vt.intern("y"), z = vt.intern("z");
  FormulaPtr a = f_atom(normalize_atom(term({{x, 2}, {y, -1}}, 1), RawRel::Eq));
  FormulaPtr b = f_atom(normalize_atom(term({{y, 1}, {z, -2}}), RawRel::Eq));
  VerifyReport rep = verify_interpolant({a}, {b}, f_false(), vt);
  CHECK(!rep.a_implies_i);
  CHECK(rep.failed_check == "A |= I");
  std::map<VarId, Rat> m = rep.counterexample;
  std::map<std::string, bool> bm = rep.counter_bools;
  CHECK(eval_formula(a, m, bm));
}

TEST_CASE("brute force validates the intro example on the box") {
  VarTable vt;
  VarId x = vt.intern("x"), y = vt.intern("y"), z = vt.intern("z");
  FormulaPtr a = f_atom(normalize_atom(term({{x, 2}, {y, -1}}, 1), RawRel::Eq));
  FormulaPtr b = f_atom(normalize_atom(term({{y, 1}, {z, -2}}), RawRel::Eq));
  FormulaPtr itp = f_atom(Atom::modeq(term({{y, -1}}, 1), Int(2)));
  BruteForceResult r = brute_force_check({a}, {b}, itp, {x, y, z}, Int(8));
  CHECK(r.ok);

  BruteForceResult bad = brute_force_check({a}, {b}, f_false(), {x, y, z}, Int(8));
  CHECK(!bad.ok);
  CHECK(bad.failed_check == "A |= I");
}

TEST_CASE("brute force reports satisfiable pairs") {
  VarTable vt;
  VarId y = vt.intern("y");
  FormulaPtr a = f_atom(Atom::leq(term({{y, 1}})));
  FormulaPtr b = f_atom(Atom::leq(term({{y, -1}})));
  BruteForceResult r = brute_force_check({a}, {b}, f_true(), {y}, Int(8));
  CHECK(!r.ok);
  CHECK(r.failed_check == "A and B sat");
}

TEST_CASE("brute force rejects oversized boxes") {
  VarTable vt;
  std::set<VarId> vars;
  for (int i = 0; i < 10; ++i) vars.insert(vt.intern("v" + std::to_string(i)));
  CHECK_THROWS_AS(brute_force_check({f_true()}, {f_true()}, f_true(), vars, Int(100)), Error);
}

TEST_CASE("random problems are deterministic per seed") {
  Problem p1 = gen_random_problem(7);
  Problem p2 = gen_random_problem(7);
  REQUIRE(p1.groups.size() == p2.groups.size());
  for (size_t i = 0; i < p1.groups.size(); ++i)
    CHECK(print_formula(p1.groups[i], p1.vars) == print_formula(p2.groups[i], p2.vars));
  RandomProblemOptions opts;
  opts.nvars = 3;
  Problem p3 = gen_random_problem(9, opts);
  std::set<VarId> vs;
  for (const auto &g : p3.groups) collect_vars(g, vs);
  CHECK(p3.vars.size() == 3);
}

// ---------------------------------------------------------------------------
// Algorithm-level regressions through the full pipeline
// ---------------------------------------------------------------------------

TEST_CASE("the Boolean-combination example from the background section") {
  Problem p;
  VarId x = p.vars.intern("x"), y = p.vars.intern("y"), z = p.vars.intern("z");
  FormulaPtr a1 = f_atom(Atom::leq(term({{y, -1}, {x, 3}}, -1)));
  FormulaPtr a2 = f_atom(Atom::leq(term({{y, -1}, {x, -1}})));
  FormulaPtr a3 = f_atom(Atom::leq(term({{z, -1}, {y, 2}}, 3)));
  FormulaPtr a4 = f_atom(Atom::leq(term({{z, 2}}, -1)));
  FormulaPtr pv = f_bool("p"), qv = f_bool("q");

  p.groups.push_back(f_and({f_or({pv, a1}), a2, f_or({f_not(qv), f_not(a2)})}));
  p.groups.push_back(f_and({f_or({f_not(a3), a4}), f_or({f_not(pv), qv}), f_or({pv, a3})}));

  SolveOutcome out = solve_problem(p);
  REQUIRE(!out.sat);
  CHECK(check_res_proof(out.proof, *out.table, true).ok);

  for (ItpEngine engine : {ItpEngine::Ceil, ItpEngine::ModEq}) {
    FormulaPtr itp = interpolant(out, 1, engine);
    VerifyReport rep = verify_interpolant(p, 1, itp);
    CHECK(rep.pass());
    FormulaPtr expected =
        f_and({f_or({pv, f_atom(Atom::leq(term({{y, -4}}, -1)))}), f_not(qv)});
    CHECK(equivalent_by_solver(itp, expected, p.vars));
  }
}

TEST_CASE("the branch-and-bound example yields the three-conjunct interpolant") {
  // partition of the splitting-on-demand constraint set
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

  // the printed proof: leaves P1, P2, P3 with splits on y2 under y3
  BnbProof bnb;
  {
    CutProof p1;
    int r = p1.add_hyp(row1);
    int xx = p1.add_hyp(ax1);
    int c1 = p1.add_comb(1, r, 2, xx);
    int yl = p1.add_hyp(ay1lo);
    int c2 = p1.add_comb(1, c1, 1, yl);
    int y2l = p1.add_hyp(ay2lo);
    int c3 = p1.add_comb(1, c2, 5, y2l);
    int br = p1.add_hyp(branch_atom_low(y3, Int(0)));
    p1.add_comb(1, c3, 5, br);
    CutProof p2;
    r = p2.add_hyp(row2);
    int zz = p2.add_hyp(az1);
    c1 = p2.add_comb(1, r, 4, zz);
    int yh = p2.add_hyp(ay1hi);
    c2 = p2.add_comb(1, c1, 1, yh);
    int br3 = p2.add_hyp(branch_atom_high(y3, Int(0)));
    c3 = p2.add_comb(1, c2, 5, br3);
    int br2 = p2.add_hyp(branch_atom_low(y2, Int(0)));
    p2.add_comb(1, c3, 5, br2);
    CutProof p3;
    r = p3.add_hyp(row1);
    xx = p3.add_hyp(ax1);
    c1 = p3.add_comb(1, r, 2, xx);
    yl = p3.add_hyp(ay1lo);
    c2 = p3.add_comb(1, c1, 1, yl);
    int y3h = p3.add_hyp(ay3hi);
    c3 = p3.add_comb(1, c2, 5, y3h);
    br2 = p3.add_hyp(branch_atom_high(y2, Int(0)));
    p3.add_comb(1, c3, 5, br2);

    int l1 = bnb.add_leaf(std::move(p1));
    int l2 = bnb.add_leaf(std::move(p2));
    int l3 = bnb.add_leaf(std::move(p3));
    int inner = bnb.add_split(y2, Int(0), l2, l3);
    bnb.add_split(y3, Int(0), l1, inner);
  }

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
  CHECK(check_res_proof(res, table).ok);

  BoolCombineCtx ctx;
  ctx.table = &table;
  ctx.var_groups = &groups;
  ctx.ngroups = 2;
  ctx.cut = 1;
  ctx.engine = ItpEngine::Ceil;
  FormulaPtr itp = bool_combine(res, ctx);

  REQUIRE(itp->kind == Formula::Kind::And);
  std::set<Atom> conjuncts;
  for (const auto &k : itp->kids) {
    REQUIRE(k->kind == Formula::Kind::Atom);
    conjuncts.insert(k->atom);
  }
  std::set<Atom> expected = {
      Atom::leq(term({{y1, 1}})),
      Atom::leq(term({{y1, 1}, {y2, 5}, {y3, -5}}, 2)),
      Atom::leq(term({{y1, 1}, {y2, 5}}, -3)),
  };
  CHECK(conjuncts == expected);
}

// ---------------------------------------------------------------------------
// sequence interpolants
// ---------------------------------------------------------------------------

TEST_CASE("two groups give the plain interpolant as a singleton sequence") {
  Problem p;
  VarId x = p.vars.intern("x"), y = p.vars.intern("y"), z = p.vars.intern("z");
  p.groups.push_back(f_atom(normalize_atom(term({{x, 2}, {y, -1}}, 1), RawRel::Eq)));
  p.groups.push_back(f_atom(normalize_atom(term({{y, 1}, {z, -2}}), RawRel::Eq)));
  SolveOutcome out = solve_problem(p);
  REQUIRE(!out.sat);
  BoolCombineCtx ctx;
  ctx.table = out.table.get();
  ctx.var_groups = &out.var_groups;
  ctx.ngroups = out.ngroups;
  ctx.engine = ItpEngine::Ceil;
  std::vector<FormulaPtr> seq = sequence_interpolants(out.proof, ctx);
  REQUIRE(seq.size() == 1);
  CHECK(equivalent_by_solver(seq[0], interpolant(out, 1, ItpEngine::Ceil), p.vars));
}

TEST_CASE("a three-group chain satisfies the inductive relation") {
  Problem p;
  VarId x = p.vars.intern("x"), y = p.vars.intern("y");
  p.groups.push_back(f_atom(normalize_atom(term({{x, 1}}), RawRel::Eq)));          // x = 0
  p.groups.push_back(f_atom(normalize_atom(term({{x, 1}, {y, -1}}), RawRel::Eq))); // x = y
  p.groups.push_back(f_atom(normalize_atom(term({{y, 1}}, -1), RawRel::Eq)));      // y = 1
  SolveOutcome out = solve_problem(p);
  REQUIRE(!out.sat);

  BoolCombineCtx ctx;
  ctx.table = out.table.get();
  ctx.var_groups = &out.var_groups;
  ctx.ngroups = out.ngroups;
  ctx.engine = ItpEngine::Ceil;
  std::vector<FormulaPtr> seq = sequence_interpolants(out.proof, ctx);
  REQUIRE(seq.size() == 2);
  for (int i = 0; i < 2; ++i) {
    VerifyReport rep = verify_interpolant(p, i + 1, seq[static_cast<size_t>(i)]);
    CHECK(rep.pass());
  }
  // I_i and phi_{i+1} entail I_{i+1}
  Problem chain;
  chain.vars = p.vars;
  chain.groups.push_back(f_and({seq[0], p.groups[1], f_not(seq[1])}));
  SolverOptions opts;
  opts.interpolating = false;
  CHECK(!solve_problem(chain, opts).sat);
}

TEST_CASE("satisfiable problems refuse to interpolate") {
  Problem p;
  VarId x = p.vars.intern("x");
  p.groups.push_back(f_atom(Atom::leq(term({{x, 1}}))));
  p.groups.push_back(f_atom(Atom::leq(term({{x, -1}}))));
  SolveOutcome out = solve_problem(p);
  REQUIRE(out.sat);
  CHECK_THROWS_AS(interpolant(out, 1, ItpEngine::Ceil), Error);
}

// ---------------------------------------------------------------------------
// randomized end-to-end suite (a slice of the acceptance run)
// ---------------------------------------------------------------------------

TEST_CASE("random bounded instances: verdicts, proofs and interpolants agree") {
  int unsat_count = 0;
  for (uint64_t seed = 1; seed <= 60; ++seed) {
    RandomProblemOptions ropts;
    ropts.nvars = 4;
    ropts.nconstraints = 6;
    ropts.coeff_bound = 6;
    ropts.box = 4;
    Problem p = gen_random_problem(seed, ropts);
    Problem fresh = p;  // solve mutates the variable table
    SolveOutcome out = solve_problem(p);

    std::set<VarId> vs;
    for (const auto &g : fresh.groups) collect_vars(g, vs);
    bool oracle = brute_force_sat(fresh.groups, vs, Int(ropts.box));
    REQUIRE(out.sat == oracle);

    if (out.sat) {
      CHECK(validate_model(p, out));
      continue;
    }
    ++unsat_count;
    CHECK(check_res_proof(out.proof, *out.table, true).ok);
    CHECK(out.laz_stats.mixed_lemma_atoms == 0);
    for (ItpEngine engine : {ItpEngine::Ceil, ItpEngine::ModEq}) {
      FormulaPtr itp = interpolant(out, 1, engine);
      VerifyReport rep = verify_interpolant(p, 1, itp);
      CHECK(rep.pass());
      BruteForceResult bf = brute_force_check(p, 1, itp, Int(ropts.box));
      CHECK(bf.ok);
      if (!rep.pass() || !bf.ok) {
        for (const auto &g : fresh.groups) std::printf("group: %s\n", print_formula(g, fresh.vars).c_str());
        std::printf("seed %llu engine %d itp: %s\n", (unsigned long long)seed, (int)engine,
                    print_formula(itp, p.vars).c_str());
      }
    }
  }
  CHECK(unsat_count > 0);
}
