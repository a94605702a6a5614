#include <doctest.h>

#include "liaitp/driver.hpp"
#include "liaitp/frontend.hpp"
#include "test_util.hpp"

using namespace liaitp;
using liaitp::test::term;

TEST_CASE("unit clause contradiction resolves in one step") {
  AbstractionTable table;
  int p = table.intern_bool("p");
  SatSolver solver(table);
  solver.add_clause({{p, true}}, {ClauseKind::Group, 1, -1});
  solver.add_clause({{p, false}}, {ClauseKind::Group, 2, -1});
  SatResult r = solver.solve(nullptr);
  REQUIRE(!r.sat);
  CHECK(check_res_proof(r.proof, table, true).ok);
  int res_nodes = 0;
  for (const auto &n : r.proof.nodes)
    if (!n.leaf) {
      ++res_nodes;
      CHECK(n.pivot == p);
    }
  CHECK(res_nodes == 1);
}

TEST_CASE("a single positive clause is satisfiable") {
  AbstractionTable table;
  int p = table.intern_bool("p");
  int q = table.intern_bool("q");
  SatSolver solver(table);
  solver.add_clause({{p, true}, {q, true}}, {ClauseKind::Group, 1, -1});
  SatResult r = solver.solve(nullptr);
  CHECK(r.sat);
}

TEST_CASE("propositional pigeonhole needs real search") {
  AbstractionTable table;
  // 3 pigeons, 2 holes
  int v[3][2];
  for (int p = 0; p < 3; ++p)
    for (int h = 0; h < 2; ++h) v[p][h] = table.intern_bool("p" + std::to_string(p) + std::to_string(h));
  SatSolver solver(table);
  for (int p = 0; p < 3; ++p)
    solver.add_clause({{v[p][0], true}, {v[p][1], true}}, {ClauseKind::Group, 1, -1});
  for (int h = 0; h < 2; ++h)
    for (int p1 = 0; p1 < 3; ++p1)
      for (int p2 = p1 + 1; p2 < 3; ++p2)
        solver.add_clause({{v[p1][h], false}, {v[p2][h], false}}, {ClauseKind::Group, 1, -1});
  SatResult r = solver.solve(nullptr);
  REQUIRE(!r.sat);
  CHECK(check_res_proof(r.proof, table, true).ok);
}

TEST_CASE("cnf encoding of a bare atom is a unit clause") {
  VarTable vt;
  VarId x = vt.intern("x");
  AbstractionTable table;
  std::vector<std::pair<std::vector<Lit>, ClauseOrigin>> clauses;
  cnf_encode_group(f_atom(Atom::leq(term({{x, 1}}))), 1, table, clauses);
  REQUIRE(clauses.size() == 1);
  CHECK(clauses[0].first.size() == 1);
  CHECK(clauses[0].second.group == 1);
}

TEST_CASE("negated equalities split into the two integer complements") {
  VarTable vt;
  VarId x = vt.intern("x"), y = vt.intern("y");
  AbstractionTable table;
  std::vector<std::pair<std::vector<Lit>, ClauseOrigin>> clauses;
  FormulaPtr f = f_not(f_atom(normalize_atom(term({{x, 1}, {y, -1}}), RawRel::Eq)));
  cnf_encode_group(f, 1, table, clauses);
  REQUIRE(clauses.size() == 1);
  REQUIRE(clauses[0].first.size() == 2);
  std::set<Atom> atoms;
  for (Lit l : clauses[0].first) {
    CHECK(l.pos);
    atoms.insert(table.atom(l.var));
  }
  std::set<Atom> want = {Atom::leq(term({{x, 1}, {y, -1}}, 1)), Atom::leq(term({{x, -1}, {y, 1}}, 1))};
  CHECK(atoms == want);
}

TEST_CASE("tseitin encoding of (a and b) or c uses one auxiliary variable") {
  VarTable vt;
  VarId x = vt.intern("x");
  AbstractionTable table;
  std::vector<std::pair<std::vector<Lit>, ClauseOrigin>> clauses;
  FormulaPtr a = f_atom(Atom::leq(term({{x, 1}})));
  FormulaPtr b = f_atom(Atom::leq(term({{x, -1}}, -1)));
  FormulaPtr c = f_bool("c");
  cnf_encode_group(f_or({f_and({a, b}), c}), 1, table, clauses);
  int tseitin = 0;
  for (int v = 0; v < table.size(); ++v)
    if (table.kind(v) == AbstractionTable::VarKind::Tseitin) ++tseitin;
  CHECK(tseitin == 1);
  CHECK(clauses.size() == 4);  // three defining clauses + the top disjunction
}

TEST_CASE("theory integration refutes the intro pair and yields one theory lemma") {
  Problem p;
  VarId x = p.vars.intern("x"), y = p.vars.intern("y"), z = p.vars.intern("z");
  p.groups.push_back(f_atom(normalize_atom(term({{x, 2}, {y, -1}}, 1), RawRel::Eq)));
  p.groups.push_back(f_atom(normalize_atom(term({{y, 1}, {z, -2}}), RawRel::Eq)));
  SolveOutcome out = solve_problem(p);
  REQUIRE(!out.sat);
  CHECK(check_res_proof(out.proof, *out.table, true).ok);
  int tlemmas = 0;
  for (const auto &n : out.proof.nodes)
    if (n.leaf && n.origin.kind == ClauseKind::TLemma) ++tlemmas;
  CHECK(tlemmas == 1);
  CHECK(out.proof.tlemmas.size() == 1);
  CHECK(out.proof.tlemmas[0].eq_only);
}

TEST_CASE("theory integration finds integer models") {
  Problem p;
  VarId x = p.vars.intern("x"), y = p.vars.intern("y");
  p.groups.push_back(f_and({
      f_atom(Atom::leq(term({{x, 2}, {y, 3}}, -5))),
      f_atom(Atom::leq(term({{x, -1}}, 1))),
      f_atom(Atom::leq(term({{y, -1}}, 1))),
  }));
  SolveOutcome out = solve_problem(p);
  REQUIRE(out.sat);
  CHECK(validate_model(p, out));
}

TEST_CASE("boolean structure over theory atoms") {
  Problem p;
  VarId x = p.vars.intern("x");
  FormulaPtr x_neg = f_atom(Atom::leq(term({{x, 1}}, 1)));    // x <= -1
  FormulaPtr x_pos = f_atom(Atom::leq(term({{x, -1}}, 1)));   // x >= 1
  p.groups.push_back(f_or({x_neg, x_pos}));
  p.groups.push_back(f_and({f_atom(Atom::leq(term({{x, 1}}))), f_atom(Atom::leq(term({{x, -1}})))}));
  SolveOutcome out = solve_problem(p);
  REQUIRE(!out.sat);
  CHECK(check_res_proof(out.proof, *out.table, true).ok);
}

TEST_CASE("solving is deterministic") {
  auto run = [] {
    Problem p;
    VarId x = p.vars.intern("x"), y = p.vars.intern("y");
    p.groups.push_back(f_and({
        f_or({f_bool("p"), f_atom(Atom::leq(term({{x, 1}, {y, 3}}, -1)))}),
        f_or({f_not(f_bool("p")), f_atom(Atom::leq(term({{x, -2}, {y, -3}}, 5)))}),
        f_atom(Atom::leq(term({{x, 1}}, -4))),
        f_atom(Atom::leq(term({{x, -1}}, 4))),
        f_atom(Atom::leq(term({{y, 1}}, -4))),
        f_atom(Atom::leq(term({{y, -1}}, 4))),
        f_atom(normalize_atom(term({{x, 2}, {y, 2}}, 1), RawRel::Eq)),
    }));
    SolveOutcome out = solve_problem(p);
    REQUIRE(!out.sat);
    return dump_proof(flatten_bnb(out.proof, *out.table), *out.table, p.vars);
  };
  CHECK(run() == run());
}
