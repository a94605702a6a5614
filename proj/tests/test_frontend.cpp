#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "liaitp/frontend.hpp"
#include "test_util.hpp"

using namespace liaitp;
using liaitp::test::term;

namespace {

const char *kIntroText = R"(
(set-logic QF_LIA)
(declare-fun x () Int)
(declare-fun y () Int)
(declare-fun z () Int)
(assert (! (= (+ (* 2 x) (- y) 1) 0) :itp-group g1))
(assert (! (= (- y (* 2 z)) 0) :itp-group g2))
(check-sat)
(get-interpolant (g1))
)";

}  // namespace

TEST_CASE("the intro example parses into two groups with the right locality") {
  InterpolationProblem ip = parse_problem(kIntroText);
  REQUIRE(ip.problem.ngroups() == 2);
  CHECK(ip.has_check_sat);
  CHECK(ip.has_itp_query);
  CHECK(ip.itp_cut == 1);

  std::set<VarId> va, vb;
  collect_vars(ip.problem.groups[0], va);
  collect_vars(ip.problem.groups[1], vb);
  VarId x = ip.problem.vars.lookup("x"), y = ip.problem.vars.lookup("y"),
        z = ip.problem.vars.lookup("z");
  CHECK(va.count(x));
  CHECK(!vb.count(x));
  CHECK(vb.count(z));
  CHECK(!va.count(z));
  CHECK(va.count(y));
  CHECK(vb.count(y));
}

TEST_CASE("asserts without a group tag join the last declared group") {
  InterpolationProblem ip = parse_problem(R"(
(declare-fun a () Int)
(assert (! (<= a 0) :itp-group g1))
(assert (! (<= a 5) :itp-group g2))
(assert (<= 0 a))
(check-sat)
)");
  REQUIRE(ip.problem.ngroups() == 2);
  std::string g2 = print_formula(ip.problem.groups[1], ip.problem.vars);
  CHECK(g2.find("and") != std::string::npos);  // two conjuncts in g2
}

TEST_CASE("nonlinear multiplication is rejected") {
  CHECK_THROWS_AS(parse_problem(R"(
(declare-fun x () Int)
(declare-fun y () Int)
(assert (<= (* x y) 0))
)"),
                  Error);
}

TEST_CASE("undeclared symbols are rejected with a location") {
  try {
    parse_problem("(assert (<= w 0))");
    FAIL("expected a parse error");
  } catch (const Error &e) {
    CHECK(e.kind == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("w") != std::string::npos);
  }
}

TEST_CASE("printing follows the documented shapes") {
  VarTable vt;
  VarId y = vt.intern("y");
  FormulaPtr med = f_atom(Atom::modeq(term({{y, -1}}, 1), Int(2)));
  CHECK(print_formula(med, vt) == "((_ divisible 2) (+ (* (- 1) y) 1))");
  CHECK(print_formula(f_true(), vt) == "true");

  VarTable vt2;
  VarId y1 = vt2.intern("y1");
  ExtTerm t;
  t.add_var(y1, -1);
  ExtTerm content;
  content.add_var(y1, 1);
  t.add_ceil(ExtTerm::make_ceil(content, Int(2)), 2);
  CHECK(print_formula(f_ext_leq(t), vt2) == "(<= (+ (* (- 1) y1) (* 2 (cdiv y1 2))) 0)");
}

TEST_CASE("parse of print is the identity on random formulas") {
  std::mt19937_64 rng(31337);
  for (int iter = 0; iter < 120; ++iter) {
    VarTable vt;
    std::vector<VarId> vars;
    for (int i = 0; i < 3; ++i) vars.push_back(vt.intern("v" + std::to_string(i)));

    std::function<FormulaPtr(int)> gen = [&](int depth) -> FormulaPtr {
      int pick = static_cast<int>(rng() % (depth > 0 ? 6 : 3));
      switch (pick) {
        case 0: {
          LinTerm t;
          for (VarId v : vars) t.add_mono(v, Rat(static_cast<long>(rng() % 9) - 4));
          t.constant = Rat(static_cast<long>(rng() % 9) - 4);
          Atom a = normalize_atom(t, rng() % 2 ? RawRel::Leq : RawRel::Eq);
          return f_atom(a);
        }
        case 1: {
          LinTerm t;
          for (VarId v : vars) t.add_mono(v, Rat(static_cast<long>(rng() % 9) - 4));
          t.constant = Rat(static_cast<long>(rng() % 9) - 4);
          if (t.coeffs.empty()) return f_true();
          return f_atom(Atom::modeq(t, Int(2 + rng() % 5)));
        }
        case 2: {
          ExtTerm content;
          for (VarId v : vars) content.add_var(v, Rat(static_cast<long>(rng() % 9) - 4));
          if (content.is_constant()) return f_false();
          ExtTerm t;
          t.add_ceil(ExtTerm::make_ceil(content, Int(2 + rng() % 4)), Rat(1 + rng() % 3));
          t.add_var(vars[0], Rat(static_cast<long>(rng() % 9) - 4));
          t.constant = Rat(static_cast<long>(rng() % 5) - 2);
          return f_ext_leq(t);
        }
        case 3: return f_not(gen(depth - 1));
        case 4: return f_and({gen(depth - 1), gen(depth - 1)});
        default: return f_or({gen(depth - 1), gen(depth - 1)});
      }
    };
    FormulaPtr f = gen(2);
    std::string printed = print_formula(f, vt);
    VarTable vt2 = vt;
    FormulaPtr parsed = parse_formula(printed, vt2);
    CHECK(print_formula(parsed, vt2) == printed);
  }
}

TEST_CASE("proof dump and parse round-trips through the checker") {
  Problem p;
  VarId x = p.vars.intern("x"), y = p.vars.intern("y");
  p.groups.push_back(f_and({
      f_or({f_bool("p"), f_atom(Atom::leq(term({{x, 1}, {y, 3}}, -1)))}),
      f_or({f_not(f_bool("p")), f_atom(Atom::leq(term({{x, -2}, {y, -3}}, 5)))}),
      f_atom(normalize_atom(term({{x, 2}, {y, 2}}, 1), RawRel::Eq)),
      f_atom(Atom::leq(term({{x, 1}}, -4))),
      f_atom(Atom::leq(term({{x, -1}}, 4))),
      f_atom(Atom::leq(term({{y, 1}}, -4))),
      f_atom(Atom::leq(term({{y, -1}}, 4))),
  }));
  SolveOutcome out = solve_problem(p);
  REQUIRE(!out.sat);
  ResProof flat = flatten_bnb(out.proof, *out.table);
  std::string text = dump_proof(flat, *out.table, p.vars);
  ParsedProof pp = parse_proof(text);
  CHECK(check_res_proof(pp.proof, *pp.table, true).ok);
  CHECK(dump_proof(pp.proof, *pp.table, pp.vars) == text);
}

TEST_CASE("the command line solves, checks, and round-trips proofs") {
  std::string dir = "/tmp/liaitp_front_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir + "/intro.smt2");
    os << kIntroText;
  }
  {
    const char *argv[] = {"liaitp", "solve", "/tmp/liaitp_front_test/intro.smt2",
                          "--engine", "modeq",  "--check",
                          "--check-brute", "8", "--dump-proof",
                          "/tmp/liaitp_front_test/intro.cpf"};
    CHECK(run_cli(10, const_cast<char **>(argv)) == 20);
  }
  {
    const char *argv[] = {"liaitp", "check-proof", "/tmp/liaitp_front_test/intro.cpf"};
    CHECK(run_cli(3, const_cast<char **>(argv)) == 0);
  }
  {
    std::ofstream os(dir + "/sat.smt2");
    os << "(declare-fun x () Int)\n(assert (<= x 0))\n(check-sat)\n";
  }
  {
    const char *argv[] = {"liaitp", "solve", "/tmp/liaitp_front_test/sat.smt2"};
    CHECK(run_cli(3, const_cast<char **>(argv)) == 0);
  }
  {
    const char *argv[] = {"liaitp", "nonsense"};
    CHECK(run_cli(2, const_cast<char **>(argv)) == 2);
  }
}
