#pragma once

#include "liaitp/driver.hpp"
#include "liaitp/verify.hpp"

namespace liaitp {

struct InterpolationProblem {
  Problem problem;
  bool has_check_sat = false;
  bool has_itp_query = false;
  int itp_cut = 0;  // A = groups 1..cut for the (get-interpolant ...) query
  std::vector<std::string> group_names;  // ordered by first appearance
};

// SMT-LIB subset: (set-logic QF_LIA), (declare-fun v () Int),
// (declare-fun p () Bool), (assert (! t :itp-group gK)), (check-sat),
// (get-interpolant (g1 ... gk)). Terms over + - * <= < >= > = and or not ite,
// plus (cdiv t d) and ((_ divisible g) t) in extended mode.
InterpolationProblem parse_problem(const std::string &text);

// A single formula in the same term language; unknown symbols in arithmetic
// positions are interned as integer variables, in Boolean positions as
// Boolean variables.
FormulaPtr parse_formula(const std::string &text, VarTable &vars);

std::string print_formula(const FormulaPtr &f, const VarTable &vars);
std::string print_atom_sexp(const Atom &a, const VarTable &vars);

// Textual proof format; branch-and-bound lemmas are converted to resolution
// before dumping, so files contain only hyp/comb/strengthen/division/res/leaf
// forms.
ResProof flatten_bnb(const ResProof &p, AbstractionTable &table);
std::string dump_proof(const ResProof &p, const AbstractionTable &table, const VarTable &vars);

struct ParsedProof {
  ResProof proof;
  std::shared_ptr<AbstractionTable> table;
  VarTable vars;
};
ParsedProof parse_proof(const std::string &text);

int run_cli(int argc, char **argv);

}  // namespace liaitp
