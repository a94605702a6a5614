#pragma once

#include "liaitp/driver.hpp"

namespace liaitp {

struct VerifyReport {
  bool a_implies_i = false;
  bool i_and_b_unsat = false;
  bool symbols_ok = false;
  // witnessing assignment when a check fails
  std::map<VarId, Rat> counterexample;
  std::map<std::string, bool> counter_bools;
  std::string failed_check;

  bool pass() const { return a_implies_i && i_and_b_unsat && symbols_ok; }
};

// Checks the three interpolant conditions with the solver itself
// (interpolation mode off): A /\ not I and I /\ B are solved after ceiling
// elimination and modular-equality encoding; the symbol condition is checked
// against the variable/Boolean occurrences of A and B.
VerifyReport verify_interpolant(const std::vector<FormulaPtr> &a_groups,
                                const std::vector<FormulaPtr> &b_groups, const FormulaPtr &itp,
                                VarTable &vars);

VerifyReport verify_interpolant(Problem &problem, int cut, const FormulaPtr &itp);

struct BruteForceResult {
  bool ok = true;
  std::string failed_check;  // "A |= I" or "I and B unsat" or "A and B sat"
  std::map<VarId, Rat> point;
  std::map<std::string, bool> bools;
};

// Enumerates every integer point of [-box, box]^n (and every Boolean
// combination); ceilings and modular equalities are evaluated directly.
// Also reports when A /\ B is satisfiable inside the box (no interpolant can
// exist for a satisfiable pair).
BruteForceResult brute_force_check(const std::vector<FormulaPtr> &a_groups,
                                   const std::vector<FormulaPtr> &b_groups, const FormulaPtr &itp,
                                   const std::set<VarId> &all_vars, const Int &box);

BruteForceResult brute_force_check(Problem &problem, int cut, const FormulaPtr &itp,
                                   const Int &box);

// Brute-force satisfiability of a conjunction of groups over the box.
bool brute_force_sat(const std::vector<FormulaPtr> &groups, const std::set<VarId> &all_vars,
                     const Int &box);

struct RandomProblemOptions {
  int nvars = 5;
  int nconstraints = 8;
  int coeff_bound = 10;
  int box = 8;
  int ngroups = 2;
};

// Deterministic per seed. Every variable carries explicit box bounds so brute
// force is complete; the constraints are split roughly 40/60 between the
// first group and the rest, and the first group always has a local variable.
Problem gen_random_problem(uint64_t seed, const RandomProblemOptions &opts = {});

}  // namespace liaitp
