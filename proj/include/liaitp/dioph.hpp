#pragma once

#include <vector>

#include "liaitp/arith.hpp"
#include "liaitp/proofs.hpp"

namespace liaitp {

// One solved variable. `replacement` may mention fresh variables introduced
// by the eliminator and variables eliminated by *later* steps, never earlier
// ones. `provenance` maps input-equation indices to the rational coefficients
// of the combination justifying the solved form; definitional steps (fresh
// variable introductions) have empty provenance.
struct SubstStep {
  VarId eliminated = -1;
  LinTerm replacement;
  std::map<int, Rat> provenance;
  bool definitional = false;
};

struct Subst {
  std::vector<SubstStep> steps;

  LinTerm apply(const LinTerm &t) const;
  // Also accumulates the input-equation combination that, added to `t`,
  // yields the substituted term with fresh variables eliminated again.
  LinTerm apply_with_provenance(const LinTerm &t, std::map<int, Rat> &lambda) const;
};

// Integer combination of input equalities whose result violates the gcd
// divisibility condition.
struct UnsatLinComb {
  std::vector<std::pair<Int, Atom>> combination;  // coefficient, input equality
  LinTerm root;                                   // recomputed combination, = 0
  Int gcd;                                        // gcd of root's variable coefficients

  void recompute_and_check() const;
};

struct DiophResult {
  bool solved = false;
  Subst subst;
  UnsatLinComb cert;
};

// Solve/eliminate a system of linear Diophantine equations with provenance
// tracking. Fresh variables needed by the decomposition step are allocated
// from `vars`.
DiophResult solve_eqs(const std::vector<Atom> &eqs, VarTable &vars);

// Inequality rewritten by equality elimination and tightening, with its
// cutting-plane derivation from the source inequality and the used equalities.
struct DerivedIneq {
  Atom atom;        // tightened combination
  Atom source;      // the input inequality it came from
  Int k;            // tightening amount
  CutProof proof;   // Hyp/Comb (+ one Strengthen when k > 0)
};

struct EliminateResult {
  std::optional<UnsatLinComb> unsat;  // set when the equations alone conflict
  std::vector<DerivedIneq> derived;
};

// For every inequality, the linear combination with the input equalities
// given by the eliminator's provenance, tightened. Inequalities that the
// process leaves unchanged are omitted. A combination that folds to a
// positive constant is returned as a refutation (its proof root is c <= 0).
EliminateResult eliminate_and_tighten(const std::vector<Atom> &eqs,
                                      const std::vector<Atom> &ineqs, VarTable &vars);

}  // namespace liaitp
