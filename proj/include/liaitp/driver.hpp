#pragma once

#include <memory>

#include "liaitp/interp.hpp"
#include "liaitp/laz.hpp"
#include "liaitp/sat.hpp"

namespace liaitp {

// An interpolation problem: ordered groups phi_1..phi_n over shared variables.
struct Problem {
  VarTable vars;
  std::vector<FormulaPtr> groups;

  int ngroups() const { return static_cast<int>(groups.size()); }
};

struct SolverOptions {
  bool interpolating = true;
  LazOptions laz;
  SatOptions sat;
};

struct SolveOutcome {
  bool sat = false;
  std::map<VarId, Rat> model;             // integer values for theory variables
  std::map<std::string, bool> bool_model;
  ResProof proof;                          // refutation when unsat
  std::shared_ptr<AbstractionTable> table;
  VarGroups var_groups;
  int ngroups = 1;
  LazStats laz_stats;
};

// Preprocesses (ceilings, modular equalities, negated equalities), encodes to
// CNF, and runs the lazy SMT loop over the layered LA(Z) solver.
SolveOutcome solve_problem(Problem &problem, const SolverOptions &opts = {});

// Interpolant for the prefix partition A = groups 1..cut from an unsat
// outcome.
FormulaPtr interpolant(const SolveOutcome &out, int cut, ItpEngine engine,
                       ItpStats *stats = nullptr);

// Exact model check of a Sat outcome against the problem it came from.
bool validate_model(const Problem &problem, const SolveOutcome &out);

}  // namespace liaitp
