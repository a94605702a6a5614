#pragma once

#include <memory>
#include <vector>

#include "liaitp/formula.hpp"
#include "liaitp/proofs.hpp"

namespace liaitp {

// Lazy theory integration: the SAT engine enumerates truth assignments and
// hands the assigned theory literals to the hook, which answers with a model,
// a conflict (plus proof payload), or additional lemma clauses to split on.
class TheoryHook {
public:
  virtual ~TheoryHook() = default;

  struct Result {
    enum class Kind { Consistent, Conflict, Lemmas };
    Kind kind = Kind::Consistent;
    std::map<VarId, Rat> model;  // Consistent
    std::vector<Lit> conflict;   // Conflict: subset of the assigned literals
    TheoryLemma lemma;           // Conflict payload
    std::vector<std::vector<Lit>> lemma_clauses;  // Lemmas
  };

  virtual Result check(const std::vector<Lit> &assigned) = 0;
};

struct SatOptions {
  bool restarts = false;         // off by default: smaller, reproducible proofs
  uint64_t step_limit = 0;       // decisions+conflicts; 0 = unlimited
  double activity_decay = 0.95;
};

struct SatResult {
  bool sat = false;
  std::vector<int8_t> model;  // per SAT variable: 0/1 (valid when sat)
  std::map<VarId, Rat> theory_model;
  ResProof proof;  // refutation (valid when unsat)
};

class SatSolver {
public:
  explicit SatSolver(AbstractionTable &table, SatOptions opts = {});

  void add_clause(std::vector<Lit> lits, ClauseOrigin origin);
  SatResult solve(TheoryHook *theory);

private:
  struct Clause {
    std::vector<Lit> lits;
    ClauseOrigin origin;
    int proof_node = -1;
    bool learned = false;
  };

  void ensure_vars();
  int8_t value(Lit l) const;
  bool enqueue(Lit l, int reason_clause);
  int propagate();           // returns conflicting clause index or -1
  void cancel_until(int level);
  int decide();              // var picked, -1 when all assigned
  void bump(int var);
  void decay();
  struct AnalyzeOut {
    std::vector<Lit> learned;
    int backtrack_level = 0;
    int proof_node = -1;
  };
  AnalyzeOut analyze(int conflict_clause);
  int finalize_empty(int conflict_clause);  // proof node of the empty clause
  std::vector<Lit> assigned_theory_literals() const;
  void count_step();

  AbstractionTable &table_;
  SatOptions opts_;
  std::vector<Clause> clauses_;
  ResProof proof_;
  std::vector<int8_t> assign_;   // -1 unassigned, 0 false, 1 true
  std::vector<int> level_;
  std::vector<int> reason_;      // clause index or -1
  std::vector<int> trail_pos_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::vector<double> activity_;
  std::vector<int8_t> seen_;
  double activity_inc_ = 1.0;
  uint64_t steps_ = 0;
  int qhead_ = 0;
};

// CNF encoding of one formula group (Tseitin with group-tagged auxiliary
// variables; negated equalities split into their integer complements).
// Appends clauses tagged with the given 1-based group.
void cnf_encode_group(const FormulaPtr &f, int group, AbstractionTable &table,
                      std::vector<std::pair<std::vector<Lit>, ClauseOrigin>> &out);

}  // namespace liaitp
