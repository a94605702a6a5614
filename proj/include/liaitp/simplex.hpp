#pragma once

#include <optional>
#include <vector>

#include "liaitp/arith.hpp"
#include "liaitp/proofs.hpp"

namespace liaitp {

// Positive linear combination of asserted atoms summing to a positive
// constant. Equalities enter with either sign, flagged by `negated_eq`.
struct FarkasEntry {
  Rat coeff;  // > 0
  Atom atom;
  bool negated_eq = false;
};

struct FarkasCert {
  std::vector<FarkasEntry> entries;
  Rat constant;  // > 0, equals the recomputed combination

  void recompute_and_check() const;
};

struct RatModel {
  std::map<VarId, Rat> values;
};

struct LaqResult {
  bool sat = false;
  RatModel model;
  FarkasCert cert;
};

// Exact-arithmetic general simplex with Bland's rule. Bounds-form tableau in
// the style of the Yices/Z3 solvers: multi-variable terms get slack variables,
// atoms become bounds. Incremental via push/pop of bound trails.
class Simplex {
public:
  // Asserts a normalized LeqZero/EqZero atom. Returns a conflict certificate
  // if the new bound immediately contradicts an opposite bound.
  std::optional<FarkasCert> assert_atom(const Atom &a);

  LaqResult check();

  void push();
  void pop();

  // Exact values for every problem variable seen so far.
  RatModel model() const;

private:
  struct Justification {
    Atom atom;
    bool negated_eq = false;
    Rat unit;  // atom coefficient contributed by one unit of this bound
  };
  struct Bound {
    Rat value;
    Justification just;
  };
  struct TrailEntry {
    int var;
    bool upper;
    std::optional<Bound> old_bound;
  };

  int solver_var_for(VarId v);
  int slack_for(const LinTerm &vars_part, Rat &scale_out);
  std::optional<FarkasCert> assert_bound(int var, bool upper, const Rat &value, Justification just);
  void update_nonbasic(int var, const Rat &value);
  void pivot_and_update(int basic_var, int nonbasic_var, const Rat &value);
  void pivot(int basic_var, int nonbasic_var);
  FarkasCert bound_conflict(const Bound &lower, const Bound &upper) const;
  FarkasCert row_conflict(int basic_var, bool lower_violated) const;
  static void add_entry(std::vector<FarkasEntry> &entries, const Rat &w, const Justification &j);

  std::vector<std::optional<Bound>> lower_, upper_;
  std::vector<Rat> beta_;
  std::vector<bool> is_basic_;
  std::map<int, std::map<int, Rat>> rows_;  // basic var -> row over nonbasic vars
  std::map<VarId, int> var_index_;
  std::vector<VarId> var_of_;  // solver var -> problem var, -1 for slacks
  std::map<LinTerm, int> slack_index_;
  std::vector<TrailEntry> trail_;
  std::vector<size_t> scopes_;

  int new_solver_var(VarId problem_var);
};

LaqResult check_laq(const std::vector<Atom> &atoms);

// Comb tree deriving (c <= 0) with integer c > 0 from the certificate's
// hypotheses; coefficients are scaled to make the root constant integral.
CutProof farkas_to_cut_proof(const FarkasCert &cert);

}  // namespace liaitp
