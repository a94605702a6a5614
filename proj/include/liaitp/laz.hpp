#pragma once

#include <optional>
#include <set>
#include <vector>

#include "liaitp/arith.hpp"
#include "liaitp/dioph.hpp"
#include "liaitp/proofs.hpp"
#include "liaitp/simplex.hpp"

namespace liaitp {

struct LazOptions {
  bool interpolating = false;
  int bnb_max_depth = 2;        // internal branch-and-bound budget, levels
  int bnb_max_leaf_checks = 16; // and leaf checks
  int max_extended_cuts = 20;   // extended (cuts-from-proofs) lemmas per context
};

struct LazStats {
  int64_t laq_checks = 0;
  int64_t lemmas_emitted = 0;
  int64_t cut_lemmas = 0;
  int64_t split_lemmas = 0;
  int64_t branch_lemmas = 0;
  int64_t strengthenings = 0;
  int64_t bnb_refutations = 0;
  int64_t mixed_lemma_atoms = 0;  // must stay 0 in interpolating mode
};

struct LemmaClause {
  std::vector<std::pair<Atom, bool>> lits;  // atom, positive?

  friend bool operator<(const LemmaClause &a, const LemmaClause &b) { return a.lits < b.lits; }
};

struct LazResult {
  enum class Kind { Sat, Unsat, NeedLemmas };
  Kind kind = Kind::Sat;

  std::map<VarId, Rat> model;  // Sat: integral values for occurring variables

  std::vector<int> conflict;       // Unsat: indices into the input constraints
  CutProof cut;                    // Unsat: cutting-plane refutation, or
  std::optional<BnbProof> bnb;     //   branch-and-bound proof
  bool eq_only = false;            // conflict among equalities alone
  UnsatLinComb eq_cert;            // set when eq_only

  std::vector<LemmaClause> lemmas;  // NeedLemmas
};

// Branch-and-bound lemma for a variable with a fractional relaxation value:
// (v - floor(value) <= 0) or (-v + floor(value) + 1 <= 0).
LemmaClause branch_lemma(VarId v, const Rat &value);

// Cuts-from-proofs: from the defining constraints of the current vertex
// solution, derive an extended branch-and-bound lemma, or a defining-
// constraint split when the cut term would be inadmissible in interpolating
// mode. Returns nothing when the defining equations are consistent.
std::optional<LemmaClause> cut_or_split_lemma(const std::vector<Atom> &constraints,
                                              const RatModel &model, bool interpolating,
                                              const VarGroups *groups, VarTable &vars,
                                              LazStats *stats = nullptr);

// The layered LA(Z) solver: rational relaxation, equality elimination and
// tightening, bounded internal branch-and-bound, then splitting on-demand.
class LazSolver {
public:
  LazSolver(VarTable &vars, LazOptions opts = {}) : vars_(vars), opts_(opts) {}

  void set_groups(VarGroups groups) { groups_ = std::move(groups); }
  LazResult check(const std::vector<Atom> &constraints);
  const LazStats &stats() const { return stats_; }

private:
  struct BnbOutcome {
    enum class Kind { Refuted, Sat, Budget } kind = Kind::Budget;
    int proof_node = -1;
    std::map<VarId, Rat> model;
  };

  BnbOutcome bnb_search(Simplex &simplex, BnbProof &proof, int depth, int &leaf_checks);
  CutProof expand_derived(const CutProof &p) const;
  std::optional<VarId> pick_branch_var(const std::map<VarId, Rat> &model) const;
  LazResult unsat_result(CutProof cut, std::optional<BnbProof> bnb);
  void note_lemma(const LemmaClause &c);
  bool already_emitted(const LemmaClause &c) const { return emitted_.count(c) != 0; }

  VarTable &vars_;
  LazOptions opts_;
  LazStats stats_;
  std::optional<VarGroups> groups_;
  std::set<LemmaClause> emitted_;
  int extended_cuts_used_ = 0;

  // per-check state
  std::vector<Atom> inputs_;
  std::map<Atom, int> input_index_;
  std::map<Atom, CutProof> derived_proofs_;
};

}  // namespace liaitp
