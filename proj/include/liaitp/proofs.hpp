#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "liaitp/arith.hpp"

namespace liaitp {

// ---------------------------------------------------------------------------
// Propositional abstraction: SAT variables stand for theory atoms, named
// Boolean variables, or Tseitin variables introduced during CNF encoding.
// ---------------------------------------------------------------------------

class AbstractionTable {
public:
  enum class VarKind : uint8_t { Theory, Bool, Tseitin };

  int intern_theory(const Atom &a);
  std::optional<int> find_theory(const Atom &a) const;
  int intern_bool(const std::string &name);
  std::optional<int> find_bool(const std::string &name) const;
  int add_tseitin(int group);

  int size() const { return static_cast<int>(kinds_.size()); }
  VarKind kind(int v) const { return kinds_.at(static_cast<size_t>(v)); }
  bool is_theory(int v) const { return kind(v) == VarKind::Theory; }
  const Atom &atom(int v) const;
  const std::string &bool_name(int v) const;

  // syntactic group occurrence (1-based groups); Tseitin vars get exactly one
  void add_group_occurrence(int v, int group);
  const std::set<int> &groups_of(int v) const { return groups_.at(static_cast<size_t>(v)); }

private:
  std::vector<VarKind> kinds_;
  std::vector<Atom> atoms_;          // parallel; meaningful for Theory
  std::vector<std::string> names_;   // parallel; meaningful for Bool
  std::vector<std::set<int>> groups_;
  std::map<Atom, int> atom_index_;
  std::map<std::string, int> bool_index_;

  int push_var(VarKind k);
};

struct Lit {
  int32_t var = -1;
  bool pos = true;

  friend bool operator==(const Lit &a, const Lit &b) { return a.var == b.var && a.pos == b.pos; }
  friend bool operator!=(const Lit &a, const Lit &b) { return !(a == b); }
  friend bool operator<(const Lit &a, const Lit &b) {
    return a.var != b.var ? a.var < b.var : a.pos < b.pos;
  }
};

inline Lit neg(Lit l) { return {l.var, !l.pos}; }

// The theory constraint a literal stands for. Negative inequality literals
// become their integer complement; negative equality literals carry no
// constraint (the CNF layer splits negated equalities) and are rejected.
Atom effective_atom(const AbstractionTable &table, Lit l);

enum class ClauseKind : uint8_t { Group, TLemma, BnbLemma };

struct ClauseOrigin {
  ClauseKind kind = ClauseKind::Group;
  int group = -1;   // Group: 1-based group index
  int tlemma = -1;  // TLemma: index into the proof's lemma store
};

// ---------------------------------------------------------------------------
// Cutting-plane proofs
// ---------------------------------------------------------------------------

struct CutProof {
  enum class Kind : uint8_t { Hyp, Comb, Strengthen, Division };

  struct Node {
    Kind kind;
    Atom derived;  // cached implied inequality (t <= 0)
    // Hyp
    Atom hyp;              // the original hypothesis (LeqZero or EqZero)
    bool hyp_neg = false;  // equality taken with flipped sign
    // Comb
    Rat c1, c2;
    int left = -1, right = -1;
    // Strengthen / Division
    int child = -1;
    Int d;
  };

  std::vector<Node> nodes;
  int root = -1;

  int add_hyp(const Atom &hyp, bool negate_equality = false);
  int add_comb(const Rat &c1, int left, const Rat &c2, int right);
  int add_strengthen(int child, const Int &d);
  int add_division(int child, const Int &d);
  // Appends another proof's nodes; returns the re-rooted index of `other.root`.
  int splice(const CutProof &other);

  const Atom &derived(int node) const { return nodes.at(static_cast<size_t>(node)).derived; }
  const Atom &root_atom() const { return derived(root); }

  // All hypotheses, as (atom, negated) pairs, deduplicated.
  std::vector<std::pair<Atom, bool>> hypotheses() const;
  bool has_strengthen_or_division() const;
};

struct CheckResult {
  bool ok = true;
  int node = -1;
  std::string reason;

  static CheckResult failure(int node, std::string reason) { return {false, node, std::move(reason)}; }
};

// Recomputes every inference. Hypotheses may be matched in either orientation
// when they are equalities. For a refutation the root must be (c <= 0) with
// integer c > 0.
CheckResult check_cut_proof(const CutProof &p, const std::vector<Atom> &hypotheses,
                            bool refutation = true);

// ---------------------------------------------------------------------------
// Branch-and-bound proofs (case splits over complementary atoms)
// ---------------------------------------------------------------------------

struct BnbProof {
  struct Node {
    bool leaf = false;
    CutProof cut;  // leaf: refutation from asserted atoms + path atoms
    VarId var = -1;
    Int bound;  // split into var <= bound / var >= bound+1
    int left = -1, right = -1;
  };

  std::vector<Node> nodes;
  int root = -1;

  int add_leaf(CutProof cut);
  int add_split(VarId v, const Int &bound, int left, int right);
};

Atom branch_atom_low(VarId v, const Int &n);   // v - n <= 0
Atom branch_atom_high(VarId v, const Int &n);  // -v + n + 1 <= 0

// Each leaf refutation may use the asserted atoms plus the branch atoms on
// its path.
CheckResult check_bnb_proof(const BnbProof &p, const std::vector<Atom> &asserted);

// ---------------------------------------------------------------------------
// Resolution proofs
// ---------------------------------------------------------------------------

// Payload of a T-lemma leaf. Exactly one of cut/bnb justifies the lemma;
// equality-only conflicts also carry the linear-combination certificate used
// by the interpolation engines. `bindings` maps effective theory atoms back
// to the literals that asserted them (needed to rebuild clauses when a
// branch-and-bound proof is converted to resolution).
struct TheoryLemma {
  CutProof cut;
  std::optional<BnbProof> bnb;
  bool eq_only = false;
  std::vector<std::pair<Int, Atom>> eq_comb;
  std::map<Atom, Lit> bindings;
};

struct ResProof {
  struct Node {
    bool leaf = false;
    std::vector<Lit> clause;  // sorted, unique
    ClauseOrigin origin;      // leaves only
    int pivot = -1;           // inner: pivot variable
    int left = -1, right = -1;  // left contains +pivot, right contains -pivot
  };

  std::vector<Node> nodes;
  std::vector<TheoryLemma> tlemmas;
  int root = -1;

  int add_leaf(std::vector<Lit> clause, ClauseOrigin origin);
  int add_res(int pivot, int left, int right);
  int add_tlemma(TheoryLemma lemma);  // returns the lemma index

  const std::vector<Lit> &clause(int node) const { return nodes.at(static_cast<size_t>(node)).clause; }

  // Copy of the sub-DAG reachable from the root (drops dangling side chains).
  ResProof pruned() const;
};

std::vector<Lit> resolve_clauses(const std::vector<Lit> &left, const std::vector<Lit> &right,
                                 int pivot);

// Verifies every resolution step and every theory-lemma leaf (cut proofs are
// rechecked against the negated clause literals; branch-and-bound proofs are
// converted and rechecked). Uses only arith-core arithmetic. A refutation
// additionally requires the empty root clause.
CheckResult check_res_proof(const ResProof &p, const AbstractionTable &table,
                            bool refutation = false);

// Boolean resolution proof of the lemma corresponding to the root conflict of
// a branch-and-bound proof: each leaf becomes a T-lemma clause, each split
// introduces its branch-and-bound lemma clause and two resolution steps.
ResProof bnb_to_resolution(const BnbProof &p, AbstractionTable &table,
                           const std::map<Atom, Lit> &asserted_lits = {});

}  // namespace liaitp
