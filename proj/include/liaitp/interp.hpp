#pragma once

#include <functional>

#include "liaitp/dioph.hpp"
#include "liaitp/formula.hpp"
#include "liaitp/proofs.hpp"

namespace liaitp {

enum class ItpEngine { Ceil, ModEq };

// Side information for interpolating a single theory lemma: which hypotheses
// belong to the B side and how variables are classified globally.
struct LemmaPartition {
  std::function<bool(const Atom &)> atom_in_B;
  std::function<bool(VarId)> var_in_A;
  std::function<bool(VarId)> var_in_B;
};

struct ItpStats {
  bool conditional_strengthen_fired = false;
  int64_t strengthen_pairs = 0;
};

// Interpolant for an equality-only conflict from its linear-combination
// certificate: the A-part of the combination with the A-local variables
// projected into a modular equality.
FormulaPtr itp_equalities(const std::vector<std::pair<Int, Atom>> &comb,
                          const LemmaPartition &part);

// Annotation of a cutting-plane refutation with modular-equality
// interpolants (Hyp-A/Hyp-B/Comb/Strengthen, plus Conditional-Strengthen when
// its side conditions hold). Division nodes and proofs with more than one
// strengthening per branch are rejected.
FormulaPtr annotate_modeq(const CutProof &p, const LemmaPartition &part, ItpStats *stats = nullptr);

// Annotation with a single extended-term inequality per node; Strengthen is
// treated as Division followed by rescaling with the divisor.
FormulaPtr annotate_ceil(const CutProof &p, const LemmaPartition &part);

// Ceiling elimination: each ceil(t/d) is replaced innermost-first by a fresh
// integer variable x constrained by (t - d*x <= 0) and (d*x - t - d + 1 <= 0).
struct CeilingElimination {
  FormulaPtr formula;     // stripped /\ definitions
  FormulaPtr stripped;    // input with ceilings replaced
  FormulaPtr definitions;
  std::vector<std::pair<VarId, CeilMono>> fresh;
};
CeilingElimination eliminate_ceilings(const FormulaPtr &f, VarTable &vars);

// Polarity-aware removal of modular equalities: positive (t =_g 0) becomes
// t - g*k = 0 with fresh k, negated becomes 1 <= t - g*k <= g - 1.
FormulaPtr encode_modeq(const FormulaPtr &f, VarTable &vars);

// Context for running Algorithm-style Boolean combination over a resolution
// refutation. `cut` selects the prefix partition: A = groups 1..cut.
struct BoolCombineCtx {
  AbstractionTable *table = nullptr;
  const VarGroups *var_groups = nullptr;
  int ngroups = 2;
  int cut = 1;
  ItpEngine engine = ItpEngine::Ceil;
  ItpStats *stats = nullptr;
};

FormulaPtr bool_combine(const ResProof &p, const BoolCombineCtx &ctx);

// All n-1 prefix-partition interpolants from the same refutation.
std::vector<FormulaPtr> sequence_interpolants(const ResProof &p, BoolCombineCtx ctx);

}  // namespace liaitp
