#include "liaitp/interp.hpp"

#include <algorithm>

namespace liaitp {

// ---------------------------------------------------------------------------
// Equality interpolation
// ---------------------------------------------------------------------------

FormulaPtr itp_equalities(const std::vector<std::pair<Int, Atom>> &comb,
                          const LemmaPartition &part) {
  LinTerm a_comb;
  for (const auto &[c, eq] : comb) {
    LIAITP_CONTRACT(eq.rel == Rel::EqZero, "itp_equalities expects equalities");
    if (part.atom_in_B(eq)) continue;
    a_comb += Rat(c) * eq.term;
  }
  LinTerm kept;
  kept.constant = a_comb.constant;
  Int g(0);
  for (const auto &[v, c] : a_comb.coeffs) {
    if (part.var_in_B(v)) kept.add_mono(v, c);
    else g = gcd(g, Int(c.get_num()));
  }
  g = abs(g);
  if (g == 0) return f_atom(normalize_atom(std::move(kept), RawRel::Eq));
  if (g == 1) return f_true();
  if (kept.is_constant()) {
    Int c(kept.constant.get_num());
    return mpz_divisible_p(c.get_mpz_t(), g.get_mpz_t()) ? f_true() : f_false();
  }
  return f_atom(Atom::modeq(std::move(kept), g));
}

// ---------------------------------------------------------------------------
// Modular-equality annotation
// ---------------------------------------------------------------------------

namespace {

struct ModEqAnn {
  bool singleton_top = false;  // exactly { <t, true> }
  std::vector<std::pair<LinTerm, FormulaPtr>> pairs;
};

bool term_ab_common(const LinTerm &t, const LemmaPartition &part) {
  for (const auto &[v, c] : t.coeffs)
    if (!part.var_in_A(v) || !part.var_in_B(v)) return false;
  return true;
}

// E_j = exists(x not in B).(t + j = 0), in closed modular-equality form
FormulaPtr strengthen_annotation(const LinTerm &t, const LemmaPartition &part) {
  LinTerm kept;
  kept.constant = t.constant;
  Int g(0);
  for (const auto &[v, c] : t.coeffs) {
    if (part.var_in_B(v)) kept.add_mono(v, c);
    else g = gcd(g, Int(c.get_num()));
  }
  g = abs(g);
  if (g == 0) return f_atom(normalize_atom(std::move(kept), RawRel::Eq));
  if (g == 1) return f_true();
  if (kept.is_constant()) {
    Int c(kept.constant.get_num());
    return mpz_divisible_p(c.get_mpz_t(), g.get_mpz_t()) ? f_true() : f_false();
  }
  return f_atom(Atom::modeq(std::move(kept), g));
}

}  // namespace

FormulaPtr annotate_modeq(const CutProof &p, const LemmaPartition &part, ItpStats *stats) {
  LIAITP_CONTRACT(p.root >= 0, "empty proof");
  std::vector<ModEqAnn> ann(p.nodes.size());
  for (int i = 0; i < static_cast<int>(p.nodes.size()); ++i) {
    const CutProof::Node &n = p.nodes[static_cast<size_t>(i)];
    ModEqAnn &a = ann[static_cast<size_t>(i)];
    switch (n.kind) {
      case CutProof::Kind::Hyp: {
        a.singleton_top = true;
        if (part.atom_in_B(n.hyp)) a.pairs.push_back({LinTerm(), f_true()});
        else a.pairs.push_back({n.derived.term, f_true()});
        break;
      }
      case CutProof::Kind::Comb: {
        const ModEqAnn &l = ann[static_cast<size_t>(n.left)];
        const ModEqAnn &r = ann[static_cast<size_t>(n.right)];
        a.singleton_top = l.singleton_top && r.singleton_top;
        for (const auto &[t1, e1] : l.pairs)
          for (const auto &[t2, e2] : r.pairs)
            a.pairs.push_back({lin_comb(n.c1, t1, n.c2, t2), f_and({e1, e2})});
        break;
      }
      case CutProof::Kind::Strengthen: {
        const ModEqAnn &c = ann[static_cast<size_t>(n.child)];
        if (!c.singleton_top)
          throw Error(ErrorKind::UnsupportedProof,
                      "more than one strengthening on a proof branch");
        const LinTerm &tprime = c.pairs.front().first;
        Int k(Rat(n.derived.term.constant - p.derived(n.child).term.constant).get_num());
        LIAITP_CONTRACT(k >= 0, "negative strengthening");

        const LinTerm &premise = p.derived(n.child).term;
        LinTerm b_comb = premise - tprime;  // combination of the B-side above
        if (term_ab_common(n.derived.term, part) && term_ab_common(b_comb, part) && k > 0) {
          // Conditional-Strengthen: annotate with { <not P, not P>, <t+k, true> }
          LinTerm not_p = b_comb;
          not_p.scale(-1);
          not_p.constant += 1;
          FormulaPtr np = f_atom(Atom::leq(not_p));
          a.pairs.push_back({std::move(not_p), np});
          a.pairs.push_back({n.derived.term, f_true()});
          if (stats) stats->conditional_strengthen_fired = true;
        } else {
          if (k > 100000) throw Error(ErrorKind::ResourceLimit, "strengthening constant too large");
          for (Int j(0); j < k; ++j) {
            LinTerm tj = tprime;
            tj.constant += Rat(j);
            FormulaPtr ej = strengthen_annotation(tj, part);
            a.pairs.push_back({std::move(tj), std::move(ej)});
            if (stats) ++stats->strengthen_pairs;
          }
          LinTerm tk = tprime;
          tk.constant += Rat(k);
          a.pairs.push_back({std::move(tk), f_true()});
          a.singleton_top = (k == 0);
        }
        break;
      }
      case CutProof::Kind::Division:
        throw Error(ErrorKind::UnsupportedProof, "modEq engine does not support Division nodes");
    }
  }

  const Atom &root = p.root_atom();
  LIAITP_CONTRACT(root.term.is_constant() && root.term.constant > 0 &&
                      rat_is_int(root.term.constant),
                  "annotate_modeq expects a refutation");
  std::vector<FormulaPtr> disjuncts;
  for (const auto &[t, e] : ann[static_cast<size_t>(p.root)].pairs) {
    if (t.is_constant()) {
      if (t.constant > 0) continue;  // contradictory inequality part
      disjuncts.push_back(e);
    } else {
      disjuncts.push_back(f_and({f_atom(Atom::leq(t)), e}));
    }
  }
  return f_or(std::move(disjuncts));
}

// ---------------------------------------------------------------------------
// Ceiling annotation
// ---------------------------------------------------------------------------

FormulaPtr annotate_ceil(const CutProof &p, const LemmaPartition &part) {
  LIAITP_CONTRACT(p.root >= 0, "empty proof");
  std::vector<ExtTerm> ann(p.nodes.size());
  for (int i = 0; i < static_cast<int>(p.nodes.size()); ++i) {
    const CutProof::Node &n = p.nodes[static_cast<size_t>(i)];
    switch (n.kind) {
      case CutProof::Kind::Hyp:
        if (!part.atom_in_B(n.hyp)) ann[static_cast<size_t>(i)] = ExtTerm(n.derived.term);
        break;
      case CutProof::Kind::Comb: {
        ExtTerm t = n.c1 * ann[static_cast<size_t>(n.left)];
        t += n.c2 * ann[static_cast<size_t>(n.right)];
        ann[static_cast<size_t>(i)] = std::move(t);
        break;
      }
      case CutProof::Kind::Strengthen:
      case CutProof::Kind::Division: {
        const ExtTerm &child = ann[static_cast<size_t>(n.child)];
        const LinTerm &implied = p.derived(n.child).term;
        // split annotation into the A-local variable part and the rest
        ExtTerm a_part, rest = child;
        for (const auto &[v, c] : child.var_coeffs) {
          if (!part.var_in_B(v)) {
            a_part.add_var(v, c);
            rest.add_var(v, -c);
          }
        }
        // A-local coefficients agree between implied atom and annotation
        for (const auto &[v, c] : implied.coeffs)
          if (!part.var_in_B(v))
            LIAITP_CONTRACT(a_part.var_coeffs.count(v) && a_part.var_coeffs.at(v) == c,
                            "division invariant violated: A-local coefficients differ");
        for (const auto &[v, c] : a_part.var_coeffs)
          LIAITP_CONTRACT(implied.coeff(v) == c,
                          "division invariant violated: annotation-only A-local variable");

        ExtTerm ceil_part;
        if (rest.is_constant()) {
          ceil_part.constant = Rat(rat_ceil(rest.constant / Rat(n.d)));
        } else {
          ceil_part.add_ceil(ExtTerm::make_ceil(rest, n.d), 1);
        }
        ExtTerm out;
        if (n.kind == CutProof::Kind::Division) {
          out = Rat(1) / Rat(n.d) * a_part;
          out += ceil_part;
        } else {
          // Strengthen == Division then rescaling by d
          out = a_part;
          out += Rat(n.d) * ceil_part;
        }
        ann[static_cast<size_t>(i)] = std::move(out);
        break;
      }
    }
  }
  const Atom &root = p.root_atom();
  LIAITP_CONTRACT(root.term.is_constant() && root.term.constant > 0,
                  "annotate_ceil expects a refutation");
  return f_ext_leq(ann[static_cast<size_t>(p.root)]);
}

// ---------------------------------------------------------------------------
// Ceiling elimination
// ---------------------------------------------------------------------------

namespace {

struct CeilEliminator {
  VarTable &vars;
  std::map<CeilMono, VarId> cache;
  std::vector<std::pair<VarId, CeilMono>> fresh;
  std::vector<FormulaPtr> defs;

  LinTerm strip(const ExtTerm &t) {
    LinTerm out;
    out.coeffs = t.var_coeffs;
    out.constant = t.constant;
    for (const auto &[mono, coeff] : t.ceil_coeffs) out.add_mono(var_for(mono), coeff);
    return out;
  }

  VarId var_for(const CeilMono &mono) {
    auto it = cache.find(mono);
    if (it != cache.end()) return it->second;
    LinTerm content = strip(*mono.content);  // innermost first
    LIAITP_CONTRACT(content.integral(), "ceiling content must have integer coefficients");
    VarId x = vars.fresh("_c");
    // content - d*x <= 0  and  d*x - content - d + 1 <= 0
    LinTerm low = content;
    low.add_mono(x, Rat(-mono.divisor));
    LinTerm high = content;
    high.scale(-1);
    high.add_mono(x, Rat(mono.divisor));
    high.constant += Rat(1 - mono.divisor);
    defs.push_back(f_atom(Atom::leq(std::move(low))));
    defs.push_back(f_atom(Atom::leq(std::move(high))));
    cache.emplace(mono, x);
    fresh.emplace_back(x, mono);
    return x;
  }

  FormulaPtr walk(const FormulaPtr &f) {
    switch (f->kind) {
      case Formula::Kind::ExtLeq: {
        LinTerm t = strip(f->ext);
        return f_atom(normalize_atom(std::move(t), RawRel::Leq));
      }
      case Formula::Kind::Not:
        return f_not(walk(f->kids[0]));
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<FormulaPtr> kids;
        kids.reserve(f->kids.size());
        for (const auto &k : f->kids) kids.push_back(walk(k));
        return f->kind == Formula::Kind::And ? f_and(std::move(kids)) : f_or(std::move(kids));
      }
      default:
        return f;
    }
  }
};

}  // namespace

CeilingElimination eliminate_ceilings(const FormulaPtr &f, VarTable &vars) {
  CeilEliminator elim{vars, {}, {}, {}};
  CeilingElimination out;
  out.stripped = elim.walk(f);
  out.definitions = f_and(std::move(elim.defs));
  out.formula = f_and({out.stripped, out.definitions});
  out.fresh = std::move(elim.fresh);
  return out;
}

// ---------------------------------------------------------------------------
// Modular-equality encoding (for feeding interpolants back to the solver)
// ---------------------------------------------------------------------------

static FormulaPtr encode_modeq_rec(const FormulaPtr &f, VarTable &vars, bool positive) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::BoolVar:
    case Formula::Kind::ExtLeq:
      return positive ? f : f_not(f);
    case Formula::Kind::Atom: {
      const Atom &a = f->atom;
      if (a.rel != Rel::ModEq) return positive ? f : f_not(f);
      LIAITP_CONTRACT(a.modulus >= 1, "modular equality with non-positive modulus");
      if (a.modulus == 1) return positive ? f_true() : f_false();
      VarId k = vars.fresh("_k");
      LinTerm u = a.term;
      u.add_mono(k, Rat(-a.modulus));
      if (positive) return f_atom(normalize_atom(std::move(u), RawRel::Eq));
      // 1 <= u <= modulus - 1
      LinTerm low = u;
      low.scale(-1);
      low.constant += 1;
      LinTerm high = std::move(u);
      high.constant += Rat(1 - a.modulus);
      return f_and({f_atom(normalize_atom(std::move(low), RawRel::Leq)),
                    f_atom(normalize_atom(std::move(high), RawRel::Leq))});
    }
    case Formula::Kind::Not:
      return encode_modeq_rec(f->kids[0], vars, !positive);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto &k : f->kids) kids.push_back(encode_modeq_rec(k, vars, positive));
      bool conj = (f->kind == Formula::Kind::And) == positive;
      return conj ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
  }
  return f;
}

FormulaPtr encode_modeq(const FormulaPtr &f, VarTable &vars) {
  return encode_modeq_rec(f, vars, true);
}

// ---------------------------------------------------------------------------
// Boolean combination (the SMT interpolation schema over resolution proofs)
// ---------------------------------------------------------------------------

namespace {

struct Combiner {
  const ResProof &proof;
  const BoolCombineCtx &ctx;
  std::vector<char> occ_A, occ_B;        // per SAT variable
  std::vector<char> lemma_clause_in_B;   // per node, valid for BnbLemma leaves

  bool var_in_A(VarId v) const { return ctx.var_groups->in_A(v, ctx.cut); }
  bool var_in_B(VarId v) const { return ctx.var_groups->in_B(v, ctx.cut); }

  bool term_b_pure(const LinTerm &t) const {
    for (const auto &[v, c] : t.coeffs)
      if (!var_in_B(v)) return false;
    return true;
  }
  bool term_a_pure(const LinTerm &t) const {
    for (const auto &[v, c] : t.coeffs)
      if (!var_in_A(v)) return false;
    return true;
  }

  void compute_occurrence() {
    int nvars = ctx.table->size();
    occ_A.assign(static_cast<size_t>(nvars), 0);
    occ_B.assign(static_cast<size_t>(nvars), 0);
    for (int v = 0; v < nvars; ++v) {
      for (int g : ctx.table->groups_of(v)) {
        if (g <= ctx.cut) occ_A[static_cast<size_t>(v)] = 1;
        else occ_B[static_cast<size_t>(v)] = 1;
      }
    }
    lemma_clause_in_B.assign(proof.nodes.size(), 0);
    for (size_t i = 0; i < proof.nodes.size(); ++i) {
      const ResProof::Node &n = proof.nodes[i];
      if (!n.leaf || n.origin.kind != ClauseKind::BnbLemma) continue;
      bool all_b = true, all_a = true;
      for (Lit l : n.clause) {
        const Atom &a = ctx.table->atom(l.var);
        if (!term_b_pure(a.term)) all_b = false;
        if (!term_a_pure(a.term)) all_a = false;
      }
      LIAITP_CONTRACT(all_a || all_b, "AB-mixed lemma clause in an interpolating proof");
      lemma_clause_in_B[i] = all_b ? 1 : 0;  // AB-common lemmas go to B
      for (Lit l : n.clause)
        (all_b ? occ_B : occ_A)[static_cast<size_t>(l.var)] = 1;
    }
  }

  FormulaPtr literal_formula(Lit l) const {
    FormulaPtr f;
    if (ctx.table->is_theory(l.var)) f = f_atom(ctx.table->atom(l.var));
    else if (ctx.table->kind(l.var) == AbstractionTable::VarKind::Bool)
      f = f_bool(ctx.table->bool_name(l.var));
    else
      throw Error(ErrorKind::Contract, "Tseitin literal cannot appear in an interpolant");
    return l.pos ? f : f_not(f);
  }

  FormulaPtr restrict_to_B(const std::vector<Lit> &clause) const {
    std::vector<FormulaPtr> lits;
    for (Lit l : clause)
      if (occ_B[static_cast<size_t>(l.var)]) lits.push_back(literal_formula(l));
    return f_or(std::move(lits));
  }

  LemmaPartition lemma_partition(const std::vector<Lit> &clause) const {
    auto eff_in_B = std::make_shared<std::map<Atom, bool>>();
    for (Lit l : clause) {
      Atom eff = effective_atom(*ctx.table, neg(l));
      (*eff_in_B)[eff] = occ_B[static_cast<size_t>(l.var)] != 0;
    }
    LemmaPartition part;
    part.atom_in_B = [eff_in_B](const Atom &a) {
      auto it = eff_in_B->find(a);
      LIAITP_CONTRACT(it != eff_in_B->end(), "hypothesis not among the lemma's literals");
      return it->second;
    };
    const Combiner *self = this;
    part.var_in_A = [self](VarId v) { return self->var_in_A(v); };
    part.var_in_B = [self](VarId v) { return self->var_in_B(v); };
    return part;
  }

  FormulaPtr leaf_interpolant(const ResProof::Node &n, size_t idx) {
    switch (n.origin.kind) {
      case ClauseKind::Group:
        return n.origin.group <= ctx.cut ? restrict_to_B(n.clause) : f_true();
      case ClauseKind::BnbLemma:
        return lemma_clause_in_B[idx] ? f_true() : restrict_to_B(n.clause);
      case ClauseKind::TLemma: {
        const TheoryLemma &tl = proof.tlemmas.at(static_cast<size_t>(n.origin.tlemma));
        if (tl.bnb) {
          ResProof converted = bnb_to_resolution(*tl.bnb, *ctx.table, tl.bindings);
          return bool_combine(converted, ctx);
        }
        LemmaPartition part = lemma_partition(n.clause);
        if (tl.eq_only) return itp_equalities(tl.eq_comb, part);
        if (ctx.engine == ItpEngine::ModEq) return annotate_modeq(tl.cut, part, ctx.stats);
        return annotate_ceil(tl.cut, part);
      }
    }
    throw Error(ErrorKind::Contract, "leaf with unknown origin");
  }

  FormulaPtr run() {
    compute_occurrence();
    std::vector<FormulaPtr> itp(proof.nodes.size());
    for (size_t i = 0; i < proof.nodes.size(); ++i) {
      const ResProof::Node &n = proof.nodes[i];
      if (n.leaf) {
        itp[i] = leaf_interpolant(n, i);
        continue;
      }
      const FormulaPtr &l = itp[static_cast<size_t>(n.left)];
      const FormulaPtr &r = itp[static_cast<size_t>(n.right)];
      itp[i] = occ_B[static_cast<size_t>(n.pivot)] ? f_and({l, r}) : f_or({l, r});
    }
    return itp[static_cast<size_t>(proof.root)];
  }
};

}  // namespace

FormulaPtr bool_combine(const ResProof &p, const BoolCombineCtx &ctx) {
  LIAITP_CONTRACT(p.root >= 0, "bool_combine: empty proof");
  LIAITP_CONTRACT(ctx.table && ctx.var_groups, "bool_combine: missing context");
  Combiner c{p, ctx, {}, {}, {}};
  return c.run();
}

std::vector<FormulaPtr> sequence_interpolants(const ResProof &p, BoolCombineCtx ctx) {
  std::vector<FormulaPtr> out;
  for (int cut = 1; cut < ctx.ngroups; ++cut) {
    ctx.cut = cut;
    out.push_back(bool_combine(p, ctx));
  }
  return out;
}

}  // namespace liaitp
