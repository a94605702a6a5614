#include "liaitp/laz.hpp"

#include <algorithm>

namespace liaitp {

LemmaClause branch_lemma(VarId v, const Rat &value) {
  LIAITP_CONTRACT(!rat_is_int(value), "branch_lemma requires a fractional value");
  Int fl = rat_floor(value);
  LemmaClause c;
  c.lits.emplace_back(branch_atom_low(v, fl), true);
  c.lits.emplace_back(branch_atom_high(v, fl), true);
  return c;
}

std::optional<LemmaClause> cut_or_split_lemma(const std::vector<Atom> &constraints,
                                              const RatModel &model, bool interpolating,
                                              const VarGroups *groups, VarTable &vars,
                                              LazStats *stats) {
  // defining constraints: term evaluates to zero under the current solution
  std::vector<Atom> defining;
  std::vector<Atom> defining_ineqs;
  for (const Atom &a : constraints) {
    if (a.rel != Rel::LeqZero && a.rel != Rel::EqZero) continue;
    bool def = true;
    Rat val = a.term.constant;
    for (const auto &[v, c] : a.term.coeffs) {
      auto it = model.values.find(v);
      if (it == model.values.end()) {
        def = false;
        break;
      }
      val += c * it->second;
    }
    if (!def || val != 0) continue;
    defining.push_back(a);
    if (a.rel == Rel::LeqZero) defining_ineqs.push_back(a);
  }

  std::vector<Atom> d_e;
  std::set<Atom> seen;
  for (const Atom &a : defining) {
    Atom eq = normalize_atom(a.term, RawRel::Eq);
    if (eq.is_truth()) continue;
    if (seen.insert(eq).second) d_e.push_back(std::move(eq));
  }
  if (d_e.empty()) return std::nullopt;

  DiophResult r = solve_eqs(d_e, vars);
  if (r.solved) return std::nullopt;

  const LinTerm &root = r.cert.root;
  Int g = r.cert.gcd;
  if (g > 0) {
    LinTerm cut_term;
    for (const auto &[v, c] : root.coeffs) cut_term.coeffs.emplace(v, c / Rat(g));
    Int bound = ceil_div(Int(-root.constant.get_num()), g);
    if (!interpolating || !groups || groups->admissible(cut_term)) {
      // (sum(c/g v) <= bound - 1) or (bound <= sum(c/g v))
      LinTerm left = cut_term;
      left.constant = Rat(-(bound - 1));
      LinTerm right = cut_term;
      right.scale(-1);
      right.constant = Rat(bound);
      LemmaClause c;
      c.lits.emplace_back(Atom::leq(std::move(left)), true);
      c.lits.emplace_back(Atom::leq(std::move(right)), true);
      if (stats) ++stats->cut_lemmas;
      return c;
    }
  }

  // AB-mixed cut (or degenerate constant root): split a defining inequality
  if (defining_ineqs.empty()) return std::nullopt;
  const Atom *pick = &defining_ineqs.front();
  for (const Atom &a : defining_ineqs) {
    size_t na = a.term.coeffs.size(), np = pick->term.coeffs.size();
    if (na < np || (na == np && a.term < pick->term)) pick = &a;
  }
  LinTerm stronger = pick->term;
  stronger.constant += 1;
  Atom eq = normalize_atom(pick->term, RawRel::Eq);
  LemmaClause c;
  c.lits.emplace_back(*pick, false);
  c.lits.emplace_back(Atom::leq(std::move(stronger)), true);
  if (!eq.is_truth()) c.lits.emplace_back(std::move(eq), true);
  if (stats) ++stats->split_lemmas;
  return c;
}

namespace {

bool model_integral(const std::map<VarId, Rat> &m) {
  for (const auto &[v, q] : m)
    if (!rat_is_int(q)) return false;
  return true;
}

}  // namespace

CutProof LazSolver::expand_derived(const CutProof &p) const {
  CutProof out;
  std::vector<int> remap(p.nodes.size(), -1);
  for (int i = 0; i < static_cast<int>(p.nodes.size()); ++i) {
    const CutProof::Node &n = p.nodes[static_cast<size_t>(i)];
    switch (n.kind) {
      case CutProof::Kind::Hyp: {
        auto it = derived_proofs_.find(n.hyp);
        if (it != derived_proofs_.end())
          remap[static_cast<size_t>(i)] = out.splice(it->second);
        else
          remap[static_cast<size_t>(i)] = out.add_hyp(n.hyp, n.hyp_neg);
        break;
      }
      case CutProof::Kind::Comb:
        remap[static_cast<size_t>(i)] = out.add_comb(n.c1, remap[static_cast<size_t>(n.left)],
                                                     n.c2, remap[static_cast<size_t>(n.right)]);
        break;
      case CutProof::Kind::Strengthen:
        remap[static_cast<size_t>(i)] = out.add_strengthen(remap[static_cast<size_t>(n.child)], n.d);
        break;
      case CutProof::Kind::Division:
        remap[static_cast<size_t>(i)] = out.add_division(remap[static_cast<size_t>(n.child)], n.d);
        break;
    }
  }
  out.root = remap[static_cast<size_t>(p.root)];
  return out;
}

LazResult LazSolver::unsat_result(CutProof cut, std::optional<BnbProof> bnb) {
  LazResult r;
  r.kind = LazResult::Kind::Unsat;
  std::set<int> used;
  auto collect = [&](const CutProof &p) {
    for (const auto &[hyp, negated] : p.hypotheses()) {
      auto it = input_index_.find(hyp);
      if (it != input_index_.end()) {
        used.insert(it->second);
        continue;
      }
      // branch atoms inside bnb leaves are not inputs
      LIAITP_CONTRACT(bnb.has_value(), "proof hypothesis is not an asserted atom");
    }
  };
  if (bnb) {
    for (const BnbProof::Node &n : bnb->nodes)
      if (n.leaf) collect(n.cut);
  } else {
    collect(cut);
  }
  r.conflict.assign(used.begin(), used.end());
  r.cut = std::move(cut);
  r.bnb = std::move(bnb);
  return r;
}

std::optional<VarId> LazSolver::pick_branch_var(const std::map<VarId, Rat> &model) const {
  std::optional<VarId> best;
  Rat best_dist;
  for (const auto &[v, q] : model) {
    if (rat_is_int(q)) continue;
    Rat frac = q - Rat(rat_floor(q));
    Rat dist = std::min(frac, Rat(Rat(1) - frac));
    if (!best || dist < best_dist) {
      best = v;
      best_dist = dist;
    }
  }
  return best;
}

LazSolver::BnbOutcome LazSolver::bnb_search(Simplex &simplex, BnbProof &proof, int depth,
                                            int &leaf_checks) {
  ++stats_.laq_checks;
  LaqResult laq = simplex.check();
  if (!laq.sat) {
    if (++leaf_checks > opts_.bnb_max_leaf_checks) return {};
    BnbOutcome out;
    out.kind = BnbOutcome::Kind::Refuted;
    out.proof_node = proof.add_leaf(expand_derived(farkas_to_cut_proof(laq.cert)));
    return out;
  }
  if (model_integral(laq.model.values)) {
    BnbOutcome out;
    out.kind = BnbOutcome::Kind::Sat;
    out.model = laq.model.values;
    return out;
  }
  if (depth >= opts_.bnb_max_depth) return {};
  auto var = pick_branch_var(laq.model.values);
  LIAITP_CONTRACT(var.has_value(), "no fractional variable in a fractional model");
  Int fl = rat_floor(laq.model.values.at(*var));

  simplex.push();
  std::optional<FarkasCert> c = simplex.assert_atom(branch_atom_low(*var, fl));
  BnbOutcome left;
  if (c) {
    if (++leaf_checks > opts_.bnb_max_leaf_checks) {
      simplex.pop();
      return {};
    }
    left.kind = BnbOutcome::Kind::Refuted;
    left.proof_node = proof.add_leaf(expand_derived(farkas_to_cut_proof(*c)));
  } else {
    left = bnb_search(simplex, proof, depth + 1, leaf_checks);
  }
  simplex.pop();
  if (left.kind != BnbOutcome::Kind::Refuted) return left;

  simplex.push();
  c = simplex.assert_atom(branch_atom_high(*var, fl));
  BnbOutcome right;
  if (c) {
    if (++leaf_checks > opts_.bnb_max_leaf_checks) {
      simplex.pop();
      return {};
    }
    right.kind = BnbOutcome::Kind::Refuted;
    right.proof_node = proof.add_leaf(expand_derived(farkas_to_cut_proof(*c)));
  } else {
    right = bnb_search(simplex, proof, depth + 1, leaf_checks);
  }
  simplex.pop();
  if (right.kind != BnbOutcome::Kind::Refuted) return right;

  BnbOutcome out;
  out.kind = BnbOutcome::Kind::Refuted;
  out.proof_node = proof.add_split(*var, fl, left.proof_node, right.proof_node);
  return out;
}

void LazSolver::note_lemma(const LemmaClause &c) {
  emitted_.insert(c);
  ++stats_.lemmas_emitted;
  if (opts_.interpolating && groups_) {
    for (const auto &[atom, pos] : c.lits)
      if (!groups_->admissible(atom.term)) ++stats_.mixed_lemma_atoms;
  }
}

LazResult LazSolver::check(const std::vector<Atom> &constraints) {
  inputs_.clear();
  input_index_.clear();
  derived_proofs_.clear();

  Simplex simplex;
  std::vector<Atom> eqs, ineqs;
  for (const Atom &a : constraints) {
    if (a.rel == Rel::True) continue;
    LIAITP_CONTRACT(a.rel == Rel::LeqZero || a.rel == Rel::EqZero,
                    "laz solver accepts only <=0 / =0 atoms");
    int idx = static_cast<int>(inputs_.size());
    inputs_.push_back(a);
    input_index_.emplace(a, idx);
    (a.rel == Rel::EqZero ? eqs : ineqs).push_back(a);
    ++stats_.laq_checks;
    if (auto cert = simplex.assert_atom(a)) return unsat_result(farkas_to_cut_proof(*cert), {});
  }

  ++stats_.laq_checks;
  LaqResult laq = simplex.check();
  if (!laq.sat) return unsat_result(farkas_to_cut_proof(laq.cert), {});
  if (model_integral(laq.model.values)) {
    LazResult r;
    r.kind = LazResult::Kind::Sat;
    r.model = laq.model.values;
    return r;
  }

  // equality elimination + tightening
  EliminateResult elim = eliminate_and_tighten(eqs, ineqs, vars_);
  if (elim.unsat) {
    const UnsatLinComb &cert = *elim.unsat;
    // comb to (t + c <= 0), strengthen, then comb with the flipped orientation
    CutProof p;
    int acc = -1;
    Rat acc_coeff;
    for (const auto &[c, eq] : cert.combination) {
      int h = p.add_hyp(eq, c < 0);
      if (acc < 0) {
        acc = h;
        acc_coeff = abs(Rat(c));
      } else {
        acc = p.add_comb(acc_coeff, acc, abs(Rat(c)), h);
        acc_coeff = 1;
      }
    }
    if (p.nodes[static_cast<size_t>(acc)].kind == CutProof::Kind::Hyp)
      acc = p.add_comb(acc_coeff / 2, acc, acc_coeff / 2, acc);
    int pos = acc;  // root term + c <= 0
    Int g = cert.gcd;
    LIAITP_CONTRACT(g > 0, "degenerate equality conflict has no variables");
    int tightened = p.add_strengthen(pos, g);
    ++stats_.strengthenings;
    // flipped orientation: -(t + c) <= 0
    int negacc = -1;
    Rat negacc_coeff;
    for (const auto &[c, eq] : cert.combination) {
      int h = p.add_hyp(eq, !(c < 0));
      if (negacc < 0) {
        negacc = h;
        negacc_coeff = abs(Rat(c));
      } else {
        negacc = p.add_comb(negacc_coeff, negacc, abs(Rat(c)), h);
        negacc_coeff = 1;
      }
    }
    if (p.nodes[static_cast<size_t>(negacc)].kind == CutProof::Kind::Hyp)
      negacc = p.add_comb(negacc_coeff / 2, negacc, negacc_coeff / 2, negacc);
    p.add_comb(1, tightened, 1, negacc);

    LazResult r = unsat_result(std::move(p), {});
    r.eq_only = true;
    r.eq_cert = cert;
    return r;
  }

  for (const DerivedIneq &d : elim.derived) {
    if (d.k > 0) ++stats_.strengthenings;
    derived_proofs_[d.atom] = d.proof;
    if (d.atom.term.is_constant()) {
      // the combination already folded to a contradiction
      LIAITP_CONTRACT(d.atom.term.constant > 0, "non-positive constant derived atom");
      return unsat_result(expand_derived(d.proof), {});
    }
    ++stats_.laq_checks;
    if (auto cert = simplex.assert_atom(d.atom))
      return unsat_result(expand_derived(farkas_to_cut_proof(*cert)), {});
  }

  ++stats_.laq_checks;
  laq = simplex.check();
  if (!laq.sat) return unsat_result(expand_derived(farkas_to_cut_proof(laq.cert)), {});
  if (model_integral(laq.model.values)) {
    LazResult r;
    r.kind = LazResult::Kind::Sat;
    r.model = laq.model.values;
    return r;
  }
  RatModel relaxation_model = laq.model;

  // internal branch and bound, within budget
  if (opts_.bnb_max_depth > 0 && opts_.bnb_max_leaf_checks > 0) {
    BnbProof proof;
    int leaf_checks = 0;
    BnbOutcome out = bnb_search(simplex, proof, 0, leaf_checks);
    if (out.kind == BnbOutcome::Kind::Sat) {
      LazResult r;
      r.kind = LazResult::Kind::Sat;
      r.model = std::move(out.model);
      return r;
    }
    if (out.kind == BnbOutcome::Kind::Refuted) {
      ++stats_.bnb_refutations;
      proof.root = out.proof_node;
      if (proof.nodes[static_cast<size_t>(proof.root)].leaf) {
        // no actual split: the refutation is a plain cutting-plane proof
        CutProof cut = proof.nodes[static_cast<size_t>(proof.root)].cut;
        return unsat_result(std::move(cut), {});
      }
      return unsat_result({}, std::move(proof));
    }
  }

  // splitting on-demand
  LazResult r;
  r.kind = LazResult::Kind::NeedLemmas;
  if (extended_cuts_used_ < opts_.max_extended_cuts) {
    auto lemma = cut_or_split_lemma(inputs_, relaxation_model, opts_.interpolating,
                                    groups_ ? &*groups_ : nullptr, vars_, &stats_);
    if (lemma && !already_emitted(*lemma)) {
      ++extended_cuts_used_;
      note_lemma(*lemma);
      r.lemmas.push_back(std::move(*lemma));
      return r;
    }
  }
  for (const auto &[v, q] : relaxation_model.values) {
    if (rat_is_int(q)) continue;
    LemmaClause lemma = branch_lemma(v, q);
    if (already_emitted(lemma)) continue;
    ++stats_.branch_lemmas;
    note_lemma(lemma);
    r.lemmas.push_back(std::move(lemma));
  }
  LIAITP_CONTRACT(!r.lemmas.empty(), "splitting on-demand made no progress");
  return r;
}

}  // namespace liaitp
