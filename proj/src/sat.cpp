#include "liaitp/sat.hpp"

#include <algorithm>

namespace liaitp {

SatSolver::SatSolver(AbstractionTable &table, SatOptions opts) : table_(table), opts_(opts) {}

void SatSolver::ensure_vars() {
  size_t n = static_cast<size_t>(table_.size());
  if (assign_.size() >= n) return;
  assign_.resize(n, -1);
  level_.resize(n, 0);
  reason_.resize(n, -1);
  trail_pos_.resize(n, -1);
  activity_.resize(n, 0.0);
  seen_.resize(n, 0);
}

int8_t SatSolver::value(Lit l) const {
  int8_t a = assign_[static_cast<size_t>(l.var)];
  if (a < 0) return -1;
  return (a == 1) == l.pos ? 1 : 0;
}

void SatSolver::add_clause(std::vector<Lit> lits, ClauseOrigin origin) {
  ensure_vars();
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  Clause c;
  c.lits = lits;
  c.origin = origin;
  c.proof_node = proof_.add_leaf(std::move(lits), origin);
  clauses_.push_back(std::move(c));
}

bool SatSolver::enqueue(Lit l, int reason_clause) {
  if (value(l) == 1) return true;
  if (value(l) == 0) return false;
  assign_[static_cast<size_t>(l.var)] = l.pos ? 1 : 0;
  level_[static_cast<size_t>(l.var)] = static_cast<int>(trail_lim_.size());
  reason_[static_cast<size_t>(l.var)] = reason_clause;
  trail_pos_[static_cast<size_t>(l.var)] = static_cast<int>(trail_.size());
  trail_.push_back(l);
  return true;
}

// Plain fixpoint propagation over all clauses; clause counts here are small
// and dominated by theory work.
int SatSolver::propagate() {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int ci = 0; ci < static_cast<int>(clauses_.size()); ++ci) {
      const Clause &c = clauses_[static_cast<size_t>(ci)];
      int unassigned = 0;
      Lit unit{};
      bool satisfied = false;
      for (Lit l : c.lits) {
        int8_t v = value(l);
        if (v == 1) {
          satisfied = true;
          break;
        }
        if (v == -1) {
          if (++unassigned > 1) break;
          unit = l;
        }
      }
      if (satisfied || unassigned > 1) continue;
      if (unassigned == 0) return ci;  // conflict
      enqueue(unit, ci);
      changed = true;
    }
  }
  qhead_ = static_cast<int>(trail_.size());
  return -1;
}

void SatSolver::cancel_until(int level) {
  if (static_cast<int>(trail_lim_.size()) <= level) return;
  int bound = trail_lim_[static_cast<size_t>(level)];
  for (int i = static_cast<int>(trail_.size()) - 1; i >= bound; --i) {
    int v = trail_[static_cast<size_t>(i)].var;
    assign_[static_cast<size_t>(v)] = -1;
    reason_[static_cast<size_t>(v)] = -1;
    trail_pos_[static_cast<size_t>(v)] = -1;
  }
  trail_.resize(static_cast<size_t>(bound));
  trail_lim_.resize(static_cast<size_t>(level));
  qhead_ = std::min(qhead_, bound);
}

int SatSolver::decide() {
  int best = -1;
  for (int v = 0; v < static_cast<int>(assign_.size()); ++v) {
    if (assign_[static_cast<size_t>(v)] >= 0) continue;
    if (best < 0 || activity_[static_cast<size_t>(v)] > activity_[static_cast<size_t>(best)])
      best = v;
  }
  return best;
}

void SatSolver::bump(int var) {
  activity_[static_cast<size_t>(var)] += activity_inc_;
  if (activity_[static_cast<size_t>(var)] > 1e100) {
    for (double &a : activity_) a *= 1e-100;
    activity_inc_ *= 1e-100;
  }
}

void SatSolver::decay() { activity_inc_ /= opts_.activity_decay; }

SatSolver::AnalyzeOut SatSolver::analyze(int conflict_clause) {
  ensure_vars();
  int cur_level = static_cast<int>(trail_lim_.size());
  AnalyzeOut out;
  std::vector<Lit> others;  // literals below the current level (level 0 kept)
  int count = 0;
  int proof_node = clauses_[static_cast<size_t>(conflict_clause)].proof_node;

  auto mark = [&](Lit l) {
    int v = l.var;
    if (seen_[static_cast<size_t>(v)]) return;
    seen_[static_cast<size_t>(v)] = 1;
    bump(v);
    if (level_[static_cast<size_t>(v)] == cur_level) ++count;
    else others.push_back(l);
  };
  for (Lit l : clauses_[static_cast<size_t>(conflict_clause)].lits) mark(l);
  LIAITP_CONTRACT(count > 0, "conflict clause has no literal at the current level");

  int index = static_cast<int>(trail_.size());
  Lit uip{};
  for (;;) {
    // walk back to the most recent marked literal
    do {
      --index;
    } while (!seen_[static_cast<size_t>(trail_[static_cast<size_t>(index)].var)]);
    Lit p = trail_[static_cast<size_t>(index)];
    if (count == 1) {
      uip = p;
      break;
    }
    seen_[static_cast<size_t>(p.var)] = 0;
    --count;
    int rc = reason_[static_cast<size_t>(p.var)];
    LIAITP_CONTRACT(rc >= 0, "current-level literal without reason during analyze");
    const Clause &reason = clauses_[static_cast<size_t>(rc)];
    int left = p.pos ? reason.proof_node : proof_node;
    int right = p.pos ? proof_node : reason.proof_node;
    proof_node = proof_.add_res(p.var, left, right);
    for (Lit l : reason.lits)
      if (l.var != p.var) mark(l);
  }

  out.learned.push_back(neg(uip));
  seen_[static_cast<size_t>(uip.var)] = 0;
  int bt = 0;
  for (Lit l : others) {
    out.learned.push_back(l);
    bt = std::max(bt, level_[static_cast<size_t>(l.var)]);
    seen_[static_cast<size_t>(l.var)] = 0;
  }
  out.backtrack_level = bt;
  out.proof_node = proof_node;
  // the logged resolvent must be exactly the learned clause
  std::vector<Lit> expect = out.learned;
  std::sort(expect.begin(), expect.end());
  LIAITP_CONTRACT(expect == proof_.clause(proof_node), "analyze: resolvent/learned mismatch");
  decay();
  return out;
}

int SatSolver::finalize_empty(int conflict_clause) {
  // resolve every remaining literal with its level-0 reason, newest first
  int proof_node = clauses_[static_cast<size_t>(conflict_clause)].proof_node;
  std::vector<Lit> cur = clauses_[static_cast<size_t>(conflict_clause)].lits;
  while (!cur.empty()) {
    Lit deepest{};
    int pos = -1;
    for (Lit l : cur) {
      int p = trail_pos_[static_cast<size_t>(l.var)];
      LIAITP_CONTRACT(p >= 0, "unassigned literal in a final conflict");
      if (p > pos) {
        pos = p;
        deepest = l;
      }
    }
    Lit assigned = trail_[static_cast<size_t>(pos)];
    int rc = reason_[static_cast<size_t>(assigned.var)];
    LIAITP_CONTRACT(rc >= 0, "decision literal in a level-0 conflict");
    const Clause &reason = clauses_[static_cast<size_t>(rc)];
    int left = assigned.pos ? reason.proof_node : proof_node;
    int right = assigned.pos ? proof_node : reason.proof_node;
    proof_node = proof_.add_res(assigned.var, left, right);
    cur = proof_.clause(proof_node);
  }
  return proof_node;
}

std::vector<Lit> SatSolver::assigned_theory_literals() const {
  std::vector<Lit> out;
  for (Lit l : trail_)
    if (table_.is_theory(l.var)) out.push_back(l);
  return out;
}

void SatSolver::count_step() {
  ++steps_;
  if (opts_.step_limit && steps_ > opts_.step_limit)
    throw Error(ErrorKind::ResourceLimit, "step limit exceeded");
}

SatResult SatSolver::solve(TheoryHook *theory) {
  ensure_vars();
  SatResult result;
  std::map<VarId, Rat> theory_model;

  for (;;) {
    int confl = propagate();
    if (confl >= 0) {
      count_step();
      // a late theory clause can be falsified below the current level
      int max_level = 0;
      for (Lit l : clauses_[static_cast<size_t>(confl)].lits)
        max_level = std::max(max_level, level_[static_cast<size_t>(l.var)]);
      if (max_level < static_cast<int>(trail_lim_.size())) cancel_until(max_level);
      if (trail_lim_.empty()) {
        int root = finalize_empty(confl);
        proof_.root = root;
        result.sat = false;
        result.proof = proof_.pruned();
        return result;
      }
      AnalyzeOut out = analyze(confl);
      cancel_until(out.backtrack_level);
      ensure_vars();
      Clause c;
      c.lits = out.learned;
      c.learned = true;
      c.proof_node = out.proof_node;
      std::sort(c.lits.begin(), c.lits.end());
      c.lits.erase(std::unique(c.lits.begin(), c.lits.end()), c.lits.end());
      int ci = static_cast<int>(clauses_.size());
      clauses_.push_back(std::move(c));
      enqueue(out.learned.front(), ci);
      continue;
    }

    int dvar = decide();
    if (dvar < 0) {
      // full assignment: consult the theory
      if (!theory) {
        result.sat = true;
        result.model = assign_;
        result.theory_model = std::move(theory_model);
        return result;
      }
      count_step();
      TheoryHook::Result tr = theory->check(assigned_theory_literals());
      switch (tr.kind) {
        case TheoryHook::Result::Kind::Consistent: {
          result.sat = true;
          result.model = assign_;
          result.theory_model = std::move(tr.model);
          return result;
        }
        case TheoryHook::Result::Kind::Conflict: {
          std::vector<Lit> clause;
          for (Lit l : tr.conflict) {
            LIAITP_CONTRACT(value(l) == 1, "theory conflict literal not assigned true");
            clause.push_back(neg(l));
          }
          int tl = proof_.add_tlemma(std::move(tr.lemma));
          add_clause(std::move(clause), {ClauseKind::TLemma, -1, tl});
          break;  // the falsified clause is found by propagate()
        }
        case TheoryHook::Result::Kind::Lemmas: {
          LIAITP_CONTRACT(!tr.lemma_clauses.empty(), "theory returned no verdict");
          for (auto &cl : tr.lemma_clauses) add_clause(std::move(cl), {ClauseKind::BnbLemma, -1, -1});
          ensure_vars();
          break;
        }
      }
      continue;
    }

    count_step();
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue({dvar, false}, -1);  // default phase: false
  }
}

// ---------------------------------------------------------------------------
// CNF encoding
// ---------------------------------------------------------------------------

namespace {

bool is_literal_formula(const FormulaPtr &f) {
  if (f->kind == Formula::Kind::Atom || f->kind == Formula::Kind::BoolVar) return true;
  if (f->kind == Formula::Kind::Not) {
    const auto &k = f->kids[0];
    return k->kind == Formula::Kind::Atom || k->kind == Formula::Kind::BoolVar;
  }
  return false;
}

// negation normal form; negated equalities split into integer complements
FormulaPtr nnf(const FormulaPtr &f, bool positive) {
  switch (f->kind) {
    case Formula::Kind::True: return positive ? f_true() : f_false();
    case Formula::Kind::False: return positive ? f_false() : f_true();
    case Formula::Kind::ExtLeq:
      throw Error(ErrorKind::Contract, "ceiling terms must be eliminated before CNF encoding");
    case Formula::Kind::Atom: {
      const Atom &a = f->atom;
      if (positive) return f;
      if (a.rel == Rel::LeqZero) return f_atom(negate_leq_atom(a));
      if (a.rel == Rel::EqZero) {
        // not(t = 0) over Z: (t+1 <= 0) or (-t+1 <= 0)
        LinTerm lt = a.term;
        LinTerm gt = a.term;
        gt.scale(-1);
        return f_or({f_atom(normalize_atom(std::move(lt), RawRel::Lt)),
                     f_atom(normalize_atom(std::move(gt), RawRel::Lt))});
      }
      throw Error(ErrorKind::Contract, "modular atoms must be encoded before CNF encoding");
    }
    case Formula::Kind::BoolVar: return positive ? f : f_not(f);
    case Formula::Kind::Not: return nnf(f->kids[0], !positive);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->kids.size());
      for (const auto &k : f->kids) kids.push_back(nnf(k, positive));
      bool conj = (f->kind == Formula::Kind::And) == positive;
      return conj ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
  }
  return f;
}

struct Encoder {
  int group;
  AbstractionTable &table;
  std::vector<std::pair<std::vector<Lit>, ClauseOrigin>> &out;

  ClauseOrigin origin() const { return {ClauseKind::Group, group, -1}; }

  Lit literal(const FormulaPtr &f) {
    if (f->kind == Formula::Kind::Not) return neg(literal(f->kids[0]));
    if (f->kind == Formula::Kind::Atom) {
      int v = table.intern_theory(f->atom);
      table.add_group_occurrence(v, group);
      return {v, true};
    }
    LIAITP_CONTRACT(f->kind == Formula::Kind::BoolVar, "not a literal");
    int v = table.intern_bool(f->bool_name);
    table.add_group_occurrence(v, group);
    return {v, true};
  }

  Lit encode(const FormulaPtr &f) {
    if (is_literal_formula(f)) return literal(f);
    LIAITP_CONTRACT(f->kind == Formula::Kind::And || f->kind == Formula::Kind::Or,
                    "unexpected formula shape after NNF");
    std::vector<Lit> kids;
    kids.reserve(f->kids.size());
    for (const auto &k : f->kids) kids.push_back(encode(k));
    Lit t{table.add_tseitin(group), true};
    if (f->kind == Formula::Kind::And) {
      std::vector<Lit> big{t};
      for (Lit k : kids) {
        out.push_back({{neg(t), k}, origin()});
        big.push_back(neg(k));
      }
      out.push_back({std::move(big), origin()});
    } else {
      std::vector<Lit> big{neg(t)};
      for (Lit k : kids) {
        out.push_back({{t, neg(k)}, origin()});
        big.push_back(k);
      }
      out.push_back({std::move(big), origin()});
    }
    return t;
  }

  void top(const FormulaPtr &f) {
    if (is_true(f)) return;
    if (is_false(f)) {
      out.push_back({{}, origin()});
      return;
    }
    if (f->kind == Formula::Kind::And) {
      for (const auto &k : f->kids) top(k);
      return;
    }
    if (is_literal_formula(f)) {
      out.push_back({{literal(f)}, origin()});
      return;
    }
    if (f->kind == Formula::Kind::Or) {
      std::vector<Lit> clause;
      for (const auto &k : f->kids)
        clause.push_back(is_literal_formula(k) ? literal(k) : encode(k));
      out.push_back({std::move(clause), origin()});
      return;
    }
    out.push_back({{encode(f)}, origin()});
  }
};

}  // namespace

void cnf_encode_group(const FormulaPtr &f, int group, AbstractionTable &table,
                      std::vector<std::pair<std::vector<Lit>, ClauseOrigin>> &out) {
  FormulaPtr n = nnf(f, true);
  Encoder enc{group, table, out};
  enc.top(n);
}

}  // namespace liaitp
