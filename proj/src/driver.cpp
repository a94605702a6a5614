#include "liaitp/driver.hpp"

#include <algorithm>

namespace liaitp {

namespace {

// Lazy SMT adapter: translates assigned literals into theory constraints,
// theory verdicts into lemma clauses / conflict clauses with proof payloads.
class LazHook : public TheoryHook {
public:
  LazHook(AbstractionTable &table, LazSolver &laz) : table_(table), laz_(laz) {}

  Result check(const std::vector<Lit> &assigned) override {
    std::vector<Atom> constraints;
    std::vector<Lit> source;
    std::map<Atom, int> index;
    for (Lit l : assigned) {
      const Atom &a = table_.atom(l.var);
      if (!l.pos && (a.rel == Rel::EqZero || a.rel == Rel::ModEq))
        continue;  // negated equalities carry no constraint here
      Atom eff = effective_atom(table_, l);
      if (eff.rel == Rel::True) continue;
      if (index.count(eff)) continue;
      index.emplace(eff, static_cast<int>(constraints.size()));
      constraints.push_back(std::move(eff));
      source.push_back(l);
    }

    LazResult r = laz_.check(constraints);
    Result out;
    switch (r.kind) {
      case LazResult::Kind::Sat: {
        out.kind = Result::Kind::Consistent;
        out.model = std::move(r.model);
        break;
      }
      case LazResult::Kind::Unsat: {
        out.kind = Result::Kind::Conflict;
        TheoryLemma lemma;
        lemma.cut = std::move(r.cut);
        lemma.bnb = std::move(r.bnb);
        lemma.eq_only = r.eq_only;
        if (r.eq_only)
          for (auto &[c, eq] : r.eq_cert.combination) lemma.eq_comb.emplace_back(c, eq);
        for (int idx : r.conflict) {
          Lit l = source[static_cast<size_t>(idx)];
          out.conflict.push_back(l);
          lemma.bindings.emplace(constraints[static_cast<size_t>(idx)], l);
        }
        out.lemma = std::move(lemma);
        break;
      }
      case LazResult::Kind::NeedLemmas: {
        out.kind = Result::Kind::Lemmas;
        for (const LemmaClause &lc : r.lemmas) {
          std::vector<Lit> clause;
          for (const auto &[atom, pos] : lc.lits)
            clause.push_back({table_.intern_theory(atom), pos});
          out.lemma_clauses.push_back(std::move(clause));
        }
        break;
      }
    }
    return out;
  }

private:
  AbstractionTable &table_;
  LazSolver &laz_;
};

FormulaPtr preprocess_group(const FormulaPtr &f, VarTable &vars) {
  CeilingElimination ce = eliminate_ceilings(f, vars);
  return encode_modeq(ce.formula, vars);
}

}  // namespace

SolveOutcome solve_problem(Problem &problem, const SolverOptions &opts) {
  SolveOutcome out;
  out.ngroups = problem.ngroups();
  out.table = std::make_shared<AbstractionTable>();

  std::vector<FormulaPtr> processed;
  for (const FormulaPtr &g : problem.groups) processed.push_back(preprocess_group(g, problem.vars));

  for (int g = 0; g < static_cast<int>(processed.size()); ++g) {
    std::set<VarId> vs;
    collect_vars(processed[static_cast<size_t>(g)], vs);
    for (VarId v : vs) out.var_groups.add_occurrence(v, g + 1);
  }

  std::vector<std::pair<std::vector<Lit>, ClauseOrigin>> clauses;
  for (int g = 0; g < static_cast<int>(processed.size()); ++g)
    cnf_encode_group(processed[static_cast<size_t>(g)], g + 1, *out.table, clauses);

  LazOptions laz_opts = opts.laz;
  laz_opts.interpolating = opts.interpolating;
  LazSolver laz(problem.vars, laz_opts);
  if (opts.interpolating) laz.set_groups(out.var_groups);

  SatSolver sat(*out.table, opts.sat);
  for (auto &[lits, origin] : clauses) sat.add_clause(std::move(lits), origin);

  LazHook hook(*out.table, laz);
  SatResult sr = sat.solve(&hook);
  out.laz_stats = laz.stats();
  out.sat = sr.sat;
  if (!sr.sat) {
    out.proof = std::move(sr.proof);
    return out;
  }

  out.model = std::move(sr.theory_model);
  std::set<VarId> vs;
  for (const FormulaPtr &g : processed) collect_vars(g, vs);
  for (VarId v : vs)
    if (!out.model.count(v)) out.model[v] = 0;
  for (int v = 0; v < out.table->size(); ++v) {
    if (out.table->kind(v) == AbstractionTable::VarKind::Bool &&
        v < static_cast<int>(sr.model.size()))
      out.bool_model[out.table->bool_name(v)] = sr.model[static_cast<size_t>(v)] == 1;
  }
  return out;
}

FormulaPtr interpolant(const SolveOutcome &out, int cut, ItpEngine engine, ItpStats *stats) {
  LIAITP_CHECK(!out.sat, ErrorKind::NoProof, "no refutation: the problem is satisfiable");
  LIAITP_CONTRACT(cut >= 1 && cut < out.ngroups, "partition cut out of range");
  BoolCombineCtx ctx;
  ctx.table = out.table.get();
  ctx.var_groups = &out.var_groups;
  ctx.ngroups = out.ngroups;
  ctx.cut = cut;
  ctx.engine = engine;
  ctx.stats = stats;
  return bool_combine(out.proof, ctx);
}

bool validate_model(const Problem &problem, const SolveOutcome &out) {
  if (!out.sat) return false;
  for (const auto &[v, q] : out.model)
    if (!rat_is_int(q)) return false;
  std::map<VarId, Rat> model = out.model;
  std::set<VarId> vs;
  for (const FormulaPtr &g : problem.groups) collect_vars(g, vs);
  for (VarId v : vs)
    if (!model.count(v)) model[v] = 0;
  std::map<std::string, bool> bools = out.bool_model;
  std::set<std::string> names;
  for (const FormulaPtr &g : problem.groups) collect_bools(g, names);
  for (const std::string &n : names)
    if (!bools.count(n)) bools[n] = false;
  for (const FormulaPtr &g : problem.groups)
    if (!eval_formula(g, model, bools)) return false;
  return true;
}

}  // namespace liaitp
