#include "liaitp/verify.hpp"

#include <algorithm>
#include <random>

namespace liaitp {

namespace {

// Solve a single conjunction with interpolation switched off.
SolveOutcome solve_conjunction(const FormulaPtr &f, VarTable &vars) {
  Problem p;
  p.vars = vars;
  p.groups.push_back(f);
  SolverOptions opts;
  opts.interpolating = false;
  SolveOutcome out = solve_problem(p, opts);
  vars = p.vars;  // keep fresh encode variables visible for diagnostics
  return out;
}

bool eval_conj(const std::vector<FormulaPtr> &fs, const std::map<VarId, Rat> &m,
               const std::map<std::string, bool> &b) {
  for (const auto &f : fs)
    if (!eval_formula(f, m, b)) return false;
  return true;
}

// greedy coordinate descent toward zero, keeping the predicate true
void minimize_counterexample(std::map<VarId, Rat> &point,
                             const std::function<bool(const std::map<VarId, Rat> &)> &holds) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto &[v, val] : point) {
      while (val != 0) {
        Rat next = val + (val > 0 ? Rat(-1) : Rat(1));
        std::map<VarId, Rat> trial = point;
        trial[v] = next;
        if (!holds(trial)) break;
        val = next;
        changed = true;
      }
    }
  }
}

}  // namespace

VerifyReport verify_interpolant(const std::vector<FormulaPtr> &a_groups,
                                const std::vector<FormulaPtr> &b_groups, const FormulaPtr &itp,
                                VarTable &vars) {
  VerifyReport report;

  // symbol condition: all uninterpreted symbols of I occur in both A and B
  std::set<VarId> va, vb, vi;
  std::set<std::string> ba, bb, bi;
  for (const auto &f : a_groups) {
    collect_vars(f, va);
    collect_bools(f, ba);
  }
  for (const auto &f : b_groups) {
    collect_vars(f, vb);
    collect_bools(f, bb);
  }
  collect_vars(itp, vi);
  collect_bools(itp, bi);
  report.symbols_ok = true;
  for (VarId v : vi)
    if (!va.count(v) || !vb.count(v)) report.symbols_ok = false;
  for (const std::string &n : bi)
    if (!ba.count(n) || !bb.count(n)) report.symbols_ok = false;
  if (!report.symbols_ok) report.failed_check = "symbol condition";

  // A |= I  iff  A /\ not I unsat
  {
    std::vector<FormulaPtr> fs = a_groups;
    fs.push_back(f_not(itp));
    SolveOutcome r = solve_conjunction(f_and(fs), vars);
    report.a_implies_i = !r.sat;
    if (r.sat) {
      report.failed_check = "A |= I";
      report.counterexample = r.model;
      report.counter_bools = r.bool_model;
      auto holds = [&](const std::map<VarId, Rat> &m) {
        return eval_conj(a_groups, m, r.bool_model) && !eval_formula(itp, m, r.bool_model);
      };
      if (holds(report.counterexample)) minimize_counterexample(report.counterexample, holds);
    }
  }

  // I /\ B unsat
  {
    std::vector<FormulaPtr> fs = b_groups;
    fs.push_back(itp);
    SolveOutcome r = solve_conjunction(f_and(fs), vars);
    report.i_and_b_unsat = !r.sat;
    if (r.sat) {
      report.failed_check = "I and B unsat";
      report.counterexample = r.model;
      report.counter_bools = r.bool_model;
      auto holds = [&](const std::map<VarId, Rat> &m) {
        return eval_conj(b_groups, m, r.bool_model) && eval_formula(itp, m, r.bool_model);
      };
      if (holds(report.counterexample)) minimize_counterexample(report.counterexample, holds);
    }
  }
  return report;
}

VerifyReport verify_interpolant(Problem &problem, int cut, const FormulaPtr &itp) {
  std::vector<FormulaPtr> a(problem.groups.begin(), problem.groups.begin() + cut);
  std::vector<FormulaPtr> b(problem.groups.begin() + cut, problem.groups.end());
  return verify_interpolant(a, b, itp, problem.vars);
}

// ---------------------------------------------------------------------------
// brute force
// ---------------------------------------------------------------------------

namespace {

// Formulas compiled to int64 arithmetic over variable slots; coefficient and
// value bounds are checked at compile time, with the exact evaluator as the
// fallback for anything too large.
struct FastTerm {
  struct Ceil {
    std::vector<std::pair<int, long long>> lin;
    long long cst;
    std::vector<Ceil> ceils;
    long long div;
    long long coeff;
  };
  std::vector<std::pair<int, long long>> lin;
  long long cst = 0;
  std::vector<Ceil> ceils;
};

long long eval_fast_lin(const std::vector<std::pair<int, long long>> &lin, long long cst,
                        const std::vector<FastTerm::Ceil> &ceils,
                        const std::vector<long long> &v) {
  long long s = cst;
  for (const auto &[slot, c] : lin) s += c * v[static_cast<size_t>(slot)];
  for (const auto &cl : ceils) {
    long long u = eval_fast_lin(cl.lin, cl.cst, cl.ceils, v);
    long long q = u >= 0 ? (u + cl.div - 1) / cl.div : -((-u) / cl.div);
    s += cl.coeff * q;
  }
  return s;
}

struct FastNode {
  enum class K : uint8_t { True, False, Leq, Eq, Mod, Bool, Not, And, Or };
  K k = K::True;
  FastTerm term;
  long long modulus = 0;
  int bslot = -1;
  std::vector<FastNode> kids;

  bool eval(const std::vector<long long> &v, const std::vector<char> &b) const {
    switch (k) {
      case K::True: return true;
      case K::False: return false;
      case K::Leq: return eval_fast_lin(term.lin, term.cst, term.ceils, v) <= 0;
      case K::Eq: return eval_fast_lin(term.lin, term.cst, term.ceils, v) == 0;
      case K::Mod: {
        long long u = eval_fast_lin(term.lin, term.cst, term.ceils, v);
        return ((u % modulus) + modulus) % modulus == 0;
      }
      case K::Bool: return b[static_cast<size_t>(bslot)] != 0;
      case K::Not: return !kids[0].eval(v, b);
      case K::And:
        for (const auto &kk : kids)
          if (!kk.eval(v, b)) return false;
        return true;
      case K::Or:
        for (const auto &kk : kids)
          if (kk.eval(v, b)) return true;
        return false;
    }
    return false;
  }
};

const Int kFastLimit = Int(1) << 60;

long long to_ll(const Int &v) {
  LIAITP_CHECK(abs(v) < kFastLimit, ErrorKind::ResourceLimit,
               "coefficient too large for the fast evaluator");
  return mpz_get_si(v.get_mpz_t());
}

struct FastCompiler {
  const std::map<VarId, int> &slots;
  const std::map<std::string, int> &bslots;
  Int box;

  // returns the worst-case absolute value
  Int compile_term(const ExtTerm &t, FastTerm::Ceil *ceil_out, FastTerm *term_out) {
    // scale to integer coefficients
    Int l(1);
    for (const auto &[v, c] : t.var_coeffs) l = lcm(l, Int(c.get_den()));
    for (const auto &[m, c] : t.ceil_coeffs) l = lcm(l, Int(c.get_den()));
    l = lcm(l, Int(t.constant.get_den()));
    LIAITP_CHECK(l == 1 || term_out, ErrorKind::ResourceLimit,
                 "rational coefficients inside a ceiling content");

    auto lin_out = term_out ? &term_out->lin : &ceil_out->lin;
    auto cst_out = term_out ? &term_out->cst : &ceil_out->cst;
    auto ceils_out = term_out ? &term_out->ceils : &ceil_out->ceils;

    Int bound(0);
    for (const auto &[v, c] : t.var_coeffs) {
      Int ci(Rat(Rat(l) * c).get_num());
      lin_out->emplace_back(slots.at(v), to_ll(ci));
      bound += abs(ci) * box;
    }
    Int cst(Rat(Rat(l) * t.constant).get_num());
    *cst_out = to_ll(cst);
    bound += abs(cst);
    for (const auto &[mono, c] : t.ceil_coeffs) {
      FastTerm::Ceil compiled;
      Int inner_bound = compile_term(*mono.content, &compiled, nullptr);
      compiled.div = to_ll(mono.divisor);
      Int ci(Rat(Rat(l) * c).get_num());
      compiled.coeff = to_ll(ci);
      Int ceil_bound = inner_bound / mono.divisor + 1;
      bound += abs(ci) * ceil_bound;
      LIAITP_CHECK(inner_bound < kFastLimit, ErrorKind::ResourceLimit, "fast bound exceeded");
      ceils_out->push_back(std::move(compiled));
    }
    LIAITP_CHECK(bound < kFastLimit, ErrorKind::ResourceLimit, "fast bound exceeded");
    return bound;
  }

  FastNode compile(const FormulaPtr &f) {
    FastNode n;
    switch (f->kind) {
      case Formula::Kind::True: n.k = FastNode::K::True; break;
      case Formula::Kind::False: n.k = FastNode::K::False; break;
      case Formula::Kind::BoolVar:
        n.k = FastNode::K::Bool;
        n.bslot = bslots.at(f->bool_name);
        break;
      case Formula::Kind::Atom: {
        const Atom &a = f->atom;
        compile_term(ExtTerm(a.term), nullptr, &n.term);
        switch (a.rel) {
          case Rel::LeqZero: n.k = FastNode::K::Leq; break;
          case Rel::EqZero: n.k = FastNode::K::Eq; break;
          case Rel::ModEq:
            n.k = FastNode::K::Mod;
            n.modulus = to_ll(a.modulus);
            break;
          default: n.k = a.rel == Rel::True ? FastNode::K::True : FastNode::K::False;
        }
        break;
      }
      case Formula::Kind::ExtLeq:
        n.k = FastNode::K::Leq;
        compile_term(f->ext, nullptr, &n.term);
        break;
      case Formula::Kind::Not:
        n.k = FastNode::K::Not;
        n.kids.push_back(compile(f->kids[0]));
        break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        n.k = f->kind == Formula::Kind::And ? FastNode::K::And : FastNode::K::Or;
        for (const auto &k : f->kids) n.kids.push_back(compile(k));
        break;
    }
    return n;
  }
};

struct BoxEnumerator {
  std::vector<VarId> vars;
  std::vector<std::string> bools;
  Int box;

  // calls fn for every assignment; stops early when fn returns false
  bool enumerate(const std::function<bool(const std::map<VarId, Rat> &,
                                          const std::map<std::string, bool> &)> &fn) const {
    std::map<VarId, Rat> point;
    std::map<std::string, bool> bvals;
    for (const std::string &b : bools) bvals[b] = false;
    return enum_bools(0, point, bvals, fn);
  }

  bool enum_bools(size_t bi, std::map<VarId, Rat> &point, std::map<std::string, bool> &bvals,
                  const std::function<bool(const std::map<VarId, Rat> &,
                                           const std::map<std::string, bool> &)> &fn) const {
    if (bi == bools.size()) return enum_vars(0, point, bvals, fn);
    for (int v = 0; v < 2; ++v) {
      bvals[bools[bi]] = v == 1;
      if (!enum_bools(bi + 1, point, bvals, fn)) return false;
    }
    return true;
  }

  bool enum_vars(size_t vi, std::map<VarId, Rat> &point, std::map<std::string, bool> &bvals,
                 const std::function<bool(const std::map<VarId, Rat> &,
                                          const std::map<std::string, bool> &)> &fn) const {
    if (vi == vars.size()) return fn(point, bvals);
    for (Int v = -box; v <= box; ++v) {
      point[vars[vi]] = Rat(v);
      if (!enum_vars(vi + 1, point, bvals, fn)) return false;
    }
    point.erase(vars[vi]);
    return true;
  }
};

BoxEnumerator make_enumerator(const std::vector<FormulaPtr> &fs, const std::set<VarId> &all_vars,
                              const Int &box) {
  BoxEnumerator e;
  e.vars.assign(all_vars.begin(), all_vars.end());
  std::set<std::string> names;
  for (const auto &f : fs) collect_bools(f, names);
  e.bools.assign(names.begin(), names.end());
  e.box = box;

  double points = 1.0;
  for (size_t i = 0; i < e.vars.size(); ++i) points *= mpz_get_d(Int(2 * box + 1).get_mpz_t());
  for (size_t i = 0; i < e.bools.size(); ++i) points *= 2.0;
  LIAITP_CHECK(points <= 1e7, ErrorKind::ResourceLimit, "brute-force box too large");
  return e;
}

}  // namespace

namespace {

BruteForceResult brute_force_check_exact(const std::vector<FormulaPtr> &a_groups,
                                         const std::vector<FormulaPtr> &b_groups,
                                         const FormulaPtr &itp, const std::set<VarId> &all_vars,
                                         const Int &box) {
  std::vector<FormulaPtr> all = a_groups;
  all.insert(all.end(), b_groups.begin(), b_groups.end());
  all.push_back(itp);
  BoxEnumerator e = make_enumerator(all, all_vars, box);

  BruteForceResult res;
  e.enumerate([&](const std::map<VarId, Rat> &m, const std::map<std::string, bool> &b) {
    bool in_a = eval_conj(a_groups, m, b);
    bool in_b = eval_conj(b_groups, m, b);
    bool in_i = eval_formula(itp, m, b);
    if (in_a && in_b) {
      res = {false, "A and B sat", m, b};
      return false;
    }
    if (in_a && !in_i) {
      res = {false, "A |= I", m, b};
      return false;
    }
    if (in_i && in_b) {
      res = {false, "I and B unsat", m, b};
      return false;
    }
    return true;
  });
  return res;
}

// shared fast enumeration; `visit` gets slot values and returns false to stop
struct FastBox {
  std::vector<VarId> vars;
  std::vector<std::string> bools;
  std::map<VarId, int> slots;
  std::map<std::string, int> bslots;
  long long box;

  FastBox(const std::vector<FormulaPtr> &fs, const std::set<VarId> &all_vars, const Int &b) {
    vars.assign(all_vars.begin(), all_vars.end());
    std::set<std::string> names;
    for (const auto &f : fs) collect_bools(f, names);
    bools.assign(names.begin(), names.end());
    for (size_t i = 0; i < vars.size(); ++i) slots[vars[i]] = static_cast<int>(i);
    for (size_t i = 0; i < bools.size(); ++i) bslots[bools[i]] = static_cast<int>(i);
    box = to_ll(b);

    double points = 1.0;
    for (size_t i = 0; i < vars.size(); ++i) points *= static_cast<double>(2 * box + 1);
    for (size_t i = 0; i < bools.size(); ++i) points *= 2.0;
    LIAITP_CHECK(points <= 1e7, ErrorKind::ResourceLimit, "brute-force box too large");
  }

  bool enumerate(const std::function<bool(const std::vector<long long> &,
                                          const std::vector<char> &)> &visit) const {
    std::vector<char> b(bools.size(), 0);
    for (uint64_t mask = 0;; ++mask) {
      for (size_t i = 0; i < bools.size(); ++i) b[i] = (mask >> i) & 1;
      std::vector<long long> v(vars.size(), -box);
      for (;;) {
        if (!visit(v, b)) return false;
        size_t i = 0;
        while (i < v.size() && v[i] == box) v[i++] = -box;
        if (i == v.size()) break;
        ++v[i];
      }
      if (bools.empty() || mask + 1 == (uint64_t{1} << bools.size())) break;
    }
    return true;
  }

  std::map<VarId, Rat> point_of(const std::vector<long long> &v) const {
    std::map<VarId, Rat> m;
    for (size_t i = 0; i < vars.size(); ++i) m[vars[i]] = Rat(static_cast<long>(v[i]));
    return m;
  }
  std::map<std::string, bool> bools_of(const std::vector<char> &b) const {
    std::map<std::string, bool> m;
    for (size_t i = 0; i < bools.size(); ++i) m[bools[i]] = b[i] != 0;
    return m;
  }
};

}  // namespace

BruteForceResult brute_force_check(const std::vector<FormulaPtr> &a_groups,
                                   const std::vector<FormulaPtr> &b_groups, const FormulaPtr &itp,
                                   const std::set<VarId> &all_vars, const Int &box) {
  std::vector<FormulaPtr> all = a_groups;
  all.insert(all.end(), b_groups.begin(), b_groups.end());
  all.push_back(itp);
  try {
    FastBox fb(all, all_vars, box);
    FastCompiler fc{fb.slots, fb.bslots, box};
    FastNode a = fc.compile(f_and(std::vector<FormulaPtr>(a_groups)));
    FastNode b = fc.compile(f_and(std::vector<FormulaPtr>(b_groups)));
    FastNode i = fc.compile(itp);
    BruteForceResult res;
    fb.enumerate([&](const std::vector<long long> &v, const std::vector<char> &bv) {
      bool in_a = a.eval(v, bv);
      bool in_b = b.eval(v, bv);
      bool in_i = i.eval(v, bv);
      if (in_a && in_b) {
        res = {false, "A and B sat", fb.point_of(v), fb.bools_of(bv)};
        return false;
      }
      if (in_a && !in_i) {
        res = {false, "A |= I", fb.point_of(v), fb.bools_of(bv)};
        return false;
      }
      if (in_i && in_b) {
        res = {false, "I and B unsat", fb.point_of(v), fb.bools_of(bv)};
        return false;
      }
      return true;
    });
    return res;
  } catch (const Error &e) {
    if (e.kind != ErrorKind::ResourceLimit ||
        std::string(e.what()).find("box too large") != std::string::npos)
      throw;
    return brute_force_check_exact(a_groups, b_groups, itp, all_vars, box);
  }
}

BruteForceResult brute_force_check(Problem &problem, int cut, const FormulaPtr &itp,
                                   const Int &box) {
  std::vector<FormulaPtr> a(problem.groups.begin(), problem.groups.begin() + cut);
  std::vector<FormulaPtr> b(problem.groups.begin() + cut, problem.groups.end());
  std::set<VarId> vs;
  for (const auto &f : problem.groups) collect_vars(f, vs);
  collect_vars(itp, vs);
  return brute_force_check(a, b, itp, vs, box);
}

bool brute_force_sat(const std::vector<FormulaPtr> &groups, const std::set<VarId> &all_vars,
                     const Int &box) {
  try {
    FastBox fb(groups, all_vars, box);
    FastCompiler fc{fb.slots, fb.bslots, box};
    FastNode conj = fc.compile(f_and(std::vector<FormulaPtr>(groups)));
    bool sat = false;
    fb.enumerate([&](const std::vector<long long> &v, const std::vector<char> &b) {
      if (conj.eval(v, b)) {
        sat = true;
        return false;
      }
      return true;
    });
    return sat;
  } catch (const Error &e) {
    if (e.kind != ErrorKind::ResourceLimit ||
        std::string(e.what()).find("box too large") != std::string::npos)
      throw;
  }
  BoxEnumerator e = make_enumerator(groups, all_vars, box);
  bool sat = false;
  e.enumerate([&](const std::map<VarId, Rat> &m, const std::map<std::string, bool> &b) {
    if (eval_conj(groups, m, b)) {
      sat = true;
      return false;
    }
    return true;
  });
  return sat;
}

// ---------------------------------------------------------------------------
// random problems
// ---------------------------------------------------------------------------

Problem gen_random_problem(uint64_t seed, const RandomProblemOptions &opts) {
  LIAITP_CONTRACT(opts.nvars >= 1 && opts.nconstraints >= 1 && opts.coeff_bound >= 1 &&
                      opts.box >= 1 && opts.ngroups >= 2,
                  "generator parameters must be positive");
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  auto rnd = [&](int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
  };

  Problem p;
  std::vector<VarId> vars;
  for (int i = 0; i < opts.nvars; ++i) vars.push_back(p.vars.intern("x" + std::to_string(i)));

  // x0 is reserved for the first group; the last variable for the rest
  auto pick_var = [&](bool first_group) {
    if (opts.nvars == 1) return vars[0];
    if (first_group) return vars[static_cast<size_t>(rnd(0, opts.nvars - 2))];
    return vars[static_cast<size_t>(rnd(1, opts.nvars - 1))];
  };

  auto random_atom = [&](bool first_group, bool force_x0) {
    LinTerm t;
    int pool = opts.nvars == 1 ? 1 : opts.nvars - 1;  // each side avoids one local var
    int k = rnd(1, std::min(3, pool));
    std::set<VarId> used;
    if (force_x0) used.insert(vars[0]);
    while (static_cast<int>(used.size()) < k) used.insert(pick_var(first_group));
    for (VarId v : used) {
      int c = rnd(1, opts.coeff_bound);
      if (rnd(0, 1)) c = -c;
      t.add_mono(v, Rat(c));
    }
    t.constant = Rat(rnd(-2 * opts.box, 2 * opts.box));
    bool eq = rnd(0, 9) < 3;
    return normalize_atom(std::move(t), eq ? RawRel::Eq : RawRel::Leq);
  };

  int na = std::max(1, (opts.nconstraints * 2) / 5);
  std::vector<std::vector<FormulaPtr>> group_conjuncts(static_cast<size_t>(opts.ngroups));
  for (int i = 0; i < opts.nconstraints; ++i) {
    bool first = i < na;
    int g = first ? 0 : (opts.ngroups == 2 ? 1 : rnd(1, opts.ngroups - 1));
    bool force_x0 = first && i == 0 && opts.nvars >= 2;
    FormulaPtr c = f_atom(random_atom(first, force_x0));
    if (rnd(0, 9) < 2) c = f_or({c, f_atom(random_atom(first, false))});
    group_conjuncts[static_cast<size_t>(g)].push_back(std::move(c));
  }

  // box bounds: local variables with their group, shared ones with the last
  for (int i = 0; i < opts.nvars; ++i) {
    VarId v = vars[static_cast<size_t>(i)];
    int g = (i == 0 && opts.nvars >= 2) ? 0 : opts.ngroups - 1;
    LinTerm up = LinTerm::var(v);
    up.constant = Rat(-opts.box);
    LinTerm lo = LinTerm::var(v, -1);
    lo.constant = Rat(-opts.box);
    group_conjuncts[static_cast<size_t>(g)].push_back(f_atom(Atom::leq(std::move(up))));
    group_conjuncts[static_cast<size_t>(g)].push_back(f_atom(Atom::leq(std::move(lo))));
  }

  for (auto &conj : group_conjuncts) p.groups.push_back(f_and(std::move(conj)));
  return p;
}

}  // namespace liaitp
