#include "liaitp/formula.hpp"

#include <algorithm>
#include <set>

namespace liaitp {

bool CeilMono::operator<(const CeilMono &o) const {
  if (divisor != o.divisor) return divisor < o.divisor;
  if (content == o.content) return false;
  return *content < *o.content;
}

bool CeilMono::operator==(const CeilMono &o) const {
  return divisor == o.divisor && (content == o.content || *content == *o.content);
}

LinTerm ExtTerm::linear_part() const {
  LIAITP_CONTRACT(is_linear(), "term still contains ceilings");
  LinTerm t;
  t.coeffs = var_coeffs;
  t.constant = constant;
  return t;
}

void ExtTerm::add_var(VarId v, const Rat &c) {
  if (c == 0) return;
  auto [it, inserted] = var_coeffs.emplace(v, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) var_coeffs.erase(it);
  }
}

void ExtTerm::add_ceil(const CeilMono &m, const Rat &c) {
  if (c == 0) return;
  auto [it, inserted] = ceil_coeffs.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) ceil_coeffs.erase(it);
  }
}

ExtTerm &ExtTerm::operator+=(const ExtTerm &o) {
  for (const auto &[v, c] : o.var_coeffs) add_var(v, c);
  for (const auto &[m, c] : o.ceil_coeffs) add_ceil(m, c);
  constant += o.constant;
  return *this;
}

void ExtTerm::scale(const Rat &c) {
  if (c == 0) {
    var_coeffs.clear();
    ceil_coeffs.clear();
    constant = 0;
    return;
  }
  for (auto &[v, coeff] : var_coeffs) coeff *= c;
  for (auto &[m, coeff] : ceil_coeffs) coeff *= c;
  constant *= c;
}

bool ExtTerm::operator<(const ExtTerm &o) const {
  if (constant != o.constant) return constant < o.constant;
  if (var_coeffs != o.var_coeffs) return var_coeffs < o.var_coeffs;
  return ceil_coeffs < o.ceil_coeffs;
}

bool ExtTerm::operator==(const ExtTerm &o) const {
  return constant == o.constant && var_coeffs == o.var_coeffs && ceil_coeffs == o.ceil_coeffs;
}

CeilMono ExtTerm::make_ceil(const ExtTerm &t, const Int &d) {
  LIAITP_CONTRACT(d > 0, "ceiling divisor must be positive");
  // scale content to integer coefficients: ceil(t/d) = ceil((L*t)/(L*d))
  Int l(1);
  for (const auto &[v, c] : t.var_coeffs) l = lcm(l, Int(c.get_den()));
  for (const auto &[m, c] : t.ceil_coeffs) l = lcm(l, Int(c.get_den()));
  l = lcm(l, Int(t.constant.get_den()));
  ExtTerm content = t;
  content.scale(Rat(l));
  Int div = d * l;
  // reduce by the common gcd
  Int g = div;
  for (const auto &[v, c] : content.var_coeffs) g = gcd(g, Int(c.get_num()));
  for (const auto &[m, c] : content.ceil_coeffs) g = gcd(g, Int(c.get_num()));
  g = gcd(g, Int(content.constant.get_num()));
  g = abs(g);
  if (g > 1) {
    content.scale(Rat(1) / Rat(g));
    div /= g;
  }
  CeilMono mono;
  mono.content = std::make_shared<ExtTerm>(std::move(content));
  mono.divisor = std::move(div);
  return mono;
}

Rat ExtTerm::eval(const std::map<VarId, Rat> &assignment) const {
  Rat v = constant;
  for (const auto &[var, c] : var_coeffs) {
    auto it = assignment.find(var);
    LIAITP_CONTRACT(it != assignment.end(), "eval: unassigned variable");
    v += c * it->second;
  }
  for (const auto &[m, c] : ceil_coeffs) {
    Rat inner = m.content->eval(assignment);
    v += c * Rat(rat_ceil(inner / Rat(m.divisor)));
  }
  return v;
}

size_t ExtTerm::dag_size() const {
  size_t n = var_coeffs.size() + (constant != 0 ? 1 : 0);
  for (const auto &[m, c] : ceil_coeffs) n += 1 + m.content->dag_size();
  return std::max<size_t>(n, 1);
}

// ---------------------------------------------------------------------------
// Formula construction
// ---------------------------------------------------------------------------

namespace {

FormulaPtr make(Formula f) { return std::make_shared<Formula>(std::move(f)); }

}  // namespace

FormulaPtr f_true() {
  static FormulaPtr t = make({});
  return t;
}

FormulaPtr f_false() {
  static FormulaPtr f = [] {
    Formula x;
    x.kind = Formula::Kind::False;
    return make(std::move(x));
  }();
  return f;
}

FormulaPtr f_atom(Atom a) {
  if (a.rel == Rel::True) return f_true();
  if (a.rel == Rel::False) return f_false();
  Formula f;
  f.kind = Formula::Kind::Atom;
  f.atom = std::move(a);
  return make(std::move(f));
}

FormulaPtr f_ext_leq(ExtTerm t) {
  if (t.is_constant()) return t.constant <= 0 ? f_true() : f_false();
  if (t.is_linear()) return f_atom(Atom::leq(t.linear_part()));
  Formula f;
  f.kind = Formula::Kind::ExtLeq;
  f.ext = std::move(t);
  return make(std::move(f));
}

FormulaPtr f_bool(std::string name) {
  Formula f;
  f.kind = Formula::Kind::BoolVar;
  f.bool_name = std::move(name);
  return make(std::move(f));
}

FormulaPtr f_not(FormulaPtr x) {
  if (is_true(x)) return f_false();
  if (is_false(x)) return f_true();
  if (x->kind == Formula::Kind::Not) return x->kids[0];
  Formula f;
  f.kind = Formula::Kind::Not;
  f.kids.push_back(std::move(x));
  return make(std::move(f));
}

FormulaPtr f_and(std::vector<FormulaPtr> kids) {
  std::vector<FormulaPtr> out;
  for (auto &k : kids) {
    if (is_true(k)) continue;
    if (is_false(k)) return f_false();
    if (k->kind == Formula::Kind::And) {
      for (const auto &kk : k->kids) out.push_back(kk);
    } else {
      out.push_back(std::move(k));
    }
  }
  if (out.empty()) return f_true();
  if (out.size() == 1) return out[0];
  Formula f;
  f.kind = Formula::Kind::And;
  f.kids = std::move(out);
  return make(std::move(f));
}

FormulaPtr f_or(std::vector<FormulaPtr> kids) {
  std::vector<FormulaPtr> out;
  for (auto &k : kids) {
    if (is_false(k)) continue;
    if (is_true(k)) return f_true();
    if (k->kind == Formula::Kind::Or) {
      for (const auto &kk : k->kids) out.push_back(kk);
    } else {
      out.push_back(std::move(k));
    }
  }
  if (out.empty()) return f_false();
  if (out.size() == 1) return out[0];
  Formula f;
  f.kind = Formula::Kind::Or;
  f.kids = std::move(out);
  return make(std::move(f));
}

bool is_true(const FormulaPtr &f) { return f->kind == Formula::Kind::True; }
bool is_false(const FormulaPtr &f) { return f->kind == Formula::Kind::False; }

bool eval_formula(const FormulaPtr &f, const std::map<VarId, Rat> &assignment,
                  const std::map<std::string, bool> &bool_assignment) {
  switch (f->kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom: return eval_atom(f->atom, assignment);
    case Formula::Kind::ExtLeq: return f->ext.eval(assignment) <= 0;
    case Formula::Kind::BoolVar: {
      auto it = bool_assignment.find(f->bool_name);
      LIAITP_CONTRACT(it != bool_assignment.end(), "eval: unassigned Boolean");
      return it->second;
    }
    case Formula::Kind::Not: return !eval_formula(f->kids[0], assignment, bool_assignment);
    case Formula::Kind::And:
      for (const auto &k : f->kids)
        if (!eval_formula(k, assignment, bool_assignment)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto &k : f->kids)
        if (eval_formula(k, assignment, bool_assignment)) return true;
      return false;
  }
  return false;
}

static void collect_ext_vars(const ExtTerm &t, std::set<VarId> &vars) {
  for (const auto &[v, c] : t.var_coeffs) vars.insert(v);
  for (const auto &[m, c] : t.ceil_coeffs) collect_ext_vars(*m.content, vars);
}

void collect_vars(const FormulaPtr &f, std::set<VarId> &vars) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      for (const auto &[v, c] : f->atom.term.coeffs) vars.insert(v);
      break;
    case Formula::Kind::ExtLeq:
      collect_ext_vars(f->ext, vars);
      break;
    default:
      for (const auto &k : f->kids) collect_vars(k, vars);
  }
}

void collect_bools(const FormulaPtr &f, std::set<std::string> &names) {
  if (f->kind == Formula::Kind::BoolVar) {
    names.insert(f->bool_name);
    return;
  }
  for (const auto &k : f->kids) collect_bools(k, names);
}

static size_t formula_size_rec(const FormulaPtr &f, std::set<const Formula *> &seen) {
  if (!seen.insert(f.get()).second) return 0;
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::BoolVar:
      return 1;
    case Formula::Kind::Atom:
      return 1 + f->atom.term.coeffs.size() + (f->atom.term.constant != 0 ? 1 : 0);
    case Formula::Kind::ExtLeq:
      return 1 + f->ext.dag_size();
    default: {
      size_t n = 1;
      for (const auto &k : f->kids) n += formula_size_rec(k, seen);
      return n;
    }
  }
}

size_t formula_dag_size(const FormulaPtr &f) {
  std::set<const Formula *> seen;
  return formula_size_rec(f, seen);
}

}  // namespace liaitp
