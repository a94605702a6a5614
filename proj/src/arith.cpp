#include "liaitp/arith.hpp"

#include <algorithm>
#include <sstream>

namespace liaitp {

VarId VarTable::intern(const std::string &name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  VarId id = static_cast<VarId>(names_.size());
  names_.push_back(name);
  index_.emplace(name, id);
  return id;
}

VarId VarTable::fresh(const std::string &prefix) {
  for (int i = static_cast<int>(names_.size());; ++i) {
    std::string cand = prefix + std::to_string(i);
    if (!index_.count(cand)) return intern(cand);
  }
}

VarId VarTable::lookup(const std::string &name) const {
  auto it = index_.find(name);
  LIAITP_CHECK(it != index_.end(), ErrorKind::ParseError, "undeclared symbol: " + name);
  return it->second;
}

LinTerm LinTerm::var(VarId v, Rat coeff) {
  LinTerm t;
  if (coeff != 0) t.coeffs.emplace(v, std::move(coeff));
  return t;
}

Rat LinTerm::coeff(VarId v) const {
  auto it = coeffs.find(v);
  return it == coeffs.end() ? Rat(0) : it->second;
}

void LinTerm::add_mono(VarId v, const Rat &c) {
  if (c == 0) return;
  auto [it, inserted] = coeffs.emplace(v, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) coeffs.erase(it);
  }
}

LinTerm &LinTerm::operator+=(const LinTerm &o) {
  for (const auto &[v, c] : o.coeffs) add_mono(v, c);
  constant += o.constant;
  return *this;
}

LinTerm &LinTerm::operator-=(const LinTerm &o) {
  for (const auto &[v, c] : o.coeffs) add_mono(v, -c);
  constant -= o.constant;
  return *this;
}

void LinTerm::scale(const Rat &c) {
  if (c == 0) {
    coeffs.clear();
    constant = 0;
    return;
  }
  for (auto &[v, coeff] : coeffs) coeff *= c;
  constant *= c;
}

bool LinTerm::operator<(const LinTerm &o) const {
  if (constant != o.constant) return constant < o.constant;
  auto a = coeffs.begin(), b = o.coeffs.begin();
  for (; a != coeffs.end() && b != o.coeffs.end(); ++a, ++b) {
    if (a->first != b->first) return a->first < b->first;
    if (a->second != b->second) return a->second < b->second;
  }
  return b != o.coeffs.end();
}

bool LinTerm::integral() const {
  if (constant.get_den() != 1) return false;
  for (const auto &[v, c] : coeffs)
    if (c.get_den() != 1) return false;
  return true;
}

Int LinTerm::denominator_lcm() const {
  Int l = constant.get_den();
  for (const auto &[v, c] : coeffs) {
    Int d = c.get_den();
    l = lcm(l, d);
  }
  return l;
}

Int LinTerm::coeff_gcd() const {
  Int g = 0;
  for (const auto &[v, c] : coeffs) g = gcd(g, Int(c.get_num()));
  return abs(g);
}

Int LinTerm::content_gcd() const {
  Int g = coeff_gcd();
  g = gcd(g, Int(constant.get_num()));
  return abs(g);
}

LinTerm lin_comb(const Rat &c1, const LinTerm &t1, const Rat &c2, const LinTerm &t2) {
  LIAITP_CONTRACT(c1 > 0 && c2 > 0, "lin_comb requires positive coefficients");
  LinTerm r = c1 * t1;
  r += c2 * t2;
  return r;
}

Rat eval_term(const LinTerm &t, const std::map<VarId, Rat> &assignment) {
  Rat v = t.constant;
  for (const auto &[var, c] : t.coeffs) {
    auto it = assignment.find(var);
    LIAITP_CONTRACT(it != assignment.end(), "eval_term: unassigned variable");
    v += c * it->second;
  }
  return v;
}

bool Atom::operator<(const Atom &o) const {
  if (rel != o.rel) return rel < o.rel;
  if (modulus != o.modulus) return modulus < o.modulus;
  return term < o.term;
}

Int ceil_div(const Int &a, const Int &b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int floor_div(const Int &a, const Int &b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int rat_floor(const Rat &q) { return floor_div(Int(q.get_num()), Int(q.get_den())); }
Int rat_ceil(const Rat &q) { return ceil_div(Int(q.get_num()), Int(q.get_den())); }
bool rat_is_int(const Rat &q) { return q.get_den() == 1; }

namespace {

// Scale to integer coefficients; for equalities also divide by the content
// gcd and force a positive leading coefficient. Inequalities keep their
// content (reducing it is the tighten step's job and must be proof-logged).
void make_integral(LinTerm &t) {
  Int l = t.denominator_lcm();
  if (l != 1) t.scale(Rat(l));
}

void canonicalize_equality(LinTerm &t) {
  Int g = t.content_gcd();
  if (g > 1) t.scale(Rat(1) / Rat(g));
  if (!t.coeffs.empty() && t.coeffs.begin()->second < 0) t.scale(-1);
  else if (t.coeffs.empty() && t.constant < 0) t.scale(-1);
}

}  // namespace

Atom normalize_atom(LinTerm term, RawRel rel) {
  // Resolve negation and strictness first, over the rationals, then scale.
  switch (rel) {
    case RawRel::NegLeq:  // not(t <= 0)  <=>  t > 0  <=>  -t < 0
      term.scale(-1);
      rel = RawRel::Lt;
      break;
    case RawRel::NegLt:  // not(t < 0)  <=>  -t <= 0
      term.scale(-1);
      rel = RawRel::Leq;
      break;
    default:
      break;
  }
  make_integral(term);
  if (rel == RawRel::Lt) {
    // over Z, t < 0 <=> t + 1 <= 0 once t is integral
    term.constant += 1;
    rel = RawRel::Leq;
  }
  if (rel == RawRel::Eq) {
    if (term.is_constant()) return Atom::truth(term.constant == 0);
    canonicalize_equality(term);
    if (term.is_constant()) return Atom::truth(term.constant == 0);
    return Atom::eq(std::move(term));
  }
  if (term.is_constant()) return Atom::truth(term.constant <= 0);
  return Atom::leq(std::move(term));
}

Atom negate_leq_atom(const Atom &a) {
  if (a.rel == Rel::True) return Atom::truth(false);
  if (a.rel == Rel::False) return Atom::truth(true);
  LIAITP_CONTRACT(a.rel == Rel::LeqZero, "negate_leq_atom: not an inequality");
  return normalize_atom(a.term, RawRel::NegLeq);
}

std::pair<Atom, Int> tighten(const Atom &a) {
  LIAITP_CONTRACT(a.rel == Rel::LeqZero, "tighten: relation must be <= 0");
  LIAITP_CONTRACT(!a.term.coeffs.empty(), "tighten: constant-only atom");
  LIAITP_CONTRACT(a.term.integral(), "tighten: atom not normalized");
  Int g = a.term.coeff_gcd();
  Int c = a.term.constant.get_num();
  Int rounded = ceil_div(c, g) * g;
  Int k = rounded - c;
  Atom out = a;
  out.term.constant = Rat(rounded);
  return {out, k};
}

bool eval_atom(const Atom &a, const std::map<VarId, Rat> &assignment) {
  switch (a.rel) {
    case Rel::True: return true;
    case Rel::False: return false;
    case Rel::LeqZero: return eval_term(a.term, assignment) <= 0;
    case Rel::EqZero: return eval_term(a.term, assignment) == 0;
    case Rel::ModEq: {
      Rat v = eval_term(a.term, assignment);
      LIAITP_CONTRACT(rat_is_int(v), "eval_atom: modular equality over non-integer");
      Int r;
      Int num(v.get_num());
      mpz_mod(r.get_mpz_t(), num.get_mpz_t(), a.modulus.get_mpz_t());
      return r == 0;
    }
  }
  return false;
}

std::string to_string(const LinTerm &t, const VarTable &vars) {
  std::ostringstream os;
  bool first = true;
  for (const auto &[v, c] : t.coeffs) {
    if (c < 0) os << (first ? "-" : " - ");
    else if (!first) os << " + ";
    Rat ac = abs(c);
    if (ac != 1) os << Rat(ac).get_str() << "*";
    os << vars.name(v);
    first = false;
  }
  if (first) {
    os << t.constant.get_str();
  } else if (t.constant != 0) {
    os << (t.constant < 0 ? " - " : " + ") << Rat(abs(t.constant)).get_str();
  }
  return os.str();
}

std::string to_string(const Atom &a, const VarTable &vars) {
  switch (a.rel) {
    case Rel::True: return "true";
    case Rel::False: return "false";
    case Rel::LeqZero: return to_string(a.term, vars) + " <= 0";
    case Rel::EqZero: return to_string(a.term, vars) + " = 0";
    case Rel::ModEq:
      return to_string(a.term, vars) + " =_" + a.modulus.get_str() + " 0";
  }
  return "?";
}


void VarGroups::add_occurrence(VarId v, int group) {
  auto [it, inserted] = first_last.emplace(v, std::make_pair(group, group));
  if (!inserted) {
    it->second.first = std::min(it->second.first, group);
    it->second.second = std::max(it->second.second, group);
  }
}

bool VarGroups::admissible(const LinTerm &t) const {
  int max_first = 0, min_last = 1 << 30;
  for (const auto &[v, c] : t.coeffs) {
    auto it = first_last.find(v);
    if (it == first_last.end()) continue;
    max_first = std::max(max_first, it->second.first);
    min_last = std::min(min_last, it->second.second);
  }
  return max_first <= min_last;
}

bool VarGroups::in_A(VarId v, int cut) const {
  auto it = first_last.find(v);
  return it != first_last.end() && it->second.first <= cut;
}

bool VarGroups::in_B(VarId v, int cut) const {
  auto it = first_last.find(v);
  return it != first_last.end() && it->second.second > cut;
}

}  // namespace liaitp

