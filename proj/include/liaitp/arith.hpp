#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace liaitp {

using Int = mpz_class;
using Rat = mpq_class;

// Error kinds are coarse; tests match on them rather than on messages.
enum class ErrorKind {
  Contract,        // precondition violated by the caller
  UnsupportedInput,
  UnsupportedProof,
  ResourceLimit,
  ParseError,
  NoProof,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind k, const std::string &msg) : std::runtime_error(msg), kind(k) {}
  ErrorKind kind;
};

#define LIAITP_CHECK(cond, kind, msg)                                          \
  do {                                                                         \
    if (!(cond)) throw ::liaitp::Error(kind, msg);                             \
  } while (0)

#define LIAITP_CONTRACT(cond, msg) LIAITP_CHECK(cond, ::liaitp::ErrorKind::Contract, msg)

using VarId = int32_t;

// Variable names for printing; ids are dense indices.
class VarTable {
public:
  VarId intern(const std::string &name);
  VarId fresh(const std::string &prefix);
  const std::string &name(VarId v) const { return names_.at(static_cast<size_t>(v)); }
  bool has(const std::string &name) const { return index_.count(name) != 0; }
  VarId lookup(const std::string &name) const;
  size_t size() const { return names_.size(); }

private:
  std::vector<std::string> names_;
  std::map<std::string, VarId> index_;
};

// Sparse linear term: sum of coeff*var plus a constant. No zero coefficients
// are ever stored, so structural equality is semantic equality.
struct LinTerm {
  std::map<VarId, Rat> coeffs;
  Rat constant = 0;

  LinTerm() = default;
  explicit LinTerm(Rat c) : constant(std::move(c)) {}
  static LinTerm var(VarId v, Rat coeff = 1);

  bool is_constant() const { return coeffs.empty(); }
  bool is_zero() const { return coeffs.empty() && constant == 0; }
  Rat coeff(VarId v) const;

  void add_mono(VarId v, const Rat &c);
  LinTerm &operator+=(const LinTerm &o);
  LinTerm &operator-=(const LinTerm &o);
  void scale(const Rat &c);

  friend LinTerm operator+(LinTerm a, const LinTerm &b) { a += b; return a; }
  friend LinTerm operator-(LinTerm a, const LinTerm &b) { a -= b; return a; }
  friend LinTerm operator*(const Rat &c, LinTerm t) { t.scale(c); return t; }
  friend bool operator==(const LinTerm &a, const LinTerm &b) {
    return a.constant == b.constant && a.coeffs == b.coeffs;
  }
  friend bool operator!=(const LinTerm &a, const LinTerm &b) { return !(a == b); }
  bool operator<(const LinTerm &o) const;

  bool integral() const;  // all coefficients and the constant in Z
  // Positive lcm of all denominators (1 for an integral term).
  Int denominator_lcm() const;
  // Gcd of the variable coefficients (0 if there are none). Requires integral().
  Int coeff_gcd() const;
  // Gcd of variable coefficients and the constant. Requires integral().
  Int content_gcd() const;
};

// c1*t1 + c2*t2 with c1, c2 > 0 (the Comb rule's arithmetic).
LinTerm lin_comb(const Rat &c1, const LinTerm &t1, const Rat &c2, const LinTerm &t2);

Rat eval_term(const LinTerm &t, const std::map<VarId, Rat> &assignment);

enum class Rel : uint8_t {
  LeqZero,  // term <= 0
  EqZero,   // term = 0
  ModEq,    // modulus divides term  (term =_g 0)
  True,     // constant-folded tautology
  False,    // constant-folded contradiction
};

struct Atom {
  LinTerm term;
  Rel rel = Rel::True;
  Int modulus = 0;  // only for ModEq, >= 1

  static Atom truth(bool b) { Atom a; a.rel = b ? Rel::True : Rel::False; return a; }
  static Atom leq(LinTerm t) { Atom a; a.term = std::move(t); a.rel = Rel::LeqZero; return a; }
  static Atom eq(LinTerm t) { Atom a; a.term = std::move(t); a.rel = Rel::EqZero; return a; }
  static Atom modeq(LinTerm t, Int g) {
    Atom a; a.term = std::move(t); a.rel = Rel::ModEq; a.modulus = std::move(g); return a;
  }

  bool is_truth() const { return rel == Rel::True || rel == Rel::False; }

  friend bool operator==(const Atom &a, const Atom &b) {
    return a.rel == b.rel && a.modulus == b.modulus && a.term == b.term;
  }
  friend bool operator!=(const Atom &a, const Atom &b) { return !(a == b); }
  bool operator<(const Atom &o) const;
};

// Raw comparison shapes accepted by the normalizer.
enum class RawRel : uint8_t { Leq, Lt, Eq, NegLeq, NegLt };

// Canonical integer atom from a rational-coefficient comparison. Strict
// inequalities and negations are resolved using integer semantics:
// (t < 0) -> (t+1 <= 0), not(t <= 0) -> (-t+1 <= 0). Negated equalities are
// rejected; they are split at the CNF level.
Atom normalize_atom(LinTerm term, RawRel rel);

// Integer negation of a normalized LeqZero atom (or of True/False).
Atom negate_leq_atom(const Atom &a);

// Tightening: replace the constant c by ceil(c/g)*g, g = gcd of the variable
// coefficients. Returns the tightened atom and k = ceil(c/g)*g - c >= 0.
std::pair<Atom, Int> tighten(const Atom &a);

bool eval_atom(const Atom &a, const std::map<VarId, Rat> &assignment);

// ceil(a/b), exact, b > 0.
Int ceil_div(const Int &a, const Int &b);
Int floor_div(const Int &a, const Int &b);
Int rat_floor(const Rat &q);
Int rat_ceil(const Rat &q);
bool rat_is_int(const Rat &q);

std::string to_string(const LinTerm &t, const VarTable &vars);
std::string to_string(const Atom &a, const VarTable &vars);

// Per-variable first/last group occurrence (groups are 1-based). A term is
// admissible as a lemma for every prefix partition iff max(first) <=
// min(last) over its variables; for two groups this is exactly "not
// AB-mixed".
struct VarGroups {
  std::map<VarId, std::pair<int, int>> first_last;

  void add_occurrence(VarId v, int group);
  bool admissible(const LinTerm &t) const;
  bool in_A(VarId v, int cut) const;  // occurs in some group <= cut
  bool in_B(VarId v, int cut) const;  // occurs in some group > cut
};

}  // namespace liaitp
