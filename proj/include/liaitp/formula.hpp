#pragma once

#include <memory>
#include <set>
#include <vector>

#include "liaitp/arith.hpp"

namespace liaitp {

// ---------------------------------------------------------------------------
// Extended linear terms: rational combinations of variables and ceiling
// monomials ceil(t/d). Ceiling contents are normalized to integer
// coefficients (scaling content and divisor together), so every monomial is
// integer-valued under integer assignments.
// ---------------------------------------------------------------------------

struct ExtTerm;
using ExtTermPtr = std::shared_ptr<const ExtTerm>;

struct CeilMono {
  ExtTermPtr content;  // integer-coefficient content
  Int divisor;         // > 0

  bool operator<(const CeilMono &o) const;
  bool operator==(const CeilMono &o) const;
};

struct ExtTerm {
  std::map<VarId, Rat> var_coeffs;
  std::map<CeilMono, Rat> ceil_coeffs;
  Rat constant;

  ExtTerm() = default;
  explicit ExtTerm(const LinTerm &t) : var_coeffs(t.coeffs), constant(t.constant) {}

  bool is_linear() const { return ceil_coeffs.empty(); }
  bool is_constant() const { return var_coeffs.empty() && ceil_coeffs.empty(); }
  LinTerm linear_part() const;  // requires is_linear()

  void add_var(VarId v, const Rat &c);
  void add_ceil(const CeilMono &m, const Rat &c);
  ExtTerm &operator+=(const ExtTerm &o);
  void scale(const Rat &c);
  friend ExtTerm operator+(ExtTerm a, const ExtTerm &b) { a += b; return a; }
  friend ExtTerm operator*(const Rat &c, ExtTerm t) { t.scale(c); return t; }

  bool operator<(const ExtTerm &o) const;
  bool operator==(const ExtTerm &o) const;

  // ceil(t/d), canonicalized: content scaled to integer coefficients and
  // reduced by the common content/divisor gcd.
  static CeilMono make_ceil(const ExtTerm &t, const Int &d);

  // exact evaluation; every ceiling content must come out integral
  Rat eval(const std::map<VarId, Rat> &assignment) const;

  size_t dag_size() const;  // monomials + nested ceiling contents
};

// ---------------------------------------------------------------------------
// Formula trees. Solver inputs use True/False/Atom/BoolVar/Not/And/Or;
// interpolants may additionally contain ExtLeq leaves (ext-term <= 0).
// ---------------------------------------------------------------------------

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind : uint8_t { True, False, Atom, ExtLeq, BoolVar, Not, And, Or };

  Kind kind = Kind::True;
  liaitp::Atom atom;            // Kind::Atom
  ExtTerm ext;                  // Kind::ExtLeq
  std::string bool_name;        // Kind::BoolVar
  std::vector<FormulaPtr> kids; // Not/And/Or
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_atom(Atom a);
FormulaPtr f_ext_leq(ExtTerm t);
FormulaPtr f_bool(std::string name);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(std::vector<FormulaPtr> kids);  // folds truth values, flattens
FormulaPtr f_or(std::vector<FormulaPtr> kids);

bool is_true(const FormulaPtr &f);
bool is_false(const FormulaPtr &f);

// Evaluation over exact values; Boolean variables looked up by name.
bool eval_formula(const FormulaPtr &f, const std::map<VarId, Rat> &assignment,
                  const std::map<std::string, bool> &bool_assignment);

void collect_vars(const FormulaPtr &f, std::set<VarId> &vars);
void collect_bools(const FormulaPtr &f, std::set<std::string> &names);

size_t formula_dag_size(const FormulaPtr &f);

}  // namespace liaitp
