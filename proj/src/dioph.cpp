#include "liaitp/dioph.hpp"

#include <algorithm>

namespace liaitp {

LinTerm Subst::apply(const LinTerm &t) const {
  std::map<int, Rat> ignored;
  return apply_with_provenance(t, ignored);
}

LinTerm Subst::apply_with_provenance(const LinTerm &t, std::map<int, Rat> &lambda) const {
  LinTerm cur = t;
  for (const SubstStep &s : steps) {
    Rat beta = cur.coeff(s.eliminated);
    if (beta == 0) continue;
    // cur += beta * (-eliminated + replacement)
    cur.add_mono(s.eliminated, -beta);
    cur += beta * s.replacement;
    for (const auto &[idx, c] : s.provenance) {
      lambda[idx] += beta * c;
      if (lambda[idx] == 0) lambda.erase(idx);
    }
  }
  return cur;
}

void UnsatLinComb::recompute_and_check() const {
  LinTerm sum;
  for (const auto &[c, eq] : combination) {
    LIAITP_CONTRACT(c != 0 && eq.rel == Rel::EqZero, "malformed equality certificate entry");
    sum += Rat(c) * eq.term;
  }
  LIAITP_CONTRACT(sum == root, "equality certificate does not recompute to its root");
  LIAITP_CONTRACT(root.integral(), "certificate root not integral");
  Int g = root.coeff_gcd();
  LIAITP_CONTRACT(g == gcd, "stored gcd mismatch");
  Int c(root.constant.get_num());
  if (g == 0) {
    LIAITP_CONTRACT(c != 0, "certificate root is the zero equation");
  } else {
    LIAITP_CONTRACT(!mpz_divisible_p(c.get_mpz_t(), g.get_mpz_t()),
                    "certificate gcd divides the constant");
  }
}

namespace {

struct Entry {
  LinTerm poly;
  std::map<int, Rat> lambda;
  bool active = true;
};

struct Eliminator {
  const std::vector<Atom> &eqs;
  VarTable &vars;
  std::vector<Entry> entries;
  Subst subst;

  explicit Eliminator(const std::vector<Atom> &eqs_in, VarTable &vt) : eqs(eqs_in), vars(vt) {
    for (int i = 0; i < static_cast<int>(eqs.size()); ++i) {
      LIAITP_CONTRACT(eqs[static_cast<size_t>(i)].rel == Rel::EqZero,
                      "solve_eqs expects equality atoms");
      LIAITP_CONTRACT(eqs[static_cast<size_t>(i)].term.integral(),
                      "solve_eqs expects integer coefficients");
      Entry e;
      e.poly = eqs[static_cast<size_t>(i)].term;
      e.lambda[i] = 1;
      entries.push_back(std::move(e));
    }
  }

  UnsatLinComb conflict_cert(const Entry &e) const {
    // clear denominators, then recompute the input combination
    Int scale(1);
    for (const auto &[idx, c] : e.lambda) scale = lcm(scale, Int(c.get_den()));
    UnsatLinComb cert;
    LinTerm root;
    for (const auto &[idx, c] : e.lambda) {
      Rat ci = c * Rat(scale);
      if (ci == 0) continue;
      cert.combination.emplace_back(Int(ci.get_num()), eqs[static_cast<size_t>(idx)]);
      root += ci * eqs[static_cast<size_t>(idx)].term;
    }
    cert.root = std::move(root);
    cert.gcd = cert.root.coeff_gcd();
    cert.recompute_and_check();
    return cert;
  }

  void scale_entry(Entry &e, const Rat &c) {
    e.poly.scale(c);
    for (auto &[idx, l] : e.lambda) l *= c;
  }

  // e has coefficient -1 on `v`; eliminate v from all other active entries.
  void substitute_everywhere(size_t solving, VarId v) {
    for (size_t i = 0; i < entries.size(); ++i) {
      if (i == solving || !entries[i].active) continue;
      Rat beta = entries[i].poly.coeff(v);
      if (beta == 0) continue;
      entries[i].poly += beta * entries[solving].poly;
      for (const auto &[idx, c] : entries[solving].lambda) {
        auto &slot = entries[i].lambda[idx];
        slot += beta * c;
        if (slot == 0) entries[i].lambda.erase(idx);
      }
    }
  }

  // symmetric remainder in [-|a|/2, |a|/2)
  static Int sym_rem(const Int &c, const Int &a) {
    Int m = abs(a);
    Int r;
    mpz_mod(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (2 * r >= m) r -= m;
    return r;
  }

  DiophResult run() {
    for (;;) {
      // fold constants, run divisibility checks, gcd-reduce
      for (Entry &e : entries) {
        if (!e.active) continue;
        if (e.poly.is_constant()) {
          if (e.poly.constant == 0) {
            e.active = false;
            continue;
          }
          return unsat(e);
        }
        Int g = e.poly.coeff_gcd();
        Int c(e.poly.constant.get_num());
        if (!mpz_divisible_p(c.get_mpz_t(), g.get_mpz_t())) return unsat(e);
        if (g > 1) scale_entry(e, Rat(1) / Rat(g));
      }

      // pick the (equation, variable) pair with minimal |coefficient|
      size_t best_entry = entries.size();
      VarId best_var = -1;
      Int best_abs;
      for (size_t i = 0; i < entries.size(); ++i) {
        if (!entries[i].active) continue;
        for (const auto &[v, c] : entries[i].poly.coeffs) {
          Int ac = abs(Int(c.get_num()));
          if (best_entry == entries.size() || ac < best_abs ||
              (ac == best_abs && (v < best_var || (v == best_var && i < best_entry)))) {
            best_entry = i;
            best_var = v;
            best_abs = ac;
          }
        }
      }
      if (best_entry == entries.size()) {
        DiophResult r;
        r.solved = true;
        r.subst = std::move(subst);
        return r;
      }

      Entry &e = entries[best_entry];
      if (best_abs == 1) {
        if (e.poly.coeff(best_var) > 0) scale_entry(e, -1);
        LinTerm replacement = e.poly;
        replacement.add_mono(best_var, 1);  // poly = -v + replacement
        e.active = false;
        substitute_everywhere(best_entry, best_var);
        subst.steps.push_back({best_var, std::move(replacement), e.lambda, false});
      } else {
        decompose(best_entry, best_var);
      }
    }
  }

  void decompose(size_t idx, VarId v) {
    Entry &e = entries[idx];
    Int a(e.poly.coeff(v).get_num());
    // e.poly = a*q + r with symmetric residues; q has coefficient 1 on v
    LinTerm q, r;
    for (const auto &[var, c] : e.poly.coeffs) {
      Int ci(c.get_num());
      Int rem = sym_rem(ci, a);
      Int quot = (ci - rem) / a;
      if (quot != 0) q.coeffs.emplace(var, Rat(quot));
      if (rem != 0) r.coeffs.emplace(var, Rat(rem));
    }
    {
      Int ci(e.poly.constant.get_num());
      Int rem = sym_rem(ci, a);
      q.constant = Rat((ci - rem) / a);
      r.constant = Rat(rem);
    }
    VarId sigma = vars.fresh("_w");
    // definition: sigma - q = 0, used to eliminate v (q's coefficient on v is 1)
    LinTerm def = LinTerm::var(sigma) - q;
    LinTerm replacement = def;
    replacement.add_mono(v, 1);

    Entry fact;
    fact.poly = r + LinTerm::var(sigma, Rat(a));
    fact.lambda = e.lambda;
    e.active = false;

    // apply the definitional substitution to the remaining entries
    size_t def_entry = entries.size();
    Entry de;
    de.poly = def;
    de.active = false;
    entries.push_back(std::move(de));
    substitute_everywhere(def_entry, v);
    subst.steps.push_back({v, std::move(replacement), {}, true});
    entries.push_back(std::move(fact));
  }

  DiophResult unsat(const Entry &e) const {
    DiophResult r;
    r.solved = false;
    r.cert = conflict_cert(e);
    return r;
  }
};

}  // namespace

DiophResult solve_eqs(const std::vector<Atom> &eqs, VarTable &vars) {
  Eliminator elim(eqs, vars);
  return elim.run();
}

EliminateResult eliminate_and_tighten(const std::vector<Atom> &eqs,
                                      const std::vector<Atom> &ineqs, VarTable &vars) {
  EliminateResult out;
  DiophResult sol = solve_eqs(eqs, vars);
  if (!sol.solved) {
    out.unsat = std::move(sol.cert);
    return out;
  }
  for (const Atom &ineq : ineqs) {
    LIAITP_CONTRACT(ineq.rel == Rel::LeqZero, "eliminate_and_tighten expects inequalities");
    std::map<int, Rat> lambda;
    sol.subst.apply_with_provenance(ineq.term, lambda);

    LinTerm combined = ineq.term;
    for (const auto &[idx, c] : lambda) combined += c * eqs[static_cast<size_t>(idx)].term;
    LIAITP_CONTRACT(combined.integral(), "combined inequality not integral");

    CutProof proof;
    int acc = proof.add_hyp(ineq);
    for (const auto &[idx, c] : lambda) {
      int h = proof.add_hyp(eqs[static_cast<size_t>(idx)], c < 0);
      acc = proof.add_comb(1, acc, abs(c), h);
    }

    if (combined.is_constant()) {
      if (combined.constant <= 0) continue;  // trivially entailed, nothing to add
      DerivedIneq d;
      d.atom = Atom::leq(combined);
      d.source = ineq;
      d.k = 0;
      d.proof = std::move(proof);
      out.derived.push_back(std::move(d));
      continue;
    }

    auto [tight, k] = tighten(Atom::leq(combined));
    if (k > 0) proof.add_strengthen(acc, tight.term.coeff_gcd());
    if (lambda.empty() && k == 0) continue;  // unchanged
    DerivedIneq d;
    d.atom = std::move(tight);
    d.source = ineq;
    d.k = k;
    d.proof = std::move(proof);
    out.derived.push_back(std::move(d));
  }
  return out;
}

}  // namespace liaitp
