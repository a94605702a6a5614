#include "liaitp/simplex.hpp"

#include <algorithm>

namespace liaitp {

void FarkasCert::recompute_and_check() const {
  LinTerm sum;
  for (const FarkasEntry &e : entries) {
    LIAITP_CONTRACT(e.coeff > 0, "farkas coefficient must be positive");
    LIAITP_CONTRACT(!e.negated_eq || e.atom.rel == Rel::EqZero,
                    "only equalities may be negated in a certificate");
    LinTerm t = e.atom.term;
    if (e.negated_eq) t.scale(-1);
    t.scale(e.coeff);
    sum += t;
  }
  LIAITP_CONTRACT(sum.is_constant() && sum.constant == constant && constant > 0,
                  "farkas certificate does not recompute to its constant");
}

int Simplex::new_solver_var(VarId problem_var) {
  int idx = static_cast<int>(beta_.size());
  beta_.emplace_back(0);
  lower_.emplace_back();
  upper_.emplace_back();
  is_basic_.push_back(false);
  var_of_.push_back(problem_var);
  return idx;
}

int Simplex::solver_var_for(VarId v) {
  auto it = var_index_.find(v);
  if (it != var_index_.end()) return it->second;
  int idx = new_solver_var(v);
  var_index_.emplace(v, idx);
  return idx;
}

int Simplex::slack_for(const LinTerm &vars_part, Rat &scale_out) {
  // canonical key: leading coefficient 1
  LIAITP_CONTRACT(vars_part.coeffs.size() >= 2, "slack_for expects a multi-variable term");
  Rat lead = vars_part.coeffs.begin()->second;
  LinTerm key = vars_part;
  key.scale(Rat(1) / lead);
  scale_out = lead;
  auto it = slack_index_.find(key);
  if (it != slack_index_.end()) return it->second;

  // materialize the defining row: s = key over problem vars
  std::map<int, Rat> row;
  Rat beta_val(0);
  for (const auto &[v, c] : key.coeffs) {
    int sv = solver_var_for(v);
    if (is_basic_[static_cast<size_t>(sv)]) {
      for (const auto &[nb, cc] : rows_.at(sv)) {
        row[nb] += c * cc;
        if (row[nb] == 0) row.erase(nb);
      }
    } else {
      row[sv] += c;
      if (row[sv] == 0) row.erase(sv);
    }
    beta_val += c * beta_[static_cast<size_t>(sv)];
  }
  int s = new_solver_var(-1);
  beta_[static_cast<size_t>(s)] = beta_val;
  is_basic_[static_cast<size_t>(s)] = true;
  rows_.emplace(s, std::move(row));
  slack_index_.emplace(std::move(key), s);
  return s;
}

void Simplex::add_entry(std::vector<FarkasEntry> &entries, const Rat &w, const Justification &j) {
  Rat c = w * j.unit;
  LIAITP_CONTRACT(c > 0, "certificate coefficient not positive");
  for (FarkasEntry &e : entries) {
    if (e.atom == j.atom && e.negated_eq == j.negated_eq) {
      e.coeff += c;
      return;
    }
  }
  entries.push_back({c, j.atom, j.negated_eq});
}

FarkasCert Simplex::bound_conflict(const Bound &lower, const Bound &upper) const {
  FarkasCert cert;
  add_entry(cert.entries, 1, lower.just);
  add_entry(cert.entries, 1, upper.just);
  cert.constant = lower.value - upper.value;
  cert.recompute_and_check();
  return cert;
}

FarkasCert Simplex::row_conflict(int basic_var, bool lower_violated) const {
  const auto &row = rows_.at(basic_var);
  FarkasCert cert;
  Rat slack_bound;
  if (lower_violated) {
    // l(xi) > max attainable: 1*(xi >= l) + sum over the row at its extremes
    add_entry(cert.entries, 1, lower_[static_cast<size_t>(basic_var)]->just);
    slack_bound = lower_[static_cast<size_t>(basic_var)]->value;
    Rat attain(0);
    for (const auto &[j, a] : row) {
      if (a > 0) {
        add_entry(cert.entries, a, upper_[static_cast<size_t>(j)]->just);
        attain += a * upper_[static_cast<size_t>(j)]->value;
      } else {
        add_entry(cert.entries, -a, lower_[static_cast<size_t>(j)]->just);
        attain += a * lower_[static_cast<size_t>(j)]->value;
      }
    }
    cert.constant = slack_bound - attain;
  } else {
    add_entry(cert.entries, 1, upper_[static_cast<size_t>(basic_var)]->just);
    slack_bound = upper_[static_cast<size_t>(basic_var)]->value;
    Rat attain(0);
    for (const auto &[j, a] : row) {
      if (a > 0) {
        add_entry(cert.entries, a, lower_[static_cast<size_t>(j)]->just);
        attain += a * lower_[static_cast<size_t>(j)]->value;
      } else {
        add_entry(cert.entries, -a, upper_[static_cast<size_t>(j)]->just);
        attain += a * upper_[static_cast<size_t>(j)]->value;
      }
    }
    cert.constant = attain - slack_bound;
  }
  cert.recompute_and_check();
  return cert;
}

std::optional<FarkasCert> Simplex::assert_atom(const Atom &a) {
  LIAITP_CONTRACT(a.rel == Rel::LeqZero || a.rel == Rel::EqZero,
                  "simplex accepts only <=0 / =0 atoms");
  LinTerm vars_part = a.term;
  Rat c = vars_part.constant;
  vars_part.constant = 0;
  LIAITP_CONTRACT(!vars_part.coeffs.empty(), "constant atom reached the simplex");

  int sv;
  Rat scale;
  if (vars_part.coeffs.size() == 1) {
    sv = solver_var_for(vars_part.coeffs.begin()->first);
    scale = vars_part.coeffs.begin()->second;
  } else {
    sv = slack_for(vars_part, scale);
  }
  // atom: scale*W + c <= 0 (or = 0) where W is the solver var's term
  Rat bound_val = -c / scale;
  Justification just{a, false, abs(Rat(1) / scale)};

  if (a.rel == Rel::LeqZero) {
    bool upper = scale > 0;
    return assert_bound(sv, upper, bound_val, just);
  }
  // equality: both bounds; orientation chosen so each use is a positive
  // multiple of +-term
  Justification jup = just, jlo = just;
  // upper bound for W corresponds to the orientation that reads scale*W+c<=0
  jup.negated_eq = !(scale > 0);
  jlo.negated_eq = (scale > 0);
  if (auto cert = assert_bound(sv, true, bound_val, jup)) return cert;
  return assert_bound(sv, false, bound_val, jlo);
}

std::optional<FarkasCert> Simplex::assert_bound(int var, bool upper, const Rat &value,
                                                Justification just) {
  auto &target = upper ? upper_[static_cast<size_t>(var)] : lower_[static_cast<size_t>(var)];
  auto &opposite = upper ? lower_[static_cast<size_t>(var)] : upper_[static_cast<size_t>(var)];
  if (target && (upper ? target->value <= value : target->value >= value))
    return std::nullopt;  // not tighter
  if (opposite && (upper ? opposite->value > value : opposite->value < value)) {
    Bound nb{value, just};
    return upper ? bound_conflict(*opposite, nb) : bound_conflict(nb, *opposite);
  }
  trail_.push_back({var, upper, target});
  target = Bound{value, std::move(just)};
  if (!is_basic_[static_cast<size_t>(var)]) {
    const Rat &b = beta_[static_cast<size_t>(var)];
    if (upper ? b > value : b < value) update_nonbasic(var, value);
  }
  return std::nullopt;
}

void Simplex::update_nonbasic(int var, const Rat &value) {
  Rat delta = value - beta_[static_cast<size_t>(var)];
  for (auto &[basic, row] : rows_) {
    auto it = row.find(var);
    if (it != row.end()) beta_[static_cast<size_t>(basic)] += it->second * delta;
  }
  beta_[static_cast<size_t>(var)] = value;
}

void Simplex::pivot(int basic_var, int nonbasic_var) {
  auto row = std::move(rows_.at(basic_var));
  rows_.erase(basic_var);
  Rat a = row.at(nonbasic_var);
  row.erase(nonbasic_var);
  // nonbasic_var = (basic_var - rest)/a
  std::map<int, Rat> new_row;
  new_row[basic_var] = Rat(1) / a;
  for (const auto &[v, c] : row) new_row[v] = -c / a;

  for (auto &[b, r] : rows_) {
    auto it = r.find(nonbasic_var);
    if (it == r.end()) continue;
    Rat coeff = it->second;
    r.erase(it);
    for (const auto &[v, c] : new_row) {
      auto [jt, inserted] = r.emplace(v, coeff * c);
      if (!inserted) {
        jt->second += coeff * c;
        if (jt->second == 0) r.erase(jt);
      }
    }
  }
  rows_.emplace(nonbasic_var, std::move(new_row));
  is_basic_[static_cast<size_t>(basic_var)] = false;
  is_basic_[static_cast<size_t>(nonbasic_var)] = true;
}

void Simplex::pivot_and_update(int basic_var, int nonbasic_var, const Rat &value) {
  Rat a = rows_.at(basic_var).at(nonbasic_var);
  Rat theta = (value - beta_[static_cast<size_t>(basic_var)]) / a;
  beta_[static_cast<size_t>(basic_var)] = value;
  beta_[static_cast<size_t>(nonbasic_var)] += theta;
  for (const auto &[b, row] : rows_) {
    if (b == basic_var) continue;
    auto it = row.find(nonbasic_var);
    if (it != row.end()) beta_[static_cast<size_t>(b)] += it->second * theta;
  }
  pivot(basic_var, nonbasic_var);
}

LaqResult Simplex::check() {
  for (;;) {
    int viol = -1;
    bool lower_violated = false;
    for (int v = 0; v < static_cast<int>(beta_.size()); ++v) {
      if (!is_basic_[static_cast<size_t>(v)]) continue;
      const Rat &b = beta_[static_cast<size_t>(v)];
      if (lower_[static_cast<size_t>(v)] && b < lower_[static_cast<size_t>(v)]->value) {
        viol = v;
        lower_violated = true;
        break;
      }
      if (upper_[static_cast<size_t>(v)] && b > upper_[static_cast<size_t>(v)]->value) {
        viol = v;
        lower_violated = false;
        break;
      }
    }
    if (viol < 0) {
      LaqResult r;
      r.sat = true;
      r.model = model();
      return r;
    }
    const auto &row = rows_.at(viol);
    int enter = -1;
    for (const auto &[j, a] : row) {
      const auto &lo = lower_[static_cast<size_t>(j)];
      const auto &up = upper_[static_cast<size_t>(j)];
      const Rat &bj = beta_[static_cast<size_t>(j)];
      bool usable;
      if (lower_violated)
        usable = (a > 0 && (!up || bj < up->value)) || (a < 0 && (!lo || bj > lo->value));
      else
        usable = (a < 0 && (!up || bj < up->value)) || (a > 0 && (!lo || bj > lo->value));
      if (usable) {
        enter = j;
        break;  // rows are ordered maps, so this is Bland's rule
      }
    }
    if (enter < 0) {
      LaqResult r;
      r.sat = false;
      r.cert = row_conflict(viol, lower_violated);
      return r;
    }
    const Rat &target = lower_violated ? lower_[static_cast<size_t>(viol)]->value
                                       : upper_[static_cast<size_t>(viol)]->value;
    pivot_and_update(viol, enter, target);
  }
}

void Simplex::push() { scopes_.push_back(trail_.size()); }

void Simplex::pop() {
  LIAITP_CONTRACT(!scopes_.empty(), "pop without matching push");
  size_t mark = scopes_.back();
  scopes_.pop_back();
  while (trail_.size() > mark) {
    TrailEntry e = std::move(trail_.back());
    trail_.pop_back();
    auto &slot = e.upper ? upper_[static_cast<size_t>(e.var)] : lower_[static_cast<size_t>(e.var)];
    slot = std::move(e.old_bound);
  }
  // repair nonbasic variables that drifted outside restored bounds
  for (int v = 0; v < static_cast<int>(beta_.size()); ++v) {
    if (is_basic_[static_cast<size_t>(v)]) continue;
    const auto &lo = lower_[static_cast<size_t>(v)];
    const auto &up = upper_[static_cast<size_t>(v)];
    if (lo && beta_[static_cast<size_t>(v)] < lo->value) update_nonbasic(v, lo->value);
    else if (up && beta_[static_cast<size_t>(v)] > up->value) update_nonbasic(v, up->value);
  }
}

RatModel Simplex::model() const {
  RatModel m;
  for (const auto &[pv, sv] : var_index_) m.values[pv] = beta_[static_cast<size_t>(sv)];
  return m;
}

LaqResult check_laq(const std::vector<Atom> &atoms) {
  Simplex s;
  for (const Atom &a : atoms) {
    if (a.rel == Rel::True) continue;
    LIAITP_CONTRACT(a.rel != Rel::False, "folded-false atom reached check_laq");
    if (auto cert = s.assert_atom(a)) {
      LaqResult r;
      r.sat = false;
      r.cert = std::move(*cert);
      return r;
    }
  }
  return s.check();
}

CutProof farkas_to_cut_proof(const FarkasCert &cert) {
  cert.recompute_and_check();
  LIAITP_CONTRACT(!cert.entries.empty(), "empty certificate");
  // scale so every coefficient is integral; the root constant then is too
  Int scale(1);
  for (const FarkasEntry &e : cert.entries) scale = lcm(scale, Int(e.coeff.get_den()));

  CutProof p;
  int acc = -1;
  Rat acc_coeff;
  for (const FarkasEntry &e : cert.entries) {
    int h = p.add_hyp(e.atom, e.negated_eq);
    Rat c = e.coeff * Rat(scale);
    if (acc < 0) {
      acc = h;
      acc_coeff = c;
    } else {
      acc = p.add_comb(acc_coeff, acc, c, h);
      acc_coeff = 1;
    }
  }
  if (p.nodes[static_cast<size_t>(acc)].kind == CutProof::Kind::Hyp) {
    // single hypothesis: split the coefficient over a duplicated premise
    acc = p.add_comb(acc_coeff / 2, acc, acc_coeff / 2, acc);
  }
  p.root = acc;
  return p;
}

}  // namespace liaitp
