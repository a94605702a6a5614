#include "liaitp/proofs.hpp"

#include <algorithm>

namespace liaitp {

int AbstractionTable::push_var(VarKind k) {
  kinds_.push_back(k);
  atoms_.emplace_back();
  names_.emplace_back();
  groups_.emplace_back();
  return static_cast<int>(kinds_.size()) - 1;
}

int AbstractionTable::intern_theory(const Atom &a) {
  LIAITP_CONTRACT(!a.is_truth(), "cannot intern a truth marker");
  auto it = atom_index_.find(a);
  if (it != atom_index_.end()) return it->second;
  int v = push_var(VarKind::Theory);
  atoms_[static_cast<size_t>(v)] = a;
  atom_index_.emplace(a, v);
  return v;
}

std::optional<int> AbstractionTable::find_theory(const Atom &a) const {
  auto it = atom_index_.find(a);
  if (it == atom_index_.end()) return std::nullopt;
  return it->second;
}

int AbstractionTable::intern_bool(const std::string &name) {
  auto it = bool_index_.find(name);
  if (it != bool_index_.end()) return it->second;
  int v = push_var(VarKind::Bool);
  names_[static_cast<size_t>(v)] = name;
  bool_index_.emplace(name, v);
  return v;
}

std::optional<int> AbstractionTable::find_bool(const std::string &name) const {
  auto it = bool_index_.find(name);
  if (it == bool_index_.end()) return std::nullopt;
  return it->second;
}

int AbstractionTable::add_tseitin(int group) {
  int v = push_var(VarKind::Tseitin);
  groups_[static_cast<size_t>(v)].insert(group);
  return v;
}

const Atom &AbstractionTable::atom(int v) const {
  LIAITP_CONTRACT(is_theory(v), "variable is not a theory atom");
  return atoms_.at(static_cast<size_t>(v));
}

const std::string &AbstractionTable::bool_name(int v) const {
  LIAITP_CONTRACT(kind(v) == VarKind::Bool, "variable is not a named Boolean");
  return names_.at(static_cast<size_t>(v));
}

void AbstractionTable::add_group_occurrence(int v, int group) {
  groups_.at(static_cast<size_t>(v)).insert(group);
}

Atom effective_atom(const AbstractionTable &table, Lit l) {
  const Atom &a = table.atom(l.var);
  if (l.pos) return a;
  LIAITP_CONTRACT(a.rel != Rel::EqZero && a.rel != Rel::ModEq,
                  "negative equality literal has no effective atom");
  return negate_leq_atom(a);
}

// ---------------------------------------------------------------------------
// CutProof
// ---------------------------------------------------------------------------

namespace {

Atom hyp_view(const Atom &hyp, bool negate_equality) {
  if (hyp.rel == Rel::LeqZero) {
    LIAITP_CONTRACT(!negate_equality, "only equalities can be reoriented");
    return hyp;
  }
  LIAITP_CONTRACT(hyp.rel == Rel::EqZero, "hypothesis must be an inequality or equality");
  LinTerm t = hyp.term;
  if (negate_equality) t.scale(-1);
  return Atom::leq(std::move(t));
}

Atom divide_atom(const Atom &a, const Int &d) {
  LinTerm t;
  for (const auto &[v, c] : a.term.coeffs) t.coeffs.emplace(v, c / Rat(d));
  t.constant = Rat(rat_ceil(a.term.constant / Rat(d)));
  return Atom::leq(std::move(t));
}

bool divides_all_coeffs(const LinTerm &t, const Int &d) {
  for (const auto &[v, c] : t.coeffs) {
    if (!rat_is_int(c)) return false;
    if (!mpz_divisible_p(Int(c.get_num()).get_mpz_t(), d.get_mpz_t())) return false;
  }
  return true;
}

}  // namespace

int CutProof::add_hyp(const Atom &hyp, bool negate_equality) {
  Node n;
  n.kind = Kind::Hyp;
  n.hyp = hyp;
  n.hyp_neg = negate_equality;
  n.derived = hyp_view(hyp, negate_equality);
  nodes.push_back(std::move(n));
  root = static_cast<int>(nodes.size()) - 1;
  return root;
}

int CutProof::add_comb(const Rat &c1, int left, const Rat &c2, int right) {
  LIAITP_CONTRACT(c1 > 0 && c2 > 0, "Comb requires positive coefficients");
  Node n;
  n.kind = Kind::Comb;
  n.c1 = c1;
  n.c2 = c2;
  n.left = left;
  n.right = right;
  n.derived = Atom::leq(lin_comb(c1, derived(left).term, c2, derived(right).term));
  nodes.push_back(std::move(n));
  root = static_cast<int>(nodes.size()) - 1;
  return root;
}

int CutProof::add_strengthen(int child, const Int &d) {
  const Atom &prem = derived(child);
  LIAITP_CONTRACT(d > 0 && prem.term.integral() && divides_all_coeffs(prem.term, d),
                  "Strengthen: d must be positive and divide all coefficients");
  Node n;
  n.kind = Kind::Strengthen;
  n.child = child;
  n.d = d;
  n.derived = prem;
  Int c(prem.term.constant.get_num());
  n.derived.term.constant = Rat(ceil_div(c, d) * d);
  nodes.push_back(std::move(n));
  root = static_cast<int>(nodes.size()) - 1;
  return root;
}

int CutProof::add_division(int child, const Int &d) {
  const Atom &prem = derived(child);
  LIAITP_CONTRACT(d > 0 && prem.term.integral() && divides_all_coeffs(prem.term, d),
                  "Division: d must be positive and divide all coefficients");
  Node n;
  n.kind = Kind::Division;
  n.child = child;
  n.d = d;
  n.derived = divide_atom(prem, d);
  nodes.push_back(std::move(n));
  root = static_cast<int>(nodes.size()) - 1;
  return root;
}

int CutProof::splice(const CutProof &other) {
  int base = static_cast<int>(nodes.size());
  for (Node n : other.nodes) {
    if (n.left >= 0) n.left += base;
    if (n.right >= 0) n.right += base;
    if (n.child >= 0) n.child += base;
    nodes.push_back(std::move(n));
  }
  return other.root + base;
}

std::vector<std::pair<Atom, bool>> CutProof::hypotheses() const {
  std::set<std::pair<Atom, bool>> seen;
  std::vector<std::pair<Atom, bool>> out;
  for (const Node &n : nodes) {
    if (n.kind != Kind::Hyp) continue;
    auto key = std::make_pair(n.hyp, n.hyp_neg);
    if (seen.insert(key).second) out.push_back(key);
  }
  return out;
}

bool CutProof::has_strengthen_or_division() const {
  for (const Node &n : nodes)
    if (n.kind == Kind::Strengthen || n.kind == Kind::Division) return true;
  return false;
}

CheckResult check_cut_proof(const CutProof &p, const std::vector<Atom> &hypotheses,
                            bool refutation) {
  if (p.root < 0 || p.root >= static_cast<int>(p.nodes.size()))
    return CheckResult::failure(-1, "missing root");
  std::set<Atom> hyp_set(hypotheses.begin(), hypotheses.end());

  auto hyp_present = [&](const Atom &hyp, bool negated) {
    if (hyp_set.count(hyp)) return !negated || hyp.rel == Rel::EqZero;
    if (hyp.rel != Rel::EqZero) return false;
    LinTerm t = hyp.term;
    t.scale(-1);
    return hyp_set.count(Atom::eq(std::move(t))) != 0;
  };

  for (int i = 0; i < static_cast<int>(p.nodes.size()); ++i) {
    const CutProof::Node &n = p.nodes[static_cast<size_t>(i)];
    switch (n.kind) {
      case CutProof::Kind::Hyp: {
        if (!hyp_present(n.hyp, n.hyp_neg))
          return CheckResult::failure(i, "hypothesis not in the asserted set");
        if (n.derived != hyp_view(n.hyp, n.hyp_neg))
          return CheckResult::failure(i, "hypothesis view mismatch");
        break;
      }
      case CutProof::Kind::Comb: {
        if (n.left < 0 || n.left >= i || n.right < 0 || n.right >= i)
          return CheckResult::failure(i, "comb child out of range");
        if (!(n.c1 > 0 && n.c2 > 0)) return CheckResult::failure(i, "comb coefficient not positive");
        LinTerm expect = lin_comb(n.c1, p.nodes[static_cast<size_t>(n.left)].derived.term, n.c2,
                                  p.nodes[static_cast<size_t>(n.right)].derived.term);
        if (n.derived.rel != Rel::LeqZero || n.derived.term != expect)
          return CheckResult::failure(i, "comb arithmetic mismatch");
        break;
      }
      case CutProof::Kind::Strengthen: {
        if (n.child < 0 || n.child >= i) return CheckResult::failure(i, "child out of range");
        const Atom &prem = p.nodes[static_cast<size_t>(n.child)].derived;
        if (!(n.d > 0) || !prem.term.integral() || !divides_all_coeffs(prem.term, n.d))
          return CheckResult::failure(i, "strengthen divisibility violated");
        Int c(prem.term.constant.get_num());
        Atom expect = prem;
        expect.term.constant = Rat(ceil_div(c, n.d) * n.d);
        if (n.derived != expect) return CheckResult::failure(i, "strengthen arithmetic mismatch");
        break;
      }
      case CutProof::Kind::Division: {
        if (n.child < 0 || n.child >= i) return CheckResult::failure(i, "child out of range");
        const Atom &prem = p.nodes[static_cast<size_t>(n.child)].derived;
        if (!(n.d > 0) || !prem.term.integral() || !divides_all_coeffs(prem.term, n.d))
          return CheckResult::failure(i, "division divisibility violated");
        if (n.derived != divide_atom(prem, n.d))
          return CheckResult::failure(i, "division arithmetic mismatch");
        break;
      }
    }
  }
  if (refutation) {
    const Atom &r = p.root_atom();
    if (r.rel != Rel::LeqZero || !r.term.is_constant() || !rat_is_int(r.term.constant) ||
        r.term.constant <= 0)
      return CheckResult::failure(p.root, "root is not a positive integer contradiction");
  }
  return {};
}

// ---------------------------------------------------------------------------
// BnbProof
// ---------------------------------------------------------------------------

Atom branch_atom_low(VarId v, const Int &n) {
  LinTerm t = LinTerm::var(v);
  t.constant = Rat(-n);
  return Atom::leq(std::move(t));
}

Atom branch_atom_high(VarId v, const Int &n) {
  LinTerm t = LinTerm::var(v, -1);
  t.constant = Rat(n + 1);
  return Atom::leq(std::move(t));
}

int BnbProof::add_leaf(CutProof cut) {
  Node n;
  n.leaf = true;
  n.cut = std::move(cut);
  nodes.push_back(std::move(n));
  root = static_cast<int>(nodes.size()) - 1;
  return root;
}

int BnbProof::add_split(VarId v, const Int &bound, int left, int right) {
  Node n;
  n.var = v;
  n.bound = bound;
  n.left = left;
  n.right = right;
  nodes.push_back(std::move(n));
  root = static_cast<int>(nodes.size()) - 1;
  return root;
}

namespace {

CheckResult check_bnb_node(const BnbProof &p, int idx, std::vector<Atom> &path) {
  const BnbProof::Node &n = p.nodes.at(static_cast<size_t>(idx));
  if (n.leaf) {
    CheckResult r = check_cut_proof(n.cut, path, /*refutation=*/true);
    if (!r.ok) r.reason = "bnb leaf: " + r.reason;
    return r;
  }
  if (n.left < 0 || n.right < 0) return CheckResult::failure(idx, "malformed split node");
  path.push_back(branch_atom_low(n.var, n.bound));
  CheckResult r = check_bnb_node(p, n.left, path);
  path.pop_back();
  if (!r.ok) return r;
  path.push_back(branch_atom_high(n.var, n.bound));
  r = check_bnb_node(p, n.right, path);
  path.pop_back();
  return r;
}

}  // namespace

CheckResult check_bnb_proof(const BnbProof &p, const std::vector<Atom> &asserted) {
  if (p.root < 0) return CheckResult::failure(-1, "missing root");
  std::vector<Atom> path = asserted;
  return check_bnb_node(p, p.root, path);
}

// ---------------------------------------------------------------------------
// ResProof
// ---------------------------------------------------------------------------

namespace {

std::vector<Lit> sort_unique(std::vector<Lit> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  return lits;
}

}  // namespace

int ResProof::add_leaf(std::vector<Lit> clause, ClauseOrigin origin) {
  Node n;
  n.leaf = true;
  n.clause = sort_unique(std::move(clause));
  n.origin = origin;
  nodes.push_back(std::move(n));
  root = static_cast<int>(nodes.size()) - 1;
  return root;
}

int ResProof::add_res(int pivot, int left, int right) {
  Node n;
  n.pivot = pivot;
  n.left = left;
  n.right = right;
  n.clause = resolve_clauses(clause(left), clause(right), pivot);
  nodes.push_back(std::move(n));
  root = static_cast<int>(nodes.size()) - 1;
  return root;
}

int ResProof::add_tlemma(TheoryLemma lemma) {
  tlemmas.push_back(std::move(lemma));
  return static_cast<int>(tlemmas.size()) - 1;
}

ResProof ResProof::pruned() const {
  LIAITP_CONTRACT(root >= 0, "pruning an unrooted proof");
  ResProof out;
  std::vector<int> node_map(nodes.size(), -1);
  std::vector<int> lemma_map(tlemmas.size(), -1);
  // iterative DFS, children first
  std::vector<std::pair<int, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [idx, expanded] = stack.back();
    stack.pop_back();
    if (node_map[static_cast<size_t>(idx)] >= 0) continue;
    const Node &n = nodes[static_cast<size_t>(idx)];
    if (n.leaf) {
      ClauseOrigin origin = n.origin;
      if (origin.kind == ClauseKind::TLemma) {
        int &lm = lemma_map[static_cast<size_t>(origin.tlemma)];
        if (lm < 0) lm = out.add_tlemma(tlemmas[static_cast<size_t>(origin.tlemma)]);
        origin.tlemma = lm;
      }
      node_map[static_cast<size_t>(idx)] = out.add_leaf(n.clause, origin);
      continue;
    }
    if (!expanded) {
      stack.push_back({idx, true});
      if (node_map[static_cast<size_t>(n.right)] < 0) stack.push_back({n.right, false});
      if (node_map[static_cast<size_t>(n.left)] < 0) stack.push_back({n.left, false});
      continue;
    }
    node_map[static_cast<size_t>(idx)] =
        out.add_res(n.pivot, node_map[static_cast<size_t>(n.left)],
                    node_map[static_cast<size_t>(n.right)]);
  }
  out.root = node_map[static_cast<size_t>(root)];
  return out;
}

std::vector<Lit> resolve_clauses(const std::vector<Lit> &left, const std::vector<Lit> &right,
                                 int pivot) {
  Lit pos{pivot, true}, negl{pivot, false};
  LIAITP_CONTRACT(std::find(left.begin(), left.end(), pos) != left.end(),
                  "resolution: pivot missing in left premise");
  LIAITP_CONTRACT(std::find(right.begin(), right.end(), negl) != right.end(),
                  "resolution: negated pivot missing in right premise");
  std::vector<Lit> out;
  for (Lit l : left)
    if (l != pos) out.push_back(l);
  for (Lit l : right)
    if (l != negl) out.push_back(l);
  return sort_unique(std::move(out));
}

CheckResult check_res_proof(const ResProof &p, const AbstractionTable &table,
                            bool refutation) {
  if (p.root < 0 || p.root >= static_cast<int>(p.nodes.size()))
    return CheckResult::failure(-1, "missing root");
  for (int i = 0; i < static_cast<int>(p.nodes.size()); ++i) {
    const ResProof::Node &n = p.nodes[static_cast<size_t>(i)];
    if (n.leaf) {
      switch (n.origin.kind) {
        case ClauseKind::Group:
          if (n.origin.group <= 0) return CheckResult::failure(i, "leaf missing group origin");
          break;
        case ClauseKind::BnbLemma:
          break;
        case ClauseKind::TLemma: {
          if (n.origin.tlemma < 0 || n.origin.tlemma >= static_cast<int>(p.tlemmas.size()))
            return CheckResult::failure(i, "leaf missing theory lemma payload");
          const TheoryLemma &tl = p.tlemmas[static_cast<size_t>(n.origin.tlemma)];
          try {
            if (tl.bnb) {
              AbstractionTable scratch = table;
              ResProof converted = bnb_to_resolution(*tl.bnb, scratch, tl.bindings);
              CheckResult r = check_res_proof(converted, scratch);
              if (!r.ok) return CheckResult::failure(i, "bnb conversion: " + r.reason);
              std::set<Lit> want(n.clause.begin(), n.clause.end());
              const auto &rc = converted.clause(converted.root);
              std::set<Lit> got(rc.begin(), rc.end());
              if (want != got) return CheckResult::failure(i, "bnb root clause mismatch");
            } else {
              std::vector<Atom> hyps;
              for (Lit l : n.clause) hyps.push_back(effective_atom(table, neg(l)));
              CheckResult r = check_cut_proof(tl.cut, hyps, /*refutation=*/true);
              if (!r.ok) return CheckResult::failure(i, "theory lemma: " + r.reason);
            }
          } catch (const Error &e) {
            return CheckResult::failure(i, std::string("theory lemma: ") + e.what());
          }
          break;
        }
      }
      continue;
    }
    if (n.left < 0 || n.left >= i || n.right < 0 || n.right >= i)
      return CheckResult::failure(i, "premise out of range");
    Lit pos{n.pivot, true}, negl{n.pivot, false};
    const auto &lc = p.nodes[static_cast<size_t>(n.left)].clause;
    const auto &rc = p.nodes[static_cast<size_t>(n.right)].clause;
    if (std::find(lc.begin(), lc.end(), pos) == lc.end())
      return CheckResult::failure(i, "pivot missing in left premise");
    if (std::find(rc.begin(), rc.end(), negl) == rc.end())
      return CheckResult::failure(i, "negated pivot missing in right premise");
    std::vector<Lit> expect;
    for (Lit l : lc)
      if (l != pos) expect.push_back(l);
    for (Lit l : rc)
      if (l != negl) expect.push_back(l);
    expect = sort_unique(std::move(expect));
    if (expect != n.clause) return CheckResult::failure(i, "resolvent mismatch");
  }
  if (refutation && !p.clause(p.root).empty())
    return CheckResult::failure(p.root, "root clause not empty");
  return {};
}

namespace {

struct BnbConversion {
  const BnbProof &bnb;
  ResProof &out;
  AbstractionTable &table;
  std::map<Atom, Lit> lits;

  Lit resolve(const Atom &effective) {
    auto it = lits.find(effective);
    if (it != lits.end()) return it->second;
    Lit l{table.intern_theory(effective), true};
    lits.emplace(effective, l);
    return l;
  }

  int convert(int idx) {
    const BnbProof::Node &n = bnb.nodes.at(static_cast<size_t>(idx));
    if (n.leaf) {
      std::vector<Lit> clause;
      for (const auto &[hyp, negated] : n.cut.hypotheses()) {
        (void)negated;  // both orientations come from the same equality literal
        clause.push_back(neg(resolve(hyp)));
      }
      TheoryLemma lemma;
      lemma.cut = n.cut;
      lemma.bindings = lits;
      int tl = out.add_tlemma(std::move(lemma));
      return out.add_leaf(std::move(clause), {ClauseKind::TLemma, -1, tl});
    }
    int left = convert(n.left);
    int right = convert(n.right);
    Lit llow = resolve(branch_atom_low(n.var, n.bound));
    Lit lhigh = resolve(branch_atom_high(n.var, n.bound));

    bool left_uses = contains(out.clause(left), neg(llow));
    bool right_uses = contains(out.clause(right), neg(lhigh));
    if (!left_uses) return left;  // that side refutes independently of the split
    if (!right_uses) return right;

    int lemma_node = out.add_leaf({llow, lhigh}, {ClauseKind::BnbLemma, -1, -1});
    int step1 = out.add_res(llow.var, lemma_node, left);
    return out.add_res(lhigh.var, step1, right);
  }

  static bool contains(const std::vector<Lit> &c, Lit l) {
    return std::find(c.begin(), c.end(), l) != c.end();
  }
};

}  // namespace

ResProof bnb_to_resolution(const BnbProof &p, AbstractionTable &table,
                           const std::map<Atom, Lit> &asserted_lits) {
  LIAITP_CONTRACT(p.root >= 0, "bnb_to_resolution: empty proof");
  ResProof out;
  BnbConversion conv{p, out, table, asserted_lits};
  out.root = conv.convert(p.root);
  return out;
}

}  // namespace liaitp
