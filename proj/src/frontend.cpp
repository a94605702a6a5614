#include "liaitp/frontend.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

namespace liaitp {

// ---------------------------------------------------------------------------
// S-expressions
// ---------------------------------------------------------------------------

namespace {

struct Sexp {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexp> kids;
  int line = 0, col = 0;

  const Sexp &at(size_t i) const {
    LIAITP_CHECK(i < kids.size(), ErrorKind::ParseError, loc() + ": malformed expression");
    return kids[i];
  }
  std::string loc() const { return std::to_string(line) + ":" + std::to_string(col); }
  bool is(const std::string &s) const { return is_atom && atom == s; }
  bool headed(const std::string &s) const {
    return !is_atom && !kids.empty() && kids[0].is(s);
  }
};

struct Tokenizer {
  const std::string &text;
  size_t pos = 0;
  int line = 1, col = 1;

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < text.size()) {
      if (text[pos] == ';') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (isspace(static_cast<unsigned char>(text[pos]))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool done() {
    skip_ws();
    return pos >= text.size();
  }

  Sexp read() {
    skip_ws();
    LIAITP_CHECK(pos < text.size(), ErrorKind::ParseError, "unexpected end of input");
    Sexp s;
    s.line = line;
    s.col = col;
    if (text[pos] == '(') {
      advance();
      for (;;) {
        skip_ws();
        LIAITP_CHECK(pos < text.size(), ErrorKind::ParseError,
                     s.loc() + ": unterminated expression");
        if (text[pos] == ')') {
          advance();
          return s;
        }
        s.kids.push_back(read());
      }
    }
    LIAITP_CHECK(text[pos] != ')', ErrorKind::ParseError,
                 s.loc() + ": unexpected closing parenthesis");
    s.is_atom = true;
    while (pos < text.size() && !isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != ';')
      s.atom.push_back(text[pos]), advance();
    return s;
  }
};

bool is_integer_token(const std::string &s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Term and formula parsing
// ---------------------------------------------------------------------------

struct TermParser {
  VarTable &vars;
  std::map<std::string, bool> *declared;  // name -> is_bool; null = auto-intern

  bool is_bool_symbol(const std::string &name) const {
    if (declared) {
      auto it = declared->find(name);
      LIAITP_CHECK(it != declared->end(), ErrorKind::ParseError, "undeclared symbol: " + name);
      return it->second;
    }
    return false;  // auto mode: bare symbols in term position are integers
  }

  ExtTerm parse_term(const Sexp &s) {
    if (s.is_atom) {
      if (is_integer_token(s.atom)) {
        ExtTerm t;
        t.constant = Rat(s.atom);
        return t;
      }
      LIAITP_CHECK(!is_bool_symbol(s.atom), ErrorKind::ParseError,
                   s.loc() + ": Boolean symbol in arithmetic position: " + s.atom);
      ExtTerm t;
      t.add_var(declared ? vars.lookup(s.atom) : vars.intern(s.atom), 1);
      return t;
    }
    LIAITP_CHECK(!s.kids.empty() && s.at(0).is_atom, ErrorKind::ParseError,
                 s.loc() + ": malformed term");
    const std::string &op = s.at(0).atom;
    if (op == "+") {
      ExtTerm t;
      for (size_t i = 1; i < s.kids.size(); ++i) t += parse_term(s.kids[i]);
      return t;
    }
    if (op == "-") {
      LIAITP_CHECK(s.kids.size() >= 2, ErrorKind::ParseError, s.loc() + ": minus needs arguments");
      ExtTerm t = parse_term(s.at(1));
      if (s.kids.size() == 2) {
        t.scale(-1);
        return t;
      }
      for (size_t i = 2; i < s.kids.size(); ++i) {
        ExtTerm u = parse_term(s.kids[i]);
        u.scale(-1);
        t += u;
      }
      return t;
    }
    if (op == "*") {
      Rat coeff(1);
      std::optional<ExtTerm> non_const;
      for (size_t i = 1; i < s.kids.size(); ++i) {
        ExtTerm t = parse_term(s.kids[i]);
        if (t.is_constant()) {
          coeff *= t.constant;
        } else {
          LIAITP_CHECK(!non_const, ErrorKind::UnsupportedInput,
                       s.loc() + ": nonlinear multiplication");
          non_const = std::move(t);
        }
      }
      if (!non_const) {
        ExtTerm t;
        t.constant = coeff;
        return t;
      }
      non_const->scale(coeff);
      return *non_const;
    }
    if (op == "cdiv") {
      LIAITP_CHECK(s.kids.size() == 3 && s.at(2).is_atom && is_integer_token(s.at(2).atom),
                   ErrorKind::ParseError, s.loc() + ": cdiv expects a term and a positive integer");
      ExtTerm inner = parse_term(s.at(1));
      Int d(s.at(2).atom);
      LIAITP_CHECK(d > 0, ErrorKind::ParseError, s.loc() + ": cdiv divisor must be positive");
      ExtTerm t;
      t.add_ceil(ExtTerm::make_ceil(inner, d), 1);
      return t;
    }
    throw Error(ErrorKind::ParseError, s.loc() + ": unknown arithmetic operator: " + op);
  }

  FormulaPtr comparison(const ExtTerm &l, const ExtTerm &r, const std::string &op) {
    ExtTerm diff = l;
    ExtTerm neg_r = r;
    neg_r.scale(-1);
    diff += neg_r;  // l - r
    if (op == "<=") return leq0(diff);
    if (op == ">=") {
      diff.scale(-1);
      return leq0(diff);
    }
    if (op == "<") {  // l < r  <=>  not (r <= l)
      diff.scale(-1);
      return f_not(leq0(diff));
    }
    if (op == ">") return f_not(leq0(diff));
    LIAITP_CONTRACT(op == "=", "unknown comparison");
    if (diff.is_linear()) return f_atom(normalize_atom(diff.linear_part(), RawRel::Eq));
    ExtTerm neg = diff;
    neg.scale(-1);
    return f_and({leq0(diff), leq0(neg)});
  }

  FormulaPtr leq0(const ExtTerm &t) {
    if (t.is_linear()) return f_atom(normalize_atom(t.linear_part(), RawRel::Leq));
    return f_ext_leq(t);
  }

  FormulaPtr parse_formula(const Sexp &s) {
    if (s.is_atom) {
      if (s.atom == "true") return f_true();
      if (s.atom == "false") return f_false();
      if (declared) {
        LIAITP_CHECK(is_bool_symbol(s.atom), ErrorKind::ParseError,
                     s.loc() + ": integer symbol in Boolean position: " + s.atom);
      }
      return f_bool(s.atom);
    }
    LIAITP_CHECK(!s.kids.empty(), ErrorKind::ParseError, s.loc() + ": malformed formula");
    if (s.at(0).is_atom) {
      const std::string &op = s.at(0).atom;
      if (op == "and" || op == "or") {
        std::vector<FormulaPtr> kids;
        for (size_t i = 1; i < s.kids.size(); ++i) kids.push_back(parse_formula(s.kids[i]));
        return op == "and" ? f_and(std::move(kids)) : f_or(std::move(kids));
      }
      if (op == "not") {
        LIAITP_CHECK(s.kids.size() == 2, ErrorKind::ParseError, s.loc() + ": not expects one argument");
        return f_not(parse_formula(s.at(1)));
      }
      if (op == "ite") {
        LIAITP_CHECK(s.kids.size() == 4, ErrorKind::ParseError, s.loc() + ": ite expects three arguments");
        FormulaPtr c = parse_formula(s.at(1));
        FormulaPtr t = parse_formula(s.at(2));
        FormulaPtr e = parse_formula(s.at(3));
        return f_or({f_and({c, t}), f_and({f_not(c), e})});
      }
      if (op == "<=" || op == "<" || op == ">=" || op == ">" || op == "=") {
        LIAITP_CHECK(s.kids.size() == 3, ErrorKind::ParseError,
                     s.loc() + ": comparison expects two arguments");
        return comparison(parse_term(s.at(1)), parse_term(s.at(2)), op);
      }
      throw Error(ErrorKind::ParseError, s.loc() + ": unknown operator: " + op);
    }
    // ((_ divisible g) t)
    const Sexp &head = s.at(0);
    if (head.headed("_") && head.kids.size() == 3 && head.at(1).is("divisible")) {
      LIAITP_CHECK(head.at(2).is_atom && is_integer_token(head.at(2).atom), ErrorKind::ParseError,
                   s.loc() + ": divisible expects an integer modulus");
      Int g(head.at(2).atom);
      LIAITP_CHECK(g >= 1, ErrorKind::ParseError, s.loc() + ": modulus must be positive");
      ExtTerm t = parse_term(s.at(1));
      LIAITP_CHECK(t.is_linear(), ErrorKind::UnsupportedInput,
                   s.loc() + ": divisible over ceiling terms is not supported");
      LinTerm lt = t.linear_part();
      Int l = lt.denominator_lcm();
      if (l != 1) {
        lt.scale(Rat(l));
        g *= l;
      }
      if (g == 1) return f_true();
      return f_atom(Atom::modeq(std::move(lt), g));
    }
    throw Error(ErrorKind::ParseError, s.loc() + ": malformed formula");
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Problem parsing
// ---------------------------------------------------------------------------

InterpolationProblem parse_problem(const std::string &text) {
  Tokenizer tok{text};
  InterpolationProblem out;
  std::map<std::string, bool> declared;  // name -> is_bool
  std::map<std::string, int> group_index;
  std::vector<std::vector<FormulaPtr>> group_asserts;
  int last_group = -1;

  auto group_for = [&](const std::string &name) {
    auto it = group_index.find(name);
    if (it != group_index.end()) return it->second;
    int g = static_cast<int>(out.group_names.size());
    out.group_names.push_back(name);
    group_index.emplace(name, g);
    group_asserts.emplace_back();
    return g;
  };

  while (!tok.done()) {
    Sexp cmd = tok.read();
    LIAITP_CHECK(!cmd.is_atom && !cmd.kids.empty() && cmd.at(0).is_atom, ErrorKind::ParseError,
                 cmd.loc() + ": expected a command");
    const std::string &head = cmd.at(0).atom;
    if (head == "set-logic") {
      LIAITP_CHECK(cmd.kids.size() == 2 && cmd.at(1).is("QF_LIA"), ErrorKind::UnsupportedInput,
                   cmd.loc() + ": only QF_LIA is supported");
    } else if (head == "set-info" || head == "set-option" || head == "exit") {
      // ignored
    } else if (head == "declare-fun") {
      LIAITP_CHECK(cmd.kids.size() == 4 && cmd.at(1).is_atom && !cmd.at(2).is_atom &&
                       cmd.at(2).kids.empty() && cmd.at(3).is_atom,
                   ErrorKind::ParseError, cmd.loc() + ": expected (declare-fun name () Sort)");
      const std::string &name = cmd.at(1).atom;
      const std::string &sort = cmd.at(3).atom;
      LIAITP_CHECK(sort == "Int" || sort == "Bool", ErrorKind::UnsupportedInput,
                   cmd.loc() + ": unsupported sort: " + sort);
      LIAITP_CHECK(!declared.count(name), ErrorKind::ParseError,
                   cmd.loc() + ": duplicate declaration: " + name);
      declared[name] = sort == "Bool";
      if (sort == "Int") out.problem.vars.intern(name);
    } else if (head == "assert") {
      const Sexp *body = &cmd.at(1);
      int group;
      if (body->headed("!")) {
        LIAITP_CHECK(body->kids.size() == 4 && body->at(2).is(":itp-group") && body->at(3).is_atom,
                     ErrorKind::ParseError, cmd.loc() + ": expected (! term :itp-group g)");
        group = group_for(body->at(3).atom);
        body = &body->at(1);
      } else {
        if (last_group < 0) group_for("g1");
        group = last_group < 0 ? 0 : last_group;
      }
      last_group = group;
      TermParser tp{out.problem.vars, &declared};
      group_asserts[static_cast<size_t>(group)].push_back(tp.parse_formula(*body));
    } else if (head == "check-sat") {
      out.has_check_sat = true;
    } else if (head == "get-interpolant") {
      LIAITP_CHECK(cmd.kids.size() == 2 && !cmd.at(1).is_atom, ErrorKind::ParseError,
                   cmd.loc() + ": expected (get-interpolant (g1 ... gk))");
      const Sexp &list = cmd.at(1);
      LIAITP_CHECK(!list.kids.empty(), ErrorKind::ParseError, cmd.loc() + ": empty partition");
      for (size_t i = 0; i < list.kids.size(); ++i) {
        const Sexp &g = list.kids[i];
        LIAITP_CHECK(g.is_atom && group_index.count(g.atom), ErrorKind::ParseError,
                     g.loc() + ": unknown group");
        LIAITP_CHECK(group_index[g.atom] == static_cast<int>(i), ErrorKind::UnsupportedInput,
                     g.loc() + ": interpolation groups must form a prefix in declaration order");
      }
      out.has_itp_query = true;
      out.itp_cut = static_cast<int>(list.kids.size());
    } else {
      throw Error(ErrorKind::ParseError, cmd.loc() + ": unknown command: " + head);
    }
  }

  for (auto &conj : group_asserts) out.problem.groups.push_back(f_and(std::move(conj)));
  if (out.problem.groups.empty()) out.problem.groups.push_back(f_true());
  LIAITP_CHECK(!out.has_itp_query || out.problem.ngroups() >= 2, ErrorKind::UnsupportedInput,
               "interpolation queries need at least two groups");
  LIAITP_CHECK(!out.has_itp_query || out.itp_cut < out.problem.ngroups(),
               ErrorKind::UnsupportedInput, "the B side of the partition is empty");
  return out;
}

FormulaPtr parse_formula(const std::string &text, VarTable &vars) {
  Tokenizer tok{text};
  TermParser tp{vars, nullptr};
  Sexp s = tok.read();
  return tp.parse_formula(s);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string print_int(const Int &v) {
  if (v < 0) return "(- " + Int(-v).get_str() + ")";
  return v.get_str();
}

std::string print_rat(const Rat &q) {
  if (q.get_den() == 1) return print_int(Int(q.get_num()));
  std::string s = "(/ " + Int(q.get_num() < 0 ? -q.get_num() : q.get_num()).get_str() + " " +
                  Int(q.get_den()).get_str() + ")";
  return q < 0 ? "(- " + s + ")" : s;
}

std::string print_ext_term(const ExtTerm &t, const VarTable &vars);

std::string print_mono(const Rat &c, const std::string &body) {
  if (c == 1) return body;
  return "(* " + print_rat(c) + " " + body + ")";
}

std::string print_ceil(const CeilMono &m, const VarTable &vars) {
  return "(cdiv " + print_ext_term(*m.content, vars) + " " + m.divisor.get_str() + ")";
}

std::string print_ext_term(const ExtTerm &t, const VarTable &vars) {
  std::vector<std::string> parts;
  for (const auto &[v, c] : t.var_coeffs) parts.push_back(print_mono(c, vars.name(v)));
  for (const auto &[m, c] : t.ceil_coeffs) parts.push_back(print_mono(c, print_ceil(m, vars)));
  if (t.constant != 0 || parts.empty()) parts.push_back(print_rat(t.constant));
  if (parts.size() == 1) return parts[0];
  std::string s = "(+";
  for (const auto &p : parts) s += " " + p;
  return s + ")";
}

std::string print_lin_term(const LinTerm &t, const VarTable &vars) {
  return print_ext_term(ExtTerm(t), vars);
}

}  // namespace

std::string print_atom_sexp(const Atom &a, const VarTable &vars) {
  switch (a.rel) {
    case Rel::True: return "true";
    case Rel::False: return "false";
    case Rel::LeqZero: return "(<= " + print_lin_term(a.term, vars) + " 0)";
    case Rel::EqZero: return "(= " + print_lin_term(a.term, vars) + " 0)";
    case Rel::ModEq:
      return "((_ divisible " + a.modulus.get_str() + ") " + print_lin_term(a.term, vars) + ")";
  }
  return "?";
}

std::string print_formula(const FormulaPtr &f, const VarTable &vars) {
  switch (f->kind) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::Atom: return print_atom_sexp(f->atom, vars);
    case Formula::Kind::ExtLeq: return "(<= " + print_ext_term(f->ext, vars) + " 0)";
    case Formula::Kind::BoolVar: return f->bool_name;
    case Formula::Kind::Not: return "(not " + print_formula(f->kids[0], vars) + ")";
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::string s = f->kind == Formula::Kind::And ? "(and" : "(or";
      for (const auto &k : f->kids) s += " " + print_formula(k, vars);
      return s + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Proof dump / parse
// ---------------------------------------------------------------------------

ResProof flatten_bnb(const ResProof &p, AbstractionTable &table) {
  ResProof out;
  std::vector<int> remap(p.nodes.size(), -1);

  std::function<int(const ResProof &, int, std::vector<int> &)> copy_rec =
      [&](const ResProof &src, int idx, std::vector<int> &map) -> int {
    if (map[static_cast<size_t>(idx)] >= 0) return map[static_cast<size_t>(idx)];
    const ResProof::Node &n = src.nodes[static_cast<size_t>(idx)];
    int id;
    if (n.leaf) {
      if (n.origin.kind == ClauseKind::TLemma) {
        const TheoryLemma &tl = src.tlemmas[static_cast<size_t>(n.origin.tlemma)];
        if (tl.bnb) {
          ResProof converted = bnb_to_resolution(*tl.bnb, table, tl.bindings);
          converted = flatten_bnb(converted, table);  // leaves are plain cut lemmas
          std::vector<int> submap(converted.nodes.size(), -1);
          id = copy_rec(converted, converted.root, submap);
          map[static_cast<size_t>(idx)] = id;
          return id;
        }
        TheoryLemma copy = tl;
        int lm = out.add_tlemma(std::move(copy));
        id = out.add_leaf(n.clause, {ClauseKind::TLemma, -1, lm});
      } else {
        id = out.add_leaf(n.clause, n.origin);
      }
    } else {
      int l = copy_rec(src, n.left, map);
      int r = copy_rec(src, n.right, map);
      id = out.add_res(n.pivot, l, r);
    }
    map[static_cast<size_t>(idx)] = id;
    return id;
  };

  out.root = copy_rec(p, p.root, remap);
  return out;
}

namespace {

std::string print_var_ref(int v, const AbstractionTable &table, const VarTable &vars) {
  switch (table.kind(v)) {
    case AbstractionTable::VarKind::Theory: return print_atom_sexp(table.atom(v), vars);
    case AbstractionTable::VarKind::Bool: return table.bool_name(v);
    case AbstractionTable::VarKind::Tseitin: {
      int group = *table.groups_of(v).begin();
      return "(aux " + std::to_string(v) + " " + std::to_string(group) + ")";
    }
  }
  return "?";
}

std::string print_lit(Lit l, const AbstractionTable &table, const VarTable &vars) {
  std::string body = print_var_ref(l.var, table, vars);
  return l.pos ? body : "(not " + body + ")";
}

std::string print_clause(const std::vector<Lit> &c, const AbstractionTable &table,
                         const VarTable &vars) {
  std::string s = "(cl";
  for (Lit l : c) s += " " + print_lit(l, table, vars);
  return s + ")";
}

}  // namespace

std::string dump_proof(const ResProof &p, const AbstractionTable &table, const VarTable &vars) {
  std::ostringstream os;
  os << "(proof\n";
  for (size_t t = 0; t < p.tlemmas.size(); ++t) {
    const CutProof &cut = p.tlemmas[t].cut;
    os << "  (cut " << t << "\n";
    for (size_t i = 0; i < cut.nodes.size(); ++i) {
      const CutProof::Node &n = cut.nodes[i];
      os << "    (node " << i << " ";
      switch (n.kind) {
        case CutProof::Kind::Hyp:
          os << (n.hyp_neg ? "(hyp-neg " : "(hyp ") << print_atom_sexp(n.hyp, vars) << ")";
          break;
        case CutProof::Kind::Comb:
          os << "(comb " << print_rat(n.c1) << " " << n.left << " " << print_rat(n.c2) << " "
             << n.right << ")";
          break;
        case CutProof::Kind::Strengthen:
          os << "(strengthen " << n.child << " " << n.d.get_str() << ")";
          break;
        case CutProof::Kind::Division:
          os << "(division " << n.child << " " << n.d.get_str() << ")";
          break;
      }
      os << ")\n";
    }
    os << "    (root " << cut.root << "))\n";
  }
  for (size_t i = 0; i < p.nodes.size(); ++i) {
    const ResProof::Node &n = p.nodes[i];
    os << "  (node " << i << " ";
    if (n.leaf) {
      os << "(leaf ";
      switch (n.origin.kind) {
        case ClauseKind::Group: os << "(group " << n.origin.group << ")"; break;
        case ClauseKind::TLemma: os << "(tlemma " << n.origin.tlemma << ")"; break;
        case ClauseKind::BnbLemma: os << "bnb"; break;
      }
      os << " " << print_clause(n.clause, table, vars) << ")";
    } else {
      os << "(res " << print_var_ref(n.pivot, table, vars) << " " << n.left << " " << n.right
         << ")";
    }
    os << ")\n";
  }
  os << "  (root " << p.root << "))\n";
  return os.str();
}

namespace {

struct ProofParser {
  ParsedProof result;
  std::map<int, int> aux_map;  // dumped tseitin id -> new var

  Rat parse_rat(const Sexp &s) {
    if (s.is_atom) {
      LIAITP_CHECK(is_integer_token(s.atom), ErrorKind::ParseError,
                   s.loc() + ": expected a number");
      return Rat(s.atom);
    }
    if (s.headed("-")) return -parse_rat(s.at(1));
    LIAITP_CHECK(s.headed("/") && s.kids.size() == 3, ErrorKind::ParseError,
                 s.loc() + ": expected a rational");
    return parse_rat(s.at(1)) / parse_rat(s.at(2));
  }

  int parse_var_ref(const Sexp &s) {
    if (s.is_atom) return result.table->intern_bool(s.atom);
    if (s.headed("aux")) {
      int dumped = std::stoi(s.at(1).atom);
      int group = std::stoi(s.at(2).atom);
      auto it = aux_map.find(dumped);
      if (it != aux_map.end()) return it->second;
      int v = result.table->add_tseitin(group);
      aux_map.emplace(dumped, v);
      return v;
    }
    TermParser tp{result.vars, nullptr};
    FormulaPtr f = tp.parse_formula(s);
    LIAITP_CHECK(f->kind == Formula::Kind::Atom, ErrorKind::ParseError,
                 s.loc() + ": expected an atom");
    return result.table->intern_theory(f->atom);
  }

  Atom parse_atom(const Sexp &s) {
    TermParser tp{result.vars, nullptr};
    FormulaPtr f = tp.parse_formula(s);
    LIAITP_CHECK(f->kind == Formula::Kind::Atom, ErrorKind::ParseError,
                 s.loc() + ": expected an atom");
    return f->atom;
  }

  Lit parse_lit(const Sexp &s) {
    if (!s.is_atom && s.headed("not")) return neg(Lit{parse_var_ref(s.at(1)), true});
    return {parse_var_ref(s), true};
  }

  std::vector<Lit> parse_clause(const Sexp &s) {
    LIAITP_CHECK(s.headed("cl"), ErrorKind::ParseError, s.loc() + ": expected a clause");
    std::vector<Lit> out;
    for (size_t i = 1; i < s.kids.size(); ++i) out.push_back(parse_lit(s.kids[i]));
    return out;
  }

  CutProof parse_cut(const Sexp &s) {
    CutProof cut;
    std::map<int, int> remap;
    for (size_t i = 2; i < s.kids.size(); ++i) {
      const Sexp &entry = s.kids[i];
      if (entry.headed("root")) {
        cut.root = remap.at(std::stoi(entry.at(1).atom));
        continue;
      }
      LIAITP_CHECK(entry.headed("node"), ErrorKind::ParseError,
                   entry.loc() + ": expected (node ...)");
      int id = std::stoi(entry.at(1).atom);
      const Sexp &body = entry.at(2);
      int added;
      if (body.headed("hyp") || body.headed("hyp-neg"))
        added = cut.add_hyp(parse_atom(body.at(1)), body.headed("hyp-neg"));
      else if (body.headed("comb"))
        added = cut.add_comb(parse_rat(body.at(1)), remap.at(std::stoi(body.at(2).atom)),
                             parse_rat(body.at(3)), remap.at(std::stoi(body.at(4).atom)));
      else if (body.headed("strengthen"))
        added = cut.add_strengthen(remap.at(std::stoi(body.at(1).atom)), Int(body.at(2).atom));
      else if (body.headed("division"))
        added = cut.add_division(remap.at(std::stoi(body.at(1).atom)), Int(body.at(2).atom));
      else
        throw Error(ErrorKind::ParseError, body.loc() + ": unknown cut node");
      remap[id] = added;
    }
    return cut;
  }

  void run(const std::string &text) {
    result.table = std::make_shared<AbstractionTable>();
    Tokenizer tok{text};
    Sexp top = tok.read();
    LIAITP_CHECK(top.headed("proof"), ErrorKind::ParseError, "expected (proof ...)");
    std::map<int, int> node_map;
    for (size_t i = 1; i < top.kids.size(); ++i) {
      const Sexp &entry = top.kids[i];
      if (entry.headed("cut")) {
        TheoryLemma lemma;
        lemma.cut = parse_cut(entry);
        result.proof.add_tlemma(std::move(lemma));
        continue;
      }
      if (entry.headed("root")) {
        result.proof.root = node_map.at(std::stoi(entry.at(1).atom));
        continue;
      }
      LIAITP_CHECK(entry.headed("node"), ErrorKind::ParseError,
                   entry.loc() + ": expected (node ...)");
      int id = std::stoi(entry.at(1).atom);
      const Sexp &body = entry.at(2);
      if (body.headed("leaf")) {
        const Sexp &origin = body.at(1);
        ClauseOrigin o;
        if (origin.is("bnb")) {
          o.kind = ClauseKind::BnbLemma;
        } else if (origin.headed("group")) {
          o.kind = ClauseKind::Group;
          o.group = std::stoi(origin.at(1).atom);
        } else if (origin.headed("tlemma")) {
          o.kind = ClauseKind::TLemma;
          o.tlemma = std::stoi(origin.at(1).atom);
        } else {
          throw Error(ErrorKind::ParseError, origin.loc() + ": unknown leaf origin");
        }
        node_map[id] = result.proof.add_leaf(parse_clause(body.at(2)), o);
      } else if (body.headed("res")) {
        int pivot = parse_var_ref(body.at(1));
        node_map[id] = result.proof.add_res(pivot, node_map.at(std::stoi(body.at(2).atom)),
                                            node_map.at(std::stoi(body.at(3).atom)));
      } else {
        throw Error(ErrorKind::ParseError, body.loc() + ": unknown proof node");
      }
    }
    LIAITP_CHECK(result.proof.root >= 0, ErrorKind::ParseError, "proof has no root");
  }
};

}  // namespace

ParsedProof parse_proof(const std::string &text) {
  ProofParser pp;
  pp.run(text);
  return std::move(pp.result);
}

// ---------------------------------------------------------------------------
// CLI
// ---------------------------------------------------------------------------

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  LIAITP_CHECK(in.good(), ErrorKind::UnsupportedInput, "cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct BenchRow {
  uint64_t seed;
  std::string verdict;
  size_t itp_size = 0;
  double solve_ms = 0;
  std::string verify;
};

BenchRow bench_one(uint64_t seed, ItpEngine engine) {
  BenchRow row;
  row.seed = seed;
  Problem p = gen_random_problem(seed);
  auto t0 = std::chrono::steady_clock::now();
  SolverOptions opts;
  SolveOutcome out = solve_problem(p, opts);
  row.verdict = out.sat ? "sat" : "unsat";
  if (!out.sat) {
    FormulaPtr itp = interpolant(out, 1, engine);
    row.itp_size = formula_dag_size(itp);
    VerifyReport rep = verify_interpolant(p, 1, itp);
    BruteForceResult bf = brute_force_check(p, 1, itp, Int(8));
    row.verify = (rep.pass() && bf.ok) ? "ok" : "FAIL";
  } else {
    row.verify = validate_model(p, out) ? "ok" : "FAIL";
  }
  auto t1 = std::chrono::steady_clock::now();
  row.solve_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return row;
}

int cmd_solve(const std::string &file, const std::string &engine_name, bool check,
              int check_brute, const std::string &dump_file, bool seq, bool stats, uint64_t seed) {
  InterpolationProblem ip = parse_problem(read_file(file));
  ItpEngine engine = engine_name == "modeq" ? ItpEngine::ModEq : ItpEngine::Ceil;

  SolverOptions opts;
  opts.sat.step_limit = 0;
  (void)seed;
  SolveOutcome out = solve_problem(ip.problem, opts);

  if (out.sat) {
    std::cout << "sat\n";
    if (check && !validate_model(ip.problem, out)) {
      std::cerr << "error: model validation failed\n";
      return 1;
    }
    return 0;
  }

  std::cout << "unsat\n";
  if (!dump_file.empty()) {
    ResProof flat = flatten_bnb(out.proof, *out.table);
    std::ofstream os(dump_file);
    os << dump_proof(flat, *out.table, ip.problem.vars);
  }

  CheckResult pr = check_res_proof(out.proof, *out.table, /*refutation=*/true);
  if (!pr.ok) {
    std::cerr << "error: emitted proof failed checking: " << pr.reason << "\n";
    return 1;
  }

  if (ip.has_itp_query) {
    std::vector<int> cuts;
    if (seq) {
      for (int c = 1; c < ip.problem.ngroups(); ++c) cuts.push_back(c);
    } else {
      cuts.push_back(ip.itp_cut);
    }
    ItpStats istats;
    for (int cut : cuts) {
      FormulaPtr itp = interpolant(out, cut, engine, &istats);
      std::cout << print_formula(itp, ip.problem.vars) << "\n";
      if (check) {
        VerifyReport rep = verify_interpolant(ip.problem, cut, itp);
        if (!rep.pass()) {
          std::cerr << "error: interpolant verification failed: " << rep.failed_check << "\n";
          return 1;
        }
        if (check_brute > 0) {
          BruteForceResult bf = brute_force_check(ip.problem, cut, itp, Int(check_brute));
          if (!bf.ok) {
            std::cerr << "error: brute-force check failed: " << bf.failed_check << "\n";
            return 1;
          }
        }
      }
    }
    if (stats) {
      std::cerr << "strengthen-pairs: " << istats.strengthen_pairs
                << " conditional-strengthen: " << istats.conditional_strengthen_fired << "\n";
    }
  }
  if (stats) {
    const LazStats &ls = out.laz_stats;
    std::cerr << "lemmas: " << ls.lemmas_emitted << " cuts: " << ls.cut_lemmas
              << " splits: " << ls.split_lemmas << " branch: " << ls.branch_lemmas
              << " strengthenings: " << ls.strengthenings
              << " bnb-refutations: " << ls.bnb_refutations
              << " mixed-lemma-atoms: " << ls.mixed_lemma_atoms << "\n";
  }
  return 20;
}

int cmd_check_proof(const std::string &file) {
  ParsedProof pp = parse_proof(read_file(file));
  CheckResult r = check_res_proof(pp.proof, *pp.table);
  if (r.ok) {
    std::cout << "ok\n";
    return 0;
  }
  std::cout << "invalid: node " << r.node << ": " << r.reason << "\n";
  return 1;
}

int cmd_bench(int seeds, const std::string &engine_name, int jobs) {
  ItpEngine engine = engine_name == "modeq" ? ItpEngine::ModEq : ItpEngine::Ceil;
  std::vector<BenchRow> rows(static_cast<size_t>(seeds));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= seeds) return;
      rows[static_cast<size_t>(i)] = bench_one(static_cast<uint64_t>(i + 1), engine);
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  for (auto &t : pool) t.join();

  std::cout << "seed,verdict,itp_size,solve_ms,verify\n";
  bool all_ok = true;
  for (const BenchRow &r : rows) {
    std::cout << r.seed << "," << r.verdict << "," << r.itp_size << "," << r.solve_ms << ","
              << r.verify << "\n";
    if (r.verify != "ok") all_ok = false;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char **argv) {
  CLI::App app{"interpolating SMT solver for quantifier-free linear integer arithmetic"};
  app.require_subcommand(1);

  std::string file, engine = "ceil", dump_file;
  bool check = false, seq = false, stats = false;
  int check_brute = 0;
  uint64_t seed = 0;
  CLI::App *solve = app.add_subcommand("solve", "solve an SMT-LIB file, print interpolants");
  solve->add_option("file", file)->required();
  solve->add_option("--engine", engine)->check(CLI::IsMember({"ceil", "modeq"}));
  solve->add_flag("--check", check, "verify every printed interpolant with the solver");
  solve->add_option("--check-brute", check_brute, "also brute-force check on the given box");
  solve->add_option("--dump-proof", dump_file, "write the refutation in textual form");
  solve->add_flag("--seq", seq, "answer every prefix partition from one proof");
  solve->add_flag("--stats", stats);
  solve->add_option("--seed", seed);

  std::string proof_file;
  CLI::App *checkp = app.add_subcommand("check-proof", "recheck a dumped proof");
  checkp->add_option("file", proof_file)->required();

  int seeds = 500, jobs = 1;
  std::string bench_engine = "ceil";
  CLI::App *bench = app.add_subcommand("bench", "random-instance benchmark, CSV on stdout");
  bench->add_option("--seeds", seeds);
  bench->add_option("--engine", bench_engine)->check(CLI::IsMember({"ceil", "modeq"}));
  bench->add_option("--jobs", jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(file, engine, check, check_brute, dump_file, seq, stats, seed);
    if (checkp->parsed()) return cmd_check_proof(proof_file);
    if (bench->parsed()) return cmd_bench(seeds, bench_engine, jobs);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace liaitp
