#include <doctest.h>

#include <random>

#include "liaitp/arith.hpp"
#include "test_util.hpp"

using namespace liaitp;
using liaitp::test::term;

namespace {

struct Vars {
  VarTable t;
  VarId v1, v2, v3, v4, y1, y2, y3, x1, z1;
  Vars() {
    v1 = t.intern("v1");
    v2 = t.intern("v2");
    v3 = t.intern("v3");
    v4 = t.intern("v4");
    y1 = t.intern("y1");
    y2 = t.intern("y2");
    y3 = t.intern("y3");
    x1 = t.intern("x1");
    z1 = t.intern("z1");
  }
};

}  // namespace

TEST_CASE("lin_comb on the tightened pair gives the contradiction constant") {
  Vars v;
  LinTerm a = term({{v.v4, -3}, {v.v1, -12}, {v.v3, 24}}, 9);
  LinTerm b = term({{v.v4, 3}, {v.v1, 12}, {v.v3, -24}}, -6);
  LinTerm r = lin_comb(1, a, 1, b);
  CHECK(r.is_constant());
  CHECK(r.constant == 3);
}

TEST_CASE("lin_comb with a zero term scales") {
  Vars v;
  LinTerm r = lin_comb(2, term({{v.x1, 1}}), 3, LinTerm());
  CHECK(r == term({{v.x1, 2}}));
}

TEST_CASE("lin_comb reproduces the equality-combination step") {
  Vars v;
  LinTerm a = term({{v.y1, -1}, {v.y2, -1}, {v.y3, -4}, {v.x1, 1}}, 2);
  LinTerm b = term({{v.y1, 7}, {v.y2, 12}, {v.y3, 31}, {v.z1, 10}}, -17);
  LinTerm r = lin_comb(7, a, 1, b);
  CHECK(r == term({{v.y2, 5}, {v.y3, 3}, {v.x1, 7}, {v.z1, 10}}, -3));
}

TEST_CASE("lin_comb rejects non-positive coefficients") {
  Vars v;
  CHECK_THROWS_AS(lin_comb(0, term({{v.x1, 1}}), 1, term({{v.y1, 1}})), Error);
  CHECK_THROWS_AS(lin_comb(1, term({{v.x1, 1}}), -2, term({{v.y1, 1}})), Error);
}

TEST_CASE("lin_comb is an eval homomorphism on random rational inputs") {
  Vars v;
  std::mt19937_64 rng(42);
  auto rr = [&]() {
    Rat q(static_cast<long>(rng() % 21) - 10, 1 + rng() % 7);
    q.canonicalize();
    return q;
  };
  for (int iter = 0; iter < 200; ++iter) {
    LinTerm t1, t2;
    std::map<VarId, Rat> m;
    for (VarId var : {v.v1, v.v2, v.v3}) {
      t1.add_mono(var, rr());
      t2.add_mono(var, rr());
      m[var] = rr();
    }
    t1.constant = rr();
    t2.constant = rr();
    Rat c1 = Rat(abs(rr())) + 1, c2 = Rat(abs(rr())) + 1;
    LinTerm combined = lin_comb(c1, t1, c2, t2);
    CHECK(eval_term(combined, m) == c1 * eval_term(t1, m) + c2 * eval_term(t2, m));
    CHECK(lin_comb(c2, t2, c1, t1) == combined);
  }
}

TEST_CASE("normalize_atom clears denominators") {
  Vars v;
  LinTerm t;
  t.add_mono(v.x1, Rat(1, 2));
  t.add_mono(v.y1, Rat(-1, 3));
  Atom a = normalize_atom(t, RawRel::Leq);
  CHECK(a == Atom::leq(term({{v.x1, 3}, {v.y1, -2}})));
}

TEST_CASE("normalize_atom negates over the integers") {
  Vars v;
  Atom a = normalize_atom(term({{v.x1, 1}}, -3), RawRel::NegLeq);
  CHECK(a == Atom::leq(term({{v.x1, -1}}, 4)));
}

TEST_CASE("normalize_atom folds constants") {
  CHECK(normalize_atom(LinTerm(Rat(0)), RawRel::Leq).rel == Rel::True);
  CHECK(normalize_atom(LinTerm(Rat(1)), RawRel::Leq).rel == Rel::False);
  CHECK(normalize_atom(LinTerm(Rat(0)), RawRel::Eq).rel == Rel::True);
}

TEST_CASE("normalize_atom is idempotent and involutive under double negation") {
  Vars v;
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 100; ++iter) {
    LinTerm t;
    auto rr = [&]() {
      Rat q(static_cast<long>(rng() % 11) - 5, 1 + rng() % 4);
      q.canonicalize();
      return q;
    };
    for (VarId var : {v.v1, v.v2}) t.add_mono(var, rr());
    t.constant = rr();
    Atom a = normalize_atom(t, RawRel::Leq);
    if (a.is_truth()) continue;
    CHECK(normalize_atom(a.term, RawRel::Leq) == a);
    CHECK(negate_leq_atom(negate_leq_atom(a)) == a);
  }
}

TEST_CASE("equalities are gcd-reduced with positive leading coefficient") {
  Vars v;
  Atom a = normalize_atom(term({{v.v1, -2}, {v.v2, 4}}, -6), RawRel::Eq);
  CHECK(a == Atom::eq(term({{v.v1, 1}, {v.v2, -2}}, 3)));
}

TEST_CASE("tighten reproduces the rounding examples") {
  Vars v;
  auto [a1, k1] = tighten(Atom::leq(term({{v.v4, -3}, {v.v1, -12}, {v.v3, 24}}, 7)));
  CHECK(a1 == Atom::leq(term({{v.v4, -3}, {v.v1, -12}, {v.v3, 24}}, 9)));
  CHECK(k1 == 2);

  auto [a2, k2] = tighten(Atom::leq(term({{v.v4, 3}, {v.v1, 12}, {v.v3, -24}}, -8)));
  CHECK(a2 == Atom::leq(term({{v.v4, 3}, {v.v1, 12}, {v.v3, -24}}, -6)));
  CHECK(k2 == 2);

  auto [a3, k3] = tighten(Atom::leq(term({{v.x1, 2}, {v.y1, 3}}, 1)));
  CHECK(a3 == Atom::leq(term({{v.x1, 2}, {v.y1, 3}}, 1)));
  CHECK(k3 == 0);
}

TEST_CASE("tighten output is entailed over the integers") {
  Vars v;
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 100; ++iter) {
    LinTerm t;
    t.add_mono(v.v1, Rat(2 * (static_cast<long>(rng() % 5) - 2)));
    t.add_mono(v.v2, Rat(2 * (static_cast<long>(rng() % 5) - 2) + 4));
    t.constant = Rat(static_cast<long>(rng() % 17) - 8);
    if (t.coeffs.empty()) continue;
    Atom a = Atom::leq(t);
    auto [tight, k] = tighten(a);
    for (long x = -4; x <= 4; ++x) {
      for (long y = -4; y <= 4; ++y) {
        std::map<VarId, Rat> m{{v.v1, Rat(x)}, {v.v2, Rat(y)}};
        if (eval_term(a.term, m) <= 0) CHECK(eval_term(tight.term, m) <= 0);
      }
    }
    CHECK(k >= 0);
  }
}

TEST_CASE("tighten rejects constant-only atoms") {
  CHECK_THROWS_AS(tighten(Atom::leq(LinTerm(Rat(5)))), Error);
}

TEST_CASE("eval_term on the defining-constraint example") {
  Vars v;
  LinTerm t = term({{v.v1, -5}, {v.v2, 5}, {v.v3, 1}}, 2);
  std::map<VarId, Rat> m{{v.v1, 0}, {v.v2, Rat(-2, 5)}, {v.v3, 0}};
  CHECK(eval_term(t, m) == 0);
  CHECK(eval_term(term({{v.x1, 2}, {v.y1, -1}}, 1), {{v.x1, 0}, {v.y1, 1}}) == 0);
  CHECK(eval_term(LinTerm(Rat(5)), {}) == 5);
  CHECK_THROWS_AS(eval_term(term({{v.x1, 1}}), {}), Error);
}

TEST_CASE("modular equality evaluation") {
  Vars v;
  Atom a = Atom::modeq(term({{v.y1, 1}}, 1), Int(2));
  CHECK(eval_atom(a, {{v.y1, 1}}));
  CHECK(!eval_atom(a, {{v.y1, 2}}));
  CHECK(eval_atom(a, {{v.y1, -3}}));
}
