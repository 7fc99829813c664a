#include "support.hpp"

#include "qhexa/errors.hpp"

#include <doctest.h>

using namespace qt;
using namespace qhexa::build;

TEST_SUITE("ncalg") {

TEST_CASE("coefficients are reduced Gaussian rationals") {
  GaussRational a(Rational(2, 4), Rational(-3, 9));
  CHECK(a.re() == Rational(1, 2));
  CHECK(a.im() == Rational(-1, 3));
  CHECK((a * GaussRational::i()) == GaussRational(Rational(1, 3), Rational(1, 2)));
  CHECK((a / a) == GaussRational(1));
  CHECK(NCPoly(GaussRational(0)).is_zero());
}

TEST_CASE("make_poly canonicalizes") {
  NCPoly p0 = make_poly({{{1, 0}, Word{atoms::P(0)}}});
  CHECK(p0 == P(0));
  CHECK(make_poly({{{1, 0}, Word{atoms::P(0)}}, {{-1, 0}, Word{atoms::P(0)}}}).is_zero());
  SignedAtom j10 = parse_atom("J_10");
  CHECK(j10.sign == -1);
  CHECK(j10.atom == atoms::J(0, 1));
  CHECK(J(1, 0) == -J(0, 1));
  CHECK_THROWS_AS(atoms::P(4), ConstructionError);
  CHECK_THROWS_AS(atoms::J(1, 1), ConstructionError);
  CHECK_THROWS_AS(parse_atom("J_11"), ConstructionError);
  // same word, different hbar powers stay separate terms
  NCPoly q = make_poly({{{1, 0}, Word{atoms::P(0)}}, {{1, 1}, Word{atoms::P(0)}}});
  CHECK(q.size() == 2);
}

TEST_CASE("terms are ordered by length, atoms, hbar") {
  NCPoly p = w({atoms::X(0), atoms::P(0)}) + P(3) + w({atoms::M()}, 1, 2) + NCPoly(1) + M();
  const auto& t = p.terms();
  REQUIRE(t.size() == 5);
  CHECK(t[0].word.empty());
  CHECK(t[1].word == Word{atoms::M()});
  CHECK(t[1].hbar == 0);
  CHECK(t[2].hbar == 2);
  CHECK(t[3].word == Word{atoms::P(3)});
  CHECK(t[4].word.size() == 2);
}

TEST_CASE("free product") {
  CHECK(multiply(P(0), X(0)) == w({atoms::P(0), atoms::X(0)}));
  NCPoly b = X(1) + ih();
  CHECK(multiply(NCPoly(1), b) == b);
  CHECK(multiply(P(0) + P(1), X(0)) == w({atoms::P(0), atoms::X(0)}) + w({atoms::P(1), atoms::X(0)}));
}

TEST_CASE("commutator examples") {
  const auto& oa = bench().observables(Basis::A);
  CHECK(A().commutator(P(0), oa.X[0]) == NCPoly(-1));
  CHECK(B().commutator(P(0), X(0)) == NCPoly(-1));
  CHECK(A().commutator(P(1), P(2)).is_zero());
  CHECK(A().commutator(D(), M()) == M());
  CHECK(commutator(D(), M(), A()) == M());
}

TEST_CASE("symmetrized product") {
  // X_0 P_0 = P_0 X_0 + i hbar (X_0, P_0) and (X_0, P_0) = +1
  CHECK(B().sym(P(0), X(0)) == w({atoms::P(0), atoms::X(0)}) + ih(1, 2));
  CHECK(B().sym(M(), M()) == w({atoms::M(), atoms::M()}));
  CHECK(sym_product(P(0), X(0)) == (w({atoms::P(0), atoms::X(0)}) + w({atoms::X(0), atoms::P(0)})) * frac(1, 2));
  // A.(B.C) - (A.B).C = (hbar^2/4) (B, (A, C))
  NCPoly lhs = B().sym(bench().observables(Basis::B).D, B().sym(X(0), M())) -
               B().sym(B().sym(bench().observables(Basis::B).D, X(0)), M());
  CHECK(B().normalize(lhs) == w({atoms::Minv(), atoms::P(0)}, frac(1, 4), 2));
}

TEST_CASE("division by powers of M") {
  CHECK(A().normalize(sym_divide_by_M(M(), 1)) == NCPoly(1));
  CHECK(A().normalize(sym_divide_by_M(P(0), 2)) == w({atoms::Minv(), atoms::Minv(), atoms::P(0)}));
  // D Minv = Minv D + i hbar (D, Minv) with (D, Minv) = -Minv
  NCPoly expect = w({atoms::Minv(), atoms::D()}) - multiply(ih(1, 2), Minv());
  CHECK(A().normalize(sym_divide_by_M(D(), 1)) == expect);
  CHECK(A().normalize(multiply(D(), Minv()) + multiply(ih(1, 2), Minv())) == expect);
}

TEST_CASE("normalize examples") {
  CHECK(B().normalize(w({atoms::X(0), atoms::P(0)})) == w({atoms::P(0), atoms::X(0)}) + ih());
  CHECK(A().normalize(w({atoms::M(), atoms::Minv()})) == NCPoly(1));
  CHECK(A().normalize(w({atoms::Minv(), atoms::M()})) == NCPoly(1));
  NCPoly p00 = w({atoms::M(), atoms::M()}) + w({atoms::P(1), atoms::P(1)}) + w({atoms::P(2), atoms::P(2)}) +
               w({atoms::P(3), atoms::P(3)});
  CHECK(A().normalize(w({atoms::P(0), atoms::P(0)})) == p00);
  CHECK(B().normalize(w({atoms::P(0), atoms::P(0)})) == p00);
}

TEST_CASE("equality") {
  CHECK(A().equal(A().commutator(P(0), bench().observables(Basis::A).X[0]), NCPoly(-1)));
  CHECK(A().equal(multiply(M(), Minv()), NCPoly(1)));
  CHECK_FALSE(B().equal(multiply(P(0), X(0)), multiply(X(0), P(0))));
  CHECK(B().normalize(multiply(P(0), X(0)) - multiply(X(0), P(0))) == -ih());
}

TEST_CASE("bilinearity, antisymmetry and idempotence on random input") {
  std::mt19937_64 rng(7);
  for (const RewriteSystem* rw : {&A(), &B()}) {
    auto at = members(*rw);
    for (int k = 0; k < 15; ++k) {
      NCPoly a = random_poly(rng, at, 2, 2), b = random_poly(rng, at, 2, 2), c = random_poly(rng, at, 2, 2);
      CHECK(rw->commutator(a, b + c) == rw->commutator(a, b) + rw->commutator(a, c));
      CHECK((rw->commutator(a, b) + rw->commutator(b, a)).is_zero());
      NCPoly n = rw->normalize(multiply(a, b));
      CHECK(rw->normalize(n) == n);
    }
  }
}

TEST_CASE("antisymmetry for every atom pair") {
  for (const RewriteSystem* rw : {&A(), &B()}) {
    auto at = members(*rw);
    for (const Atom& x : at)
      for (const Atom& y : at) {
        NCPoly s = rw->commutator(NCPoly::atom(x), NCPoly::atom(y)) + rw->commutator(NCPoly::atom(y), NCPoly::atom(x));
        CHECK_MESSAGE(s.is_zero(), x.name() << "," << y.name());
      }
  }
}

TEST_CASE("Leibniz rule on random products") {
  std::mt19937_64 rng(11);
  for (const RewriteSystem* rw : {&A(), &B()}) {
    auto at = members(*rw);
    std::uniform_int_distribution<int> pick(0, int(at.size()) - 1);
    for (int k = 0; k < 40; ++k) {
      NCPoly a = NCPoly::atom(at[pick(rng)]), b = NCPoly::atom(at[pick(rng)]), c = NCPoly::atom(at[pick(rng)]);
      NCPoly lhs = rw->commutator(multiply(a, b), c);
      NCPoly rhs = rw->product(a, rw->commutator(b, c)) + rw->product(rw->commutator(a, c), b);
      CHECK(rw->normalize(lhs - rhs).is_zero());
    }
  }
}

TEST_CASE("step bound guard") {
  auto sys = std::const_pointer_cast<RewriteSystem>(tables::basis_B());
  sys->set_step_bound(1);
  CHECK_THROWS_AS(sys->normalize(w({atoms::X(0), atoms::X(1), atoms::P(0), atoms::S(2)})), ConsistencyError);
}

TEST_CASE("atoms outside the basis are rejected") {
  CHECK_THROWS_AS(A().normalize(X(0)), ConstructionError);
  CHECK_THROWS_AS(B().normalize(D()), ConstructionError);
}

TEST_CASE("suites: jacobi, nonassoc, leibniz, grading") {
  for (const char* id : {"jacobi", "nonassoc", "leibniz", "grading"}) {
    auto reps = conformal::verify_suite(id, bench());
    CHECK(reps.size() > 10);
    for (const auto& r : reps) CHECK_MESSAGE(r.pass, r.id);
  }
}

}
