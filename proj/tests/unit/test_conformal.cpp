#include "support.hpp"

#include "qhexa/errors.hpp"

#include <doctest.h>

using namespace qt;
using namespace qhexa::build;
using conformal::AccelParams;
using conformal::hex;
using conformal::kMinus;
using conformal::kPlus;

namespace {

AccelParams accel(const char* s) { return AccelParams::parse(s); }
const conformal::ObservableSet& OB() { return bench().observables(Basis::B); }
NCPoly Z() { return OB().Y[kPlus] - OB().Y[kMinus]; }

} // namespace

TEST_SUITE("conformal") {

TEST_CASE("position observables in basis A") {
  const auto& oa = bench().observables(Basis::A);
  CHECK(A().commutator(P(0), oa.X[0]) == NCPoly(-1));
  CHECK(A().commutator(P(1), oa.X[1]) == NCPoly(1));
  CHECK(A().commutator(P(1), oa.X[2]).is_zero());
  NCPoly s12 = A().commutator(oa.S[1], oa.S[2]);
  CHECK(A().commutator(oa.X[1], oa.X[2]) == A().product(s12, w({atoms::Minv(), atoms::Minv()})));
  CHECK(A().commutator(D(), oa.X[3]) == -oa.X[3]);
  CHECK(A().commutator(oa.X[0], M()) == w({atoms::Minv(), atoms::P(0)}));
}

TEST_CASE("special conformal generators in basis B") {
  CHECK(B().commutator(OB().C[1], OB().C[2]).is_zero());
  CHECK(B().commutator(P(0), OB().C[0]) == -2 * OB().D);
  CHECK(B().commutator(P(1), OB().C[2]) == -2 * OB().J[1][2]);
  CHECK(B().commutator(OB().D, OB().C[3]) == -OB().C[3]);
  CHECK(B().commutator(OB().C[0], M()) == 2 * B().sym(M(), X(0)));
}

TEST_CASE("the opposite hbar^2 term in C breaks the algebra") {
  const Rational wrong(3, 4);
  NCPoly c1 = conformal::special_conformal_B(B(), 1, wrong), c2 = conformal::special_conformal_B(B(), 2, wrong);
  CHECK_FALSE(B().commutator(c1, c2).is_zero());
  NCPoly c0 = conformal::special_conformal_B(B(), 0, wrong);
  CHECK_FALSE(B().normalize(B().commutator(c0, OB().Y[hex(0)]) - Z()).is_zero());
  // the shipped value
  CHECK(conformal::special_conformal_B(B(), 1) == OB().C[1]);
}

TEST_CASE("hexaspherical observables") {
  NCPoly y2;
  for (int a = 0; a < 6; ++a) y2 += conformal::eta6(a, a) * B().product(OB().Y[a], OB().Y[a]);
  CHECK(y2 == NCPoly::hbar(2));
  CHECK(B().commutator(OB().Y[hex(1)], M()) == P(1));
  CHECK(B().commutator(OB().Y[hex(1)], OB().Y[hex(2)]) == OB().J[1][2]);
  CHECK(B().normalize(OB().Y[kPlus] + OB().Y[kMinus] + M()).is_zero());
}

TEST_CASE("SO(4,2) packaging") {
  const auto& J6 = OB().Jab;
  CHECK(J6[kMinus][kPlus] == OB().D);
  CHECK(J6[kPlus][kMinus] == -OB().D);
  CHECK(J6[kPlus][hex(0)] + J6[kMinus][hex(0)] == P(0));
  CHECK(B().commutator(J6[kMinus][kPlus], J6[kPlus][hex(1)]) == J6[kMinus][hex(1)]);
}

TEST_CASE("boost examples") {
  auto b = conformal::boost(M(), accel("1/2,0,0,0"), B(), OB().C);
  CHECK(b.terminated);
  CHECK(b.last_nonzero_order == 2);
  CHECK(b.value == B().normalize(M() - OB().Y[hex(0)] + Z() * frac(1, 4)));
  for (const char* a : {"1/2,0,0,0", "0,1/3,-1,0", "-1/2,1/4,1/3,2"}) {
    CHECK(conformal::boost(Z(), accel(a), B(), OB().C).value == Z());
    auto m = conformal::boost(M(), accel(a), B(), OB().C).value;
    CHECK(conformal::boost(m, -accel(a), B(), OB().C).value == M());
  }
}

TEST_CASE("series truncation is reported") {
  auto b = conformal::boost(OB().D, accel("1,0,0,0"), B(), OB().C, 1);
  CHECK_FALSE(b.terminated);
}

TEST_CASE("motion derivative") {
  auto a = accel("0,1/2,0,-1/3");
  NCPoly mbar = conformal::boost(M(), a, B(), OB().C).value;
  for (int mu = 0; mu < 4; ++mu) {
    NCPoly pbar = conformal::boost(P(mu), a, B(), OB().C).value;
    NCPoly ybar = conformal::boost(OB().Y[hex(mu)], a, B(), OB().C).value;
    CHECK(conformal::motion_derivative(pbar, mbar, B()).is_zero());
    CHECK(conformal::motion_derivative(ybar, mbar, B()) == pbar);
    CHECK(conformal::motion_derivative(OB().Y[hex(mu)], M(), B()) == P(mu));
  }
}

TEST_CASE("free fall") {
  for (const char* a : {"0,0,0,0", "0,1/3,0,0", "1/2,0,0,0"}) {
    auto reps = conformal::free_fall_residuals(accel(a), bench());
    CHECK(reps.size() == 6);
    for (const auto& r : reps) CHECK_MESSAGE(r.pass, r.id);
  }
  // Y_1'' = 2 alpha_1 Mbar, checked directly
  auto a = accel("0,1/3,0,0");
  NCPoly mbar = conformal::boost(M(), a, B(), OB().C).value;
  NCPoly d2 = conformal::motion_derivative(conformal::motion_derivative(OB().Y[hex(1)], mbar, B()), mbar, B());
  CHECK(d2 == 2 * mbar * GaussRational(a.lower(1)));
}

TEST_CASE("decompose") {
  std::vector<NCPoly> basis{M(), OB().Y[hex(0)], Z()};
  auto c = conformal::decompose(B().normalize(M() * frac(2, 3) - Z()), basis);
  REQUIRE(c.has_value());
  CHECK((*c)[0] == GaussRational(Rational(2, 3)));
  CHECK((*c)[1] == GaussRational(0));
  CHECK((*c)[2] == GaussRational(-1));
  CHECK_FALSE(conformal::decompose(X(0), basis).has_value());
}

TEST_CASE("acceleration parsing") {
  auto a = accel("1/2,-1,0,3/4");
  CHECK(a.alpha[0] == Rational(1, 2));
  CHECK(a.alpha_sq() == Rational(1, 4) - 1 - Rational(9, 16));
  CHECK_THROWS_AS(accel("1,2,3"), ParseError);
  CHECK_THROWS_AS(accel("0.5,0,0,0"), ParseError);
}

TEST_CASE("every identity suite passes") {
  for (const auto& id : conformal::suite_ids()) {
    auto reps = conformal::verify_suite(id, bench());
    CHECK_MESSAGE(!reps.empty(), id);
    int failed = 0;
    for (const auto& r : reps) failed += !r.pass;
    CHECK_MESSAGE(failed == 0, id);
  }
  CHECK_THROWS_AS(conformal::verify_suite("nope", bench()), ConstructionError);
}

}
