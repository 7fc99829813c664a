#include "support.hpp"

#include "qhexa/errors.hpp"
#include "qhexa/repnum.hpp"

#include <doctest.h>

#include <cmath>

using namespace qt;
using namespace qhexa::build;
using namespace qhexa::repnum;

namespace {

const Oracle& small_oracle() {
  static Oracle o([] {
    OracleConfig c;
    c.samples = 2;
    c.seed = 77;
    return c;
  }());
  return o;
}

const GridState& packet() { return small_oracle().samples()[0]; }

double residual(const NCPoly& lhs, const NCPoly& rhs) {
  const auto& rep = small_oracle().rep();
  const GridState& s = packet();
  return relative_residual(rep.apply(lhs, s), rep.apply(rhs, s), s, small_oracle().config().margin);
}

Grid grid_at(const Vec4& center, double box, int n = 32) {
  Grid g;
  g.n = n;
  g.box = box;
  g.center = center;
  return g;
}

} // namespace

TEST_SUITE("repnum") {

TEST_CASE("wavepackets") {
  Grid g = grid_at({2, 0, 0, 0}, 1.0);
  PacketReport rep;
  GridState s = make_wavepacket(g, {2, 0, 0, 0}, 0.2, {cplx(1), cplx(0)}, {}, &rep);
  CHECK(rep.min_k_sq > g.epsilon);
  CHECK(rep.leak < 1e-4);
  CHECK(interior_norm(s, 0) * g.h() * g.h() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(make_wavepacket(grid_at({1, 1, 0, 0}, 0.4), {1, 1, 0, 0}, 0.1, {cplx(1), cplx(0)}), DomainError);
  try {
    make_wavepacket(grid_at({1.2, 1, 0, 0}, 0.4), {1.2, 1, 0, 0}, 0.1, {cplx(1), cplx(0)});
    FAIL("leaking packet accepted");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("leak") != std::string::npos);
  }
  GridState up = make_wavepacket(g, {2, 0, 0, 0}, 0.2, {cplx(1), cplx(0)});
  GridState down = make_wavepacket(g, {2, 0, 0, 0}, 0.2, {cplx(0), cplx(1)});
  CHECK(std::abs(interior_inner(up, down, 0)) < 1e-10);
}

TEST_CASE("multiplication operators") {
  const auto& rep = small_oracle().rep();
  const GridState& s = packet();
  GridState m = rep.apply_atom(atoms::M(), s), p1 = rep.apply_atom(atoms::P(1), s);
  const Grid& g = s.grid;
  double worst = 0;
  for (int i : {5, 16, 27}) {
    int idx[4] = {i, 31 - i, 16, 9};
    std::size_t pt = 0;
    Vec4 k;
    for (int a = 0; a < 4; ++a) {
      pt = pt * g.n + idx[a];
      k[a] = g.coord(a, idx[a]);
    }
    double msq = k[0] * k[0] - k[1] * k[1] - k[2] * k[2] - k[3] * k[3];
    for (int c = 0; c < 2; ++c) {
      worst = std::max(worst, std::abs(m.psi[2 * pt + c] - std::sqrt(msq) * s.psi[2 * pt + c]));
      worst = std::max(worst, std::abs(p1.psi[2 * pt + c] - k[1] * s.psi[2 * pt + c]));
    }
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("spinor matrices close the Lorentz algebra") {
  // bracket of the matrices against the (J, J) table entries
  double worst = 0;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) {
          Mat2 a = sigma_generator(m, n), b = sigma_generator(r, s);
          Mat2 lhs = (a * b - b * a) * cplx(0, -1);
          NCPoly rhs = commutator(J(m, n), J(r, s), A());
          Mat2 expect = Mat2::identity(0.0);
          for (const Term& t : rhs.terms()) {
            REQUIRE(t.word.size() == 1);
            Atom j = Atom::from_id(t.word.id(0));
            expect = expect + sigma_generator(j.i, j.j) * cplx(t.coeff.re().get_d(), t.coeff.im().get_d());
          }
          worst = std::max(worst, (lhs - expect).max_abs());
        }
  CHECK(worst < 1e-15);
}

TEST_CASE("commutators of the basis") {
  const Oracle& o = small_oracle();
  CHECK(o.check_bracket("PX", P(0), X(0), NCPoly(-1), 1e-6).pass);
  auto pp = o.check_bracket("PP", P(1), P(2), NCPoly(), 1e-8);
  CHECK(pp.pass);
  CHECK(pp.residual < 1e-12);
  CHECK(o.check_bracket("XM", X(0), M(), w({atoms::Minv(), atoms::P(0)}), 1e-6).pass);
  CHECK(o.check_bracket("DM", D(), M(), M(), 1e-6).pass);
  CHECK(o.check_bracket("DX", D(), X(3), -X(3), 1e-6).pass);
  auto wrong = o.check_bracket("PX-wrong", P(0), X(0), NCPoly(1), 1e-6);
  CHECK_FALSE(wrong.pass);
  CHECK(wrong.residual > 1);
}

TEST_CASE("spin operators") {
  NCPoly s2;
  for (int mu = 0; mu < 4; ++mu) s2 += up(multiply(S(mu), S(mu)), mu);
  CHECK(residual(s2, NCPoly(GaussRational(Rational(-3, 4)))) < 1e-12);
  NCPoly sp;
  for (int mu = 0; mu < 4; ++mu) sp += up(multiply(S(mu), P(mu)), mu);
  CHECK(interior_norm(small_oracle().rep().apply(sp, packet()), small_oracle().config().margin) < 1e-12);
}

TEST_CASE("symbolic normal forms agree with the representation") {
  // words taken literally vs their normal forms, in both bases
  std::vector<NCPoly> words_B{w({atoms::X(0), atoms::P(0)}), w({atoms::S(1), atoms::S(1)}),
                              w({atoms::S(2), atoms::S(0)}), w({atoms::X(1), atoms::S(2)}),
                              w({atoms::X(2), atoms::M(), atoms::X(1)}), sym_divide_by_M(X(3), 1)};
  for (const auto& p : words_B) CHECK(residual(p, B().normalize(p)) < 1e-6);
  std::vector<NCPoly> words_A{sym_divide_by_M(D(), 1), w({atoms::J(0, 2), atoms::P(2)}), w({atoms::D(), atoms::Minv()}),
                              w({atoms::J(1, 3), atoms::J(0, 1)})};
  for (const auto& p : words_A) CHECK(residual(p, A().normalize(p)) < 1e-6);
}

TEST_CASE("linearity of the representation") {
  const auto& rep = small_oracle().rep();
  const GridState& s = packet();
  NCPoly a = X(1) + P(2) * frac(1, 3), b = S(0) - M() * GaussRational::i();
  GridState sum = rep.apply(a, s);
  sum += rep.apply(b, s);
  CHECK(relative_residual(rep.apply(a + b, s), sum, s, 0) < 1e-13);
  GridState scaled = rep.apply(a, s);
  scaled *= cplx(0, 2);
  CHECK(relative_residual(rep.apply(a * GaussRational(Rational(0), Rational(2)), s), scaled, s, 0) < 1e-13);
}

TEST_CASE("entry checks") {
  const Oracle& o = small_oracle();
  auto ss = o.check_bracket("S1S2", S(1), S(2), B().commutator(S(1), S(2)), 1e-6);
  CHECK(ss.pass);
  auto xs = o.check_bracket("X1S2", X(1), S(2), B().commutator(X(1), S(2)), 1e-6);
  CHECK(xs.pass);
}

TEST_CASE("fits of single entries") {
  const Oracle& o = small_oracle();
  auto f = tables::fit_derived_entry(atoms::S(1), atoms::S(2), {tables::spin_pair_form(1, 2, 1)}, o);
  REQUIRE(f.coefficients.size() == 1);
  CHECK((f.coefficients[0] == 1 || f.coefficients[0] == -1));
  CHECK(f.residual <= 1e-5);
  auto z = tables::fit_derived_entry(atoms::P(0), atoms::S(3), {S(3), multiply(multiply(Minv(), P(3)), S(0))}, o);
  REQUIRE(z.coefficients.size() == 2);
  for (const auto& c : z.coefficients) CHECK(c == 0);
  NCPoly s12m2 = B().product(B().commutator(S(1), S(2)), w({atoms::Minv(), atoms::Minv()}));
  auto xx = tables::fit_derived_entry(atoms::X(1), atoms::X(2), {s12m2}, o);
  REQUIRE(xx.coefficients.size() == 1);
  CHECK(xx.coefficients[0] == 1);
}

TEST_CASE("snapping") {
  CHECK(snap_rational(0.75000000001).value() == Rational(3, 4));
  CHECK(snap_rational(-1.0 / 64).value() == Rational(-1, 64));
  CHECK_FALSE(snap_rational(1.0 / 67, 64, 1e-9).has_value());
  CHECK_FALSE(snap_rational(0.123456).has_value());
}

}

TEST_SUITE("repnum-fit") {

TEST_CASE("calibrated weight") {
  OracleConfig c;
  c.samples = 2;
  auto cal = Oracle(c).calibrate();
  CHECK(std::abs(cal.weight - cplx(2.0)) < 1e-6);
  CHECK(cal.dm_residual < 1e-6);
  CHECK(cal.dp_residual < 1e-6);
}

TEST_CASE("refitting reproduces the frozen forms") {
  OracleConfig c;
  c.samples = 2;
  c.seed = 4242;
  tables::FittedForms f = tables::fit_all(Oracle(c));
  tables::FittedForms frozen = tables::frozen_fit();
  CHECK(f.ss == frozen.ss);
  CHECK(f.xs == frozen.xs);
  CHECK(f.d_weight == frozen.d_weight);
}

TEST_CASE("a second packet family gives the same forms") {
  OracleConfig c;
  c.samples = 2;
  c.seed = 99;
  c.family = 1;
  tables::FittedForms f = tables::fit_all(Oracle(c));
  CHECK(f.ss == tables::frozen_fit().ss);
  CHECK(f.xs == tables::frozen_fit().xs);
}

}
