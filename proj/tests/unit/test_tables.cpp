#include "support.hpp"

#include "qhexa/errors.hpp"

#include <doctest.h>

using namespace qt;
using namespace qhexa::build;

namespace {

const NCPoly& entry(const RewriteSystem& rw, const Atom& l, const Atom& r) {
  const NCPoly* p = rw.bracket(l, r);
  REQUIRE(p != nullptr);
  return *p;
}

} // namespace

TEST_SUITE("tables") {

TEST_CASE("basis A entries") {
  CHECK(entry(A(), atoms::P(0), atoms::C(0)) == -2 * D());
  CHECK(entry(A(), atoms::P(1), atoms::C(2)) == -2 * J(1, 2));
  CHECK(entry(A(), atoms::D(), atoms::C(1)) == -C(1));
  CHECK(entry(A(), atoms::D(), atoms::P(3)) == P(3));
  CHECK(entry(A(), atoms::D(), atoms::M()) == M());
  CHECK(entry(A(), atoms::D(), atoms::Minv()) == -Minv());
  const auto& oa = bench().observables(Basis::A);
  CHECK(entry(A(), atoms::C(1), atoms::M()) == 2 * A().sym(M(), oa.X[1]));
  CHECK(entry(A(), atoms::C(0), atoms::C(3)).is_zero());
}

TEST_CASE("basis B entries") {
  CHECK(entry(B(), atoms::P(2), atoms::X(2)) == NCPoly(1));
  CHECK(entry(B(), atoms::P(0), atoms::X(0)) == NCPoly(-1));
  CHECK(entry(B(), atoms::X(1), atoms::M()) == w({atoms::Minv(), atoms::P(1)}));
  CHECK(entry(B(), atoms::S(2), atoms::M()).is_zero());
  CHECK(entry(B(), atoms::P(0), atoms::S(3)).is_zero());
  NCPoly s11 = B().normalize(w({atoms::S(1), atoms::S(1)}));
  CHECK(s11 == (NCPoly::hbar(2) + NCPoly::monomial(Word{atoms::Minv(), atoms::Minv(), atoms::P(1), atoms::P(1)}, 1, 2)) *
                   frac(1, 4));
  NCPoly s2;
  for (int mu = 0; mu < 4; ++mu) s2 += up(B().product(S(mu), S(mu)), mu);
  CHECK(s2 == NCPoly::hbar(2) * frac(-3, 4));
}

TEST_CASE("every entry is normal and carries provenance") {
  for (int basis = 0; basis < 2; ++basis) {
    auto entries = basis == 0 ? tables::entries_A() : tables::entries_B();
    const RewriteSystem& rw = basis == 0 ? A() : B();
    CHECK(!entries.empty());
    for (const auto& e : entries) {
      CHECK_MESSAGE(rw.normalize(e.bracket) == e.bracket, e.left.name() << "," << e.right.name());
      if (e.provenance.kind != tables::ProvenanceKind::Trivial) CHECK(!e.provenance.ref.empty());
      CHECK(tables::Provenance::parse(e.provenance.str()) == e.provenance);
    }
  }
}

TEST_CASE("derived entries are labelled") {
  int derived = 0;
  for (const auto& e : tables::entries_B())
    if (e.provenance.kind == tables::ProvenanceKind::Derived) ++derived;
  CHECK(derived > 0);
}

TEST_CASE("frozen fit") {
  auto f = tables::frozen_fit();
  CHECK(f.ss == 1);
  CHECK(f.xs[0] == -1);
  CHECK(f.xs[1] == 0);
  CHECK(f.xs[2] == 0);
  CHECK(f.d_weight == 2);
}

TEST_CASE("fitted forms reproduce the spin algebra") {
  // (S_mu, S_nu) from the table equals the fitted epsilon form
  auto f = tables::frozen_fit();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      if (mu != nu)
        CHECK(B().commutator(S(mu), S(nu)) == B().normalize(tables::spin_pair_form(mu, nu, 1) * GaussRational(f.ss)));
}

TEST_CASE("translation A to B") {
  const auto& ob = bench().observables(Basis::B);
  NCPoly d;
  for (int mu = 0; mu < 4; ++mu) d += up(B().sym(P(mu), X(mu)), mu);
  CHECK(tables::translate_A_to_B(D(), B()) == B().normalize(d));
  CHECK(tables::translate_A_to_B(M(), B()) == M());
  NCPoly j01 = B().sym(P(0), X(1)) - B().sym(P(1), X(0)) + B().commutator(S(0), S(1));
  NCPoly j01_alt = B().sym(X(0), P(1)) - B().sym(X(1), P(0)) + B().commutator(S(0), S(1));
  NCPoly t = tables::translate_A_to_B(J(0, 1), B());
  CHECK(t == ob.J[0][1]);
  CHECK((t == B().normalize(j01) || t == B().normalize(j01_alt)));
}

TEST_CASE("rebuilding basis B from entries") {
  auto entries = tables::entries_B();
  auto rebuilt = tables::basis_B_from_entries(entries, 1);
  CHECK(rebuilt->commutator(X(1), X(2)) == B().commutator(X(1), X(2)));
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].provenance.kind != tables::ProvenanceKind::Derived) continue;
    auto partial = entries;
    std::string name = entries[k].left.name();
    partial.erase(partial.begin() + long(k));
    try {
      tables::basis_B_from_entries(partial, 1);
      FAIL("missing entry accepted");
    } catch (const ConstructionError& e) {
      CHECK(std::string(e.what()).find(name) != std::string::npos);
    }
    break;
  }
}

TEST_CASE("epsilon convention") {
  auto a_neg = tables::basis_A(-1);
  auto s_pos = conformal::build_spin_vector(A());
  auto s_neg = conformal::build_spin_vector(*a_neg);
  NCPoly sq_pos, sq_neg;
  for (int mu = 0; mu < 4; ++mu) {
    CHECK(s_neg[mu] == -s_pos[mu]);
    sq_pos += up(A().product(s_pos[mu], s_pos[mu]), mu);
    sq_neg += up(a_neg->product(s_neg[mu], s_neg[mu]), mu);
  }
  CHECK(sq_pos == sq_neg);
}

TEST_CASE("spin vector is transverse in basis A") {
  auto s = conformal::build_spin_vector(A());
  NCPoly sp;
  for (int mu = 0; mu < 4; ++mu) sp += up(A().product(s[mu], P(mu)), mu);
  CHECK(sp.is_zero());
}

}
