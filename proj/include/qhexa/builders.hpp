#pragma once

#include "qhexa/ncpoly.hpp"

namespace qhexa::build {

inline NCPoly num(const Rational& q) { return NCPoly(GaussRational(q)); }
inline NCPoly num(long p, long q) { return num(Rational(p, q)); }
inline GaussRational frac(long p, long q) { return GaussRational(Rational(p, q)); }

inline NCPoly P(int mu) { return NCPoly::atom(atoms::P(mu)); }
inline NCPoly X(int mu) { return NCPoly::atom(atoms::X(mu)); }
inline NCPoly S(int mu) { return NCPoly::atom(atoms::S(mu)); }
inline NCPoly C(int mu) { return NCPoly::atom(atoms::C(mu)); }
inline NCPoly D() { return NCPoly::atom(atoms::D()); }
inline NCPoly M() { return NCPoly::atom(atoms::M()); }
inline NCPoly Minv() { return NCPoly::atom(atoms::Minv()); }

/// J_{mu nu} with antisymmetry applied; zero for equal indices.
inline NCPoly J(int mu, int nu) {
  if (mu == nu) return NCPoly();
  auto sa = make_J(mu, nu);
  return NCPoly::atom(sa.atom, sa.sign);
}

// Raised-index forms (contraction with diag(1,-1,-1,-1)).
inline NCPoly up(const NCPoly& p, int mu) { return mu == 0 ? p : -p; }
inline NCPoly up2(const NCPoly& p, int mu, int nu) { return (mu == 0) == (nu == 0) ? p : -p; }

} // namespace qhexa::build
