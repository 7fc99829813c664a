#pragma once

#include "qhexa/builders.hpp"
#include "qhexa/conformal.hpp"
#include "qhexa/tables.hpp"

#include <random>

namespace qt {

using namespace qhexa;

inline const conformal::Workbench& bench() {
  static conformal::Workbench wb;
  return wb;
}
inline const RewriteSystem& A() { return bench().system(Basis::A); }
inline const RewriteSystem& B() { return bench().system(Basis::B); }

inline NCPoly ih(long p = 1, long q = 1) { return NCPoly::hbar(1) * GaussRational(Rational(0), Rational(p, q)); }
inline NCPoly w(std::initializer_list<Atom> atoms, const GaussRational& c = 1, int hbar = 0) {
  return NCPoly::monomial(Word(atoms), c, hbar);
}

/// Random polynomial over the given atoms: up to `terms` terms, words up to `len` atoms.
inline NCPoly random_poly(std::mt19937_64& rng, const std::vector<Atom>& atoms, int terms, int len, int max_hbar = 2) {
  std::uniform_int_distribution<int> nt(1, terms), wl(0, len), pick(0, int(atoms.size()) - 1), num(-9, 9),
      den(1, 6), hb(0, max_hbar);
  NCPoly p;
  for (int t = nt(rng); t > 0; --t) {
    Word wd;
    for (int k = wl(rng); k > 0; --k) wd.push_back(atoms[pick(rng)].id());
    GaussRational c(Rational(num(rng), den(rng)), Rational(num(rng) / 3, den(rng)));
    p += NCPoly::monomial(wd, c, hb(rng));
  }
  return p;
}

inline std::vector<Atom> members(const RewriteSystem& rw) {
  std::vector<Atom> v;
  for (int id = 0; id < kAtomCount; ++id)
    if (rw.contains_id(id)) v.push_back(Atom::from_id(id));
  return v;
}

} // namespace qt
