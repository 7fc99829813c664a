#include "qhexa/atom.hpp"

#include "qhexa/errors.hpp"

#include <algorithm>

namespace qhexa {

int levi_civita(int a, int b, int c, int d) {
  std::array<int, 4> p{a, b, c, d};
  for (int v : p)
    if (v < 0 || v > 3) return 0;
  int sign = 1;
  for (int x = 0; x < 4; ++x)
    for (int y = x + 1; y < 4; ++y) {
      if (p[x] == p[y]) return 0;
      if (p[x] > p[y]) sign = -sign;
    }
  return sign;
}

namespace {

constexpr std::array<std::pair<int, int>, 6> kJPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

int j_slot(int mu, int nu) {
  for (int k = 0; k < 6; ++k)
    if (kJPairs[k].first == mu && kJPairs[k].second == nu) return k;
  return -1;
}

void check_index(int mu, const char* what) {
  if (mu < 0 || mu > 3)
    throw ConstructionError(std::string("bad index ") + std::to_string(mu) + " on atom " + what);
}

} // namespace

std::uint8_t Atom::id() const {
  switch (kind) {
  case AtomKind::Minv: return 0;
  case AtomKind::M: return 1;
  case AtomKind::P: return static_cast<std::uint8_t>(2 + i);
  case AtomKind::S: return static_cast<std::uint8_t>(6 + i);
  case AtomKind::X: return static_cast<std::uint8_t>(10 + i);
  case AtomKind::J: return static_cast<std::uint8_t>(14 + j_slot(i, j));
  case AtomKind::D: return 20;
  case AtomKind::C: return static_cast<std::uint8_t>(21 + i);
  }
  return 0;
}

Atom Atom::from_id(std::uint8_t id) {
  Atom a;
  if (id == 0) a.kind = AtomKind::Minv;
  else if (id == 1) a.kind = AtomKind::M;
  else if (id < 6) a = {AtomKind::P, static_cast<std::int8_t>(id - 2)};
  else if (id < 10) a = {AtomKind::S, static_cast<std::int8_t>(id - 6)};
  else if (id < 14) a = {AtomKind::X, static_cast<std::int8_t>(id - 10)};
  else if (id < 20) {
    auto [mu, nu] = kJPairs[id - 14];
    a = {AtomKind::J, static_cast<std::int8_t>(mu), static_cast<std::int8_t>(nu)};
  } else if (id == 20) a.kind = AtomKind::D;
  else a = {AtomKind::C, static_cast<std::int8_t>(id - 21)};
  return a;
}

std::string Atom::name() const {
  switch (kind) {
  case AtomKind::Minv: return "Minv";
  case AtomKind::M: return "M";
  case AtomKind::P: return "P_" + std::to_string(i);
  case AtomKind::S: return "S_" + std::to_string(i);
  case AtomKind::X: return "X_" + std::to_string(i);
  case AtomKind::C: return "C_" + std::to_string(i);
  case AtomKind::D: return "D";
  case AtomKind::J: return "J_" + std::to_string(i) + std::to_string(j);
  }
  return "?";
}

namespace atoms {
Atom Minv() { return {AtomKind::Minv}; }
Atom M() { return {AtomKind::M}; }
Atom P(int mu) {
  check_index(mu, "P");
  return {AtomKind::P, static_cast<std::int8_t>(mu)};
}
Atom S(int mu) {
  check_index(mu, "S");
  return {AtomKind::S, static_cast<std::int8_t>(mu)};
}
Atom X(int mu) {
  check_index(mu, "X");
  return {AtomKind::X, static_cast<std::int8_t>(mu)};
}
Atom C(int mu) {
  check_index(mu, "C");
  return {AtomKind::C, static_cast<std::int8_t>(mu)};
}
Atom D() { return {AtomKind::D}; }
Atom J(int mu, int nu) {
  check_index(mu, "J");
  check_index(nu, "J");
  if (mu >= nu)
    throw ConstructionError("J_" + std::to_string(mu) + std::to_string(nu) +
                            " must be stored with first index < second");
  return {AtomKind::J, static_cast<std::int8_t>(mu), static_cast<std::int8_t>(nu)};
}
} // namespace atoms

SignedAtom make_J(int mu, int nu) {
  check_index(mu, "J");
  check_index(nu, "J");
  if (mu == nu)
    throw ConstructionError("J_" + std::to_string(mu) + std::to_string(nu) + " has equal indices");
  if (mu < nu) return {1, atoms::J(mu, nu)};
  return {-1, atoms::J(nu, mu)};
}

SignedAtom parse_atom(std::string_view name) {
  auto bad = [&]() -> ConstructionError {
    return ConstructionError("malformed atom '" + std::string(name) + "'");
  };
  if (name == "M") return {1, atoms::M()};
  if (name == "Minv") return {1, atoms::Minv()};
  if (name == "D") return {1, atoms::D()};
  if (name.size() < 3 || name[1] != '_') throw bad();
  auto digit = [&](char c) {
    if (c < '0' || c > '3') throw bad();
    return c - '0';
  };
  char k = name[0];
  if (k == 'J') {
    if (name.size() != 4) throw bad();
    return make_J(digit(name[2]), digit(name[3]));
  }
  if (name.size() != 3) throw bad();
  int mu = digit(name[2]);
  switch (k) {
  case 'P': return {1, atoms::P(mu)};
  case 'S': return {1, atoms::S(mu)};
  case 'X': return {1, atoms::X(mu)};
  case 'C': return {1, atoms::C(mu)};
  default: throw bad();
  }
}

Word::Word(std::initializer_list<Atom> list) {
  for (const Atom& a : list) push_back(a.id());
}

std::string Word::str() const {
  std::string out;
  for (std::size_t k = 0; k < size(); ++k) {
    if (k) out += ' ';
    out += (*this)[k].name();
  }
  return out;
}

} // namespace qhexa
