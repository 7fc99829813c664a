#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace qhexa {

/// Minkowski metric diag(1,-1,-1,-1); symmetric and its own inverse.
constexpr int eta(int mu, int nu) { return mu != nu ? 0 : (mu == 0 ? 1 : -1); }

/// Levi-Civita symbol with epsilon_{0123} = +1 (all indices lower).
int levi_civita(int a, int b, int c, int d);

enum class AtomKind : std::uint8_t { Minv, M, P, S, X, J, D, C };

/// Generator atom. Indices are lower (covariant). J carries (mu, nu) with mu < nu.
///
/// Every atom has a global id; the id order is also the normal-ordering rank
/// used by both rewrite systems:
///   Minv < M < P_0..P_3 < S_0..S_3 < X_0..X_3 < J_01..J_23 < D < C_0..C_3
struct Atom {
  AtomKind kind = AtomKind::M;
  std::int8_t i = -1;
  std::int8_t j = -1;

  std::uint8_t id() const;
  static Atom from_id(std::uint8_t id);
  std::string name() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

inline constexpr int kAtomCount = 25;

namespace atoms {
Atom Minv();
Atom M();
Atom P(int mu);
Atom S(int mu);
Atom X(int mu);
Atom C(int mu);
Atom D();
/// J_{mu nu} for mu < nu; throws ConstructionError otherwise.
Atom J(int mu, int nu);
} // namespace atoms

/// J_{mu nu} for arbitrary index order: J_{nu mu} = -J_{mu nu}.
struct SignedAtom {
  int sign;
  Atom atom;
};
SignedAtom make_J(int mu, int nu);

/// Parses an atom name such as "P_0", "J_12", "Minv". Throws ConstructionError.
SignedAtom parse_atom(std::string_view name);

/// Finite ordered sequence of atoms; stored as a byte string of atom ids.
class Word {
public:
  Word() = default;
  explicit Word(std::string ids) : ids_(std::move(ids)) {}
  Word(std::initializer_list<Atom> atoms);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::uint8_t id(std::size_t k) const { return static_cast<std::uint8_t>(ids_[k]); }
  Atom operator[](std::size_t k) const { return Atom::from_id(id(k)); }
  std::uint8_t back_id() const { return id(ids_.size() - 1); }

  void push_back(std::uint8_t id) { ids_.push_back(static_cast<char>(id)); }
  Word prefix(std::size_t len) const { return Word(ids_.substr(0, len)); }
  Word operator+(const Word& o) const { return Word(ids_ + o.ids_); }

  const std::string& bytes() const { return ids_; }
  std::string str() const;

  friend bool operator==(const Word&, const Word&) = default;
  /// Canonical order: length first, then lexicographic by atom id.
  friend bool operator<(const Word& a, const Word& b) {
    if (a.ids_.size() != b.ids_.size()) return a.ids_.size() < b.ids_.size();
    return std::string_view(a.ids_) < std::string_view(b.ids_);
  }

private:
  std::string ids_;
};

} // namespace qhexa
