#pragma once

#include "qhexa/atom.hpp"
#include "qhexa/coefficient.hpp"

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qhexa {

struct Term {
  Word word;
  int hbar = 0;
  GaussRational coeff;
};

/// Canonical term order: word length, then atom ids lexicographically, then hbar power.
bool term_less(const Term& a, const Term& b);

/// Formal sum of coefficient-weighted words. Always canonical: merged, no
/// zero coefficients, terms sorted by term_less.
class NCPoly {
public:
  NCPoly() = default;
  NCPoly(long c) : NCPoly(GaussRational(c)) {}
  NCPoly(const GaussRational& c);

  static NCPoly atom(const Atom& a, const GaussRational& c = 1);
  static NCPoly monomial(const Word& w, const GaussRational& c = 1, int hbar = 0);
  static NCPoly hbar(int power = 1);
  static NCPoly imag() { return NCPoly(GaussRational::i()); }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  int max_hbar() const;

  NCPoly& operator+=(const NCPoly& o);
  NCPoly& operator-=(const NCPoly& o);
  NCPoly& operator*=(const GaussRational& c);
  friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
  friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
  friend NCPoly operator*(NCPoly a, const GaussRational& c) { return a *= c; }
  friend NCPoly operator*(const GaussRational& c, NCPoly a) { return a *= c; }
  NCPoly operator-() const;

  /// Multiplies every term by hbar^k (k may be negative; throws if a power would go below zero).
  NCPoly shift_hbar(int k) const;

  friend bool operator==(const NCPoly& a, const NCPoly& b);

  /// Builds from terms already known to be canonical.
  static NCPoly from_sorted(std::vector<Term> terms);

private:
  std::vector<Term> terms_;
};

/// Accumulates (word, hbar) -> coefficient and emits a canonical NCPoly.
class TermAccumulator {
public:
  void add(const Word& w, int hbar, const GaussRational& c);
  void add(const NCPoly& p, const GaussRational& scale = 1, int hbar_shift = 0);
  NCPoly finish();
  bool empty() const { return map_.empty(); }

private:
  std::unordered_map<std::string, GaussRational> map_;
};

/// Canonicalizes a list of (coefficient, word) pairs. Words are validated atom by atom.
NCPoly make_poly(const std::vector<std::pair<Coefficient, Word>>& terms);

/// Free product: distributed concatenation, not normal ordered.
NCPoly multiply(const NCPoly& a, const NCPoly& b);

/// Symmetrized (Jordan) product (ab + ba)/2, not normal ordered. Strictly binary.
NCPoly sym_product(const NCPoly& a, const NCPoly& b);

/// a . M^{-k}, symmetrized.
NCPoly sym_divide_by_M(const NCPoly& a, int k);

/// Integer power M^n as a word (Minv^{-n} for negative n).
NCPoly mass_power(int n);

} // namespace qhexa
