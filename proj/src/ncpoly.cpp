#include "qhexa/ncpoly.hpp"

#include "qhexa/errors.hpp"

#include <algorithm>

namespace qhexa {

bool term_less(const Term& a, const Term& b) {
  if (a.word == b.word) return a.hbar < b.hbar;
  return a.word < b.word;
}

NCPoly::NCPoly(const GaussRational& c) {
  if (!c.is_zero()) terms_.push_back({Word(), 0, c});
}

NCPoly NCPoly::atom(const Atom& a, const GaussRational& c) {
  Word w;
  w.push_back(a.id());
  return monomial(w, c);
}

NCPoly NCPoly::monomial(const Word& w, const GaussRational& c, int hbar) {
  if (hbar < 0) throw ConsistencyError("negative hbar power");
  NCPoly p;
  if (!c.is_zero()) p.terms_.push_back({w, hbar, c});
  return p;
}

NCPoly NCPoly::hbar(int power) { return monomial(Word(), 1, power); }

NCPoly NCPoly::from_sorted(std::vector<Term> terms) {
  NCPoly p;
  p.terms_ = std::move(terms);
  return p;
}

int NCPoly::max_hbar() const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, t.hbar);
  return m;
}

namespace {

std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool negate_b) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t x = 0, y = 0;
  while (x < a.size() || y < b.size()) {
    if (y == b.size() || (x < a.size() && term_less(a[x], b[y]))) {
      out.push_back(a[x++]);
    } else if (x == a.size() || term_less(b[y], a[x])) {
      out.push_back(b[y]);
      if (negate_b) out.back().coeff = -out.back().coeff;
      ++y;
    } else {
      GaussRational c = negate_b ? a[x].coeff - b[y].coeff : a[x].coeff + b[y].coeff;
      if (!c.is_zero()) out.push_back({a[x].word, a[x].hbar, std::move(c)});
      ++x;
      ++y;
    }
  }
  return out;
}

std::string key_of(const Word& w, int hbar) {
  std::string k = w.bytes();
  k.push_back(static_cast<char>(hbar));
  return k;
}

} // namespace

NCPoly& NCPoly::operator+=(const NCPoly& o) {
  terms_ = merge(terms_, o.terms_, false);
  return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o) {
  terms_ = merge(terms_, o.terms_, true);
  return *this;
}

NCPoly& NCPoly::operator*=(const GaussRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

NCPoly NCPoly::operator-() const {
  NCPoly p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

NCPoly NCPoly::shift_hbar(int k) const {
  NCPoly p = *this;
  for (auto& t : p.terms_) {
    t.hbar += k;
    if (t.hbar < 0) throw ConsistencyError("hbar power would become negative");
  }
  return p;
}

bool operator==(const NCPoly& a, const NCPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    const Term& s = a.terms_[k];
    const Term& t = b.terms_[k];
    if (s.hbar != t.hbar || !(s.word == t.word) || !(s.coeff == t.coeff)) return false;
  }
  return true;
}

void TermAccumulator::add(const Word& w, int hbar, const GaussRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = map_.try_emplace(key_of(w, hbar), c);
  if (!inserted) it->second += c;
}

void TermAccumulator::add(const NCPoly& p, const GaussRational& scale, int hbar_shift) {
  for (const auto& t : p.terms()) add(t.word, t.hbar + hbar_shift, t.coeff * scale);
}

NCPoly TermAccumulator::finish() {
  std::vector<Term> terms;
  terms.reserve(map_.size());
  for (auto& [key, c] : map_) {
    if (c.is_zero()) continue;
    int hbar = static_cast<unsigned char>(key.back());
    terms.push_back({Word(key.substr(0, key.size() - 1)), hbar, std::move(c)});
  }
  map_.clear();
  std::sort(terms.begin(), terms.end(), term_less);
  return NCPoly::from_sorted(std::move(terms));
}

NCPoly make_poly(const std::vector<std::pair<Coefficient, Word>>& terms) {
  TermAccumulator acc;
  for (const auto& [c, w] : terms) {
    for (std::size_t k = 0; k < w.size(); ++k)
      if (w.id(k) >= kAtomCount) throw ConstructionError("atom id " + std::to_string(w.id(k)) + " out of range");
    if (c.hbar < 0) throw ConstructionError("negative hbar power");
    acc.add(w, c.hbar, c.value);
  }
  return acc.finish();
}

NCPoly multiply(const NCPoly& a, const NCPoly& b) {
  TermAccumulator acc;
  for (const auto& s : a.terms())
    for (const auto& t : b.terms()) acc.add(s.word + t.word, s.hbar + t.hbar, s.coeff * t.coeff);
  return acc.finish();
}

NCPoly sym_product(const NCPoly& a, const NCPoly& b) {
  NCPoly r = multiply(a, b) + multiply(b, a);
  r *= GaussRational(Rational(1, 2));
  return r;
}

NCPoly mass_power(int n) {
  Word w;
  Atom a = n < 0 ? atoms::Minv() : atoms::M();
  for (int k = 0; k < (n < 0 ? -n : n); ++k) w.push_back(a.id());
  return NCPoly::monomial(w);
}

NCPoly sym_divide_by_M(const NCPoly& a, int k) {
  if (k <= 0) throw ConstructionError("sym_divide_by_M needs a positive power");
  return sym_product(a, mass_power(-k));
}

} // namespace qhexa
