#include "qhexa/rewrite.hpp"

#include "qhexa/errors.hpp"

#include <mutex>

namespace qhexa {

std::string to_string(Basis b) { return b == Basis::A ? "A" : "B"; }

Basis parse_basis(const std::string& s) {
  if (s == "A" || s == "a") return Basis::A;
  if (s == "B" || s == "b") return Basis::B;
  throw ConstructionError("unknown basis '" + s + "' (expected A or B)");
}

namespace {

// Steps taken by the outermost public call on this thread.
thread_local std::size_t t_steps = 0;
thread_local int t_depth = 0;

struct StepScope {
  StepScope() {
    if (t_depth++ == 0) t_steps = 0;
  }
  ~StepScope() { --t_depth; }
};

} // namespace

RewriteSystem::RewriteSystem(Basis tag, int epsilon_sign) : tag_(tag), epsilon_sign_(epsilon_sign) {}

void RewriteSystem::add_member(const Atom& a) { member_[a.id()] = true; }

void RewriteSystem::set_bracket(const Atom& left, const Atom& right, const NCPoly& value) {
  bracket_[left.id()][right.id()] = value;
  bracket_[right.id()][left.id()] = -value;
}

const NCPoly* RewriteSystem::bracket(const Atom& left, const Atom& right) const {
  const auto& e = bracket_[left.id()][right.id()];
  return e ? &*e : nullptr;
}

void RewriteSystem::add_pair_rule(const Atom& first, const Atom& second, const NCPoly& rhs) {
  rule_[first.id()][second.id()] = rhs;
}

const NCPoly* RewriteSystem::pair_rule(const Atom& first, const Atom& second) const {
  const auto& e = rule_[first.id()][second.id()];
  return e ? &*e : nullptr;
}

std::size_t RewriteSystem::cache_size() const {
  std::shared_lock lock(cache_mutex_);
  return cache_.size();
}

void RewriteSystem::clear_cache() const {
  std::unique_lock lock(cache_mutex_);
  cache_.clear();
}

NCPoly RewriteSystem::append(const Word& w, std::uint8_t a) const {
  std::string key = w.bytes();
  key.push_back(static_cast<char>(a));
  {
    std::shared_lock lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  if (++t_steps > step_bound_)
    throw ConsistencyError("rewrite step bound " + std::to_string(step_bound_) +
                           " exceeded while normalizing " + (w + Word(std::string(1, static_cast<char>(a)))).str());

  NCPoly result;
  if (w.empty()) {
    result = NCPoly::monomial(Word(std::string(1, static_cast<char>(a))));
  } else {
    std::uint8_t b = w.back_id();
    Word u = w.prefix(w.size() - 1);
    if (const auto& rule = rule_[b][a]) {
      result = word_times_poly(u, *rule);
    } else if (b > a) {
      const auto& br = bracket_[b][a];
      if (!br)
        throw ConsistencyError("missing bracket (" + Atom::from_id(b).name() + ", " + Atom::from_id(a).name() +
                               ") in basis " + to_string(tag_));
      TermAccumulator acc;
      NCPoly left = append(u, a);
      for (const auto& t : left.terms()) acc.add(append(t.word, b), t.coeff, t.hbar);
      if (!br->is_zero()) acc.add(word_times_poly(u, *br), GaussRational::i(), 1);
      result = acc.finish();
    } else {
      Word v = w;
      v.push_back(a);
      result = NCPoly::monomial(v);
    }
  }
  std::unique_lock lock(cache_mutex_);
  cache_.emplace(std::move(key), result);
  return result;
}

NCPoly RewriteSystem::word_times_word(const Word& u, const Word& v) const {
  NCPoly cur = NCPoly::monomial(u);
  for (std::size_t k = 0; k < v.size(); ++k) {
    TermAccumulator acc;
    for (const auto& t : cur.terms()) acc.add(append(t.word, v.id(k)), t.coeff, t.hbar);
    cur = acc.finish();
  }
  return cur;
}

NCPoly RewriteSystem::word_times_poly(const Word& u, const NCPoly& p) const {
  TermAccumulator acc;
  for (const auto& t : p.terms()) acc.add(word_times_word(u, t.word), t.coeff, t.hbar);
  return acc.finish();
}

void RewriteSystem::check_members(const NCPoly& p) const {
  for (const auto& t : p.terms())
    for (std::size_t k = 0; k < t.word.size(); ++k)
      if (!member_[t.word.id(k)])
        throw ConstructionError("atom " + t.word[k].name() + " is not a generator of basis " + to_string(tag_));
}

NCPoly RewriteSystem::normalize(const NCPoly& p) const {
  StepScope scope;
  check_members(p);
  TermAccumulator acc;
  for (const auto& t : p.terms()) acc.add(word_times_word(Word(), t.word), t.coeff, t.hbar);
  return acc.finish();
}

NCPoly RewriteSystem::product(const NCPoly& a, const NCPoly& b) const {
  StepScope scope;
  NCPoly na = normalize(a);
  NCPoly nb = normalize(b);
  TermAccumulator acc;
  for (const auto& s : na.terms())
    for (const auto& t : nb.terms()) acc.add(word_times_word(s.word, t.word), s.coeff * t.coeff, s.hbar + t.hbar);
  return acc.finish();
}

NCPoly RewriteSystem::sym(const NCPoly& a, const NCPoly& b) const {
  StepScope scope;
  NCPoly r = product(a, b) + product(b, a);
  r *= GaussRational(Rational(1, 2));
  return r;
}

NCPoly RewriteSystem::commutator(const NCPoly& a, const NCPoly& b) const {
  StepScope scope;
  NCPoly d = product(a, b) - product(b, a);
  std::vector<Term> terms = d.terms();
  for (auto& t : terms) {
    if (t.hbar < 1)
      throw ConsistencyError("commutator does not factor i hbar: term " + t.word.str() +
                             " carries no hbar (corrupted table in basis " + to_string(tag_) + ")");
    t.hbar -= 1;
    t.coeff = t.coeff.div_i();
  }
  return NCPoly::from_sorted(std::move(terms));
}

bool RewriteSystem::equal(const NCPoly& a, const NCPoly& b) const { return normalize(a - b).is_zero(); }

NCPoly RewriteSystem::power(const NCPoly& p, int n) const {
  if (n < 0) throw ConstructionError("negative power of a polynomial");
  NCPoly r(1);
  for (int k = 0; k < n; ++k) r = product(r, p);
  return r;
}

NCPoly normalize(const NCPoly& p, const RewriteSystem& rw) { return rw.normalize(p); }
NCPoly commutator(const NCPoly& a, const NCPoly& b, const RewriteSystem& rw) { return rw.commutator(a, b); }
bool equal(const NCPoly& a, const NCPoly& b, const RewriteSystem& rw) { return rw.equal(a, b); }

} // namespace qhexa
