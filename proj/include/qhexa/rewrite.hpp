#pragma once

#include "qhexa/ncpoly.hpp"

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace qhexa {

enum class Basis { A, B };

std::string to_string(Basis b);
Basis parse_basis(const std::string& s);

/// Normal-ordering engine for one generator basis.
///
/// A word is normal when its atoms are sorted by rank (atom id) and no
/// adjacent pair matches a constraint rule. Out-of-order pairs are swapped
/// with ba -> ab + i hbar (b,a) using the bracket table. Constraint rules are
/// two-atom sum rewrites and take precedence over swaps.
///
/// The strategy is deterministic: a word is normalized left to right, each new
/// atom being pushed leftwards through an already-normal prefix (innermost
/// redex first). Results of (normal word, atom) products are memoized; the
/// cache is guarded by a shared mutex so instances can be shared across threads.
class RewriteSystem {
public:
  explicit RewriteSystem(Basis tag, int epsilon_sign = 1);
  RewriteSystem(const RewriteSystem&) = delete;
  RewriteSystem& operator=(const RewriteSystem&) = delete;

  Basis basis() const { return tag_; }
  int epsilon_sign() const { return epsilon_sign_; }

  void add_member(const Atom& a);
  bool contains(const Atom& a) const { return member_[a.id()]; }
  bool contains_id(std::uint8_t id) const { return member_[id]; }

  /// Sets (left, right) = value and (right, left) = -value. Value must be normal.
  void set_bracket(const Atom& left, const Atom& right, const NCPoly& value);
  /// Nullptr if the entry is absent.
  const NCPoly* bracket(const Atom& left, const Atom& right) const;

  /// Adjacent pair (first, second) -> rhs.
  void add_pair_rule(const Atom& first, const Atom& second, const NCPoly& rhs);
  const NCPoly* pair_rule(const Atom& first, const Atom& second) const;

  void set_step_bound(std::size_t bound) { step_bound_ = bound; }
  std::size_t step_bound() const { return step_bound_; }

  /// Unique normal form. Throws ConstructionError for atoms outside the basis,
  /// ConsistencyError when the step bound is exceeded.
  NCPoly normalize(const NCPoly& p) const;
  /// Normal form of the ordinary product ab.
  NCPoly product(const NCPoly& a, const NCPoly& b) const;
  /// Normal form of (ab + ba)/2.
  NCPoly sym(const NCPoly& a, const NCPoly& b) const;
  /// Normal form of the bracket (a,b) = (ab - ba)/(i hbar).
  NCPoly commutator(const NCPoly& a, const NCPoly& b) const;
  bool equal(const NCPoly& a, const NCPoly& b) const;
  /// p^n with n >= 0, normalized.
  NCPoly power(const NCPoly& p, int n) const;

  std::size_t cache_size() const;
  void clear_cache() const;

private:
  NCPoly append(const Word& w, std::uint8_t a) const;
  NCPoly word_times_word(const Word& u, const Word& v) const;
  NCPoly word_times_poly(const Word& u, const NCPoly& p) const;
  void check_members(const NCPoly& p) const;

  Basis tag_;
  int epsilon_sign_;
  std::array<bool, kAtomCount> member_{};
  std::array<std::array<std::optional<NCPoly>, kAtomCount>, kAtomCount> bracket_;
  std::array<std::array<std::optional<NCPoly>, kAtomCount>, kAtomCount> rule_;
  std::size_t step_bound_ = 50'000'000;

  mutable std::shared_mutex cache_mutex_;
  mutable std::unordered_map<std::string, NCPoly> cache_;
};

using RewriteSystemPtr = std::shared_ptr<const RewriteSystem>;

// Free-function forms.
NCPoly normalize(const NCPoly& p, const RewriteSystem& rw);
NCPoly commutator(const NCPoly& a, const NCPoly& b, const RewriteSystem& rw);
bool equal(const NCPoly& a, const NCPoly& b, const RewriteSystem& rw);

} // namespace qhexa
