#pragma once

#include "qhexa/rewrite.hpp"

#include <array>
#include <string>
#include <vector>

namespace qhexa::repnum {
class Oracle;
}

namespace qhexa::tables {

enum class ProvenanceKind { Paper, Derived, Trivial };

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::Trivial;
  /// Source tag for seeded entries, oracle id for Derived, empty for Trivial.
  std::string ref;

  std::string str() const;
  static Provenance parse(const std::string& s);
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct TableEntry {
  Atom left;
  Atom right;
  NCPoly bracket;
  Provenance provenance;
};

/// Oracle-pinned closed forms for the basis-B entries the algebra does not
/// state directly, plus the calibrated dilatation weight.
///
///   (S_mu, S_nu) = ss * eps_{mu nu rho sigma} S^rho P^sigma Minv
///   (X_mu, S_nu) = xs[0] S_mu P_nu M^-2 + xs[1] S_nu P_mu M^-2
///                + xs[2] eps_{mu nu rho sigma} S^rho P^sigma M^-2
struct FittedForms {
  int epsilon_sign = 1;
  Rational ss{1};
  std::array<Rational, 3> xs{Rational(-1), Rational(0), Rational(0)};
  Rational d_weight{2};
};

/// Values recorded from the numerical oracle (see `qhexa rep fit`); a test
/// re-runs the fit and checks they still agree.
FittedForms frozen_fit(int epsilon_sign = 1);

/// Basis A: {Minv, M, P, J, D, C}.
RewriteSystemPtr basis_A(int epsilon_sign = 1);
std::vector<TableEntry> entries_A();

/// Basis B: {Minv, M, P, S, X} with spin-1/2 constraint rules.
RewriteSystemPtr basis_B(const FittedForms& fit = frozen_fit());
std::vector<TableEntry> entries_B(const FittedForms& fit = frozen_fit());

/// Rebuilds basis B from a full entry list (e.g. loaded from a manifest).
/// Throws ConstructionError naming the first missing entry.
RewriteSystemPtr basis_B_from_entries(const std::vector<TableEntry>& entries, int epsilon_sign);

/// Candidate tensors used for the fitted entries.
NCPoly spin_pair_form(int mu, int nu, int epsilon_sign);            // eps S^rho P^sigma Minv
std::array<NCPoly, 3> xs_candidates(int mu, int nu, int epsilon_sign);

/// Substitutes D, J, C by their basis-B composites and normalizes in basis B.
NCPoly translate_A_to_B(const NCPoly& p, const RewriteSystem& B);

struct AnsatzFit {
  Atom left;
  Atom right;
  std::vector<NCPoly> candidates;
  std::vector<double> raw;
  std::vector<Rational> coefficients;
  double residual = 0;
};

/// Least-squares fit of the numeric bracket (left, right) onto the candidate
/// operators; coefficients snapped to p/q with q <= 64 within 1e-6.
AnsatzFit fit_derived_entry(const Atom& left, const Atom& right, const std::vector<NCPoly>& candidates,
                            const repnum::Oracle& oracle);

/// Runs the oracle fits for the basis-B derived entries and assembles FittedForms.
FittedForms fit_all(const repnum::Oracle& oracle, std::vector<AnsatzFit>* details = nullptr);

} // namespace qhexa::tables
