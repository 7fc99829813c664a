#pragma once

#include "qhexa/rewrite.hpp"
#include "qhexa/tables.hpp"

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace qhexa::conformal {

/// Six-dimensional index order (-, +, 0, 1, 2, 3).
enum Hex : int { kMinus = 0, kPlus = 1 };
constexpr int hex(int mu) { return mu + 2; }

/// 6d metric diag(-1, 1, 1, -1, -1, -1).
constexpr int eta6(int a, int b) {
  if (a != b) return 0;
  return (a == kMinus || a >= 3) ? -1 : 1;
}

std::string hex_name(int a);  // "-", "+", "0".."3"

/// Acceleration parameters alpha^mu (upper indices), exact.
struct AccelParams {
  std::array<Rational, 4> alpha{};

  Rational lower(int mu) const { return mu == 0 ? alpha[0] : Rational(-alpha[mu]); }
  Rational alpha_sq() const;
  AccelParams operator-() const;
  AccelParams operator+(const AccelParams& o) const;
  bool is_zero() const;
  std::string str() const;
  /// "r,r,r,r" with r an integer or p/q.
  static AccelParams parse(const std::string& text);
};

/// Composite observables expressed in one basis.
struct ObservableSet {
  Basis basis = Basis::A;
  std::array<NCPoly, 4> P;
  std::array<NCPoly, 4> S;
  std::array<std::array<NCPoly, 4>, 4> S_pair;
  std::array<NCPoly, 4> X;
  std::array<NCPoly, 4> C;
  NCPoly D;
  std::array<std::array<NCPoly, 4>, 4> J;
  NCPoly M;
  NCPoly X_sq;  // X^mu X_mu
  std::array<NCPoly, 6> Y;
  std::array<std::array<NCPoly, 6>, 6> Jab;
};

// Basis A constructions.
std::array<NCPoly, 4> build_spin_vector(const RewriteSystem& A);
std::array<NCPoly, 4> build_position(const RewriteSystem& A);

// Basis B composites for the conformal generators.
NCPoly dilatation_B(const RewriteSystem& B);
NCPoly lorentz_B(const RewriteSystem& B, int mu, int nu);
std::array<NCPoly, 4> build_special_conformal(const RewriteSystem& B);
/// C_mu = 2 D.X_mu - P_mu.(X^2 + k hbar^2 M^-2) + 2 X^rho.S_{rho mu}.
/// With the spin-1/2 rules, k = -3/4 is the value for which (C_mu, C_nu) = 0
/// and (C_mu, Y_nu) = eta_{mu nu}(Y_+ - Y_-) hold exactly; k = +3/4 leaves
/// hbar^2 residuals in both.
inline const Rational kSpecialConformalHbarSq{-3, 4};
NCPoly special_conformal_B(const RewriteSystem& B, int mu, const Rational& hbar_sq_coeff = kSpecialConformalHbarSq);

/// X^mu X_mu, normalized.
NCPoly position_square(const RewriteSystem& rw, const std::array<NCPoly, 4>& X);
/// Y_a from M and X per the hexaspherical definitions.
std::array<NCPoly, 6> build_hexa_observables(const RewriteSystem& rw, const std::array<NCPoly, 4>& X);
/// J_{+mu} = (P+C)/2, J_{-mu} = (P-C)/2, J_{-+} = D, antisymmetric completion.
std::array<std::array<NCPoly, 6>, 6> package_so42(const std::array<NCPoly, 4>& P, const NCPoly& D,
                                                   const std::array<std::array<NCPoly, 4>, 4>& J,
                                                   const std::array<NCPoly, 4>& C);

ObservableSet build_observables(const RewriteSystem& rw);

/// Right-hand side of the 6d rotation algebra for (J_ab, J_cd).
NCPoly so42_rhs(const std::array<std::array<NCPoly, 6>, 6>& Jab, int a, int b, int c, int d);

struct BoostResult {
  NCPoly value;
  /// Highest order with a nonzero series term.
  int last_nonzero_order = 0;
  /// True when a vanishing term was reached within the requested order.
  bool terminated = false;
};

/// Conjugation series A + alpha^mu (A, C_mu) + ... evaluated until a term
/// vanishes or max_order is reached.
BoostResult boost(const NCPoly& obs, const AccelParams& a, const RewriteSystem& rw,
                  const std::array<NCPoly, 4>& C, int max_order = 16);

/// F' = (F, Mbar) with Mbar = boost(M, a).
NCPoly motion_derivative(const NCPoly& F, const NCPoly& Mbar, const RewriteSystem& rw);

/// Solves p = sum_k c_k basis[k] exactly; nullopt if p is outside the span.
std::optional<std::vector<GaussRational>> decompose(const NCPoly& p, const std::vector<NCPoly>& basis);

struct IdentityReport {
  std::string id;
  NCPoly residual;
  bool pass = false;
  Basis basis = Basis::A;
  double time_ms = 0;
  std::string note;
};

/// Lazily built systems and observable sets for both bases.
class Workbench {
public:
  explicit Workbench(const tables::FittedForms& fit = tables::frozen_fit());
  /// Uses an explicit basis-B system (e.g. loaded from a manifest).
  Workbench(RewriteSystemPtr A, RewriteSystemPtr B);

  const RewriteSystem& system(Basis b) const;
  RewriteSystemPtr system_ptr(Basis b) const;
  const ObservableSet& observables(Basis b) const;
  int epsilon_sign() const { return fit_.epsilon_sign; }

private:
  tables::FittedForms fit_;
  mutable std::once_flag once_sys_[2];
  mutable RewriteSystemPtr sys_[2];
  mutable std::once_flag once_obs_[2];
  mutable std::unique_ptr<ObservableSet> obs_[2];
};

struct SuiteOptions {
  std::optional<Basis> basis;
  std::optional<AccelParams> alpha;
  std::uint64_t seed = 12345;
  int samples = 5;
};

/// Identity suite ids, in the order `all` runs them.
const std::vector<std::string>& suite_ids();
/// Default basis (or bases) a suite runs in.
std::vector<Basis> suite_bases(const std::string& id);

/// Runs one suite. Throws ConstructionError for unknown ids.
std::vector<IdentityReport> verify_suite(const std::string& id, const Workbench& wb, const SuiteOptions& opt = {});

/// Three free-fall residuals for the given acceleration (basis B).
std::vector<IdentityReport> free_fall_residuals(const AccelParams& a, const Workbench& wb);

/// Random rational accelerations with denominators up to 4 and |alpha^mu| <= 1.
std::vector<AccelParams> random_accels(std::uint64_t seed, int count);

} // namespace qhexa::conformal
