#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qhexa::hexgeom {

using Vec4 = std::array<double, 4>;
using Vec6 = std::array<double, 6>;

/// Acceleration parameters alpha^mu (upper indices).
struct Accel {
  Vec4 alpha{};
  Accel operator-() const { return {{-alpha[0], -alpha[1], -alpha[2], -alpha[3]}}; }
};

/// x^mu (upper indices) and the conformal factor at x.
struct SpaceTimePoint {
  Vec4 x{};
  double lam = 1;
};

/// y_a with index order (-, +, 0, 1, 2, 3); y_mu carry lower indices.
struct HexaPoint {
  Vec6 y{};
};

/// Hyperboloid with center omega_mu (lower indices) and signed squares.
struct Hyperboloid {
  Vec4 omega{};
  double rho_sq = 0;
  double k_sq = 0;
  double lam_sq = 0;

  /// lam^2 = -k^2 / rho^2. Throws DomainError for rho^2 = 0.
  static Hyperboloid make(const Vec4& omega, double rho_sq, double k_sq);
};

double minkowski(const Vec4& a, const Vec4& b);  // eta_{mu nu} a^mu b^nu
Vec4 lower(const Vec4& x);
double hexa_dot(const HexaPoint& a, const HexaPoint& b);  // eta_ab y^a y'^b
double hexa_sq(const HexaPoint& y);

HexaPoint lift(const SpaceTimePoint& p);
/// Throws DomainError when y_- + y_+ = 0 (point at infinity).
SpaceTimePoint project(const HexaPoint& y);

/// 1 - 2 alpha.x + alpha^2 x^2
double conformal_denominator(const Vec4& x, const Accel& a);
/// Throws DomainError on the conformal horizon (vanishing denominator).
SpaceTimePoint conformal_map(const SpaceTimePoint& p, const Accel& a);
HexaPoint rotate_hexa(const HexaPoint& y, const Accel& a);

/// eta_ab (y - y')^a (y - y')^b
double pair_invariant(const HexaPoint& y, const HexaPoint& yp);

/// y_- + y_+ = -lam, y_mu = lam omega_mu, y_+ - y_- = lam (omega^2 + rho^2), with
/// lam = +sqrt(lam^2). Throws DomainError for rho^2 = 0 or lam^2 <= 0 (no real representative).
HexaPoint hyperboloid_lift(const Hyperboloid& h);
/// Transformed center and radius; k^2 is preserved. Throws DomainError when
/// the transformed inverse radius vanishes.
Hyperboloid hyperboloid_map(const Hyperboloid& h, const Accel& a);

/// Distance between two 6-vectors up to overall scale, relative to their size.
double projective_distance(const HexaPoint& a, const HexaPoint& b);

struct MetricReport {
  double defect_h = 0;   // relative defect of (dy)^2 = lam^2 (dx)^2 at step h
  double defect_h2 = 0;  // same at step h/2
  double ratio = 0;      // defect_h / defect_h2
  bool exact = false;    // both defects at rounding level
};
/// Central difference of the lift along dx in the frame reached by `a` from an
/// inertial frame with constant factor p.lam; p.x are the accelerated-frame coordinates.
MetricReport metric_check(const SpaceTimePoint& p, const Vec4& dx, const Accel& a, double h = 1e-2);

struct PropertyResult {
  std::string id;
  double max_error = 0;
  double tol = 0;
  int samples = 0;
  bool pass = false;
};
/// Randomized property suite: coordinates in [-2,2], alpha in [-1/2,1/2]^4,
/// samples with |denominator| < 1e-3 skipped.
std::vector<PropertyResult> property_suite(std::uint64_t seed, int samples = 1000);

} // namespace qhexa::hexgeom
