#pragma once

#include "qhexa/ncpoly.hpp"
#include "qhexa/tables.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qhexa::repnum {

using cplx = std::complex<double>;
using Vec4 = std::array<double, 4>;
using Spinor = std::array<cplx, 2>;

/// 2x2 complex matrix, row major.
struct Mat2 {
  std::array<cplx, 4> a{};

  static Mat2 identity(cplx s = 1.0) { return {{s, 0.0, 0.0, s}}; }
  cplx& operator()(int r, int c) { return a[r * 2 + c]; }
  cplx operator()(int r, int c) const { return a[r * 2 + c]; }
  Mat2 operator*(const Mat2& o) const;
  Mat2 operator+(const Mat2& o) const;
  Mat2 operator-(const Mat2& o) const;
  Mat2 operator*(cplx s) const;
  Spinor operator*(const Spinor& v) const {
    return {a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]};
  }
  double max_abs() const;
};

/// Spinor Lorentz generators Sigma_{mu nu} (lower indices).
Mat2 sigma_generator(int mu, int nu);

/// Hypercube sampled with n points per axis, centered at `center`, half-width
/// `box`. Coordinates are the covariant momentum components k_mu.
struct Grid {
  int n = 32;
  double box = 0.4;
  double epsilon = 0.5;
  Vec4 center{2.0, 0.0, 0.0, 0.0};

  double h() const { return 2 * box / (n - 1); }
  double coord(int axis, int i) const { return center[axis] - box + i * h(); }
  std::size_t points() const { return std::size_t(n) * n * n * n; }
  /// True when every corner has k^2 > epsilon and k_0 > 0 (the region is convex).
  bool inside_region() const;
};

/// Spinor-valued function on the grid; psi[2 * point + component].
struct GridState {
  Grid grid;
  std::vector<cplx> psi;

  explicit GridState(const Grid& g) : grid(g), psi(2 * g.points()) {}
  GridState& operator+=(const GridState& o);
  GridState& operator-=(const GridState& o);
  GridState& operator*=(cplx s);
};

/// L2 norm over points at least `margin` cells from every face.
double interior_norm(const GridState& s, int margin);
cplx interior_inner(const GridState& a, const GridState& b, int margin);

/// Smooth step: 0 for k^2 <= epsilon, 1 for k^2 >= 2 epsilon, C-infinity in between.
double window(double k_sq, double epsilon);

struct PacketReport {
  double min_k_sq = 0;   // minimum of k^2 over the 5 sigma ball
  double leak = 0;       // squared-norm fraction of the packet where the window is below 1
};

/// Normalized Gaussian packet exp(-|k - center|^2 / (4 sigma^2) + i x.k) * spinor, windowed.
/// Throws DomainError (with the measured leak fraction) when the 5 sigma ball
/// leaves the region k^2 > epsilon, k_0 > 0.
GridState make_wavepacket(const Grid& grid, const Vec4& center, double sigma, const Spinor& spinor,
                          const Vec4& phase = {}, PacketReport* report = nullptr);
PacketReport inspect_packet(const Grid& grid, const Vec4& center, double sigma);

/// First derivative along one axis, 8th-order stencils (one-sided near the faces).
std::vector<cplx> derivative(const GridState& s, int axis);

/// Operator acting on grid states. ℏ is set to 1.
class GridOperator {
public:
  virtual ~GridOperator() = default;
  virtual GridState apply(const GridState& s) const = 0;
  std::string name;
  int hbar_degree = 0;
};
using OpPtr = std::shared_ptr<const GridOperator>;

/// psi -> sum_s V^s(k) d psi / d k_s + W(k) psi
struct FirstOrderCoeff {
  std::array<cplx, 4> V{};
  Mat2 W;
  bool has_derivative = false;
};
using CoeffFn = std::function<FirstOrderCoeff(const Vec4& k)>;

/// Momentum-space spin-1/2 representation of the generators.
class Representation {
public:
  explicit Representation(cplx d_weight = 2.0, int epsilon_sign = 1);

  cplx d_weight() const { return d_weight_; }
  int epsilon_sign() const { return epsilon_sign_; }

  /// Coefficients of an atom (P, M, Minv, S, X, J, D) at k. C has no first-order form.
  FirstOrderCoeff atom_coeff(const Atom& a, const Vec4& k) const;
  /// Pointwise matrix of a word built only from Minv, M, P, S.
  Mat2 pointwise(const Word& w, const Vec4& k) const;

  OpPtr atom(const Atom& a) const;
  /// Operator of a polynomial (hbar -> 1); words applied right to left.
  OpPtr op(const NCPoly& p) const;
  GridState apply(const NCPoly& p, const GridState& s) const;
  GridState apply_atom(const Atom& a, const GridState& s) const;

private:
  cplx d_weight_;
  int epsilon_sign_;
};

/// (A(B s) - B(A s)) / i
GridState numeric_commutator(const GridOperator& A, const GridOperator& B, const GridState& s);

/// |lhs - rhs|_int / max(|rhs|_int, |s|_int)
double relative_residual(const GridState& lhs, const GridState& rhs, const GridState& s, int margin);

struct OracleConfig {
  int n = 32;
  double box = 0.4;
  double epsilon = 0.5;
  double sigma = 0.25;
  int samples = 8;
  std::uint64_t seed = 2024;
  int margin = 8;
  double tol = 1e-6;
  double tol_composite = 1e-5;
  /// Packet family: 0 plain Gaussians, 1 Gaussians with a quadratic envelope factor.
  int family = 0;
  cplx d_weight = 2.0;
  int epsilon_sign = 1;
};

struct CheckReport {
  std::string id;
  double residual = 0;
  double tol = 0;
  bool pass = false;
  double time_ms = 0;
};

/// Numerical oracle: a set of wavepackets plus the representation.
class Oracle {
public:
  explicit Oracle(const OracleConfig& cfg = {});

  const OracleConfig& config() const { return cfg_; }
  const Representation& rep() const { return rep_; }
  const std::vector<GridState>& samples() const { return samples_; }

  using StateMap = std::function<GridState(const GridState&)>;

  /// Per-packet scratch shared by the checks of one batch: single-atom states
  /// a(s) are computed once.
  class SampleContext {
  public:
    SampleContext(const Representation& rep, const GridState& s) : rep_(rep), s_(s) {}
    const GridState& state() const { return s_; }
    const Representation& rep() const { return rep_; }
    const GridState& single(const Atom& a);
    /// (a(b s) - b(a s)) / i
    GridState bracket(const Atom& a, const Atom& b);

  private:
    const Representation& rep_;
    const GridState& s_;
    std::vector<std::pair<std::uint8_t, GridState>> single_;
  };
  using ContextMap = std::function<GridState(SampleContext&)>;
  struct Job {
    std::string id;
    ContextMap lhs;
    ContextMap rhs;
    double tol = 0;
  };
  /// Runs every job on every sample, packets outermost.
  std::vector<CheckReport> run(const std::vector<Job>& jobs) const;

  /// Max relative interior residual of lhs(s) vs rhs(s) over the samples.
  CheckReport check(const std::string& id, const StateMap& lhs, const StateMap& rhs, double tol) const;
  /// Numeric bracket (a, b) against a polynomial right-hand side.
  CheckReport check_bracket(const std::string& id, const NCPoly& a, const NCPoly& b, const NCPoly& rhs,
                            double tol) const;
  /// Every entry of a table; entries involving C are skipped.
  std::vector<CheckReport> check_table(const std::vector<tables::TableEntry>& entries) const;
  /// Spin 1/2 relation, S^2, position commutators, Y^2, Lorentz algebra of the spinor matrices.
  std::vector<CheckReport> check_identities() const;

  /// Least-squares fit of the numeric bracket onto candidates, complex coefficients.
  struct RawFit {
    std::vector<cplx> coeff;
    double residual = 0;
    int rank = 0;
  };
  RawFit fit(const NCPoly& a, const NCPoly& b, const std::vector<NCPoly>& candidates) const;
  struct FitRequest {
    NCPoly a, b;
    std::vector<NCPoly> candidates;
  };
  /// Several fits sharing one pass over the samples.
  std::vector<RawFit> fit_many(const std::vector<FitRequest>& requests) const;

  /// Fits the dilatation weight: the commutators (D, M), (D, P) do not depend
  /// on it, so it is fixed by requiring D to be symmetric for d^4k.
  struct Calibration {
    cplx weight;
    double dm_residual = 0;          // (D, M) = M at the fitted weight
    double dp_residual = 0;          // (D, P_mu) = P_mu, max over mu
    double weight_sensitivity = 0;   // change of those residuals between two trial weights
  };
  Calibration calibrate() const;

private:
  OracleConfig cfg_;
  Representation rep_;
  std::vector<GridState> samples_;
};

/// Interior residual of a check at two spacings (box and box/2, same n).
struct ConvergenceReport {
  std::string id;
  double coarse = 0;
  double fine = 0;
  double ratio = 0;
  bool pass = false;
};
std::vector<ConvergenceReport> convergence_study(const OracleConfig& cfg);

/// Closest p/q with q <= max_den; nullopt if farther than tol.
std::optional<Rational> snap_rational(double x, int max_den = 64, double tol = 1e-6);

} // namespace qhexa::repnum
