#include "qhexa/repnum.hpp"

#include "qhexa/errors.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#ifdef __GLIBC__
#include <malloc.h>
#endif

namespace qhexa::repnum {

namespace {

const cplx I{0.0, 1.0};

cplx to_cplx(const GaussRational& c) { return {c.re().get_d(), c.im().get_d()}; }

double metric(int mu) { return mu == 0 ? 1.0 : -1.0; }

double minkowski_sq(const Vec4& k) { return k[0] * k[0] - k[1] * k[1] - k[2] * k[2] - k[3] * k[3]; }

bool is_pointwise(AtomKind k) {
  return k == AtomKind::Minv || k == AtomKind::M || k == AtomKind::P || k == AtomKind::S;
}

Mat2 pauli(int k) {
  Mat2 m;
  if (k == 1) m = {{0.0, 1.0, 1.0, 0.0}};
  if (k == 2) m = {{0.0, -I, I, 0.0}};
  if (k == 3) m = {{1.0, 0.0, 0.0, -1.0}};
  return m;
}

std::array<int, 4> unflatten(std::size_t idx, int n) {
  std::array<int, 4> c;
  for (int a = 3; a >= 0; --a) {
    c[a] = int(idx % n);
    idx /= n;
  }
  return c;
}

Vec4 point(const Grid& g, std::size_t idx) {
  auto c = unflatten(idx, g.n);
  return {g.coord(0, c[0]), g.coord(1, c[1]), g.coord(2, c[2]), g.coord(3, c[3])};
}

// Weights for the first derivative at x0 from nodes xs (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs) {
  int n = int(xs.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
  double c1 = 1.0, c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, 1);
    double c2 = 1.0, c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

struct Stencil {
  int first;  // offset of the first node relative to the evaluation point
  std::vector<double> w;
};

// One stencil per grid index, 9 nodes each.
std::vector<Stencil> stencils(int n) {
  if (n < 9) throw OracleError("grid needs at least 9 points per axis");
  std::vector<Stencil> out(n);
  for (int i = 0; i < n; ++i) {
    int start = std::clamp(i - 4, 0, n - 9);
    std::vector<double> xs(9);
    for (int k = 0; k < 9; ++k) xs[k] = start + k;
    out[i] = {start - i, fd_weights(i, xs)};
  }
  return out;
}

struct PointData {
  Vec4 k;
  double m = 0, minv = 0;
  int es = 1;
};

// S_mu = sum_sigma k_sigma T[mu][sigma] / M, with T contracted once per epsilon sign.
const std::array<std::array<Mat2, 4>, 4>& spin_tensor(int es) {
  static const auto build = [](int sign) {
    std::array<std::array<Mat2, 4>, 4> t{};
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        for (int rho = 0; rho < 4; ++rho)
          for (int sig = 0; sig < 4; ++sig) {
            int e = levi_civita(mu, nu, rho, sig);
            if (!e) continue;
            double f = -0.5 * sign * e * metric(nu) * metric(rho) * metric(sig);
            t[mu][sig] = t[mu][sig] + sigma_generator(nu, rho) * f;
          }
    return t;
  };
  static const auto plus = build(1), minus = build(-1);
  return es > 0 ? plus : minus;
}

Mat2 spin_matrix(const Vec4& k, double minv, int mu, int es) {
  const auto& t = spin_tensor(es)[mu];
  Mat2 out;
  for (int sig = 0; sig < 4; ++sig) {
    double f = k[sig] * minv;
    for (int e = 0; e < 4; ++e) out.a[e] += f * t[sig].a[e];
  }
  return out;
}

PointData point_data(const Vec4& k, int es) {
  PointData d;
  d.k = k;
  double k2 = minkowski_sq(k);
  if (k2 <= 0) throw DomainError("momentum outside the forward cone");
  d.m = std::sqrt(k2);
  d.minv = 1.0 / d.m;
  d.es = es;
  return d;
}

double scalar_atom(const PointData& d, const Atom& a) {
  if (a.kind == AtomKind::Minv) return d.minv;
  if (a.kind == AtomKind::M) return d.m;
  return d.k[a.i];
}

Mat2 pointwise_atom(const PointData& d, const Atom& a) {
  switch (a.kind) {
    case AtomKind::Minv: return Mat2::identity(d.minv);
    case AtomKind::M: return Mat2::identity(d.m);
    case AtomKind::P: return Mat2::identity(d.k[a.i]);
    case AtomKind::S: return spin_matrix(d.k, d.minv, a.i, d.es);
    default: throw OracleError("atom " + a.name() + " is not pointwise");
  }
}

// J_{mu nu} for any index order.
FirstOrderCoeff lorentz_coeff(const Vec4& k, int mu, int nu) {
  FirstOrderCoeff c;
  c.has_derivative = true;
  c.V[nu] += I * k[mu] * metric(nu);
  c.V[mu] -= I * k[nu] * metric(mu);
  c.W = sigma_generator(mu, nu);
  return c;
}

FirstOrderCoeff dilatation_coeff(const Vec4& k, cplx w) {
  FirstOrderCoeff c;
  c.has_derivative = true;
  for (int s = 0; s < 4; ++s) c.V[s] = I * k[s];
  c.W = Mat2::identity(I * w);
  return c;
}

class AtomOperator : public GridOperator {
public:
  AtomOperator(Representation rep, Atom a) : rep_(rep), a_(a) { name = a.name(); }
  GridState apply(const GridState& s) const override { return rep_.apply_atom(a_, s); }

private:
  Representation rep_;
  Atom a_;
};

class PolyOperator : public GridOperator {
public:
  PolyOperator(Representation rep, NCPoly p) : rep_(rep), p_(std::move(p)) { hbar_degree = p_.max_hbar(); }
  GridState apply(const GridState& s) const override { return rep_.apply(p_, s); }

private:
  Representation rep_;
  NCPoly p_;
};

} // namespace

Mat2 Mat2::operator*(const Mat2& o) const {
  return {{a[0] * o.a[0] + a[1] * o.a[2], a[0] * o.a[1] + a[1] * o.a[3], a[2] * o.a[0] + a[3] * o.a[2],
           a[2] * o.a[1] + a[3] * o.a[3]}};
}
Mat2 Mat2::operator+(const Mat2& o) const {
  Mat2 r;
  for (int k = 0; k < 4; ++k) r.a[k] = a[k] + o.a[k];
  return r;
}
Mat2 Mat2::operator-(const Mat2& o) const {
  Mat2 r;
  for (int k = 0; k < 4; ++k) r.a[k] = a[k] - o.a[k];
  return r;
}
Mat2 Mat2::operator*(cplx s) const {
  Mat2 r;
  for (int k = 0; k < 4; ++k) r.a[k] = a[k] * s;
  return r;
}
double Mat2::max_abs() const {
  double m = 0;
  for (auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

namespace {

Mat2 sigma_direct(int mu, int nu) {
  if (mu == nu) return {};
  if (mu > nu) return sigma_direct(nu, mu) * -1.0;
  if (mu == 0) return pauli(nu) * (0.5 * I);
  int k = 6 - mu - nu;
  return pauli(k) * (0.5 * levi_civita(0, mu, nu, k));
}

} // namespace

Mat2 sigma_generator(int mu, int nu) {
  static const auto table = [] {
    std::array<std::array<Mat2, 4>, 4> t;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) t[a][b] = sigma_direct(a, b);
    return t;
  }();
  return table[mu][nu];
}

bool Grid::inside_region() const {
  for (int c = 0; c < 16; ++c) {
    Vec4 k;
    for (int a = 0; a < 4; ++a) k[a] = center[a] + ((c >> a) & 1 ? box : -box);
    if (k[0] <= 0 || minkowski_sq(k) <= epsilon) return false;
  }
  return true;
}

GridState& GridState::operator+=(const GridState& o) {
  for (std::size_t k = 0; k < psi.size(); ++k) psi[k] += o.psi[k];
  return *this;
}
GridState& GridState::operator-=(const GridState& o) {
  for (std::size_t k = 0; k < psi.size(); ++k) psi[k] -= o.psi[k];
  return *this;
}
GridState& GridState::operator*=(cplx s) {
  for (auto& v : psi) v *= s;
  return *this;
}

namespace {

// Calls f(point index) for every point at least `margin` cells from each face.
template <class F>
void for_interior(const Grid& g, int margin, F&& f) {
  int n = g.n, lo = margin, hi = n - margin;
  for (int a = lo; a < hi; ++a)
    for (int b = lo; b < hi; ++b)
      for (int c = lo; c < hi; ++c) {
        std::size_t base = ((std::size_t(a) * n + b) * n + c) * n;
        for (int e = lo; e < hi; ++e) f(base + e);
      }
}

} // namespace

double interior_norm(const GridState& s, int margin) { return std::sqrt(interior_inner(s, s, margin).real()); }

cplx interior_inner(const GridState& a, const GridState& b, int margin) {
  cplx acc = 0;
  for_interior(a.grid, margin, [&](std::size_t p) {
    acc += std::conj(a.psi[2 * p]) * b.psi[2 * p] + std::conj(a.psi[2 * p + 1]) * b.psi[2 * p + 1];
  });
  return acc;
}

double window(double k_sq, double epsilon) {
  double t = (k_sq - epsilon) / epsilon;
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  double f = std::exp(-1 / t), g = std::exp(-1 / (1 - t));
  return f / (f + g);
}

PacketReport inspect_packet(const Grid& grid, const Vec4& center, double sigma) {
  PacketReport r;
  double rad = 5 * sigma;
  double c3 = std::sqrt(center[1] * center[1] + center[2] * center[2] + center[3] * center[3]);
  r.min_k_sq = INFINITY;
  const int steps = 4096;
  for (int t = 0; t <= steps; ++t) {
    double th = M_PI * t / steps;
    double k0 = center[0] + rad * std::cos(th), ks = c3 + rad * std::sin(th);
    r.min_k_sq = std::min(r.min_k_sq, k0 * k0 - ks * ks);
  }
  if (center[0] - rad <= 0) r.min_k_sq = std::min(r.min_k_sq, 0.0);
  double total = 0, lost = 0;
  for (std::size_t p = 0; p < grid.points(); ++p) {
    Vec4 k = point(grid, p);
    double d2 = 0;
    for (int a = 0; a < 4; ++a) d2 += (k[a] - center[a]) * (k[a] - center[a]);
    double g2 = std::exp(-d2 / (2 * sigma * sigma));
    total += g2;
    if (k[0] <= 0 || window(minkowski_sq(k), grid.epsilon) < 1) lost += g2;
  }
  r.leak = total > 0 ? lost / total : 1.0;
  return r;
}

GridState make_wavepacket(const Grid& grid, const Vec4& center, double sigma, const Spinor& spinor,
                          const Vec4& phase, PacketReport* report) {
  PacketReport r = inspect_packet(grid, center, sigma);
  if (report) *report = r;
  if (r.min_k_sq <= grid.epsilon) {
    std::ostringstream msg;
    msg << "wavepacket leaves the region k^2 > " << grid.epsilon << " (min k^2 over 5 sigma = " << r.min_k_sq
        << ", leak fraction " << r.leak << ")";
    throw DomainError(msg.str());
  }
  GridState s(grid);
  double norm = 0;
  for (std::size_t p = 0; p < grid.points(); ++p) {
    Vec4 k = point(grid, p);
    double d2 = 0, xk = 0;
    for (int a = 0; a < 4; ++a) {
      d2 += (k[a] - center[a]) * (k[a] - center[a]);
      xk += phase[a] * k[a];
    }
    double k2 = minkowski_sq(k);
    double w = k[0] > 0 ? window(k2, grid.epsilon) : 0.0;
    cplx amp = w * std::exp(cplx(-d2 / (4 * sigma * sigma), xk));
    s.psi[2 * p] = amp * spinor[0];
    s.psi[2 * p + 1] = amp * spinor[1];
    norm += std::norm(s.psi[2 * p]) + std::norm(s.psi[2 * p + 1]);
  }
  if (norm > 0) s *= 1.0 / std::sqrt(norm * std::pow(grid.h(), 4));
  return s;
}

std::vector<cplx> derivative(const GridState& s, int axis) {
  const Grid& g = s.grid;
  int n = g.n;
  static thread_local std::map<int, std::vector<Stencil>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, stencils(n)).first;
  const auto& st = it->second;
  std::size_t stride = 1;
  for (int a = axis + 1; a < 4; ++a) stride *= n;
  std::size_t outer = g.points() / (stride * n);
  double inv_h = 1.0 / g.h();
  std::vector<cplx> out(s.psi.size());
  if (stride == 1) {
#pragma omp parallel for
    for (std::size_t o = 0; o < outer; ++o) {
      const cplx* src = s.psi.data() + 2 * o * n;
      cplx* dst = out.data() + 2 * o * n;
      for (int i = 0; i < n; ++i) {
        const Stencil& sc = st[i];
        cplx a0 = 0, a1 = 0;
        for (int k = 0; k < 9; ++k) {
          int j = i + sc.first + k;
          a0 += sc.w[k] * src[2 * j];
          a1 += sc.w[k] * src[2 * j + 1];
        }
        dst[2 * i] = a0 * inv_h;
        dst[2 * i + 1] = a1 * inv_h;
      }
    }
    return out;
  }
  // Rows along the axis are contiguous blocks of 2 * stride values.
  std::size_t row = 2 * stride;
#pragma omp parallel for
  for (std::size_t o = 0; o < outer; ++o)
    for (int i = 0; i < n; ++i) {
      const Stencil& sc = st[i];
      cplx* dst = out.data() + (o * n + i) * row;
      for (int k = 0; k < 9; ++k) {
        const cplx* src = s.psi.data() + (o * n + std::size_t(i + sc.first + k)) * row;
        double w = sc.w[k] * inv_h;
        for (std::size_t q = 0; q < row; ++q) dst[q] += w * src[q];
      }
    }
  return out;
}

Representation::Representation(cplx d_weight, int epsilon_sign) : d_weight_(d_weight), epsilon_sign_(epsilon_sign) {}

FirstOrderCoeff Representation::atom_coeff(const Atom& a, const Vec4& k) const {
  switch (a.kind) {
    case AtomKind::Minv:
    case AtomKind::M:
    case AtomKind::P:
    case AtomKind::S: {
      FirstOrderCoeff c;
      c.W = pointwise(Word{a}, k);
      return c;
    }
    case AtomKind::J: return lorentz_coeff(k, a.i, a.j);
    case AtomKind::D: return dilatation_coeff(k, d_weight_);
    case AtomKind::X: {
      // X_mu = sym(f_mu, D) + sum_rho eta^rho sym(f_rho, J_{rho mu}), f_rho = k_rho / M^2
      int mu = a.i;
      double m2 = minkowski_sq(k), inv = 1.0 / m2;
      Vec4 f, kup;
      for (int s = 0; s < 4; ++s) {
        f[s] = k[s] * inv;
        kup[s] = metric(s) * k[s];
      }
      auto df = [&](int rho, int s) { return (s == rho ? inv : 0.0) - 2.0 * f[rho] * kup[s] * inv; };
      FirstOrderCoeff c;
      c.has_derivative = true;
      cplx scalar = I * d_weight_ * f[mu];
      for (int s = 0; s < 4; ++s) {
        c.V[s] += I * k[s] * f[mu];
        scalar += 0.5 * I * k[s] * df(mu, s);
      }
      for (int rho = 0; rho < 4; ++rho) {
        if (rho == mu) continue;
        double g = metric(rho) * f[rho];
        // J_{rho mu}: V[mu] = i k_rho eta^mu, V[rho] = -i k_mu eta^rho
        cplx vm = I * k[rho] * metric(mu), vr = -I * k[mu] * metric(rho);
        c.V[mu] += g * vm;
        c.V[rho] += g * vr;
        scalar += 0.5 * metric(rho) * (vm * df(rho, mu) + vr * df(rho, rho));
        c.W = c.W + sigma_generator(rho, mu) * g;
      }
      c.W = c.W + Mat2::identity(scalar);
      return c;
    }
    case AtomKind::C: break;
  }
  throw OracleError("atom " + a.name() + " has no first-order representation");
}

Mat2 Representation::pointwise(const Word& w, const Vec4& k) const {
  PointData d = point_data(k, epsilon_sign_);
  Mat2 out = Mat2::identity();
  for (std::size_t i = 0; i < w.size(); ++i) out = out * pointwise_atom(d, w[i]);
  return out;
}

OpPtr Representation::atom(const Atom& a) const { return std::make_shared<AtomOperator>(*this, a); }

OpPtr Representation::op(const NCPoly& p) const { return std::make_shared<PolyOperator>(*this, p); }

namespace {

bool same_grid(const Grid& a, const Grid& b) {
  return a.n == b.n && a.box == b.box && a.epsilon == b.epsilon && a.center == b.center;
}

using PointTable = std::vector<PointData>;
using CoeffTable = std::vector<FirstOrderCoeff>;

// Per-point data and position coefficients for the most recent grid; they are
// reused by every operator applied to states on that grid.
struct GridCache {
  std::mutex mu;
  Grid grid;
  int es = 0;
  std::shared_ptr<const PointTable> pts;
  cplx weight;
  std::array<std::shared_ptr<const CoeffTable>, 4> xc;
};

GridCache& grid_cache() {
  static GridCache c;
  return c;
}

void reset_cache(GridCache& c, const Grid& g, int es) {
  if (c.pts && same_grid(c.grid, g) && c.es == es) return;
  auto pts = std::make_shared<PointTable>(g.points());
  for (std::size_t p = 0; p < g.points(); ++p) {
    (*pts)[p] = point_data(point(g, p), es);
  }
  c.grid = g;
  c.es = es;
  c.pts = std::move(pts);
  for (auto& x : c.xc) x.reset();
}

std::shared_ptr<const PointTable> cached_points(const Grid& g, int es) {
  auto& c = grid_cache();
  std::lock_guard lock(c.mu);
  reset_cache(c, g, es);
  return c.pts;
}

} // namespace

GridState Representation::apply_atom(const Atom& a, const GridState& s) const {
  const Grid& g = s.grid;
  GridState out(g);
  std::size_t np = g.points();
  if (is_pointwise(a.kind)) {
    auto pts = cached_points(g, epsilon_sign_);
#pragma omp parallel for
    for (std::size_t p = 0; p < np; ++p) {
      const PointData& d = (*pts)[p];
      cplx v0 = s.psi[2 * p], v1 = s.psi[2 * p + 1];
      if (a.kind == AtomKind::S) {
        Mat2 m = spin_matrix(d.k, d.minv, a.i, d.es);
        out.psi[2 * p] = m.a[0] * v0 + m.a[1] * v1;
        out.psi[2 * p + 1] = m.a[2] * v0 + m.a[3] * v1;
      } else {
        double f = scalar_atom(d, a);
        out.psi[2 * p] = f * v0;
        out.psi[2 * p + 1] = f * v1;
      }
    }
    return out;
  }
  std::shared_ptr<const CoeffTable> cf;
  if (a.kind == AtomKind::X) {
    auto& c = grid_cache();
    std::lock_guard lock(c.mu);
    reset_cache(c, g, epsilon_sign_);
    if (c.weight != d_weight_) {
      for (auto& x : c.xc) x.reset();
      c.weight = d_weight_;
    }
    if (!c.xc[a.i]) {
      auto t = std::make_shared<CoeffTable>(np);
      for (std::size_t p = 0; p < np; ++p) (*t)[p] = atom_coeff(a, (*c.pts)[p].k);
      c.xc[a.i] = std::move(t);
    }
    cf = c.xc[a.i];
  }
  std::array<std::vector<cplx>, 4> d;
  for (int ax = 0; ax < 4; ++ax) d[ax] = derivative(s, ax);
#pragma omp parallel for
  for (std::size_t p = 0; p < np; ++p) {
    FirstOrderCoeff local;
    const FirstOrderCoeff& c = cf ? (*cf)[p] : (local = atom_coeff(a, point(g, p)));
    Spinor r = c.W * Spinor{s.psi[2 * p], s.psi[2 * p + 1]};
    for (int ax = 0; ax < 4; ++ax) {
      r[0] += c.V[ax] * d[ax][2 * p];
      r[1] += c.V[ax] * d[ax][2 * p + 1];
    }
    out.psi[2 * p] = r[0];
    out.psi[2 * p + 1] = r[1];
  }
  return out;
}

GridState Representation::apply(const NCPoly& poly, const GridState& s) const {
  if (poly.size() == 1 && poly.terms()[0].word.size() == 1 && poly.terms()[0].coeff == GaussRational(1))
    return apply_atom(poly.terms()[0].word[0], s);
  // Each word splits into a pointwise prefix and a suffix starting at the
  // first differential atom; suffix states are shared between terms.
  struct Prefix {
    cplx c;
    std::vector<Atom> scalars, spins;
  };
  std::map<std::string, std::vector<Prefix>> groups;
  for (const Term& t : poly.terms()) {
    std::size_t f = 0;
    while (f < t.word.size() && is_pointwise(t.word[f].kind)) ++f;
    Prefix pre{to_cplx(t.coeff), {}, {}};
    for (std::size_t i = 0; i < f; ++i) (t.word[i].kind == AtomKind::S ? pre.spins : pre.scalars).push_back(t.word[i]);
    groups[t.word.bytes().substr(f)].push_back(std::move(pre));
  }
  std::map<std::string, GridState> memo;
  std::function<const GridState&(const std::string&)> state = [&](const std::string& w) -> const GridState& {
    if (w.empty()) return s;
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    const GridState& rest = state(w.substr(1));
    GridState r = apply_atom(Atom::from_id(std::uint8_t(w[0])), rest);
    return memo.emplace(w, std::move(r)).first->second;
  };
  std::vector<std::pair<const std::vector<Prefix>*, const GridState*>> work;
  for (auto& [suffix, grp] : groups) work.push_back({&grp, &state(suffix)});

  GridState out(s.grid);
  std::size_t np = s.grid.points();
  auto pts = cached_points(s.grid, epsilon_sign_);
#pragma omp parallel for
  for (std::size_t p = 0; p < np; ++p) {
    const PointData& d = (*pts)[p];
    Spinor acc{0.0, 0.0};
    for (auto& [grp, st] : work) {
      cplx diag = 0;
      Mat2 m;
      for (const Prefix& pre : *grp) {
        double sc = 1;
        for (const Atom& a : pre.scalars) sc *= scalar_atom(d, a);
        if (pre.spins.empty()) {
          diag += pre.c * sc;
          continue;
        }
        Mat2 w = pointwise_atom(d, pre.spins[0]);
        for (std::size_t i = 1; i < pre.spins.size(); ++i) w = w * pointwise_atom(d, pre.spins[i]);
        m = m + w * (pre.c * sc);
      }
      cplx v0 = st->psi[2 * p], v1 = st->psi[2 * p + 1];
      acc[0] += (m.a[0] + diag) * v0 + m.a[1] * v1;
      acc[1] += m.a[2] * v0 + (m.a[3] + diag) * v1;
    }
    out.psi[2 * p] = acc[0];
    out.psi[2 * p + 1] = acc[1];
  }
  return out;
}

GridState numeric_commutator(const GridOperator& A, const GridOperator& B, const GridState& s) {
  GridState ab = A.apply(B.apply(s));
  ab -= B.apply(A.apply(s));
  ab *= -I;
  return ab;
}

double relative_residual(const GridState& lhs, const GridState& rhs, const GridState& s, int margin) {
  double diff = 0, r = 0, n = 0;
  for_interior(s.grid, margin, [&](std::size_t p) {
    for (int c = 0; c < 2; ++c) {
      diff += std::norm(lhs.psi[2 * p + c] - rhs.psi[2 * p + c]);
      r += std::norm(rhs.psi[2 * p + c]);
      n += std::norm(s.psi[2 * p + c]);
    }
  });
  return std::sqrt(diff / std::max(r, n));
}

namespace {

Grid sample_grid(const OracleConfig& cfg, const Vec4& center) {
  Grid g;
  g.n = cfg.n;
  g.box = cfg.box;
  g.epsilon = cfg.epsilon;
  g.center = center;
  return g;
}

GridState make_sample(const OracleConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c0(2.3, 2.6), ci(-0.2, 0.2), ph(-1.0, 1.0);
  std::normal_distribution<double> gauss;
  Vec4 c{c0(rng), ci(rng), ci(rng), ci(rng)};
  Vec4 x{ph(rng), ph(rng), ph(rng), ph(rng)};
  Spinor sp{cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng))};
  double nrm = std::sqrt(std::norm(sp[0]) + std::norm(sp[1]));
  sp[0] /= nrm;
  sp[1] /= nrm;
  Grid g = sample_grid(cfg, c);
  if (!g.inside_region()) throw OracleError("sample grid leaves the region k^2 > epsilon");
  GridState s = make_wavepacket(g, c, cfg.sigma, sp, x);
  if (cfg.family == 1) {
    for (std::size_t p = 0; p < g.points(); ++p) {
      Vec4 k = point(g, p);
      double u = (k[1] - c[1]) / cfg.sigma, v = (k[2] - c[2]) / cfg.sigma;
      double f = 1 + 0.5 * u + 0.3 * v * v;
      s.psi[2 * p] *= f;
      s.psi[2 * p + 1] *= f;
    }
  }
  return s;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

NCPoly word_poly(std::initializer_list<Atom> atoms) { return NCPoly::monomial(Word(atoms)); }

} // namespace

Oracle::Oracle(const OracleConfig& cfg) : cfg_(cfg), rep_(cfg.d_weight, cfg.epsilon_sign) {
#ifdef __GLIBC__
  // Grid states are tens of megabytes; keep freed blocks in the heap instead
  // of returning them to the kernel after every operator application.
  static std::once_flag tuned;
  std::call_once(tuned, [] {
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
  });
#endif
  if (cfg.margin * 2 >= cfg.n) throw OracleError("interior margin leaves no interior points");
  std::mt19937_64 rng(cfg.seed);
  for (int k = 0; k < cfg.samples; ++k) samples_.push_back(make_sample(cfg, rng));
}

const GridState& Oracle::SampleContext::single(const Atom& a) {
  for (auto& [id, st] : single_)
    if (id == a.id()) return st;
  single_.emplace_back(a.id(), rep_.apply_atom(a, s_));
  return single_.back().second;
}

GridState Oracle::SampleContext::bracket(const Atom& a, const Atom& b) {
  GridState out = rep_.apply_atom(a, single(b));
  out -= rep_.apply_atom(b, single(a));
  out *= -I;
  return out;
}

std::vector<CheckReport> Oracle::run(const std::vector<Job>& jobs) const {
  std::vector<CheckReport> out;
  for (const Job& j : jobs) out.push_back({j.id, 0, j.tol, false, 0});
  for (const GridState& s : samples_) {
    SampleContext ctx(rep_, s);
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      auto t0 = std::chrono::steady_clock::now();
      GridState lhs = jobs[k].lhs(ctx);
      GridState rhs = jobs[k].rhs(ctx);
      out[k].residual = std::max(out[k].residual, relative_residual(lhs, rhs, s, cfg_.margin));
      out[k].time_ms += elapsed_ms(t0);
    }
  }
  for (auto& r : out) r.pass = r.residual <= r.tol;
  return out;
}

CheckReport Oracle::check(const std::string& id, const StateMap& lhs, const StateMap& rhs, double tol) const {
  return run({{id, [&](SampleContext& c) { return lhs(c.state()); }, [&](SampleContext& c) { return rhs(c.state()); },
               tol}})[0];
}

CheckReport Oracle::check_bracket(const std::string& id, const NCPoly& a, const NCPoly& b, const NCPoly& rhs,
                                  double tol) const {
  OpPtr A = rep_.op(a), B = rep_.op(b), R = rep_.op(rhs);
  return check(
      id, [&](const GridState& s) { return numeric_commutator(*A, *B, s); },
      [&](const GridState& s) { return R->apply(s); }, tol);
}

namespace {

Oracle::Job bracket_job(const std::string& id, const Atom& a, const Atom& b, NCPoly rhs, double tol) {
  return {id, [a, b](Oracle::SampleContext& c) { return c.bracket(a, b); },
          [rhs = std::move(rhs)](Oracle::SampleContext& c) { return c.rep().apply(rhs, c.state()); }, tol};
}

Oracle::Job poly_job(const std::string& id, NCPoly lhs, NCPoly rhs, double tol) {
  return {id, [lhs = std::move(lhs)](Oracle::SampleContext& c) { return c.rep().apply(lhs, c.state()); },
          [rhs = std::move(rhs)](Oracle::SampleContext& c) { return c.rep().apply(rhs, c.state()); }, tol};
}

} // namespace

std::vector<CheckReport> Oracle::check_table(const std::vector<tables::TableEntry>& entries) const {
  std::vector<Job> jobs;
  for (const auto& e : entries) {
    if (e.left.kind == AtomKind::C || e.right.kind == AtomKind::C) continue;
    jobs.push_back(bracket_job("(" + e.left.name() + "," + e.right.name() + ")", e.left, e.right, e.bracket, cfg_.tol));
  }
  return run(jobs);
}

std::vector<CheckReport> Oracle::check_identities() const {
  std::vector<CheckReport> out;
  using namespace atoms;

  // Lorentz algebra of the spinor matrices: [Sigma_mn, Sigma_rs] / i.
  {
    double worst = 0;
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        for (int r = 0; r < 4; ++r)
          for (int t = 0; t < 4; ++t) {
            Mat2 lhs = (sigma_generator(m, n) * sigma_generator(r, t) - sigma_generator(r, t) * sigma_generator(m, n)) *
                       -I;
            Mat2 rhs = sigma_generator(m, t) * eta(n, r) + sigma_generator(n, r) * eta(m, t) -
                       sigma_generator(m, r) * eta(n, t) - sigma_generator(n, t) * eta(m, r);
            worst = std::max(worst, (lhs - rhs).max_abs());
          }
    out.push_back({"sigma-lorentz", worst, 1e-14, worst <= 1e-14, 0});
  }

  std::vector<Job> jobs;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu; nu < 4; ++nu) {
      NCPoly lhs = sym_product(NCPoly::atom(S(mu)), NCPoly::atom(S(nu)));
      NCPoly rhs = NCPoly(GaussRational(Rational(-eta(mu, nu), 4))) +
                   NCPoly::monomial(Word{P(mu), P(nu), Minv(), Minv()}, GaussRational(Rational(1, 4)));
      jobs.push_back(poly_job("spin-half:" + std::to_string(mu) + std::to_string(nu), lhs, rhs, cfg_.tol));
    }
  {
    NCPoly s2;
    for (int mu = 0; mu < 4; ++mu) s2 += NCPoly::monomial(Word{S(mu), S(mu)}, eta(mu, mu));
    jobs.push_back(poly_job("S^2", s2, NCPoly(GaussRational(Rational(-3, 4))), cfg_.tol));
  }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      jobs.push_back(bracket_job("PX:" + std::to_string(mu) + std::to_string(nu), P(mu), X(nu), NCPoly(-eta(mu, nu)),
                                 cfg_.tol));
  for (int mu = 0; mu < 4; ++mu)
    jobs.push_back(bracket_job("XM:" + std::to_string(mu), X(mu), M(), word_poly({P(mu), Minv()}), cfg_.tol));

  // (X_mu, X_nu) = (S_mu, S_nu) M^-2 with the spin commutator taken numerically.
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      jobs.push_back({"XX:" + std::to_string(mu) + std::to_string(nu),
                      [mu, nu](SampleContext& c) { return c.bracket(X(mu), X(nu)); },
                      [mu, nu](SampleContext& c) {
                        const Representation& r = c.rep();
                        GridState m2 = r.apply_atom(Minv(), c.single(Minv()));
                        GridState out = r.apply_atom(S(mu), r.apply_atom(S(nu), m2));
                        out -= r.apply_atom(S(nu), r.apply_atom(S(mu), m2));
                        out *= -I;
                        return out;
                      },
                      cfg_.tol});

  // Y^2 = 1 with Y built from M and X directly. With Y_+ = (Z - M)/2 and
  // Y_- = -(Z + M)/2, Y_+^2 - Y_-^2 = -(Z M + M Z)/2.
  {
    NCPoly m = NCPoly::atom(M());
    NCPoly xsq;
    for (int mu = 0; mu < 4; ++mu) xsq += NCPoly::monomial(Word{X(mu), X(mu)}, eta(mu, mu));
    NCPoly z = sym_product(m, xsq) + NCPoly::atom(Minv(), GaussRational(Rational(3, 4)));
    jobs.push_back({"Y^2",
                    [z](SampleContext& c) {
                      const Representation& r = c.rep();
                      GridState acc = r.apply(z, c.single(M()));
                      acc += r.apply_atom(M(), r.apply(z, c.state()));
                      acc *= -0.5;
                      for (int mu = 0; mu < 4; ++mu) {
                        NCPoly y = sym_product(NCPoly::atom(M()), NCPoly::atom(X(mu)));
                        GridState t = r.apply(y, r.apply(y, c.state()));
                        t *= double(eta(mu, mu));
                        acc += t;
                      }
                      return acc;
                    },
                    [](SampleContext& c) { return c.state(); }, cfg_.tol_composite});
  }
  auto rs = run(jobs);
  out.insert(out.end(), rs.begin(), rs.end());
  return out;
}

Oracle::RawFit Oracle::fit(const NCPoly& a, const NCPoly& b, const std::vector<NCPoly>& candidates) const {
  return fit_many({{a, b, candidates}})[0];
}

std::vector<Oracle::RawFit> Oracle::fit_many(const std::vector<FitRequest>& requests) const {
  // Each packet contributes the R factor of [candidates | bracket]; stacking
  // the factors and factoring again gives the global least-squares solution
  // and its residual without keeping every row.
  struct Acc {
    std::vector<OpPtr> ops;
    OpPtr A, B;
    Eigen::VectorXd scale;
    Eigen::MatrixXcd stacked;
    double rhs_sq = 0, s_sq = 0;
  };
  std::vector<Acc> acc(requests.size());
  for (std::size_t r = 0; r < requests.size(); ++r) {
    acc[r].A = rep_.op(requests[r].a);
    acc[r].B = rep_.op(requests[r].b);
    for (const auto& c : requests[r].candidates) acc[r].ops.push_back(rep_.op(c));
  }
  int n = cfg_.n, mg = cfg_.margin;
  std::size_t per = 2;
  for (int k = 0; k < 4; ++k) per *= std::size_t(n - 2 * mg);
  for (const GridState& s : samples_) {
    for (std::size_t r = 0; r < requests.size(); ++r) {
      Acc& f = acc[r];
      std::size_t nc = f.ops.size();
      GridState c = numeric_commutator(*f.A, *f.B, s);
      std::vector<GridState> cs;
      for (auto& op : f.ops) cs.push_back(op->apply(s));
      Eigen::MatrixXcd m(per, nc + 1);
      std::size_t row = 0;
      for_interior(s.grid, mg, [&](std::size_t p) {
        for (int comp = 0; comp < 2; ++comp, ++row) {
          for (std::size_t j = 0; j < nc; ++j) m(row, j) = cs[j].psi[2 * p + comp];
          m(row, nc) = c.psi[2 * p + comp];
          f.rhs_sq += std::norm(c.psi[2 * p + comp]);
          f.s_sq += std::norm(s.psi[2 * p + comp]);
        }
      });
      if (f.scale.size() == 0) {
        f.scale.resize(nc);
        for (std::size_t j = 0; j < nc; ++j) {
          double v = m.col(j).norm();
          f.scale(j) = v > 0 ? v : 1.0;
        }
      }
      for (std::size_t j = 0; j < nc; ++j) m.col(j) /= f.scale(j);
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
      Eigen::MatrixXcd R = qr.matrixQR().topRows(nc + 1).triangularView<Eigen::Upper>();
      Eigen::MatrixXcd next(f.stacked.rows() + R.rows(), nc + 1);
      next << f.stacked, R;
      f.stacked = std::move(next);
    }
  }
  std::vector<RawFit> out;
  for (Acc& f : acc) {
    std::size_t nc = f.ops.size();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(f.stacked);
    Eigen::MatrixXcd R = qr.matrixQR().topRows(nc + 1).triangularView<Eigen::Upper>();
    RawFit fit;
    double top = 0;
    for (std::size_t j = 0; j < nc; ++j) top = std::max(top, std::abs(R(j, j)));
    for (std::size_t j = 0; j < nc; ++j)
      if (std::abs(R(j, j)) > 1e-8 * top) ++fit.rank;
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(nc);
    if (fit.rank == int(nc) && nc > 0)
      x = R.topLeftCorner(nc, nc).triangularView<Eigen::Upper>().solve(R.col(nc).head(nc));
    fit.residual = std::abs(R(nc, nc)) / std::sqrt(std::max(f.rhs_sq, f.s_sq));
    for (std::size_t j = 0; j < nc; ++j) fit.coeff.push_back(x(j) / f.scale(j));
    out.push_back(std::move(fit));
  }
  return out;
}

Oracle::Calibration Oracle::calibrate() const {
  // Fully contained packet, so that boundary terms of the integration by
  // parts vanish. D = D_0 + i w is symmetric iff Re w = -Re <psi, k.d psi> / |psi|^2;
  // the sum runs axis by axis to keep one derivative array alive at a time.
  Grid g;
  g.n = 64;
  g.box = 0.65;
  g.epsilon = cfg_.epsilon;
  g.center = {2.5, 0.1, -0.05, 0.0};
  GridState psi = make_wavepacket(g, g.center, 0.1, {cplx(0.6, 0.0), cplx(0.0, 0.8)});
  double num = 0, den = 0;
  for (int ax = 0; ax < 4; ++ax) {
    std::vector<cplx> d = derivative(psi, ax);
    for (std::size_t p = 0; p < g.points(); ++p) {
      double k = point(g, p)[ax];
      num += k * (std::conj(psi.psi[2 * p]) * d[2 * p] + std::conj(psi.psi[2 * p + 1]) * d[2 * p + 1]).real();
    }
  }
  for (const cplx& v : psi.psi) den += std::norm(v);
  double w = -num / den;
  Calibration c;
  c.weight = w;

  auto residuals = [&](cplx weight) {
    OracleConfig cc = cfg_;
    cc.samples = std::min(cfg_.samples, 2);
    cc.d_weight = weight;
    Oracle o(cc);
    std::vector<Job> jobs{bracket_job("DM", atoms::D(), atoms::M(), NCPoly::atom(atoms::M()), cfg_.tol)};
    for (int mu = 0; mu < 4; ++mu)
      jobs.push_back(bracket_job("DP", atoms::D(), atoms::P(mu), NCPoly::atom(atoms::P(mu)), cfg_.tol));
    auto rs = o.run(jobs);
    double dm = rs[0].residual, dp = 0;
    for (std::size_t k = 1; k < rs.size(); ++k) dp = std::max(dp, rs[k].residual);
    return std::pair{dm, dp};
  };
  auto [dm, dp] = residuals(c.weight);
  auto [dm2, dp2] = residuals(c.weight + 1.0);
  c.dm_residual = dm;
  c.dp_residual = dp;
  c.weight_sensitivity = std::max(std::abs(dm - dm2), std::abs(dp - dp2));
  return c;
}

std::vector<ConvergenceReport> convergence_study(const OracleConfig& cfg) {
  using namespace atoms;
  OracleConfig coarse = cfg, fine = cfg;
  coarse.box = 2 * cfg.box;
  coarse.samples = fine.samples = std::min(cfg.samples, 2);
  // Fixed centers keep both grids inside the region.
  auto run = [](const OracleConfig& c) {
    OracleConfig cc = c;
    std::vector<GridState> samples;
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> ph(-1.0, 1.0);
    for (int k = 0; k < c.samples; ++k) {
      Vec4 ctr{2.5, 0.0, 0.0, 0.0};
      Grid g = sample_grid(cc, ctr);
      if (!g.inside_region()) throw OracleError("convergence grid leaves the region");
      samples.push_back(make_wavepacket(g, ctr, c.sigma, {cplx(1, 0), cplx(0, 0)}, {ph(rng), ph(rng), ph(rng), ph(rng)}));
    }
    Representation rep(c.d_weight, c.epsilon_sign);
    std::vector<std::pair<std::string, double>> res;
    auto bracket = [&](const std::string& id, const NCPoly& a, const NCPoly& b, const NCPoly& r) {
      OpPtr A = rep.op(a), B = rep.op(b), R = rep.op(r);
      double worst = 0;
      for (auto& s : samples)
        worst = std::max(worst, relative_residual(numeric_commutator(*A, *B, s), R->apply(s), s, c.margin));
      res.push_back({id, worst});
    };
    bracket("(P_0,X_0)", NCPoly::atom(P(0)), NCPoly::atom(X(0)), NCPoly(-1));
    bracket("(X_1,M)", NCPoly::atom(X(1)), NCPoly::atom(M()), word_poly({P(1), Minv()}));
    bracket("(D,P_2)", NCPoly::atom(D()), NCPoly::atom(P(2)), NCPoly::atom(P(2)));
    bracket("(J_01,P_1)", NCPoly::atom(J(0, 1)), NCPoly::atom(P(1)), NCPoly::atom(P(0)) * GaussRational(-1));
    return res;
  };
  auto rc = run(coarse), rf = run(fine);
  std::vector<ConvergenceReport> out;
  for (std::size_t k = 0; k < rc.size(); ++k) {
    ConvergenceReport r;
    r.id = rc[k].first;
    r.coarse = rc[k].second;
    r.fine = rf[k].second;
    r.ratio = r.fine > 0 ? r.coarse / r.fine : INFINITY;
    r.pass = r.ratio >= 64 || r.fine <= 1e-10;
    out.push_back(r);
  }
  return out;
}

std::optional<Rational> snap_rational(double x, int max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  for (int q = 1; q <= max_den; ++q) {
    double p = std::round(x * q);
    if (std::abs(x - p / q) <= tol) {
      Rational r(long(p), q);
      r.canonicalize();
      return r;
    }
  }
  return std::nullopt;
}

} // namespace qhexa::repnum
