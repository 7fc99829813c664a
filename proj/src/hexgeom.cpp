#include "qhexa/hexgeom.hpp"

#include "qhexa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qhexa::hexgeom {

namespace {

constexpr int kMinus = 0, kPlus = 1;

double eta4(int mu) { return mu == 0 ? 1.0 : -1.0; }
double eta6(int a) { return (a == kMinus || a >= 3) ? -1.0 : 1.0; }

double max_abs(const Vec6& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const Vec4& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double euclid_sq(const Vec4& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

Vec4 sub(const Vec4& a, const Vec4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }

} // namespace

Hyperboloid Hyperboloid::make(const Vec4& omega, double rho_sq, double k_sq) {
  if (rho_sq == 0) throw DomainError("hyperboloid with zero radius; use lift for points");
  return {omega, rho_sq, k_sq, -k_sq / rho_sq};
}

double minkowski(const Vec4& a, const Vec4& b) {
  double s = 0;
  for (int mu = 0; mu < 4; ++mu) s += eta4(mu) * a[mu] * b[mu];
  return s;
}

Vec4 lower(const Vec4& x) { return {x[0], -x[1], -x[2], -x[3]}; }

double hexa_dot(const HexaPoint& a, const HexaPoint& b) {
  double s = 0;
  for (int k = 0; k < 6; ++k) s += eta6(k) * a.y[k] * b.y[k];
  return s;
}

double hexa_sq(const HexaPoint& y) { return hexa_dot(y, y); }

HexaPoint lift(const SpaceTimePoint& p) {
  Vec4 xl = lower(p.x);
  double plus_minus = p.lam * minkowski(p.x, p.x);  // y_+ - y_-
  HexaPoint y;
  y.y[kPlus] = 0.5 * (-p.lam + plus_minus);
  y.y[kMinus] = 0.5 * (-p.lam - plus_minus);
  for (int mu = 0; mu < 4; ++mu) y.y[2 + mu] = p.lam * xl[mu];
  return y;
}

SpaceTimePoint project(const HexaPoint& y) {
  double lam = -(y.y[kMinus] + y.y[kPlus]);
  if (lam == 0) throw DomainError("hexaspherical point at infinity (y_- + y_+ = 0)");
  SpaceTimePoint p;
  p.lam = lam;
  Vec4 xl;
  for (int mu = 0; mu < 4; ++mu) xl[mu] = y.y[2 + mu] / lam;
  p.x = lower(xl);
  return p;
}

double conformal_denominator(const Vec4& x, const Accel& a) {
  return 1 - 2 * minkowski(a.alpha, x) + minkowski(a.alpha, a.alpha) * minkowski(x, x);
}

SpaceTimePoint conformal_map(const SpaceTimePoint& p, const Accel& a) {
  double den = conformal_denominator(p.x, a);
  if (den == 0) throw DomainError("point on the conformal horizon (vanishing denominator)");
  double x2 = minkowski(p.x, p.x);
  SpaceTimePoint q;
  for (int mu = 0; mu < 4; ++mu) q.x[mu] = (p.x[mu] - x2 * a.alpha[mu]) / den;
  q.lam = den * p.lam;
  return q;
}

HexaPoint rotate_hexa(const HexaPoint& y, const Accel& a) {
  Vec4 al = lower(a.alpha);
  double mp = y.y[kMinus] - y.y[kPlus];
  double ay = 0;
  for (int mu = 0; mu < 4; ++mu) ay += a.alpha[mu] * y.y[2 + mu];
  double sum = y.y[kMinus] + y.y[kPlus] + 2 * ay + minkowski(a.alpha, a.alpha) * mp;
  HexaPoint r;
  r.y[kMinus] = 0.5 * (sum + mp);
  r.y[kPlus] = 0.5 * (sum - mp);
  for (int mu = 0; mu < 4; ++mu) r.y[2 + mu] = y.y[2 + mu] + al[mu] * mp;
  return r;
}

double pair_invariant(const HexaPoint& y, const HexaPoint& yp) {
  HexaPoint d;
  for (int k = 0; k < 6; ++k) d.y[k] = y.y[k] - yp.y[k];
  return hexa_sq(d);
}

HexaPoint hyperboloid_lift(const Hyperboloid& h) {
  if (h.rho_sq == 0) throw DomainError("hyperboloid with zero radius; use lift for points");
  if (!(h.lam_sq > 0)) throw DomainError("hyperboloid has no real conformal factor (lam^2 <= 0)");
  double lam = std::sqrt(h.lam_sq);
  Vec4 om_up = lower(h.omega);
  double plus_minus = lam * (minkowski(om_up, om_up) + h.rho_sq);
  HexaPoint y;
  y.y[kPlus] = 0.5 * (-lam + plus_minus);
  y.y[kMinus] = 0.5 * (-lam - plus_minus);
  for (int mu = 0; mu < 4; ++mu) y.y[2 + mu] = lam * h.omega[mu];
  return y;
}

Hyperboloid hyperboloid_map(const Hyperboloid& h, const Accel& a) {
  Vec4 om_up = lower(h.omega);
  Vec4 al = lower(a.alpha);
  double w = minkowski(om_up, om_up) + h.rho_sq;
  double n = 1 - 2 * minkowski(a.alpha, om_up) + minkowski(a.alpha, a.alpha) * w;
  if (n == 0) throw DomainError("transformed inverse radius vanishes (hyperboloid horizon)");
  Hyperboloid r;
  for (int mu = 0; mu < 4; ++mu) r.omega[mu] = (h.omega[mu] - al[mu] * w) / n;
  r.rho_sq = h.rho_sq / (n * n);
  r.k_sq = h.k_sq;
  r.lam_sq = h.lam_sq * n * n;
  return r;
}

double projective_distance(const HexaPoint& a, const HexaPoint& b) {
  // Best scale s minimizing |a - s b|, relative to |a|.
  double ab = 0, bb = 0, aa = 0;
  for (int k = 0; k < 6; ++k) {
    ab += a.y[k] * b.y[k];
    bb += b.y[k] * b.y[k];
    aa += a.y[k] * a.y[k];
  }
  if (aa == 0 || bb == 0) return (aa == bb) ? 0.0 : 1.0;
  double s = ab / bb, d = 0;
  for (int k = 0; k < 6; ++k) d += (a.y[k] - s * b.y[k]) * (a.y[k] - s * b.y[k]);
  return std::sqrt(d / aa);
}

MetricReport metric_check(const SpaceTimePoint& p, const Vec4& dx, const Accel& a, double h) {
  // Accelerated-frame factor: lam_bar(xb) = lam / den_{-a}(xb), so that mapping
  // back to the inertial frame gives the constant p.lam.
  auto lifted = [&](const Vec4& xb) {
    double den = conformal_denominator(xb, -a);
    if (den == 0) throw DomainError("metric check crosses the conformal horizon");
    return lift({xb, p.lam / den});
  };
  double lam_bar = p.lam / conformal_denominator(p.x, -a);
  double scale = euclid_sq(dx);
  if (scale == 0) throw DomainError("metric check needs a nonzero displacement");
  auto defect = [&](double step) {
    Vec4 xp = p.x, xm = p.x;
    for (int mu = 0; mu < 4; ++mu) {
      xp[mu] += step * dx[mu];
      xm[mu] -= step * dx[mu];
    }
    HexaPoint yp = lifted(xp), ym = lifted(xm), dy;
    for (int k = 0; k < 6; ++k) dy.y[k] = 0.5 * (yp.y[k] - ym.y[k]);
    double lhs = hexa_sq(dy);
    double rhs = lam_bar * lam_bar * step * step * minkowski(dx, dx);
    return std::abs(lhs - rhs) / (lam_bar * lam_bar * step * step * scale);
  };
  MetricReport r;
  r.defect_h = defect(h);
  r.defect_h2 = defect(h / 2);
  r.ratio = r.defect_h2 > 0 ? r.defect_h / r.defect_h2 : INFINITY;
  r.exact = r.defect_h <= 1e-10 && r.defect_h2 <= 1e-10;
  return r;
}

namespace {

struct Sampler {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> coord{-2.0, 2.0}, acc{-0.5, 0.5}, unit{0.0, 1.0};

  Vec4 point() { return {coord(rng), coord(rng), coord(rng), coord(rng)}; }
  Accel accel() { return {{acc(rng), acc(rng), acc(rng), acc(rng)}}; }
  double lam() {
    double v = 0.5 + 1.5 * unit(rng);
    return unit(rng) < 0.5 ? -v : v;
  }
  HexaPoint hexa() {
    HexaPoint y;
    for (double& v : y.y) v = coord(rng);
    return y;
  }
};

struct Tracker {
  PropertyResult r;
  Tracker(std::string id, double tol) { r = {std::move(id), 0, tol, 0, false}; }
  void add(double err) {
    r.max_error = std::max(r.max_error, std::isfinite(err) ? err : INFINITY);
    ++r.samples;
  }
  PropertyResult done() {
    r.pass = r.samples > 0 && r.max_error <= r.tol;
    return r;
  }
};

double rel6(const HexaPoint& a, const HexaPoint& b) {
  Vec6 d;
  for (int k = 0; k < 6; ++k) d[k] = a.y[k] - b.y[k];
  return max_abs(d) / std::max({1.0, max_abs(a.y), max_abs(b.y)});
}

} // namespace

std::vector<PropertyResult> property_suite(std::uint64_t seed, int samples) {
  Sampler s{std::mt19937_64(seed)};
  Tracker quadric("quadric", 1e-12), roundtrip("lift-project", 1e-12), diagram("commuting-diagram", 1e-9),
      hexinv("hexinv", 1e-9), frame("hexinv-frame-invariance", 1e-9), scalar("rotation-scalar-products", 1e-12),
      cone("light-cone-conjugacy", 1e-12), inverse("inverse-composition", 1e-9), inverse_rot("inverse-rotation", 1e-12),
      square("hyperboloid-square", 1e-9), hyp_sq("hyperboloid-y2", 1e-9), limit("hyperboloid-point-limit", 1e-9),
      metric("metric-order", 0.5);
  auto accel_ok = [](const Vec4& x, const Accel& a) { return std::abs(conformal_denominator(x, a)) >= 1e-3; };

  for (int i = 0; i < samples; ++i) {
    SpaceTimePoint p{s.point(), s.lam()}, q{s.point(), s.lam()};
    Accel a = s.accel();
    HexaPoint y = lift(p), yq = lift(q);

    quadric.add(std::abs(hexa_sq(y)) / std::pow(std::max(1.0, max_abs(y.y)), 2));

    SpaceTimePoint back = project(y);
    roundtrip.add(std::max(max_abs(sub(back.x, p.x)) / std::max(1.0, max_abs(p.x)),
                           std::abs(back.lam - p.lam) / std::abs(p.lam)));

    double rhs = p.lam * q.lam * minkowski(sub(p.x, q.x), sub(p.x, q.x));
    double scale = std::max(1.0, std::abs(p.lam * q.lam) * euclid_sq(sub(p.x, q.x)));
    hexinv.add(std::abs(pair_invariant(y, yq) - rhs) / scale);

    HexaPoint u = s.hexa(), v = s.hexa();
    HexaPoint ru = rotate_hexa(u, a), rv = rotate_hexa(v, a);
    scalar.add(std::abs(hexa_dot(ru, rv) - hexa_dot(u, v)) /
               std::max(1.0, max_abs(ru.y) * max_abs(rv.y) + max_abs(u.y) * max_abs(v.y)));
    inverse_rot.add(rel6(rotate_hexa(ru, -a), u));

    // Null separation: q' = p + t (1, n) with |n| = 1.
    {
      Vec4 n{s.coord(s.rng), s.coord(s.rng), s.coord(s.rng), 0};
      n[3] = 0;
      double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
      if (len > 1e-6) {
        double t = s.coord(s.rng);
        Vec4 xq{p.x[0] + t, p.x[1] + t * n[0] / len, p.x[2] + t * n[1] / len, p.x[3] + t * n[2] / len};
        HexaPoint yc = lift({xq, s.lam()});
        cone.add(std::abs(hexa_dot(y, yc)) / std::max(1.0, max_abs(y.y) * max_abs(yc.y)));
      }
    }

    if (accel_ok(p.x, a) && accel_ok(q.x, a)) {
      SpaceTimePoint pb = conformal_map(p, a), qb = conformal_map(q, a);
      HexaPoint ry = rotate_hexa(y, a);
      diagram.add(rel6(ry, lift(pb)));
      double inv_b = pb.lam * qb.lam * minkowski(sub(pb.x, qb.x), sub(pb.x, qb.x));
      HexaPoint ryq = rotate_hexa(yq, a);
      double sc = std::max({1.0, max_abs(ry.y) * max_abs(ryq.y), std::abs(rhs)});
      frame.add(std::abs(inv_b - rhs) / sc);
      if (accel_ok(pb.x, -a)) {
        SpaceTimePoint pp = conformal_map(pb, -a);
        inverse.add(std::max(max_abs(sub(pp.x, p.x)) / std::max(1.0, max_abs(p.x)),
                             std::abs(pp.lam - p.lam) / std::abs(p.lam)));
      }
    }

    // Hyperboloids with lam^2 > 0: k^2 and rho^2 of opposite signs.
    {
      double rho_sq = (s.unit(s.rng) < 0.5 ? -1 : 1) * (0.1 + s.unit(s.rng));
      double k_sq = -std::copysign(0.1 + s.unit(s.rng), rho_sq);
      Hyperboloid h = Hyperboloid::make(lower(s.point()), rho_sq, k_sq);
      HexaPoint yh = hyperboloid_lift(h);
      double ysq = hexa_sq(yh), sc = std::max(1.0, max_abs(yh.y) * max_abs(yh.y));
      hyp_sq.add(std::max(std::abs(ysq - h.k_sq), std::abs(ysq + h.lam_sq * h.rho_sq)) / sc);
      Vec4 om_up = lower(h.omega);
      double n = 1 - 2 * minkowski(a.alpha, om_up) + minkowski(a.alpha, a.alpha) * (minkowski(om_up, om_up) + rho_sq);
      if (std::abs(n) >= 1e-3) square.add(projective_distance(hyperboloid_lift(hyperboloid_map(h, a)), rotate_hexa(yh, a)));

      Hyperboloid tiny = Hyperboloid::make(h.omega, 1e-14, -1e-14);
      if (accel_ok(om_up, a)) {
        Hyperboloid m = hyperboloid_map(tiny, a);
        SpaceTimePoint c = conformal_map({om_up, 1}, a);
        limit.add(max_abs(sub(lower(m.omega), c.x)) / std::max(1.0, max_abs(c.x)));
      }
    }

    // Second-order convergence of the metric relation, away from the horizon.
    {
      Vec4 dx{s.coord(s.rng), s.coord(s.rng), s.coord(s.rng), s.coord(s.rng)};
      double den = conformal_denominator(p.x, -a);
      if (std::abs(den) >= 0.1) {
        MetricReport m = metric_check(p, dx, a, 1e-3 * std::abs(den));
        if (!m.exact) metric.add(std::abs(m.ratio - 4.0));
      }
    }
  }
  return {quadric.done(), roundtrip.done(), diagram.done(),  hexinv.done(), frame.done(),
          scalar.done(),  cone.done(),      inverse.done(),  inverse_rot.done(), square.done(),
          hyp_sq.done(),  limit.done(),     metric.done()};
}

} // namespace qhexa::hexgeom
