#include "qhexa/errors.hpp"
#include "qhexa/hexgeom.hpp"

#include <doctest.h>

#include <cmath>

using namespace qhexa;
using namespace qhexa::hexgeom;

namespace {

void check_vec(const Vec6& a, const Vec6& b, double tol = 1e-14) {
  for (int k = 0; k < 6; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(tol));
}

} // namespace

TEST_SUITE("hexgeom") {

TEST_CASE("lift") {
  check_vec(lift({{0, 0, 0, 0}, 1}).y, {-0.5, -0.5, 0, 0, 0, 0});
  HexaPoint y = lift({{1, 0, 0, 0}, 2});
  check_vec(y.y, {-2, 0, 2, 0, 0, 0});
  CHECK(hexa_sq(y) == 0);
  // y_mu carry lower indices
  check_vec(lift({{0, 1, 0, 0}, 1}).y, {0, -1, 0, -1, 0, 0});
}

TEST_CASE("project") {
  SpaceTimePoint p = project(HexaPoint{{-2, 0, 2, 0, 0, 0}});
  CHECK(p.lam == 2);
  CHECK(p.x == Vec4{1, 0, 0, 0});
  SpaceTimePoint q = project(lift({{1, 2, 0, 0}, 3}));
  CHECK(q.lam == doctest::Approx(3).epsilon(1e-12));
  CHECK(q.x[1] == doctest::Approx(2).epsilon(1e-12));
  CHECK_THROWS_AS(project(HexaPoint{{1, -1, 0, 0, 0, 0}}), DomainError);
}

TEST_CASE("conformal map") {
  SpaceTimePoint p{{0.3, -1, 0.5, 2}, 1.5};
  SpaceTimePoint id = conformal_map(p, Accel{});
  CHECK(id.x == p.x);
  CHECK(id.lam == p.lam);
  SpaceTimePoint q = conformal_map({{1, 0, 0, 0}, 1}, Accel{{0.5, 0, 0, 0}});
  CHECK(conformal_denominator({1, 0, 0, 0}, Accel{{0.5, 0, 0, 0}}) == 0.25);
  CHECK(q.x[0] == 2);
  CHECK(q.lam == 0.25);
  Accel a{{0.2, -0.1, 0.3, 0.05}};
  SpaceTimePoint back = conformal_map(conformal_map(p, a), -a);
  for (int mu = 0; mu < 4; ++mu) CHECK(back.x[mu] == doctest::Approx(p.x[mu]).epsilon(1e-9));
  CHECK(back.lam == doctest::Approx(p.lam).epsilon(1e-9));
  CHECK_THROWS_AS(conformal_map({{2, 0, 0, 0}, 1}, Accel{{0.5, 0, 0, 0}}), DomainError);
}

TEST_CASE("rotation") {
  HexaPoint y{{0.3, -1.2, 0.7, 2.0, -0.4, 1.1}};
  check_vec(rotate_hexa(y, Accel{}).y, y.y);
  Accel a{{0.4, 0.1, -0.3, 0.2}};
  HexaPoint r = rotate_hexa(y, a);
  CHECK(r.y[1] - r.y[0] == doctest::Approx(y.y[1] - y.y[0]).epsilon(1e-14));
  CHECK(hexa_sq(r) == doctest::Approx(hexa_sq(y)).epsilon(1e-12));
  SpaceTimePoint p{{0.5, 0.2, -0.7, 1.0}, 1.3};
  HexaPoint d1 = rotate_hexa(lift(p), a), d2 = lift(conformal_map(p, a));
  for (int k = 0; k < 6; ++k) CHECK(d1.y[k] == doctest::Approx(d2.y[k]).epsilon(1e-9));
}

TEST_CASE("pair invariant") {
  HexaPoint y = lift({{1, 1, 0, 0}, 1}), y0 = lift({{0, 0, 0, 0}, 1});
  CHECK(pair_invariant(y, y0) == doctest::Approx(0).epsilon(1e-15));
  CHECK(hexa_dot(y, y0) == doctest::Approx(0).epsilon(1e-15));
  CHECK(pair_invariant(y, y) == 0);
  SpaceTimePoint p{{0.5, 0.2, -0.7, 1.0}, 1.3}, q{{-1, 0.4, 0.1, 0.3}, -0.6};
  Vec4 d{p.x[0] - q.x[0], p.x[1] - q.x[1], p.x[2] - q.x[2], p.x[3] - q.x[3]};
  double inv = pair_invariant(lift(p), lift(q));
  CHECK(inv == doctest::Approx(p.lam * q.lam * minkowski(d, d)).epsilon(1e-12));
  Accel a{{-0.3, 0.2, 0.1, 0.4}};
  CHECK(pair_invariant(rotate_hexa(lift(p), a), rotate_hexa(lift(q), a)) == doctest::Approx(inv).epsilon(1e-9));
}

TEST_CASE("hyperboloid") {
  Hyperboloid h = Hyperboloid::make({0, 0, 0, 0}, -1, 1);
  CHECK(h.lam_sq == 1);
  HexaPoint y = hyperboloid_lift(h);
  check_vec(y.y, {0, -1, 0, 0, 0, 0});
  CHECK(hexa_sq(y) == 1);
  CHECK_THROWS_AS(Hyperboloid::make({0, 0, 0, 0}, 0, 0), DomainError);
  CHECK_THROWS_AS(hyperboloid_lift(Hyperboloid::make({0, 0, 0, 0}, 1, 1)), DomainError);
  Hyperboloid g = Hyperboloid::make({0.2, -0.5, 0.1, 0.3}, 0.7, -0.4);
  HexaPoint yg = hyperboloid_lift(g);
  CHECK(hexa_sq(yg) == doctest::Approx(-g.lam_sq * g.rho_sq).epsilon(1e-9));
  Hyperboloid same = hyperboloid_map(g, Accel{});
  CHECK(same.omega == g.omega);
  CHECK(same.rho_sq == g.rho_sq);
  Accel a{{0.1, 0.3, -0.2, 0.05}};
  CHECK(projective_distance(hyperboloid_lift(hyperboloid_map(g, a)), rotate_hexa(yg, a)) < 1e-9);
}

TEST_CASE("point limit of the hyperboloid map") {
  Vec4 om{0.3, -0.2, 0.5, 0.1};
  Accel a{{0.2, 0.1, -0.1, 0.3}};
  Hyperboloid m = hyperboloid_map(Hyperboloid::make(om, 1e-14, -1e-14), a);
  SpaceTimePoint c = conformal_map({lower(om), 1}, a);
  Vec4 mu = lower(m.omega);
  for (int k = 0; k < 4; ++k) CHECK(mu[k] == doctest::Approx(c.x[k]).epsilon(1e-9));
}

TEST_CASE("metric check") {
  SpaceTimePoint p{{0.4, -0.3, 0.2, 0.6}, 1.7};
  MetricReport inertial = metric_check(p, {0.3, 1.0, -0.5, 0.2}, Accel{});
  CHECK(inertial.exact);
  MetricReport r = metric_check(p, {0.3, 1.0, -0.5, 0.2}, Accel{{0.2, 0.1, -0.3, 0.1}});
  CHECK_FALSE(r.exact);
  CHECK(r.ratio >= 3.5);
  CHECK(r.ratio <= 4.5);
  // null displacement: (dy)^2 is second order in h
  MetricReport nul = metric_check(p, {1, 1, 0, 0}, Accel{{0.2, 0.1, -0.3, 0.1}}, 1e-3);
  CHECK(nul.defect_h < 1e-4);
}

TEST_CASE("property suite") {
  auto res = property_suite(20240101, 1000);
  CHECK(res.size() >= 10);
  for (const auto& r : res) {
    CHECK_MESSAGE(r.pass, r.id << " max error " << r.max_error);
    CHECK(r.samples >= 900);
  }
  auto again = property_suite(20240101, 1000);
  for (std::size_t k = 0; k < res.size(); ++k) CHECK(again[k].max_error == res[k].max_error);
}

}
