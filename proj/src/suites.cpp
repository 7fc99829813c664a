#include "qhexa/builders.hpp"
#include "qhexa/conformal.hpp"
#include "qhexa/errors.hpp"

#include <chrono>
#include <map>
#include <random>

namespace qhexa::conformal {

using namespace build;

namespace {

using Clock = std::chrono::steady_clock;

class Runner {
public:
  Runner(std::string suite, Basis b, const RewriteSystem& rw, std::vector<IdentityReport>& out)
      : suite_(std::move(suite)), basis_(b), rw_(rw), out_(out) {}

  /// Records normalize(diff) as the residual of one identity instance.
  template <class F>
  void check(const std::string& detail, F&& diff) {
    auto t0 = Clock::now();
    IdentityReport r;
    r.id = suite_ + "[" + to_string(basis_) + "]:" + detail;
    r.basis = basis_;
    r.residual = rw_.normalize(diff());
    r.pass = r.residual.is_zero();
    r.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    out_.push_back(std::move(r));
  }

  void flag(const std::string& detail, bool ok, const std::string& note) {
    IdentityReport r;
    r.id = suite_ + "[" + to_string(basis_) + "]:" + detail;
    r.basis = basis_;
    r.pass = ok;
    r.note = note;
    if (!ok) r.residual = NCPoly(1);
    out_.push_back(std::move(r));
  }

  const RewriteSystem& rw() const { return rw_; }

private:
  std::string suite_;
  Basis basis_;
  const RewriteSystem& rw_;
  std::vector<IdentityReport>& out_;
};

std::vector<std::pair<int, int>> so42_pairs() {
  std::vector<std::pair<int, int>> g;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) g.push_back({a, b});
  return g;
}

std::string pair_name(int a, int b) { return "(" + hex_name(a) + hex_name(b) + ")"; }

std::vector<Atom> basis_atoms(Basis b) {
  std::vector<Atom> out{atoms::Minv(), atoms::M()};
  for (int mu = 0; mu < 4; ++mu) out.push_back(atoms::P(mu));
  if (b == Basis::A) {
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu) out.push_back(atoms::J(mu, nu));
    out.push_back(atoms::D());
    for (int mu = 0; mu < 4; ++mu) out.push_back(atoms::C(mu));
  } else {
    for (int mu = 0; mu < 4; ++mu) out.push_back(atoms::S(mu));
    for (int mu = 0; mu < 4; ++mu) out.push_back(atoms::X(mu));
  }
  return out;
}

NCPoly Z_of(const ObservableSet& o) { return o.Y[kPlus] - o.Y[kMinus]; }

NCPoly alpha_dot(const AccelParams& a, const std::array<NCPoly, 4>& v) {
  NCPoly s;
  for (int mu = 0; mu < 4; ++mu)
    if (sgn(a.alpha[mu]) != 0) s += v[mu] * GaussRational(a.alpha[mu]);
  return s;
}

/// M - 2 alpha^mu Y_mu + alpha^2 (Y_+ - Y_-)
NCPoly boosted_mass_closed_form(const ObservableSet& o, const AccelParams& a) {
  std::array<NCPoly, 4> y{o.Y[2], o.Y[3], o.Y[4], o.Y[5]};
  return o.M - 2 * alpha_dot(a, y) + Z_of(o) * GaussRational(a.alpha_sq());
}

std::vector<AccelParams> standard_accels(const SuiteOptions& opt) {
  if (opt.alpha) return {*opt.alpha};
  std::vector<AccelParams> out;
  out.push_back(AccelParams{});
  out.push_back(AccelParams::parse("1/2,0,0,0"));
  out.push_back(AccelParams::parse("0,1/3,0,0"));
  for (auto& a : random_accels(opt.seed, 3)) out.push_back(a);
  return out;
}

// --- suites --------------------------------------------------------------

void suite_JJ(Runner& r, const ObservableSet& o) {
  auto g = so42_pairs();
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t y = x + 1; y < g.size(); ++y) {
      auto [a, b] = g[x];
      auto [c, d] = g[y];
      r.check(pair_name(a, b) + "," + pair_name(c, d), [&] {
        return r.rw().commutator(o.Jab[a][b], o.Jab[c][d]) - so42_rhs(o.Jab, a, b, c, d);
      });
    }
}

void suite_JY(Runner& r, const ObservableSet& o) {
  for (auto [a, b] : so42_pairs())
    for (int c = 0; c < 6; ++c)
      r.check(pair_name(a, b) + ",Y_" + hex_name(c), [&] {
        return r.rw().commutator(o.Jab[a][b], o.Y[c]) - (eta6(b, c) * o.Y[a] - eta6(a, c) * o.Y[b]);
      });
}

void suite_YY(Runner& r, const ObservableSet& o) {
  for (auto [a, b] : so42_pairs())
    r.check("Y_" + hex_name(a) + ",Y_" + hex_name(b),
            [&] { return r.rw().commutator(o.Y[a], o.Y[b]) - o.Jab[a][b]; });
}

void suite_YYY(Runner& r, const ObservableSet& o) {
  std::array<std::array<NCPoly, 6>, 6> yy;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) yy[a][b] = a < b ? r.rw().commutator(o.Y[a], o.Y[b]) : (a == b ? NCPoly() : -yy[b][a]);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c)
        r.check("Y_" + hex_name(a) + ",Y_" + hex_name(b) + ",Y_" + hex_name(c), [&] {
          return r.rw().commutator(yy[a][b], o.Y[c]) - (eta6(b, c) * o.Y[a] - eta6(a, c) * o.Y[b]);
        });
}

void suite_CY(Runner& r, const ObservableSet& o) {
  NCPoly z = Z_of(o);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu)
      r.check("C_" + std::to_string(mu) + ",Y_" + std::to_string(nu),
              [&] { return r.rw().commutator(o.C[mu], o.Y[hex(nu)]) - eta(mu, nu) * z; });
    r.check("C_" + std::to_string(mu) + ",Y_+-Y_-", [&] { return r.rw().commutator(o.C[mu], z); });
  }
}

void suite_CM(Runner& r, const ObservableSet& o) {
  const auto& rw = r.rw();
  for (int mu = 0; mu < 4; ++mu)
    r.check("C_" + std::to_string(mu) + ",M",
            [&] { return rw.commutator(o.C[mu], o.M) - 2 * o.Y[hex(mu)]; });
  if (o.basis != Basis::A) return;
  // (C, M^2) from the mass entry by Leibniz vs (C, P^2) from the generator table.
  for (int mu = 0; mu < 4; ++mu)
    r.check("C_" + std::to_string(mu) + ",M^2-P^2", [&] {
      NCPoly cm = rw.commutator(C(mu), M());
      NCPoly via_m = rw.product(M(), cm) + rw.product(cm, M());
      NCPoly via_p;
      for (int rho = 0; rho < 4; ++rho) {
        NCPoly cp = rw.commutator(C(mu), P(rho));
        via_p += up(rw.product(P(rho), cp) + rw.product(cp, P(rho)), rho);
      }
      return via_m - via_p;
    });
}

void suite_PX(Runner& r, const ObservableSet& o) {
  const auto& rw = r.rw();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      r.check("P_" + std::to_string(mu) + ",X_" + std::to_string(nu),
              [&] { return rw.commutator(o.P[mu], o.X[nu]) + NCPoly(eta(mu, nu)); });
  for (int mu = 0; mu < 4; ++mu)
    r.check("D,X_" + std::to_string(mu), [&] { return rw.commutator(o.D, o.X[mu]) + o.X[mu]; });
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho)
        r.check("J_" + std::to_string(mu) + std::to_string(nu) + ",X_" + std::to_string(rho), [&] {
          return rw.commutator(o.J[mu][nu], o.X[rho]) - (eta(nu, rho) * o.X[mu] - eta(mu, rho) * o.X[nu]);
        });
}

void suite_XX(Runner& r, const ObservableSet& o) {
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      r.check("X_" + std::to_string(mu) + ",X_" + std::to_string(nu), [&] {
        return r.rw().commutator(o.X[mu], o.X[nu]) - multiply(o.S_pair[mu][nu], mass_power(-2));
      });
}

void suite_inverse(Runner& r, const ObservableSet& o) {
  const auto& rw = r.rw();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      r.check("J_" + std::to_string(mu) + std::to_string(nu), [&] {
        return o.J[mu][nu] - (rw.sym(o.P[mu], o.X[nu]) - rw.sym(o.P[nu], o.X[mu]) + o.S_pair[mu][nu]);
      });
  r.check("D", [&] {
    NCPoly d;
    for (int mu = 0; mu < 4; ++mu) d += up(rw.sym(o.P[mu], o.X[mu]), mu);
    return o.D - d;
  });
}

void suite_S2(Runner& r, const ObservableSet& o) {
  r.check("S^2", [&] {
    NCPoly s2;
    for (int mu = 0; mu < 4; ++mu) s2 += up(r.rw().product(o.S[mu], o.S[mu]), mu);
    return s2 + (frac(3, 4) * NCPoly(1)).shift_hbar(2);
  });
}

void suite_transverse(Runner& r, const ObservableSet& o) {
  r.check("S.P", [&] {
    NCPoly sp;
    for (int mu = 0; mu < 4; ++mu) sp += up(r.rw().sym(o.S[mu], o.P[mu]), mu);
    return sp;
  });
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      r.check("P_" + std::to_string(mu) + ",S_" + std::to_string(nu),
              [&] { return r.rw().commutator(o.P[mu], o.S[nu]); });
}

void suite_spinhalf(Runner& r, const ObservableSet& o) {
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu; nu < 4; ++nu)
      r.check("S_" + std::to_string(mu) + ".S_" + std::to_string(nu), [&] {
        NCPoly rhs = eta(mu, nu) * NCPoly(1) - multiply(multiply(P(mu), P(nu)), mass_power(-2));
        return r.rw().sym(o.S[mu], o.S[nu]) + (rhs * GaussRational(Rational(1, 4))).shift_hbar(2);
      });
}

NCPoly y_square(const RewriteSystem& rw, const std::array<NCPoly, 6>& Y) {
  NCPoly s;
  for (int a = 0; a < 6; ++a) s += eta6(a, a) * rw.product(Y[a], Y[a]);
  return s;
}

void suite_Y2(Runner& r, const ObservableSet& o, const SuiteOptions& opt) {
  r.check("Y^2", [&] { return y_square(r.rw(), o.Y) - NCPoly::hbar(2); });
  for (const auto& a : random_accels(opt.seed + 1, 3))
    r.check("boost(Y)^2@" + a.str(), [&] {
      std::array<NCPoly, 6> yb;
      for (int k = 0; k < 6; ++k) yb[k] = boost(o.Y[k], a, r.rw(), o.C).value;
      return y_square(r.rw(), yb) - NCPoly::hbar(2);
    });
}

void suite_nonassoc(Runner& r, Basis b) {
  const auto& rw = r.rw();
  auto at = basis_atoms(b);
  GaussRational q(Rational(1, 4));
  for (const Atom& x : at)
    for (const Atom& y : at)
      for (const Atom& z : at)
        r.check(x.name() + "," + y.name() + "," + z.name(), [&] {
          NCPoly A = NCPoly::atom(x), B = NCPoly::atom(y), C = NCPoly::atom(z);
          NCPoly lhs = rw.sym(A, rw.sym(B, C)) - rw.sym(rw.sym(A, B), C);
          return lhs - (rw.commutator(B, rw.commutator(A, C)) * q).shift_hbar(2);
        });
}

void suite_jacobi(Runner& r, Basis b) {
  const auto& rw = r.rw();
  auto at = basis_atoms(b);
  std::map<std::pair<int, int>, NCPoly> br;
  auto bracket = [&](const Atom& x, const Atom& y) -> const NCPoly& {
    auto key = std::make_pair<int, int>(x.id(), y.id());
    auto it = br.find(key);
    if (it == br.end()) it = br.emplace(key, rw.commutator(NCPoly::atom(x), NCPoly::atom(y))).first;
    return it->second;
  };
  for (const Atom& x : at)
    for (const Atom& y : at)
      for (const Atom& z : at)
        r.check(x.name() + "," + y.name() + "," + z.name(), [&] {
          NCPoly X = NCPoly::atom(x), Y = NCPoly::atom(y), Z = NCPoly::atom(z);
          return rw.commutator(bracket(x, y), Z) - rw.commutator(X, bracket(y, z)) + rw.commutator(Y, bracket(x, z));
        });
}

void suite_leibniz(Runner& r, Basis b, const SuiteOptions& opt) {
  const auto& rw = r.rw();
  auto at = basis_atoms(b);
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick(0, at.size() - 1);
  for (int k = 0; k < 64; ++k) {
    Atom x = at[pick(rng)], y = at[pick(rng)], z = at[pick(rng)];
    r.check(x.name() + " " + y.name() + "," + z.name(), [&] {
      NCPoly A = NCPoly::atom(x), B = NCPoly::atom(y), C = NCPoly::atom(z);
      return rw.commutator(multiply(A, B), C) - multiply(A, rw.commutator(B, C)) - multiply(rw.commutator(A, C), B);
    });
  }
}

/// Weighted degree: Minv counts -1, every other atom +1.
int weighted_degree(const Word& w) {
  int d = 0;
  for (std::size_t k = 0; k < w.size(); ++k) d += w.id(k) == atoms::Minv().id() ? -1 : 1;
  return d;
}

void suite_grading(Runner& r, Basis b, const SuiteOptions& opt) {
  const auto& rw = r.rw();
  auto at = basis_atoms(b);
  std::mt19937_64 rng(opt.seed + 7);
  std::uniform_int_distribution<std::size_t> pick(0, at.size() - 1);
  std::uniform_int_distribution<int> len(1, 3);
  for (int k = 0; k < 48; ++k) {
    Word u, v;
    for (int n = len(rng); n > 0; --n) u.push_back(at[pick(rng)].id());
    for (int n = len(rng); n > 0; --n) v.push_back(at[pick(rng)].id());
    int bound = weighted_degree(u) + weighted_degree(v) - 1;
    NCPoly c = rw.commutator(NCPoly::monomial(u), NCPoly::monomial(v));
    int worst = -1000;
    for (const auto& t : c.terms()) worst = std::max(worst, weighted_degree(t.word));
    r.flag(u.str() + "," + v.str(), worst <= bound,
           "max degree " + std::to_string(worst) + ", bound " + std::to_string(bound));
  }
}

void suite_PJDC(Runner& r, const ObservableSet& a_obs, const RewriteSystem& A, const ObservableSet& b_obs) {
  // Brackets of basis-A generators, translated, against brackets of the basis-B composites.
  std::vector<std::pair<std::string, NCPoly>> gen_a;
  std::map<std::uint8_t, NCPoly> image;
  for (int mu = 0; mu < 4; ++mu) {
    gen_a.push_back({"P_" + std::to_string(mu), a_obs.P[mu]});
    image[atoms::P(mu).id()] = b_obs.P[mu];
  }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      gen_a.push_back({"J_" + std::to_string(mu) + std::to_string(nu), a_obs.J[mu][nu]});
      image[atoms::J(mu, nu).id()] = b_obs.J[mu][nu];
    }
  gen_a.push_back({"D", a_obs.D});
  image[atoms::D().id()] = b_obs.D;
  for (int mu = 0; mu < 4; ++mu) {
    gen_a.push_back({"C_" + std::to_string(mu), a_obs.C[mu]});
    image[atoms::C(mu).id()] = b_obs.C[mu];
  }
  image[atoms::M().id()] = M();
  image[atoms::Minv().id()] = Minv();
  const auto& B = r.rw();
  auto translate = [&](const NCPoly& p) {
    NCPoly out;
    for (const auto& t : p.terms()) {
      NCPoly w(1);
      for (std::size_t k = 0; k < t.word.size(); ++k) w = B.product(w, image.at(t.word.id(k)));
      out += (w * t.coeff).shift_hbar(t.hbar);
    }
    return out;
  };
  for (std::size_t x = 0; x < gen_a.size(); ++x)
    for (std::size_t y = x + 1; y < gen_a.size(); ++y)
      r.check(gen_a[x].first + "," + gen_a[y].first, [&] {
        NCPoly in_a = A.commutator(gen_a[x].second, gen_a[y].second);
        return B.commutator(translate(gen_a[x].second), translate(gen_a[y].second)) - translate(in_a);
      });
}

void suite_boost(Runner& r, const ObservableSet& o, const SuiteOptions& opt) {
  const auto& rw = r.rw();
  NCPoly z = Z_of(o);
  std::vector<AccelParams> list{AccelParams::parse("1/2,0,0,0")};
  for (auto& a : random_accels(opt.seed + 11, opt.samples)) list.push_back(a);
  for (const auto& a : list) {
    std::string tag = "@" + a.str();
    auto bm = boost(o.M, a, rw, o.C);
    r.check("M" + tag, [&] { return bm.value - boosted_mass_closed_form(o, a); });
    int expect = a.alpha_sq() != 0 ? 2 : 1;
    r.flag("M-order" + tag, bm.terminated && bm.last_nonzero_order == expect,
           "series stopped after order " + std::to_string(bm.last_nonzero_order) +
               (bm.terminated ? "" : " (not terminated)"));
    for (int mu = 0; mu < 4; ++mu)
      r.check("Y_" + std::to_string(mu) + tag, [&] {
        return boost(o.Y[hex(mu)], a, rw, o.C).value - (o.Y[hex(mu)] - z * GaussRational(a.lower(mu)));
      });
    r.check("Y_+-Y_-" + tag, [&] { return boost(z, a, rw, o.C).value - z; });
    r.check("inverse(M)" + tag, [&] { return boost(bm.value, -a, rw, o.C).value - o.M; });
  }
  auto pairs = random_accels(opt.seed + 13, 2 * opt.samples);
  for (int k = 0; k + 1 < static_cast<int>(pairs.size()) && k < 2 * 3; k += 2) {
    const auto& a = pairs[k];
    const auto& b = pairs[k + 1];
    std::string tag = "@" + a.str() + "+" + b.str();
    r.check("group(M)" + tag,
            [&] { return boost(boost(o.M, a, rw, o.C).value, b, rw, o.C).value - boost(o.M, a + b, rw, o.C).value; });
    for (int c = 0; c < 6; ++c)
      r.check("group(Y_" + hex_name(c) + ")" + tag, [&] {
        return boost(boost(o.Y[c], a, rw, o.C).value, b, rw, o.C).value - boost(o.Y[c], a + b, rw, o.C).value;
      });
  }
}

std::vector<IdentityReport> free_fall_impl(const AccelParams& a, const ObservableSet& o, const RewriteSystem& rw,
                                           const std::string& suite) {
  std::vector<IdentityReport> out;
  Runner r(suite, Basis::B, rw, out);
  std::string tag = "@" + a.str();
  NCPoly mbar = boost(o.M, a, rw, o.C).value;
  auto d2 = [&](const NCPoly& f) { return motion_derivative(motion_derivative(f, mbar, rw), mbar, rw); };
  for (int mu = 0; mu < 4; ++mu)
    r.check("Y_" + std::to_string(mu) + "''" + tag,
            [&] { return d2(o.Y[hex(mu)]) - 2 * mbar * GaussRational(a.lower(mu)); });
  r.check("M''" + tag, [&] { return d2(o.M) - 2 * mbar * GaussRational(a.alpha_sq()); });
  r.check("(Y_+-Y_-)''" + tag, [&] { return d2(Z_of(o)) - 2 * mbar; });
  return out;
}

void suite_conservation(Runner& r, const ObservableSet& o, const SuiteOptions& opt) {
  const auto& rw = r.rw();
  for (const auto& a : standard_accels(opt)) {
    std::string tag = "@" + a.str();
    NCPoly mbar = boost(o.M, a, rw, o.C).value;
    std::array<NCPoly, 4> pbar;
    for (int mu = 0; mu < 4; ++mu) {
      pbar[mu] = boost(o.P[mu], a, rw, o.C).value;
      r.check("P_" + std::to_string(mu) + "'" + tag, [&] { return motion_derivative(pbar[mu], mbar, rw); });
    }
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu)
        r.check("J_" + std::to_string(mu) + std::to_string(nu) + "'" + tag,
                [&] { return motion_derivative(boost(o.J[mu][nu], a, rw, o.C).value, mbar, rw); });
    for (int mu = 0; mu < 4; ++mu) {
      NCPoly ybar = boost(o.Y[hex(mu)], a, rw, o.C).value;
      NCPoly d1 = motion_derivative(ybar, mbar, rw);
      r.check("Y_" + std::to_string(mu) + "'" + tag, [&] { return d1 - pbar[mu]; });
      r.check("Y_" + std::to_string(mu) + "''" + tag, [&] { return motion_derivative(d1, mbar, rw); });
    }
  }
}

void suite_motion_leibniz(Runner& r, const SuiteOptions& opt, const ObservableSet& o) {
  const auto& rw = r.rw();
  auto at = basis_atoms(Basis::B);
  std::mt19937_64 rng(opt.seed + 17);
  std::uniform_int_distribution<std::size_t> pick(0, at.size() - 1);
  auto accels = random_accels(opt.seed + 19, 2);
  for (const auto& a : accels) {
    NCPoly mbar = boost(o.M, a, rw, o.C).value;
    for (int k = 0; k < 8; ++k) {
      Atom x = at[pick(rng)], y = at[pick(rng)];
      r.check("(" + x.name() + " " + y.name() + ")'@" + a.str(), [&] {
        NCPoly F = NCPoly::atom(x), G = NCPoly::atom(y);
        return motion_derivative(multiply(F, G), mbar, rw) - multiply(motion_derivative(F, mbar, rw), G) -
               multiply(F, motion_derivative(G, mbar, rw));
      });
    }
  }
}

void suite_lambda(Runner& r, const ObservableSet& o, const SuiteOptions& opt) {
  const auto& rw = r.rw();
  auto list = standard_accels(opt);
  for (const auto& a : list) {
    std::string tag = "@" + a.str();
    GaussRational a2(a.alpha_sq());
    NCPoly inv_lambda = NCPoly(1) - 2 * alpha_dot(a, o.X) +
                        (o.X_sq + (frac(3, 4) * mass_power(-2)).shift_hbar(2)) * a2;
    r.check("Mbar=M/Lambda" + tag, [&] { return boost(o.M, a, rw, o.C).value - rw.sym(o.M, inv_lambda); });
    // Same expression with commuting positions: sorted words, no reordering terms.
    NCPoly classical = NCPoly(1) - 2 * alpha_dot(a, o.X);
    for (int mu = 0; mu < 4; ++mu) classical += up(multiply(X(mu), X(mu)), mu) * a2;
    r.check("quantum-classical" + tag, [&] {
      return rw.normalize(inv_lambda) - classical - (frac(3, 4) * mass_power(-2) * a2).shift_hbar(2);
    });
  }
}

void suite_epsilon(std::vector<IdentityReport>& out, const Workbench& wb) {
  // The opposite Levi-Civita sign: spin flips, seeded identities do not.
  Workbench flipped(tables::frozen_fit(-wb.epsilon_sign()));
  const auto& Bf = flipped.system(Basis::B);
  const auto& of = flipped.observables(Basis::B);
  Runner rb("epsilon", Basis::B, Bf, out);
  rb.check("S^2", [&] {
    NCPoly s2;
    for (int mu = 0; mu < 4; ++mu) s2 += up(Bf.product(of.S[mu], of.S[mu]), mu);
    return s2 + NCPoly::hbar(2) * GaussRational(Rational(3, 4));
  });
  rb.check("Y^2", [&] { return y_square(Bf, of.Y) - NCPoly::hbar(2); });
  for (auto [a, b] : so42_pairs())
    rb.check("Y_" + hex_name(a) + ",Y_" + hex_name(b), [&] { return Bf.commutator(of.Y[a], of.Y[b]) - of.Jab[a][b]; });
  const auto& Af = flipped.system(Basis::A);
  const auto& oa = wb.observables(Basis::A);
  auto sf = build_spin_vector(Af);
  Runner ra("epsilon", Basis::A, Af, out);
  for (int mu = 0; mu < 4; ++mu) ra.check("S_" + std::to_string(mu) + " sign", [&] { return sf[mu] + oa.S[mu]; });
}

} // namespace

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{
      "JJ",      "JY",    "YY",        "YYY",      "CY",    "CM",           "PX",         "XX",
      "inverse", "S2",    "transverse", "spinhalf", "Y2",    "PJDC",         "boost",      "d2Y",
      "conservation", "motion-leibniz", "lambda", "jacobi", "nonassoc", "leibniz", "grading", "epsilon"};
  return ids;
}

std::vector<Basis> suite_bases(const std::string& id) {
  static const std::map<std::string, std::vector<Basis>> m{
      {"JJ", {Basis::A, Basis::B}},     {"JY", {Basis::B}},        {"YY", {Basis::B}},
      {"YYY", {Basis::B}},              {"CY", {Basis::B}},        {"CM", {Basis::A, Basis::B}},
      {"PX", {Basis::A}},               {"XX", {Basis::A}},        {"inverse", {Basis::A}},
      {"S2", {Basis::B}},               {"transverse", {Basis::A, Basis::B}},
      {"spinhalf", {Basis::B}},         {"Y2", {Basis::B}},        {"PJDC", {Basis::B}},
      {"boost", {Basis::B}},            {"d2Y", {Basis::B}},       {"conservation", {Basis::B}},
      {"motion-leibniz", {Basis::B}},   {"lambda", {Basis::B}},    {"jacobi", {Basis::A, Basis::B}},
      {"nonassoc", {Basis::A, Basis::B}}, {"leibniz", {Basis::A, Basis::B}},
      {"grading", {Basis::A, Basis::B}}, {"epsilon", {Basis::B}}};
  auto it = m.find(id);
  if (it == m.end()) throw ConstructionError("unknown identity suite '" + id + "'");
  return it->second;
}

std::vector<IdentityReport> free_fall_residuals(const AccelParams& a, const Workbench& wb) {
  return free_fall_impl(a, wb.observables(Basis::B), wb.system(Basis::B), "d2Y");
}

std::vector<IdentityReport> verify_suite(const std::string& id, const Workbench& wb, const SuiteOptions& opt) {
  std::vector<Basis> bases = suite_bases(id);
  if (opt.basis) bases = {*opt.basis};
  std::vector<IdentityReport> out;
  if (id == "epsilon") {
    suite_epsilon(out, wb);
    return out;
  }
  for (Basis b : bases) {
    const auto& rw = wb.system(b);
    Runner r(id, b, rw, out);
    auto obs = [&]() -> const ObservableSet& { return wb.observables(b); };
    if (id == "JJ") suite_JJ(r, obs());
    else if (id == "JY") suite_JY(r, obs());
    else if (id == "YY") suite_YY(r, obs());
    else if (id == "YYY") suite_YYY(r, obs());
    else if (id == "CY") suite_CY(r, obs());
    else if (id == "CM") suite_CM(r, obs());
    else if (id == "PX") suite_PX(r, obs());
    else if (id == "XX") suite_XX(r, obs());
    else if (id == "inverse") suite_inverse(r, obs());
    else if (id == "S2") suite_S2(r, obs());
    else if (id == "transverse") suite_transverse(r, obs());
    else if (id == "spinhalf") suite_spinhalf(r, obs());
    else if (id == "Y2") suite_Y2(r, obs(), opt);
    else if (id == "PJDC") {
      if (b != Basis::B) throw ConstructionError("suite PJDC compares basis A against basis B; use --basis B");
      suite_PJDC(r, wb.observables(Basis::A), wb.system(Basis::A), obs());
    } else if (id == "boost") suite_boost(r, obs(), opt);
    else if (id == "d2Y") {
      for (const auto& a : standard_accels(opt)) {
        auto part = free_fall_impl(a, obs(), rw, "d2Y");
        out.insert(out.end(), part.begin(), part.end());
      }
    } else if (id == "conservation") suite_conservation(r, obs(), opt);
    else if (id == "motion-leibniz") suite_motion_leibniz(r, opt, obs());
    else if (id == "lambda") suite_lambda(r, obs(), opt);
    else if (id == "jacobi") suite_jacobi(r, b);
    else if (id == "nonassoc") suite_nonassoc(r, b);
    else if (id == "leibniz") suite_leibniz(r, b, opt);
    else if (id == "grading") suite_grading(r, b, opt);
  }
  return out;
}

} // namespace qhexa::conformal
