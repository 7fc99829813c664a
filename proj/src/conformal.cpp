#include "qhexa/conformal.hpp"

#include "qhexa/builders.hpp"
#include "qhexa/errors.hpp"

#include <map>
#include <random>
#include <sstream>

namespace qhexa::conformal {

using namespace build;

std::string hex_name(int a) {
  if (a == kMinus) return "-";
  if (a == kPlus) return "+";
  return std::to_string(a - 2);
}

Rational AccelParams::alpha_sq() const {
  return alpha[0] * alpha[0] - alpha[1] * alpha[1] - alpha[2] * alpha[2] - alpha[3] * alpha[3];
}

AccelParams AccelParams::operator-() const {
  AccelParams r;
  for (int mu = 0; mu < 4; ++mu) r.alpha[mu] = -alpha[mu];
  return r;
}

AccelParams AccelParams::operator+(const AccelParams& o) const {
  AccelParams r;
  for (int mu = 0; mu < 4; ++mu) r.alpha[mu] = alpha[mu] + o.alpha[mu];
  return r;
}

bool AccelParams::is_zero() const {
  for (const auto& q : alpha)
    if (sgn(q) != 0) return false;
  return true;
}

std::string AccelParams::str() const {
  std::string s;
  for (int mu = 0; mu < 4; ++mu) s += (mu ? "," : "") + to_string(alpha[mu]);
  return s;
}

AccelParams AccelParams::parse(const std::string& text) {
  AccelParams a;
  std::stringstream ss(text);
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ',')) {
    if (k >= 4) throw ParseError("expected 4 comma-separated rationals in '" + text + "'", 1, 1);
    try {
      a.alpha[k++] = parse_rational(item);
    } catch (const Error& e) {
      throw ParseError(std::string("bad acceleration component: ") + e.what(), 1, 1);
    }
  }
  if (k != 4) throw ParseError("expected 4 comma-separated rationals in '" + text + "'", 1, 1);
  return a;
}

std::array<NCPoly, 4> build_spin_vector(const RewriteSystem& A) {
  int es = A.epsilon_sign();
  std::array<NCPoly, 4> S;
  for (int mu = 0; mu < 4; ++mu) {
    NCPoly s;
    for (int nu = 0; nu < 4; ++nu)
      for (int rho = 0; rho < 4; ++rho)
        for (int sig = 0; sig < 4; ++sig) {
          int e = es * levi_civita(mu, nu, rho, sig);
          if (!e) continue;
          NCPoly j = up2(J(nu, rho), nu, rho);
          s += e * multiply(j, multiply(up(P(sig), sig), Minv()));
        }
    S[mu] = A.normalize(s * GaussRational(Rational(-1, 2)));
  }
  return S;
}

std::array<NCPoly, 4> build_position(const RewriteSystem& A) {
  NCPoly m2 = mass_power(-2);
  std::array<NCPoly, 4> X;
  for (int mu = 0; mu < 4; ++mu) {
    NCPoly x = A.sym(multiply(P(mu), m2), D());
    for (int rho = 0; rho < 4; ++rho)
      if (rho != mu) x += up(A.sym(multiply(P(rho), m2), J(rho, mu)), rho);
    X[mu] = A.normalize(x);
  }
  return X;
}

namespace {

NCPoly spin_pair_B(const RewriteSystem& B, int mu, int nu) {
  if (mu == nu) return NCPoly();
  const NCPoly* br = B.bracket(atoms::S(mu), atoms::S(nu));
  if (!br) throw ConsistencyError("basis B has no (S, S) entry");
  return *br;
}

} // namespace

NCPoly dilatation_B(const RewriteSystem& B) {
  NCPoly d;
  for (int mu = 0; mu < 4; ++mu) d += up(B.sym(P(mu), X(mu)), mu);
  return d;
}

NCPoly lorentz_B(const RewriteSystem& B, int mu, int nu) {
  if (mu == nu) return NCPoly();
  return B.sym(P(mu), X(nu)) - B.sym(P(nu), X(mu)) + spin_pair_B(B, mu, nu);
}

NCPoly position_square(const RewriteSystem& rw, const std::array<NCPoly, 4>& X) {
  NCPoly s;
  for (int mu = 0; mu < 4; ++mu) s += up(rw.product(X[mu], X[mu]), mu);
  return s;
}

NCPoly special_conformal_B(const RewriteSystem& B, int mu, const Rational& hbar_sq_coeff) {
  std::array<NCPoly, 4> Xs{X(0), X(1), X(2), X(3)};
  NCPoly d = dilatation_B(B);
  NCPoly x2 = position_square(B, Xs) + (GaussRational(hbar_sq_coeff) * mass_power(-2)).shift_hbar(2);
  NCPoly c = 2 * B.sym(d, X(mu)) - B.sym(P(mu), x2);
  // 2 X^rho . S_{rho mu}, symmetrized pairwise and then summed over rho.
  for (int rho = 0; rho < 4; ++rho)
    if (rho != mu) c += 2 * up(B.sym(X(rho), spin_pair_B(B, rho, mu)), rho);
  return c;
}

std::array<NCPoly, 4> build_special_conformal(const RewriteSystem& B) {
  std::array<NCPoly, 4> C;
  for (int mu = 0; mu < 4; ++mu) C[mu] = special_conformal_B(B, mu);
  return C;
}

std::array<NCPoly, 6> build_hexa_observables(const RewriteSystem& rw, const std::array<NCPoly, 4>& X) {
  std::array<NCPoly, 6> Y;
  NCPoly m = M();
  for (int mu = 0; mu < 4; ++mu) Y[hex(mu)] = rw.sym(m, X[mu]);
  // Z = Y_+ - Y_-
  NCPoly z = rw.sym(m, position_square(rw, X)) + (frac(3, 4) * Minv()).shift_hbar(2);
  Y[kPlus] = (z - m) * GaussRational(Rational(1, 2));
  Y[kMinus] = (-m - z) * GaussRational(Rational(1, 2));
  return Y;
}

std::array<std::array<NCPoly, 6>, 6> package_so42(const std::array<NCPoly, 4>& P, const NCPoly& D,
                                                   const std::array<std::array<NCPoly, 4>, 4>& J,
                                                   const std::array<NCPoly, 4>& C) {
  std::array<std::array<NCPoly, 6>, 6> Jab;
  GaussRational half(Rational(1, 2));
  for (int mu = 0; mu < 4; ++mu) {
    Jab[kPlus][hex(mu)] = (P[mu] + C[mu]) * half;
    Jab[hex(mu)][kPlus] = -Jab[kPlus][hex(mu)];
    Jab[kMinus][hex(mu)] = (P[mu] - C[mu]) * half;
    Jab[hex(mu)][kMinus] = -Jab[kMinus][hex(mu)];
    for (int nu = 0; nu < 4; ++nu) Jab[hex(mu)][hex(nu)] = J[mu][nu];
  }
  Jab[kMinus][kPlus] = D;
  Jab[kPlus][kMinus] = -D;
  return Jab;
}

ObservableSet build_observables(const RewriteSystem& rw) {
  ObservableSet o;
  o.basis = rw.basis();
  o.M = M();
  for (int mu = 0; mu < 4; ++mu) o.P[mu] = P(mu);
  if (rw.basis() == Basis::A) {
    o.S = build_spin_vector(rw);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) o.S_pair[mu][nu] = mu == nu ? NCPoly() : rw.commutator(o.S[mu], o.S[nu]);
    o.X = build_position(rw);
    for (int mu = 0; mu < 4; ++mu) {
      o.C[mu] = C(mu);
      for (int nu = 0; nu < 4; ++nu) o.J[mu][nu] = J(mu, nu);
    }
    o.D = D();
  } else {
    for (int mu = 0; mu < 4; ++mu) {
      o.S[mu] = S(mu);
      o.X[mu] = X(mu);
      for (int nu = 0; nu < 4; ++nu) o.S_pair[mu][nu] = spin_pair_B(rw, mu, nu);
    }
    o.D = dilatation_B(rw);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) o.J[mu][nu] = lorentz_B(rw, mu, nu);
    o.C = build_special_conformal(rw);
  }
  o.X_sq = position_square(rw, o.X);
  o.Y = build_hexa_observables(rw, o.X);
  o.Jab = package_so42(o.P, o.D, o.J, o.C);
  return o;
}

NCPoly so42_rhs(const std::array<std::array<NCPoly, 6>, 6>& Jab, int a, int b, int c, int d) {
  return eta6(b, c) * Jab[a][d] + eta6(a, d) * Jab[b][c] - eta6(a, c) * Jab[b][d] - eta6(b, d) * Jab[a][c];
}

BoostResult boost(const NCPoly& obs, const AccelParams& a, const RewriteSystem& rw, const std::array<NCPoly, 4>& C,
                  int max_order) {
  NCPoly gen;
  for (int mu = 0; mu < 4; ++mu)
    if (sgn(a.alpha[mu]) != 0) gen += C[mu] * GaussRational(a.alpha[mu]);
  BoostResult r;
  NCPoly term = rw.normalize(obs);
  r.value = term;
  if (term.is_zero()) {
    r.terminated = true;
    return r;
  }
  for (int n = 1; n <= max_order; ++n) {
    term = rw.commutator(term, gen) * GaussRational(Rational(1, n));
    if (term.is_zero()) {
      r.terminated = true;
      return r;
    }
    r.value += term;
    r.last_nonzero_order = n;
  }
  return r;
}

NCPoly motion_derivative(const NCPoly& F, const NCPoly& Mbar, const RewriteSystem& rw) {
  return rw.commutator(F, Mbar);
}

std::optional<std::vector<GaussRational>> decompose(const NCPoly& p, const std::vector<NCPoly>& basis) {
  std::map<std::pair<std::string, int>, int> rows;
  auto key_of = [&](const Term& t) {
    auto k = std::make_pair(t.word.bytes(), t.hbar);
    auto it = rows.find(k);
    if (it != rows.end()) return it->second;
    int r = static_cast<int>(rows.size());
    rows.emplace(k, r);
    return r;
  };
  std::size_t n = basis.size();
  std::vector<std::vector<GaussRational>> m;
  auto put = [&](const NCPoly& q, std::size_t col) {
    for (const auto& t : q.terms()) {
      int r = key_of(t);
      if (static_cast<int>(m.size()) <= r) m.resize(r + 1, std::vector<GaussRational>(n + 1));
      m[r][col] += t.coeff;
    }
  };
  for (std::size_t k = 0; k < n; ++k) put(basis[k], k);
  put(p, n);
  // Gaussian elimination on the augmented matrix.
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col].is_zero()) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    GaussRational inv = GaussRational(1) / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r)
      if (r != row && !m[r][col].is_zero()) {
        GaussRational f = m[r][col];
        for (std::size_t c = 0; c <= n; ++c) m[r][c] -= f * m[row][c];
      }
    pivot_col.push_back(static_cast<int>(col));
    ++row;
  }
  for (std::size_t r = row; r < m.size(); ++r)
    if (!m[r][n].is_zero()) return std::nullopt;
  std::vector<GaussRational> out(n);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) out[pivot_col[r]] = m[r][n];
  return out;
}

Workbench::Workbench(const tables::FittedForms& fit) : fit_(fit) {}

Workbench::Workbench(RewriteSystemPtr A, RewriteSystemPtr B) {
  fit_.epsilon_sign = B->epsilon_sign();
  std::call_once(once_sys_[0], [&] { sys_[0] = std::move(A); });
  std::call_once(once_sys_[1], [&] { sys_[1] = std::move(B); });
}

RewriteSystemPtr Workbench::system_ptr(Basis b) const {
  int k = b == Basis::A ? 0 : 1;
  std::call_once(once_sys_[k], [&] {
    sys_[k] = b == Basis::A ? tables::basis_A(fit_.epsilon_sign) : tables::basis_B(fit_);
  });
  return sys_[k];
}

const RewriteSystem& Workbench::system(Basis b) const { return *system_ptr(b); }

const ObservableSet& Workbench::observables(Basis b) const {
  int k = b == Basis::A ? 0 : 1;
  std::call_once(once_obs_[k], [&] { obs_[k] = std::make_unique<ObservableSet>(build_observables(system(b))); });
  return *obs_[k];
}

std::vector<AccelParams> random_accels(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> den(1, 4);
  std::vector<AccelParams> out;
  while (static_cast<int>(out.size()) < count) {
    AccelParams a;
    for (int mu = 0; mu < 4; ++mu) {
      int d = den(rng);
      std::uniform_int_distribution<int> numd(-d, d);
      a.alpha[mu] = Rational(numd(rng), d);
      a.alpha[mu].canonicalize();
    }
    if (!a.is_zero()) out.push_back(a);
  }
  return out;
}

} // namespace qhexa::conformal
