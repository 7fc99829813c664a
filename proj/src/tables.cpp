#include "qhexa/tables.hpp"

#include "qhexa/builders.hpp"
#include "qhexa/conformal.hpp"
#include "qhexa/errors.hpp"

#include <map>

namespace qhexa::tables {

using namespace build;

std::string Provenance::str() const {
  switch (kind) {
  case ProvenanceKind::Paper: return "PAPER(" + ref + ")";
  case ProvenanceKind::Derived: return "DERIVED(" + ref + ")";
  case ProvenanceKind::Trivial: return "TRIVIAL";
  }
  return "TRIVIAL";
}

Provenance Provenance::parse(const std::string& s) {
  if (s == "TRIVIAL") return {ProvenanceKind::Trivial, ""};
  auto inner = [&](std::size_t skip) {
    if (s.size() < skip + 1 || s.back() != ')') throw ConstructionError("malformed provenance '" + s + "'");
    return s.substr(skip, s.size() - skip - 1);
  };
  if (s.rfind("PAPER(", 0) == 0) return {ProvenanceKind::Paper, inner(6)};
  if (s.rfind("DERIVED(", 0) == 0) return {ProvenanceKind::Derived, inner(8)};
  throw ConstructionError("malformed provenance '" + s + "'");
}

FittedForms frozen_fit(int epsilon_sign) {
  FittedForms f;
  f.epsilon_sign = epsilon_sign;
  f.ss = 1;
  f.xs = {Rational(-1), Rational(0), Rational(0)};
  f.d_weight = 2;
  return f;
}

namespace {

std::vector<Atom> members_A() {
  std::vector<Atom> out{atoms::Minv(), atoms::M()};
  for (int mu = 0; mu < 4; ++mu) out.push_back(atoms::P(mu));
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) out.push_back(atoms::J(mu, nu));
  out.push_back(atoms::D());
  for (int mu = 0; mu < 4; ++mu) out.push_back(atoms::C(mu));
  return out;
}

std::vector<Atom> members_B() {
  std::vector<Atom> out{atoms::Minv(), atoms::M()};
  for (int mu = 0; mu < 4; ++mu) out.push_back(atoms::P(mu));
  for (int mu = 0; mu < 4; ++mu) out.push_back(atoms::S(mu));
  for (int mu = 0; mu < 4; ++mu) out.push_back(atoms::X(mu));
  return out;
}

NCPoly p0_squared_rule() { return multiply(M(), M()) + multiply(P(1), P(1)) + multiply(P(2), P(2)) + multiply(P(3), P(3)); }

void add_mass_rules(RewriteSystem& rw) {
  rw.add_pair_rule(atoms::P(0), atoms::P(0), p0_squared_rule());
  rw.add_pair_rule(atoms::M(), atoms::Minv(), NCPoly(1));
  rw.add_pair_rule(atoms::Minv(), atoms::M(), NCPoly(1));
}

// J_{mu nu} with J_{mu mu} = 0 as a table value.
NCPoly Jv(int mu, int nu) { return J(mu, nu); }

NCPoly jj_bracket(int m, int n, int r, int s) {
  return eta(n, r) * Jv(m, s) + eta(m, s) * Jv(n, r) - eta(m, r) * Jv(n, s) - eta(n, s) * Jv(m, r);
}

void fill_lie_part_A(RewriteSystem& rw) {
  auto z = NCPoly();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      rw.set_bracket(atoms::P(mu), atoms::P(nu), z);
      rw.set_bracket(atoms::C(mu), atoms::C(nu), z);
      rw.set_bracket(atoms::P(mu), atoms::C(nu), -2 * eta(mu, nu) * D() - 2 * J(mu, nu));
    }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      Atom j = atoms::J(mu, nu);
      for (int rho = 0; rho < 4; ++rho) {
        rw.set_bracket(j, atoms::P(rho), eta(nu, rho) * P(mu) - eta(mu, rho) * P(nu));
        rw.set_bracket(j, atoms::C(rho), eta(nu, rho) * C(mu) - eta(mu, rho) * C(nu));
        for (int sig = rho + 1; sig < 4; ++sig) rw.set_bracket(j, atoms::J(rho, sig), jj_bracket(mu, nu, rho, sig));
      }
      rw.set_bracket(atoms::D(), j, z);
      rw.set_bracket(j, atoms::M(), z);
      rw.set_bracket(j, atoms::Minv(), z);
    }
  for (int mu = 0; mu < 4; ++mu) {
    rw.set_bracket(atoms::D(), atoms::P(mu), P(mu));
    rw.set_bracket(atoms::D(), atoms::C(mu), -C(mu));
    rw.set_bracket(atoms::P(mu), atoms::M(), z);
    rw.set_bracket(atoms::P(mu), atoms::Minv(), z);
  }
  rw.set_bracket(atoms::D(), atoms::M(), M());
  rw.set_bracket(atoms::D(), atoms::Minv(), -Minv());
  rw.set_bracket(atoms::M(), atoms::Minv(), z);
}

} // namespace

RewriteSystemPtr basis_A(int epsilon_sign) {
  // Stage 1: everything except the C-mass entries, which need the position
  // observables built in this basis.
  auto stage = std::make_shared<RewriteSystem>(Basis::A, epsilon_sign);
  for (const Atom& a : members_A()) stage->add_member(a);
  fill_lie_part_A(*stage);
  add_mass_rules(*stage);

  std::array<NCPoly, 4> cm, cminv;
  auto X = conformal::build_position(*stage);
  for (int mu = 0; mu < 4; ++mu) {
    cm[mu] = 2 * stage->sym(M(), X[mu]) * GaussRational(1);
    cminv[mu] = -stage->product(stage->product(Minv(), cm[mu]), Minv());
  }

  auto rw = std::make_shared<RewriteSystem>(Basis::A, epsilon_sign);
  for (const Atom& a : members_A()) rw->add_member(a);
  fill_lie_part_A(*rw);
  add_mass_rules(*rw);
  for (int mu = 0; mu < 4; ++mu) {
    rw->set_bracket(atoms::C(mu), atoms::M(), cm[mu]);
    rw->set_bracket(atoms::C(mu), atoms::Minv(), cminv[mu]);
  }
  return rw;
}

namespace {

Provenance provenance_A(const Atom& a, const Atom& b) {
  auto k = [](const Atom& x) { return x.kind; };
  auto has = [&](AtomKind q) { return k(a) == q || k(b) == q; };
  if (has(AtomKind::Minv)) {
    if (has(AtomKind::M)) return {ProvenanceKind::Trivial, ""};
    return {ProvenanceKind::Derived, "induced:inverse-mass"};
  }
  if (has(AtomKind::M)) return {ProvenanceKind::Paper, has(AtomKind::C) ? "CM" : "PM"};
  if (has(AtomKind::C)) return {ProvenanceKind::Paper, "PJDC"};
  return {ProvenanceKind::Paper, "PJD"};
}

Provenance provenance_B(const Atom& a, const Atom& b) {
  auto has = [&](AtomKind q) { return a.kind == q || b.kind == q; };
  auto both = [&](AtomKind q) { return a.kind == q && b.kind == q; };
  if (has(AtomKind::Minv)) {
    if (has(AtomKind::M)) return {ProvenanceKind::Trivial, ""};
    return {ProvenanceKind::Derived, "induced:inverse-mass"};
  }
  if (both(AtomKind::P)) return {ProvenanceKind::Paper, "PJD"};
  if (has(AtomKind::P) && has(AtomKind::X)) return {ProvenanceKind::Paper, "PX"};
  if (has(AtomKind::P) && has(AtomKind::M)) return {ProvenanceKind::Paper, "PM"};
  if (both(AtomKind::X)) return {ProvenanceKind::Paper, "XX"};
  if (has(AtomKind::X) && has(AtomKind::M)) return {ProvenanceKind::Derived, "oracle:chain-rule"};
  if (has(AtomKind::S) && has(AtomKind::M)) return {ProvenanceKind::Derived, "oracle:SM"};
  if (has(AtomKind::P) && has(AtomKind::S)) return {ProvenanceKind::Derived, "oracle:PS"};
  if (both(AtomKind::S)) return {ProvenanceKind::Derived, "oracle:fit-SS"};
  return {ProvenanceKind::Derived, "oracle:fit-XS"};
}

std::vector<TableEntry> collect(const RewriteSystem& rw, const std::vector<Atom>& members,
                                Provenance (*prov)(const Atom&, const Atom&)) {
  std::vector<TableEntry> out;
  for (std::size_t x = 0; x < members.size(); ++x)
    for (std::size_t y = x + 1; y < members.size(); ++y) {
      const NCPoly* br = rw.bracket(members[x], members[y]);
      if (!br) throw ConsistencyError("table is missing (" + members[x].name() + ", " + members[y].name() + ")");
      out.push_back({members[x], members[y], *br, prov(members[x], members[y])});
    }
  return out;
}

// Commuting pairs, mass rules and transversality: enough to normalize table values.
std::shared_ptr<RewriteSystem> commutative_stage_B(int epsilon_sign) {
  auto rw = std::make_shared<RewriteSystem>(Basis::B, epsilon_sign);
  for (const Atom& a : members_B()) rw->add_member(a);
  std::vector<Atom> comm{atoms::Minv(), atoms::M()};
  for (int mu = 0; mu < 4; ++mu) comm.push_back(atoms::P(mu));
  for (const Atom& a : comm)
    for (const Atom& b : comm)
      if (!(a == b)) rw->set_bracket(a, b, NCPoly());
  for (int mu = 0; mu < 4; ++mu)
    for (const Atom& b : comm) rw->set_bracket(atoms::S(mu), b, NCPoly());
  add_mass_rules(*rw);
  rw->add_pair_rule(atoms::P(3), atoms::S(3), multiply(P(0), S(0)) - multiply(P(1), S(1)) - multiply(P(2), S(2)));
  return rw;
}

} // namespace

NCPoly spin_pair_form(int mu, int nu, int epsilon_sign) {
  NCPoly out;
  for (int rho = 0; rho < 4; ++rho)
    for (int sig = 0; sig < 4; ++sig) {
      int e = epsilon_sign * levi_civita(mu, nu, rho, sig);
      if (!e) continue;
      out += e * up(multiply(multiply(S(rho), up(P(sig), sig)), Minv()), rho);
    }
  return out;
}

std::array<NCPoly, 3> xs_candidates(int mu, int nu, int epsilon_sign) {
  NCPoly m2 = mass_power(-2);
  return {multiply(multiply(S(mu), P(nu)), m2), multiply(multiply(S(nu), P(mu)), m2),
          multiply(spin_pair_form(mu, nu, epsilon_sign), Minv())};
}

namespace {

void install_B(RewriteSystem& rw, const std::map<std::pair<int, int>, NCPoly>& values, int epsilon_sign) {
  for (const auto& [key, v] : values) rw.set_bracket(Atom::from_id(key.first), Atom::from_id(key.second), v);
  add_mass_rules(rw);
  rw.add_pair_rule(atoms::P(3), atoms::S(3), multiply(P(0), S(0)) - multiply(P(1), S(1)) - multiply(P(2), S(2)));
  // Spin 1/2: S_mu S_nu = -(hbar^2/4)(eta_{mu nu} - P_mu P_nu M^-2) + (i hbar/2)(S_mu, S_nu).
  auto stage = commutative_stage_B(epsilon_sign);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      NCPoly sym = (eta(mu, nu) * NCPoly(1) - multiply(multiply(P(mu), P(nu)), mass_power(-2)));
      sym = (sym * GaussRational(Rational(-1, 4))).shift_hbar(2);
      NCPoly rhs = sym;
      if (mu != nu) {
        const NCPoly* ss = rw.bracket(atoms::S(mu), atoms::S(nu));
        rhs += (*ss * GaussRational(Rational(0), Rational(1, 2))).shift_hbar(1);
      }
      rw.add_pair_rule(atoms::S(mu), atoms::S(nu), stage->normalize(rhs));
    }
}

} // namespace

RewriteSystemPtr basis_B(const FittedForms& fit) {
  int es = fit.epsilon_sign;
  auto stage = commutative_stage_B(es);
  std::map<std::pair<int, int>, NCPoly> v;
  auto put = [&](const Atom& a, const Atom& b, const NCPoly& p) { v[{a.id(), b.id()}] = stage->normalize(p); };
  NCPoly z;
  put(atoms::M(), atoms::Minv(), z);
  for (int mu = 0; mu < 4; ++mu) {
    put(atoms::P(mu), atoms::M(), z);
    put(atoms::P(mu), atoms::Minv(), z);
    put(atoms::S(mu), atoms::M(), z);
    put(atoms::S(mu), atoms::Minv(), z);
    // Chain rule on M = sqrt(P^2).
    put(atoms::X(mu), atoms::M(), multiply(P(mu), Minv()));
    put(atoms::X(mu), atoms::Minv(), -multiply(P(mu), mass_power(-3)));
    for (int nu = 0; nu < 4; ++nu) {
      put(atoms::P(mu), atoms::P(nu), z);
      put(atoms::P(mu), atoms::S(nu), z);
      put(atoms::P(mu), atoms::X(nu), NCPoly(-eta(mu, nu)));
      NCPoly ss = spin_pair_form(mu, nu, es) * GaussRational(fit.ss);
      put(atoms::S(mu), atoms::S(nu), ss);
      // (X_mu, X_nu) = S_{mu nu} / M^2
      put(atoms::X(mu), atoms::X(nu), multiply(ss, mass_power(-2)));
      auto cand = xs_candidates(mu, nu, es);
      NCPoly xs;
      for (int k = 0; k < 3; ++k) xs += cand[k] * GaussRational(fit.xs[k]);
      put(atoms::X(mu), atoms::S(nu), xs);
    }
  }
  auto rw = std::make_shared<RewriteSystem>(Basis::B, es);
  for (const Atom& a : members_B()) rw->add_member(a);
  // Only ordered pairs with left.id < right.id are kept; set_bracket fills the mirror.
  std::map<std::pair<int, int>, NCPoly> ordered;
  for (const auto& [key, p] : v)
    if (key.first < key.second) ordered[key] = p;
    else if (key.first > key.second) ordered[{key.second, key.first}] = -p;
  install_B(*rw, ordered, es);
  return rw;
}

RewriteSystemPtr basis_B_from_entries(const std::vector<TableEntry>& entries, int epsilon_sign) {
  std::map<std::pair<int, int>, NCPoly> ordered;
  for (const auto& e : entries) {
    int a = e.left.id(), b = e.right.id();
    if (a < b) ordered[{a, b}] = e.bracket;
    else ordered[{b, a}] = -e.bracket;
  }
  auto members = members_B();
  for (std::size_t x = 0; x < members.size(); ++x)
    for (std::size_t y = x + 1; y < members.size(); ++y)
      if (!ordered.count({members[x].id(), members[y].id()})) {
        auto prov = provenance_B(members[x], members[y]);
        throw ConstructionError("manifest is missing " + std::string(prov.kind == ProvenanceKind::Derived ? "DERIVED " : "") +
                                "entry (" + members[x].name() + ", " + members[y].name() + ")");
      }
  auto rw = std::make_shared<RewriteSystem>(Basis::B, epsilon_sign);
  for (const Atom& a : members) rw->add_member(a);
  install_B(*rw, ordered, epsilon_sign);
  return rw;
}

std::vector<TableEntry> entries_A() {
  auto rw = basis_A();
  return collect(*rw, members_A(), provenance_A);
}

std::vector<TableEntry> entries_B(const FittedForms& fit) {
  auto rw = basis_B(fit);
  return collect(*rw, members_B(), provenance_B);
}

NCPoly translate_A_to_B(const NCPoly& p, const RewriteSystem& B) {
  if (B.basis() != Basis::B) throw ConstructionError("translate_A_to_B needs a basis-B system");
  std::array<NCPoly, kAtomCount> image;
  std::array<bool, kAtomCount> have{};
  auto image_of = [&](std::uint8_t id) -> const NCPoly& {
    if (!have[id]) {
      Atom a = Atom::from_id(id);
      switch (a.kind) {
      case AtomKind::D: image[id] = conformal::dilatation_B(B); break;
      case AtomKind::J: image[id] = conformal::lorentz_B(B, a.i, a.j); break;
      case AtomKind::C: image[id] = conformal::special_conformal_B(B, a.i); break;
      case AtomKind::S:
      case AtomKind::X: throw ConstructionError("atom " + a.name() + " is not a basis-A generator");
      default: image[id] = NCPoly::atom(a); break;
      }
      have[id] = true;
    }
    return image[id];
  };
  TermAccumulator acc;
  for (const auto& t : p.terms()) {
    NCPoly w(1);
    for (std::size_t k = 0; k < t.word.size(); ++k) w = B.product(w, image_of(t.word.id(k)));
    acc.add(w, t.coeff, t.hbar);
  }
  return acc.finish();
}

} // namespace qhexa::tables
