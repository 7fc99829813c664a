#include "qhexa/builders.hpp"
#include "qhexa/errors.hpp"
#include "qhexa/repnum.hpp"
#include "qhexa/tables.hpp"

#include <sstream>

namespace qhexa::tables {

using namespace build;

namespace {

std::string pair_name(const Atom& a, const Atom& b) { return "(" + a.name() + "," + b.name() + ")"; }

AnsatzFit snap(const Atom& left, const Atom& right, const std::vector<NCPoly>& candidates,
               const repnum::Oracle::RawFit& raw, const repnum::Oracle& oracle) {
  AnsatzFit f{left, right, candidates, {}, {}, raw.residual};
  std::string name = pair_name(left, right);
  if (raw.rank < int(candidates.size()))
    throw OracleError("fit of " + name + " is rank-deficient (rank " + std::to_string(raw.rank) + " of " +
                      std::to_string(candidates.size()) + ")");
  if (raw.residual > oracle.config().tol) {
    std::ostringstream msg;
    msg << "fit of " << name << " leaves residual " << raw.residual;
    throw OracleError(msg.str());
  }
  for (const auto& c : raw.coeff) {
    f.raw.push_back(c.real());
    auto re = repnum::snap_rational(c.real());
    if (!re || std::abs(c.imag()) > 1e-6) {
      std::ostringstream msg;
      msg << "fit of " << name << " gives coefficient " << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag())
          << "i, not a small rational";
      throw OracleError(msg.str());
    }
    f.coefficients.push_back(*re);
  }
  return f;
}

} // namespace

AnsatzFit fit_derived_entry(const Atom& left, const Atom& right, const std::vector<NCPoly>& candidates,
                            const repnum::Oracle& oracle) {
  auto raw = oracle.fit(NCPoly::atom(left), NCPoly::atom(right), candidates);
  return snap(left, right, candidates, raw, oracle);
}

FittedForms fit_all(const repnum::Oracle& oracle, std::vector<AnsatzFit>* details) {
  int es = oracle.config().epsilon_sign;
  std::vector<std::pair<Atom, Atom>> pairs;
  std::vector<repnum::Oracle::FitRequest> req;
  auto add = [&](const Atom& a, const Atom& b, std::vector<NCPoly> cand) {
    pairs.push_back({a, b});
    req.push_back({NCPoly::atom(a), NCPoly::atom(b), std::move(cand)});
  };
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) add(atoms::S(mu), atoms::S(nu), {spin_pair_form(mu, nu, es)});
  // The three tensors coincide for mu = nu, so only distinct indices pin them.
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      if (mu != nu) {
        auto c = xs_candidates(mu, nu, es);
        add(atoms::X(mu), atoms::S(nu), {c[0], c[1], c[2]});
      }
  // (P, S) vanishes: both candidates must come out zero.
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      add(atoms::P(mu), atoms::S(nu), {S(nu), multiply(multiply(Minv(), P(nu)), S(0))});

  auto raws = oracle.fit_many(req);
  std::vector<AnsatzFit> fits;
  for (std::size_t k = 0; k < raws.size(); ++k)
    fits.push_back(snap(pairs[k].first, pairs[k].second, req[k].candidates, raws[k], oracle));

  FittedForms out;
  out.epsilon_sign = es;
  std::size_t k = 0;
  for (; k < 6; ++k) {
    if (k == 0) out.ss = fits[k].coefficients[0];
    else if (fits[k].coefficients[0] != out.ss)
      throw OracleError("spin pair fits disagree between " + pair_name(fits[0].left, fits[0].right) + " and " +
                        pair_name(fits[k].left, fits[k].right));
  }
  for (; k < 18; ++k) {
    std::array<Rational, 3> xs{fits[k].coefficients[0], fits[k].coefficients[1], fits[k].coefficients[2]};
    if (k == 6) out.xs = xs;
    else if (xs != out.xs)
      throw OracleError("position-spin fits disagree between " + pair_name(fits[6].left, fits[6].right) + " and " +
                        pair_name(fits[k].left, fits[k].right));
  }
  for (; k < fits.size(); ++k)
    for (const auto& c : fits[k].coefficients)
      if (c != 0) throw OracleError("bracket " + pair_name(fits[k].left, fits[k].right) + " does not vanish");

  auto cal = oracle.calibrate();
  auto w = repnum::snap_rational(cal.weight.real());
  if (!w || std::abs(cal.weight.imag()) > 1e-6) {
    std::ostringstream msg;
    msg << "dilatation weight " << cal.weight.real() << " is not a small rational";
    throw OracleError(msg.str());
  }
  out.d_weight = *w;
  if (details) *details = std::move(fits);
  return out;
}

} // namespace qhexa::tables
