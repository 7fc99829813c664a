#include "qhexa/cli.hpp"

#include "qhexa/errors.hpp"

#include <json.hpp>

#include <climits>

namespace qhexa::cli {

using nlohmann::json;

namespace {

std::string rat_text(const Rational& q, bool paren) {
  std::string s = to_string(q);
  return (paren && q.get_den() != 1) ? "(" + s + ")" : s;
}

/// Sign to pull out in front of a term: real and pure-imaginary coefficients
/// carry one, mixed ones are printed whole inside parentheses.
bool negative(const GaussRational& c) {
  if (c.is_real()) return sgn(c.re()) < 0;
  if (sgn(c.re()) == 0) return sgn(c.im()) < 0;
  return false;
}

std::string join_pieces(const std::vector<std::string>& pieces) {
  std::string s;
  for (const auto& p : pieces) {
    if (p.empty()) continue;
    if (!s.empty()) s += ' ';
    s += p;
  }
  return s;
}

std::string signed_sum(const std::vector<std::pair<bool, std::string>>& parts) {
  if (parts.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& [neg, body] = parts[k];
    if (k == 0)
      s += neg ? "-" + body : body;
    else
      s += (neg ? " - " : " + ") + body;
  }
  return s;
}

json rat_json(const Rational& q) {
  auto one = [](const mpz_class& z) -> json {
    if (z.fits_slong_p()) return static_cast<long long>(z.get_si());
    return z.get_str();
  };
  return json::array({one(q.get_num()), one(q.get_den())});
}

mpz_class int_from(const json& j, const std::string& where) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw ConstructionError("malformed integer in " + where);
    return z;
  }
  throw ConstructionError("malformed integer in " + where);
}

Rational rat_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConstructionError("expected [num, den] in " + where);
  mpz_class num = int_from(j[0], where), den = int_from(j[1], where);
  if (den <= 0) throw ConstructionError("non-positive denominator in " + where);
  Rational q(num, den);
  q.canonicalize();
  if (q.get_den() != den || q.get_num() != num) throw ConstructionError("unreduced fraction in " + where);
  return q;
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConstructionError("missing field '" + std::string(key) + "' in " + where);
  return j.at(key);
}

json poly_json(const NCPoly& p) {
  json terms = json::array();
  for (const Term& t : p.terms()) {
    json word = json::array();
    for (std::size_t k = 0; k < t.word.size(); ++k) word.push_back(t.word[k].name());
    terms.push_back({{"coeff", {{"re", rat_json(t.coeff.re())}, {"im", rat_json(t.coeff.im())}, {"hbar", t.hbar}}},
                     {"word", word}});
  }
  return {{"terms", terms}};
}

NCPoly poly_from(const json& j, const std::string& where) {
  const json& terms = field(j, "terms", where);
  if (!terms.is_array()) throw ConstructionError("'terms' is not an array in " + where);
  std::vector<std::pair<Coefficient, Word>> out;
  for (const json& t : terms) {
    const json& c = field(t, "coeff", where);
    Coefficient co;
    co.value = GaussRational(rat_from(field(c, "re", where), where), rat_from(field(c, "im", where), where));
    const json& h = field(c, "hbar", where);
    if (!h.is_number_integer() || h.get<long long>() < 0) throw ConstructionError("bad hbar power in " + where);
    co.hbar = h.get<int>();
    Word w;
    const json& word = field(t, "word", where);
    if (!word.is_array()) throw ConstructionError("'word' is not an array in " + where);
    for (const json& a : word) {
      if (!a.is_string()) throw ConstructionError("atom name expected in " + where);
      SignedAtom sa = parse_atom(a.get<std::string>());
      if (sa.sign != 1) throw ConstructionError("non-canonical atom " + a.get<std::string>() + " in " + where);
      w.push_back(sa.atom.id());
    }
    out.push_back({co, w});
  }
  NCPoly p = make_poly(out);
  if (p.size() != out.size()) throw ConstructionError("duplicate or zero terms in " + where);
  return p;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConstructionError("malformed " + what + ": " + e.what());
  }
}

} // namespace

std::string print_scalar(const GaussRational& c) {
  const Rational& re = c.re();
  const Rational& im = c.im();
  if (c.is_real()) return re == 1 ? "" : rat_text(re, true);
  if (sgn(re) == 0) {
    if (im == 1) return "i";
    if (im.get_den() == 1) return to_string(im) + " i";
    return "(" + to_string(im) + " i)";
  }
  Rational mag = abs(im);
  std::string imag = mag == 1 ? "i" : to_string(mag) + " i";
  return "(" + to_string(re) + (sgn(im) < 0 ? " - " : " + ") + imag + ")";
}

std::string print_canonical(const NCPoly& p) {
  std::vector<std::pair<bool, std::string>> parts;
  for (const Term& t : p.terms()) {
    bool neg = negative(t.coeff);
    GaussRational mag = neg ? -t.coeff : t.coeff;
    std::vector<std::string> pieces{print_scalar(mag)};
    if (t.hbar == 1) pieces.push_back("hbar");
    if (t.hbar > 1) pieces.push_back("hbar^" + std::to_string(t.hbar));
    for (std::size_t k = 0; k < t.word.size(); ++k) pieces.push_back(t.word[k].name());
    std::string body = join_pieces(pieces);
    parts.push_back({neg, body.empty() ? "1" : body});
  }
  return signed_sum(parts);
}

std::string print_combination(const std::vector<GaussRational>& coeffs, const std::vector<std::string>& names) {
  std::vector<std::pair<bool, std::string>> parts;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    bool neg = negative(coeffs[k]);
    parts.push_back({neg, join_pieces({print_scalar(neg ? -coeffs[k] : coeffs[k]), names[k]})});
  }
  return signed_sum(parts);
}

std::optional<std::string> hexa_form(const NCPoly& p, const conformal::Workbench& wb) {
  const auto& o = wb.observables(Basis::B);
  using conformal::hex;
  std::vector<NCPoly> basis{o.M, o.Y[hex(0)], o.Y[hex(1)], o.Y[hex(2)], o.Y[hex(3)],
                            o.Y[conformal::kPlus] - o.Y[conformal::kMinus]};
  auto c = conformal::decompose(p, basis);
  if (!c) return std::nullopt;
  return print_combination(*c, {"M", "Y_0", "Y_1", "Y_2", "Y_3", "(Y_+ - Y_-)"});
}

std::string poly_to_json(const NCPoly& p) { return poly_json(p).dump(); }

NCPoly poly_from_json(const std::string& text) { return poly_from(parse_json(text, "polynomial"), "polynomial"); }

Manifest manifest_from_fit(const tables::FittedForms& fit) {
  Manifest m;
  m.epsilon_sign = fit.epsilon_sign;
  m.entries = tables::entries_B(fit);
  m.d_weight = fit.d_weight;
  return m;
}

std::string manifest_to_json(const Manifest& m) {
  json entries = json::array();
  for (const auto& e : m.entries)
    entries.push_back({{"left", e.left.name()},
                       {"right", e.right.name()},
                       {"bracket", poly_json(e.bracket)},
                       {"provenance", e.provenance.str()}});
  json doc = {{"version", kManifestVersion},
              {"epsilon_convention", m.epsilon_sign > 0 ? "+1" : "-1"},
              {"calibration", {{"D_weight", rat_json(m.d_weight)}}},
              {"entries", entries}};
  return doc.dump(1) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  json doc = parse_json(text, "manifest");
  const json& v = field(doc, "version", "manifest");
  if (!v.is_number_integer() || v.get<long long>() != kManifestVersion)
    throw ConstructionError("manifest version " + v.dump() + " does not match supported version " +
                            std::to_string(kManifestVersion));
  Manifest m;
  const json& eps = field(doc, "epsilon_convention", "manifest");
  if (eps == "+1")
    m.epsilon_sign = 1;
  else if (eps == "-1")
    m.epsilon_sign = -1;
  else
    throw ConstructionError("bad epsilon_convention " + eps.dump());
  m.d_weight = rat_from(field(field(doc, "calibration", "manifest"), "D_weight", "calibration"), "calibration.D_weight");
  const json& entries = field(doc, "entries", "manifest");
  if (!entries.is_array()) throw ConstructionError("'entries' is not an array in manifest");
  for (const json& e : entries) {
    tables::TableEntry te;
    auto atom_of = [&](const char* key) {
      const json& a = field(e, key, "manifest entry");
      if (!a.is_string()) throw ConstructionError(std::string("'") + key + "' is not an atom name");
      SignedAtom sa = parse_atom(a.get<std::string>());
      if (sa.sign != 1) throw ConstructionError("non-canonical atom " + a.get<std::string>());
      return sa.atom;
    };
    te.left = atom_of("left");
    te.right = atom_of("right");
    std::string where = "entry (" + te.left.name() + ", " + te.right.name() + ")";
    te.bracket = poly_from(field(e, "bracket", where), where);
    const json& prov = field(e, "provenance", where);
    if (!prov.is_string()) throw ConstructionError("provenance is not a string in " + where);
    te.provenance = tables::Provenance::parse(prov.get<std::string>());
    m.entries.push_back(std::move(te));
  }
  return m;
}

RewriteSystemPtr manifest_system(const Manifest& m) { return tables::basis_B_from_entries(m.entries, m.epsilon_sign); }

} // namespace qhexa::cli
