#include "qhexa/cli.hpp"

#include "qhexa/errors.hpp"
#include "qhexa/hexgeom.hpp"
#include "qhexa/repnum.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace qhexa::cli {

namespace {

namespace hg = hexgeom;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0 ? 0.0 : x);
  return buf;
}

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

template <std::size_t N>
std::string vec(const std::array<double, N>& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < N; ++k) s += (k ? ", " : "") + num(v[k]);
  return s + ")";
}

double real_value(const std::string& item) {
  if (item.find('/') != std::string::npos) return parse_rational(item).get_d();
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(item, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != item.size()) throw ParseError("bad number '" + item + "'", 1, 1);
  return x;
}

template <std::size_t N>
std::array<double, N> parse_vec(const std::string& text, const std::string& what) {
  std::array<double, N> v{};
  std::stringstream ss(text);
  std::string item;
  std::size_t k = 0;
  while (std::getline(ss, item, ',')) {
    if (k < N) v[k] = real_value(item);
    ++k;
  }
  if (k != N)
    throw ParseError(what + ": expected " + std::to_string(N) + " comma-separated numbers", 1, 1);
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConstructionError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConstructionError("cannot write " + path);
  out << text;
}

struct Session {
  Config cfg;
  std::unique_ptr<conformal::Workbench> wb;
  std::optional<Manifest> manifest;

  const conformal::Workbench& bench() {
    if (wb) return *wb;
    RewriteSystemPtr A, B;
    if (!cfg.manifest.empty()) {
      manifest = manifest_from_json(read_file(cfg.manifest));
      A = tables::basis_A(manifest->epsilon_sign);
      B = manifest_system(*manifest);
    } else {
      A = tables::basis_A();
      B = tables::basis_B(tables::frozen_fit());
    }
    for (const auto& s : {A, B}) std::const_pointer_cast<RewriteSystem>(s)->set_step_bound(cfg.step_bound);
    wb = std::make_unique<conformal::Workbench>(A, B);
    return *wb;
  }

  NCPoly eval(const std::string& text, Basis b) { return evaluate(*parse(text), bench(), b); }

  std::string show(const NCPoly& p, Basis b) {
    if (b == Basis::B)
      if (auto h = hexa_form(p, bench())) return *h;
    return print_canonical(p);
  }

  repnum::OracleConfig oracle_config() {
    repnum::OracleConfig oc;
    oc.n = cfg.grid_n;
    oc.box = cfg.grid_box;
    oc.epsilon = cfg.grid_epsilon;
    oc.tol = cfg.tol;
    oc.tol_composite = cfg.tol_composite;
    oc.samples = cfg.samples;
    oc.seed = cfg.seed;
    tables::FittedForms f = tables::frozen_fit();
    oc.epsilon_sign = f.epsilon_sign;
    oc.d_weight = f.d_weight.get_d();
    if (!cfg.manifest.empty()) {
      if (!manifest) manifest = manifest_from_json(read_file(cfg.manifest));
      oc.epsilon_sign = manifest->epsilon_sign;
      oc.d_weight = manifest->d_weight.get_d();
    }
    return oc;
  }

  ResultLine line(const std::string& id, bool pass, const std::string& residual, double ms = 0) const {
    return {id, pass, residual, cfg.timing ? ms : 0.0};
  }
};

ResultLine numeric(const Session& s, const std::string& id, double err, double tol, double ms = 0) {
  return s.line(id, err <= tol, sci(err), ms);
}

double rel6(const hg::HexaPoint& a, const hg::HexaPoint& b) {
  double d = 0, m = 1;
  for (int k = 0; k < 6; ++k) {
    d = std::max(d, std::abs(a.y[k] - b.y[k]));
    m = std::max({m, std::abs(a.y[k]), std::abs(b.y[k])});
  }
  return d / m;
}

double scale_sq(const hg::HexaPoint& y) {
  double m = 1;
  for (double v : y.y) m = std::max(m, std::abs(v));
  return m * m;
}

std::string hexa_line(const char* name, const hg::HexaPoint& y) {
  return std::string(name) + " (-, +, 0, 1, 2, 3) = " + vec(y.y);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config base;
  try {
    base = config_from_env();
  } catch (const Error& e) {
    err << "qhexa: " << e.what() << "\n";
    return kExitUsage;
  }
  return run(args, base, out, err);
}

int run(const std::vector<std::string>& args, const Config& base, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noncommutative algebra, hexaspherical geometry and numerical oracle", "qhexa"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path, format, basis_flag, manifest_path;
  std::uint64_t seed = 0;
  std::size_t step_bound = 0;
  bool timing = false;
  auto* o_config = app.add_option("--config", config_path, "key=value config file");
  auto* o_format = app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_step = app.add_option("--step-bound", step_bound, "rewrite step bound");
  auto* o_manifest = app.add_option("--manifest", manifest_path, "load basis B from a manifest");
  auto* o_timing = app.add_flag("--timing", timing, "record wall-clock times in reports");

  auto add_basis = [&](CLI::App* c) {
    return c->add_option("--basis", basis_flag, "A or B")->check(CLI::IsMember({"A", "B"}));
  };

  // alg
  auto* alg = app.add_subcommand("alg", "symbolic algebra")->require_subcommand(1);
  std::string expr_a, expr_b, suite, alpha, target, observable;
  int order = 16, motion_order = 1, suite_samples = 5;
  auto* a_norm = alg->add_subcommand("normalize", "normal form of an expression");
  a_norm->add_option("expr", expr_a)->required();
  add_basis(a_norm);
  auto* a_comm = alg->add_subcommand("commute", "bracket (a, b) = (ab - ba)/(i hbar)");
  a_comm->add_option("a", expr_a)->required();
  a_comm->add_option("b", expr_b)->required();
  add_basis(a_comm);
  auto* a_verify = alg->add_subcommand("verify", "run identity suites");
  a_verify->add_option("--suite", suite, "suite id or 'all'")->required();
  add_basis(a_verify);
  auto* o_valpha = a_verify->add_option("--alpha", alpha, "acceleration r,r,r,r");
  auto* o_vsamples = a_verify->add_option("--samples", suite_samples, "random instances for randomized suites");
  auto* a_boost = alg->add_subcommand("boost", "finite transformation to an accelerated frame");
  a_boost->add_option("--alpha", alpha)->required();
  a_boost->add_option("--target", target)->required();
  a_boost->add_option("--order", order, "maximal series order")->check(CLI::PositiveNumber);
  add_basis(a_boost);
  auto* a_motion = alg->add_subcommand("motion", "motion derivative in an accelerated frame");
  a_motion->add_option("--alpha", alpha)->required();
  a_motion->add_option("--observable", observable)->required();
  a_motion->add_option("--order", motion_order)->check(CLI::Range(1, 2));
  add_basis(a_motion);

  // geom
  auto* geom = app.add_subcommand("geom", "classical hexaspherical geometry")->require_subcommand(1);
  std::string gx, gx2, gy, galpha, gomega;
  double glam = 1, glam2 = 1, grho2 = 0, gk2 = 0;
  int gsamples = 1000;
  auto* g_lift = geom->add_subcommand("lift", "hexaspherical coordinates of a point");
  g_lift->add_option("--x", gx)->required();
  g_lift->add_option("--lam", glam);
  auto* g_map = geom->add_subcommand("map", "conformal map to an accelerated frame");
  g_map->add_option("--x", gx)->required();
  g_map->add_option("--lam", glam);
  g_map->add_option("--alpha", galpha)->required();
  auto* g_rot = geom->add_subcommand("rotate", "six-dimensional rotation");
  g_rot->add_option("--y", gy)->required();
  g_rot->add_option("--alpha", galpha)->required();
  auto* g_inv = geom->add_subcommand("invariant", "pair invariant of two points");
  g_inv->add_option("--x", gx)->required();
  g_inv->add_option("--lam", glam);
  g_inv->add_option("--x2", gx2)->required();
  g_inv->add_option("--lam2", glam2);
  auto* g_hyp = geom->add_subcommand("hyperboloid", "hyperboloid representative and its transform");
  g_hyp->add_option("--omega", gomega, "center omega_mu (lower indices)")->required();
  g_hyp->add_option("--rho2", grho2)->required();
  g_hyp->add_option("--k2", gk2)->required();
  auto* o_halpha = g_hyp->add_option("--alpha", galpha);
  auto* g_check = geom->add_subcommand("check", "randomized property suite");
  g_check->add_option("--samples", gsamples)->check(CLI::PositiveNumber);

  // rep
  auto* rep = app.add_subcommand("rep", "numerical oracle")->require_subcommand(1);
  int grid = 0, rsamples = 0;
  double rtol = 0;
  bool convergence = false;
  std::string fit_write;
  std::vector<CLI::Option*> grid_opts;
  auto add_grid = [&](CLI::App* c) {
    grid_opts.push_back(c->add_option("--grid", grid, "grid points per axis")->check(CLI::Range(12, 256)));
    grid_opts.push_back(c->add_option("--tol", rtol, "residual tolerance")->check(CLI::PositiveNumber));
    grid_opts.push_back(c->add_option("--samples", rsamples, "wavepackets")->check(CLI::PositiveNumber));
  };
  auto* r_cal = rep->add_subcommand("calibrate", "dilatation weight");
  add_grid(r_cal);
  auto* r_check = rep->add_subcommand("check", "basis-B table and identities on wavepackets");
  add_grid(r_check);
  r_check->add_flag("--convergence", convergence, "also run the grid-refinement study");
  auto* r_fit = rep->add_subcommand("fit", "fit the derived basis-B entries");
  add_grid(r_fit);
  r_fit->add_option("--write", fit_write, "write a manifest with the fitted entries");

  // manifest
  auto* man = app.add_subcommand("manifest", "fitted-table manifest")->require_subcommand(1);
  std::string man_path;
  auto* m_write = man->add_subcommand("write", "write the built-in manifest");
  m_write->add_option("path", man_path)->required();
  auto* m_read = man->add_subcommand("read", "load and validate a manifest");
  m_read->add_option("path", man_path)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  Session s;
  Report rep_out;
  try {
    s.cfg = base;
    if (o_config->count()) s.cfg.load(config_path);
    if (o_format->count()) s.cfg.format = format;
    if (o_seed->count()) s.cfg.seed = seed;
    if (o_step->count()) s.cfg.set("step_bound", std::to_string(step_bound));
    if (o_manifest->count()) s.cfg.manifest = manifest_path;
    if (o_timing->count()) s.cfg.timing = timing;
    if (!basis_flag.empty()) s.cfg.basis = parse_basis(basis_flag);
    for (auto* o : grid_opts)
      if (o->count()) {
        if (o->get_name() == "--grid") s.cfg.grid_n = grid;
        if (o->get_name() == "--tol") s.cfg.tol = rtol;
        if (o->get_name() == "--samples") s.cfg.samples = rsamples;
      }

    Report& r = rep_out;
    for (const auto& a : args) r.command += (r.command.empty() ? "" : " ") + a;
    r.config = s.cfg.echo();
    Basis basis = s.cfg.basis;

    if (*a_norm) {
      r.output.push_back(print_canonical(s.eval(expr_a, basis)));
    } else if (*a_comm) {
      const RewriteSystem& rw = s.bench().system(basis);
      r.output.push_back(print_canonical(rw.commutator(s.eval(expr_a, basis), s.eval(expr_b, basis))));
    } else if (*a_verify) {
      conformal::SuiteOptions opt;
      if (!basis_flag.empty()) opt.basis = basis;
      if (o_valpha->count()) opt.alpha = conformal::AccelParams::parse(alpha);
      opt.seed = s.cfg.seed;
      if (o_vsamples->count()) opt.samples = suite_samples;
      std::vector<std::string> ids = suite == "all" ? conformal::suite_ids() : std::vector<std::string>{suite};
      for (const auto& id : ids)
        for (const auto& ir : conformal::verify_suite(id, s.bench(), opt)) {
          std::string res = print_canonical(ir.residual);
          if (!ir.note.empty()) res += " (" + ir.note + ")";
          r.results.push_back(s.line(ir.id, ir.pass, res, ir.time_ms));
        }
    } else if (*a_boost) {
      auto acc = conformal::AccelParams::parse(alpha);
      const auto& o = s.bench().observables(basis);
      auto br = conformal::boost(s.eval(target, basis), acc, s.bench().system(basis), o.C, order);
      r.output.push_back(s.show(br.value, basis));
      r.output.push_back("series: last nonzero order " + std::to_string(br.last_nonzero_order) +
                         (br.terminated ? ", terminated" : ", not terminated within order " + std::to_string(order)));
      r.results.push_back(s.line("series-terminated", br.terminated, ""));
    } else if (*a_motion) {
      auto acc = conformal::AccelParams::parse(alpha);
      const auto& o = s.bench().observables(basis);
      const RewriteSystem& rw = s.bench().system(basis);
      NCPoly mbar = conformal::boost(o.M, acc, rw, o.C).value;
      NCPoly f = s.eval(observable, basis);
      for (int k = 0; k < motion_order; ++k) f = conformal::motion_derivative(f, mbar, rw);
      r.output.push_back(s.show(f, basis));
    } else if (*g_lift) {
      auto y = hg::lift({parse_vec<4>(gx, "--x"), glam});
      r.output.push_back(hexa_line("y", y));
      r.output.push_back("y^2 = " + num(hg::hexa_sq(y)));
      r.results.push_back(numeric(s, "quadric", std::abs(hg::hexa_sq(y)) / scale_sq(y), 1e-12));
    } else if (*g_map) {
      hg::SpaceTimePoint p{parse_vec<4>(gx, "--x"), glam};
      hg::Accel a{parse_vec<4>(galpha, "--alpha")};
      auto q = hg::conformal_map(p, a);
      r.output.push_back("x = " + vec(q.x));
      r.output.push_back("lam = " + num(q.lam));
      r.results.push_back(numeric(s, "commuting-diagram", rel6(hg::rotate_hexa(hg::lift(p), a), hg::lift(q)), 1e-9));
    } else if (*g_rot) {
      hg::HexaPoint y{parse_vec<6>(gy, "--y")};
      auto ry = hg::rotate_hexa(y, hg::Accel{parse_vec<4>(galpha, "--alpha")});
      r.output.push_back(hexa_line("y", ry));
      double d = std::abs(hg::hexa_sq(ry) - hg::hexa_sq(y)) / std::max(scale_sq(y), scale_sq(ry));
      r.results.push_back(numeric(s, "norm-preserved", d, 1e-12));
    } else if (*g_inv) {
      hg::SpaceTimePoint p{parse_vec<4>(gx, "--x"), glam}, q{parse_vec<4>(gx2, "--x2"), glam2};
      double inv = hg::pair_invariant(hg::lift(p), hg::lift(q));
      hg::Vec4 d{p.x[0] - q.x[0], p.x[1] - q.x[1], p.x[2] - q.x[2], p.x[3] - q.x[3]};
      double direct = p.lam * q.lam * hg::minkowski(d, d);
      r.output.push_back("invariant = " + num(inv));
      r.output.push_back("lam lam' (x - x')^2 = " + num(direct));
      r.results.push_back(numeric(s, "hexinv", std::abs(inv - direct) / std::max({1.0, std::abs(inv), std::abs(direct)}), 1e-9));
    } else if (*g_hyp) {
      auto h = hg::Hyperboloid::make(parse_vec<4>(gomega, "--omega"), grho2, gk2);
      r.output.push_back("lam^2 = " + num(h.lam_sq));
      auto y = hg::hyperboloid_lift(h);
      r.output.push_back(hexa_line("y", y));
      r.output.push_back("y^2 = " + num(hg::hexa_sq(y)));
      r.results.push_back(numeric(s, "y2-equals-k2", std::abs(hg::hexa_sq(y) - h.k_sq) / scale_sq(y), 1e-12));
      if (o_halpha->count()) {
        hg::Accel a{parse_vec<4>(galpha, "--alpha")};
        auto hb = hg::hyperboloid_map(h, a);
        r.output.push_back("omega = " + vec(hb.omega));
        r.output.push_back("rho^2 = " + num(hb.rho_sq));
        r.output.push_back("lam^2 = " + num(hb.lam_sq));
        r.results.push_back(numeric(s, "consistency-square",
                                    hg::projective_distance(hg::hyperboloid_lift(hb), hg::rotate_hexa(y, a)), 1e-9));
      }
    } else if (*g_check) {
      for (const auto& pr : hg::property_suite(s.cfg.seed, gsamples))
        r.results.push_back(s.line(pr.id + " (" + std::to_string(pr.samples) + " samples)", pr.pass, sci(pr.max_error)));
    } else if (*r_cal) {
      repnum::Oracle oracle(s.oracle_config());
      auto c = oracle.calibrate();
      auto snapped = repnum::snap_rational(c.weight.real());
      r.output.push_back("weight = " + num(c.weight.real()) + (snapped ? " ~ " + to_string(*snapped) : ""));
      r.output.push_back("sensitivity of (D,M), (D,P) to the weight = " + sci(c.weight_sensitivity));
      r.results.push_back(s.line("weight-rational", snapped.has_value(), snapped ? to_string(*snapped) : num(c.weight.real())));
      r.results.push_back(numeric(s, "(D,M)=M", c.dm_residual, s.cfg.tol));
      r.results.push_back(numeric(s, "(D,P)=P", c.dp_residual, s.cfg.tol));
    } else if (*r_check) {
      repnum::Oracle oracle(s.oracle_config());
      auto add = [&](const std::vector<repnum::CheckReport>& v) {
        for (const auto& c : v) r.results.push_back(s.line(c.id, c.pass, sci(c.residual), c.time_ms));
      };
      std::vector<tables::TableEntry> entries = tables::entries_B(tables::frozen_fit());
      if (!s.cfg.manifest.empty()) {
        s.bench();
        entries = s.manifest->entries;
      }
      add(oracle.check_table(entries));
      add(oracle.check_identities());
      if (convergence)
        for (const auto& c : repnum::convergence_study(s.oracle_config()))
          r.results.push_back(s.line("convergence:" + c.id, c.pass, sci(c.coarse) + " -> " + sci(c.fine)));
    } else if (*r_fit) {
      repnum::Oracle oracle(s.oracle_config());
      std::vector<tables::AnsatzFit> details;
      tables::FittedForms f = tables::fit_all(oracle, &details);
      for (const auto& d : details) {
        std::string coeffs;
        for (const auto& q : d.coefficients) coeffs += (coeffs.empty() ? "" : ",") + to_string(q);
        r.results.push_back(numeric(s, "fit(" + d.left.name() + "," + d.right.name() + ") = [" + coeffs + "]",
                                    d.residual, s.cfg.tol));
      }
      r.output.push_back("ss = " + to_string(f.ss));
      r.output.push_back("xs = " + to_string(f.xs[0]) + ", " + to_string(f.xs[1]) + ", " + to_string(f.xs[2]));
      r.output.push_back("D weight = " + to_string(f.d_weight));
      tables::FittedForms fr = tables::frozen_fit(f.epsilon_sign);
      bool same = f.ss == fr.ss && f.xs == fr.xs && f.d_weight == fr.d_weight;
      r.results.push_back(s.line("matches-frozen-fit", same, ""));
      if (!fit_write.empty()) {
        write_file(fit_write, manifest_to_json(manifest_from_fit(f)));
        r.output.push_back("wrote " + fit_write);
      }
    } else if (*m_write) {
      std::string text = manifest_to_json(manifest_from_fit(tables::frozen_fit()));
      write_file(man_path, text);
      r.output.push_back("wrote " + man_path);
      r.results.push_back(s.line("round-trip", manifest_to_json(manifest_from_json(text)) == text, ""));
    } else if (*m_read) {
      std::string text = read_file(man_path);
      Manifest m = manifest_from_json(text);
      manifest_system(m);
      r.output.push_back(std::to_string(m.entries.size()) + " entries, epsilon " + (m.epsilon_sign > 0 ? "+1" : "-1") +
                         ", D weight " + to_string(m.d_weight));
      r.results.push_back(s.line("load", true, ""));
      r.results.push_back(s.line("round-trip", manifest_to_json(m) == text, ""));
      auto builtin = tables::entries_B(tables::frozen_fit(m.epsilon_sign));
      std::size_t differ = 0;
      for (const auto& e : m.entries)
        for (const auto& b : builtin)
          if (b.left == e.left && b.right == e.right && !(b.bracket == e.bracket)) ++differ;
      r.results.push_back(s.line("matches-builtin-table", differ == 0, std::to_string(differ) + " entries differ"));
    }
  } catch (const ParseError& e) {
    err << "qhexa: parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConsistencyError& e) {
    err << "qhexa: internal consistency error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const OracleError& e) {
    err << "qhexa: oracle: " << e.what() << "\n";
    return kExitFail;
  } catch (const Error& e) {
    err << "qhexa: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "qhexa: internal error: " << e.what() << "\n";
    return kExitInternal;
  }

  out << (s.cfg.format == "json" ? rep_out.to_json() : rep_out.to_text());
  out.flush();
  return rep_out.all_pass() ? kExitPass : kExitFail;
}

} // namespace qhexa::cli
