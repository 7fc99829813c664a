#include "qhexa/cli.hpp"
#include "qhexa/conformal.hpp"
#include "qhexa/hexgeom.hpp"
#include "qhexa/repnum.hpp"
#include "qhexa/tables.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace qhexa;
using conformal::IdentityReport;
using conformal::SuiteOptions;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned thresholds.
constexpr double kSymbolicBudgetS = 60.0;
constexpr double kOracleBudgetS = 600.0;
constexpr double kOracleTol = 1e-6;
constexpr double kOracleTolComposite = 1e-5;
constexpr double kConvergenceFactor = 64.0;
constexpr double kConvergenceFloor = 1e-10;
constexpr int kOracleSamples = 8;
constexpr int kGridN = 32;
constexpr double kQuadricTol = 1e-12;
constexpr double kGeomTol = 1e-9;
constexpr double kMetricRatioLo = 3.5, kMetricRatioHi = 4.5;
constexpr int kGeomSamples = 1000;
constexpr int kRoundTrips = 1000;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Tally {
  std::size_t count = 0, failed = 0;
  std::string first_failure;
  void add(const std::vector<IdentityReport>& reps) {
    for (const auto& r : reps) {
      ++count;
      if (!r.pass) {
        if (!failed) first_failure = r.id;
        ++failed;
      }
    }
  }
  bool ok() const { return count > 0 && failed == 0; }
  std::string str() const {
    std::string s = std::to_string(count - failed) + "/" + std::to_string(count);
    if (failed) s += " first failure " + first_failure;
    return s;
  }
};

std::vector<IdentityReport> suite(const conformal::Workbench& wb, const std::string& id, std::optional<Basis> b = {},
                                  int samples = 5) {
  SuiteOptions opt;
  opt.basis = b;
  opt.samples = samples;
  return conformal::verify_suite(id, wb, opt);
}

std::size_t count_prefix(const std::vector<IdentityReport>& reps, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& r : reps) {
    auto colon = r.id.find(':');
    n += r.id.compare(colon == std::string::npos ? 0 : colon + 1, prefix.size(), prefix) == 0;
  }
  return n;
}

int failures = 0;

void report(int k, const std::string& title, bool pass, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", pass ? "PASS" : "FAIL", k, title.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

NCPoly random_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nt(0, 6), wl(0, 5), atom(0, kAtomCount - 1), num(-50, 50), den(1, 12), hb(0, 3);
  NCPoly p;
  for (int t = nt(rng); t > 0; --t) {
    std::string ids;
    for (int k = wl(rng); k > 0; --k) ids.push_back(static_cast<char>(atom(rng)));
    GaussRational c(Rational(num(rng), den(rng)), Rational(num(rng) % 3, den(rng)));
    p += NCPoly::monomial(Word(ids), c, hb(rng));
  }
  return p;
}

struct Run {
  int code;
  std::string out;
};
Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, cli::Config{}, out, err);
  return {code, out.str()};
}

} // namespace

int main(int argc, char** argv) {
  bool skip_oracle = argc > 1 && std::string(argv[1]) == "--skip-oracle";
  conformal::Workbench wb;

  {
    auto t0 = Clock::now();
    Tally a, b;
    auto ra = suite(wb, "JJ", Basis::A), rb = suite(wb, "JJ", Basis::B);
    a.add(ra);
    b.add(rb);
    double s = seconds_since(t0);
    bool pass = a.ok() && b.ok() && ra.size() == 105 && rb.size() == 105 && s <= kSymbolicBudgetS;
    report(1, "so(4,2) closure", pass,
           "A " + a.str() + ", B " + b.str() + ", " + std::to_string(s) + " s (budget 60 s)");
  }
  {
    auto jy = suite(wb, "JY"), yy = suite(wb, "YY");
    Tally t1, t2;
    t1.add(jy);
    t2.add(yy);
    report(2, "vector law", t1.ok() && t2.ok() && jy.size() == 90 && yy.size() == 15,
           "JY " + t1.str() + ", YY " + t2.str());
  }
  {
    Tally y2, s2;
    y2.add(suite(wb, "Y2"));
    s2.add(suite(wb, "S2"));
    report(3, "Casimir identities", y2.ok() && s2.ok(), "Y^2 " + y2.str() + ", S^2 " + s2.str());
  }
  {
    auto px = suite(wb, "PX", Basis::A), xx = suite(wb, "XX", Basis::A), inv = suite(wb, "inverse", Basis::A);
    Tally t1, t2, t3;
    t1.add(px);
    t2.add(xx);
    t3.add(inv);
    std::size_t px_components = count_prefix(px, "P_");
    report(4, "localization", t1.ok() && t2.ok() && t3.ok() && px_components == 16 && xx.size() == 6,
           "PX " + t1.str() + " (" + std::to_string(px_components) + " (P,X) components), XX " + t2.str() +
               ", inverse " + t3.str());
  }
  {
    auto bo = suite(wb, "boost", Basis::B, 5);
    Tally t;
    t.add(bo);
    std::size_t closed = count_prefix(bo, "M@"), order = count_prefix(bo, "M-order@"), group = count_prefix(bo, "group(");
    report(5, "finite transformations", t.ok() && closed >= 6 && order == closed && group > 0,
           t.str() + " (" + std::to_string(closed) + " closed forms, " + std::to_string(group) + " group-law checks)");
  }
  {
    auto d2 = suite(wb, "d2Y"), cons = suite(wb, "conservation"), leib = suite(wb, "motion-leibniz");
    Tally t1, t2, t3;
    t1.add(d2);
    t2.add(cons);
    t3.add(leib);
    // 6 accelerations (zero, timelike, spacelike, 3 random) x (4 Y_mu + M + Z)
    report(6, "free fall", t1.ok() && t2.ok() && t3.ok() && d2.size() == 36,
           "d2Y " + t1.str() + ", conservation " + t2.str() + ", leibniz " + t3.str());
  }
  {
    auto r = suite(wb, "YYY");
    Tally t;
    t.add(r);
    report(7, "covariant Newton law", t.ok() && r.size() == 216, t.str());
  }
  {
    Tally a, b;
    a.add(suite(wb, "jacobi", Basis::A));
    b.add(suite(wb, "jacobi", Basis::B));
    report(8, "Jacobi", a.ok() && b.ok(), "A " + a.str() + ", B " + b.str());
  }
  if (skip_oracle) {
    report(9, "numerical oracle", false, "skipped");
  } else {
    repnum::OracleConfig cfg;
    cfg.n = kGridN;
    cfg.samples = kOracleSamples;
    cfg.tol = kOracleTol;
    cfg.tol_composite = kOracleTolComposite;
    auto t0 = Clock::now();
    repnum::Oracle oracle(cfg);
    auto reps = oracle.check_table(tables::entries_B());
    auto ids = oracle.check_identities();
    reps.insert(reps.end(), ids.begin(), ids.end());
    double s = seconds_since(t0);
    std::size_t bad = 0;
    double worst = 0;
    std::string first;
    for (const auto& r : reps) {
      bool ok = r.pass && r.tol <= kOracleTolComposite && r.residual <= r.tol;
      if (!ok && !bad++) first = r.id;
      worst = std::max(worst, r.residual);
    }
    auto conv = repnum::convergence_study(cfg);
    std::ostringstream cs;
    bool conv_ok = !conv.empty();
    for (const auto& c : conv) {
      bool ok = c.ratio >= kConvergenceFactor || c.fine <= kConvergenceFloor;
      conv_ok = conv_ok && ok;
      cs << " " << c.id << " ratio " << c.ratio;
    }
    std::ostringstream d;
    d << reps.size() - bad << "/" << reps.size() << " checks on " << oracle.samples().size() << " packets, worst "
      << worst << ", " << s << " s (budget 600 s);" << cs.str();
    if (bad) d << "; first failure " << first;
    report(9, "numerical oracle", bad == 0 && s <= kOracleBudgetS && conv_ok && oracle.samples().size() >= 8, d.str());
  }
  {
    auto res = hexgeom::property_suite(20240101, kGeomSamples);
    const std::map<std::string, double> pinned{
        {"quadric", kQuadricTol},          {"commuting-diagram", kGeomTol}, {"hexinv", kGeomTol},
        {"hexinv-frame-invariance", kGeomTol}, {"hyperboloid-square", kGeomTol},
        {"metric-order", std::max(4 - kMetricRatioLo, kMetricRatioHi - 4)}};
    bool pass = true;
    std::ostringstream d;
    std::size_t seen = 0;
    for (const auto& r : res) {
      pass = pass && r.pass;
      if (auto it = pinned.find(r.id); it != pinned.end()) {
        ++seen;
        pass = pass && r.max_error <= it->second && r.samples > 0;
        d << " " << r.id << " " << r.max_error;
      }
    }
    pass = pass && seen == pinned.size();
    report(10, "classical geometry", pass, std::to_string(res.size()) + " properties;" + d.str());
  }
  {
    std::mt19937_64 rng(31337);
    int bad = 0;
    for (int k = 0; k < kRoundTrips; ++k) {
      NCPoly p = random_poly(rng);
      if (cli::to_poly(*cli::parse(cli::print_canonical(p))) != p) ++bad;
      if (cli::poly_from_json(cli::poly_to_json(p)) != p) ++bad;
    }
    std::vector<std::string> det{"--format", "json", "--seed", "7", "alg", "verify", "--suite", "boost"};
    bool same = run(det).out == run(det).out;
    std::vector<std::string> geo{"--seed", "7", "geom", "check", "--samples", "50"};
    same = same && run(geo).out == run(geo).out;
    std::map<std::string, std::pair<int, int>> codes{
        {"pass", {run({"alg", "verify", "--suite", "YY"}).code, cli::kExitPass}},
        {"fail", {run({"alg", "boost", "--alpha", "1,0,0,0", "--target", "D", "--order", "1"}).code, cli::kExitFail}},
        {"usage", {run({"alg", "normalize", "P_0 +"}).code, cli::kExitUsage}},
        {"internal", {run({"--step-bound", "1", "alg", "normalize", "X_0 X_1 P_0 S_2"}).code, cli::kExitInternal}}};
    std::ostringstream d;
    bool codes_ok = true;
    for (const auto& [k, v] : codes) {
      codes_ok = codes_ok && v.first == v.second;
      d << " " << k << "=" << v.first;
    }
    report(11, "command line", bad == 0 && same && codes_ok,
           std::to_string(kRoundTrips - bad / 2) + "/" + std::to_string(kRoundTrips) + " round trips, reports " +
               (same ? "identical" : "differ") + ", exit codes" + d.str());
  }
  std::printf("%d criteria failed\n", failures);
  return failures ? 1 : 0;
}
