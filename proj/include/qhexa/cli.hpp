#pragma once

#include "qhexa/conformal.hpp"
#include "qhexa/tables.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qhexa::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kManifestVersion = 1;
inline constexpr int kReportVersion = 1;

// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

enum class NodeKind { Number, Imag, Hbar, Atom, Hexa, Neg, Add, Sub, Mul, Sym, Comm, Pow };

/// Expression tree. Atom nodes hold a generator (J already antisymmetrized into
/// `sign`); Hexa nodes hold a six-dimensional index for Y_a.
struct Ast {
  NodeKind kind = NodeKind::Number;
  Rational number;
  Atom atom;
  int sign = 1;
  int hexa = 0;
  int exponent = 0;
  std::vector<std::shared_ptr<const Ast>> kids;
  int line = 1;
  int column = 1;
};
using AstPtr = std::shared_ptr<const Ast>;

/// expr   := ['-'] term (('+'|'-') term)*
/// term   := factor (('*' | '.' | juxtaposition) factor)*, at most one '.' per term
/// factor := base ('^' uint)*
/// base   := rational | 'i' | 'hbar' | atom | 'comm(' expr ',' expr ')' | '(' expr ')'
/// Throws ParseError with line and column.
AstPtr parse(const std::string& text);

/// Fully parenthesized rendering of the tree, for diagnostics.
std::string ast_string(const Ast& a);

/// Literal reading in the free algebra: atoms are taken as they are, products
/// are concatenations. Rejects comm and Y_a (they need a basis).
NCPoly to_poly(const Ast& a);

/// Value in a basis: atoms outside the basis are replaced by their composites,
/// Y_a by the hexaspherical observables; the result is normalized.
NCPoly evaluate(const Ast& a, const conformal::Workbench& wb, Basis basis);

/// Terms in canonical order; coefficients as "(a/b + c/d i) hbar^k" with
/// trivial parts dropped; words as space-separated atoms. parse + to_poly
/// reproduces the input exactly.
std::string print_canonical(const NCPoly& p);

/// Coefficient rendering used by the printers ("", "2", "(1/4)", "(1/2 - i)").
std::string print_scalar(const GaussRational& c);

/// Linear combination of named operators, e.g. "M - Y_0 + (1/4) (Y_+ - Y_-)".
std::string print_combination(const std::vector<GaussRational>& coeffs, const std::vector<std::string>& names);

/// Decomposition onto {M, Y_0..Y_3, Y_+ - Y_-} in basis B, if possible.
std::optional<std::string> hexa_form(const NCPoly& p, const conformal::Workbench& wb);

// Structured documents (JSON).
std::string poly_to_json(const NCPoly& p);
NCPoly poly_from_json(const std::string& text);

struct Manifest {
  int epsilon_sign = 1;
  std::vector<tables::TableEntry> entries;
  Rational d_weight{2};
};
Manifest manifest_from_fit(const tables::FittedForms& fit);
std::string manifest_to_json(const Manifest& m);
/// Throws ConstructionError on malformed documents or a version mismatch.
Manifest manifest_from_json(const std::string& text);
/// Basis-B system rebuilt from the entries; names the first missing entry.
RewriteSystemPtr manifest_system(const Manifest& m);

struct Config {
  Basis basis = Basis::B;
  int grid_n = 32;
  double grid_box = 0.4;
  double grid_epsilon = 0.5;
  double tol = 1e-6;
  double tol_composite = 1e-5;
  std::size_t step_bound = 50000000;
  std::string manifest;
  std::string format = "text";
  std::uint64_t seed = 12345;
  int samples = 8;
  bool timing = false;

  /// Applies one key=value pair; throws ConstructionError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Flat key=value lines; '#' starts a comment.
  void load(const std::string& path);
  std::vector<std::pair<std::string, std::string>> echo() const;
};
/// Config file named by QHEXA_CONFIG, if set.
Config config_from_env();

struct ResultLine {
  std::string id;
  bool pass = false;
  std::string residual;
  double time_ms = 0;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<ResultLine> results;
  std::vector<std::string> output;  // free-form lines printed before the results (text format)

  bool all_pass() const;
  std::string to_json() const;
  std::string to_text() const;
};

/// Runs the qhexa command line. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, const Config& base, std::ostream& out, std::ostream& err);

} // namespace qhexa::cli
