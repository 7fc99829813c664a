#include "qhexa/cli.hpp"

#include "qhexa/errors.hpp"

#include <cctype>

namespace qhexa::cli {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Dot, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

class Lexer {
public:
  explicit Lexer(const std::string& s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Number;
        t.text = digits();
        if (peek() == '/') {
          t.text += take();
          if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a denominator after '/'");
          t.text += digits();
        } else if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
          fail("floating-point literals are not allowed; write p/q");
        }
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        t.kind = Tok::Ident;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) t.text += take();
        if (peek() == '_') {
          t.text += take();
          if (t.text == "Y_") {
            char k = peek();
            if (k == '+' || k == '-' || (k >= '0' && k <= '9')) t.text += take();
          } else {
            while (std::isdigit(static_cast<unsigned char>(peek()))) t.text += take();
          }
        }
      } else {
        switch (c) {
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        case '.': t.kind = Tok::Dot; break;
        case '^': t.kind = Tok::Caret; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case ',': t.kind = Tok::Comma; break;
        default: fail(std::string("unexpected character '") + c + "'");
        }
        t.text = std::string(1, take());
      }
      out.push_back(std::move(t));
    }
  }

private:
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }
  char take() {
    char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  std::string digits() {
    std::string d;
    while (std::isdigit(static_cast<unsigned char>(peek()))) d += take();
    return d;
  }
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) take();
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

AstPtr node(NodeKind k, const Token& at, std::vector<AstPtr> kids = {}) {
  auto n = std::make_shared<Ast>();
  n->kind = k;
  n->line = at.line;
  n->column = at.column;
  n->kids = std::move(kids);
  return n;
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  AstPtr top() {
    AstPtr e = expr();
    if (cur().kind != Tok::End) fail(cur(), "unexpected " + describe(cur()));
    return e;
  }

private:
  const Token& cur() const { return t_[k_]; }
  const Token& next() { return t_[k_++]; }
  [[noreturn]] void fail(const Token& at, const std::string& msg) const { throw ParseError(msg, at.line, at.column); }
  void expect(Tok kind, const std::string& what) {
    if (cur().kind != kind) fail(cur(), "expected " + what + ", found " + describe(cur()));
    ++k_;
  }

  AstPtr expr() {
    AstPtr lhs;
    if (cur().kind == Tok::Minus) {
      const Token& m = next();
      lhs = node(NodeKind::Neg, m, {term()});
    } else {
      lhs = term();
    }
    while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
      const Token& op = next();
      lhs = node(op.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub, op, {lhs, term()});
    }
    return lhs;
  }

  bool starts_factor() const {
    Tok k = cur().kind;
    return k == Tok::Number || k == Tok::Ident || k == Tok::LParen;
  }

  AstPtr term() {
    AstPtr lhs = factor();
    bool dotted = false;
    for (;;) {
      if (cur().kind == Tok::Star) {
        const Token& op = next();
        lhs = node(NodeKind::Mul, op, {lhs, factor()});
      } else if (cur().kind == Tok::Dot) {
        const Token& op = next();
        if (dotted) fail(op, "chained '.' is ambiguous (the symmetrized product is not associative); add parentheses");
        dotted = true;
        lhs = node(NodeKind::Sym, op, {lhs, factor()});
      } else if (starts_factor()) {
        const Token& at = cur();
        lhs = node(NodeKind::Mul, at, {lhs, factor()});
      } else {
        return lhs;
      }
    }
  }

  AstPtr factor() {
    AstPtr b = base();
    while (cur().kind == Tok::Caret) {
      const Token& op = next();
      const Token& e = cur();
      if (e.kind != Tok::Number || e.text.find('/') != std::string::npos)
        fail(e, "expected a non-negative integer exponent, found " + describe(e));
      ++k_;
      if (e.text.size() > 4) fail(e, "exponent too large");
      auto n = std::make_shared<Ast>(*node(NodeKind::Pow, op, {b}));
      n->exponent = std::stoi(e.text);
      b = n;
    }
    return b;
  }

  AstPtr base() {
    const Token& t = cur();
    switch (t.kind) {
    case Tok::Number: {
      ++k_;
      Rational q;
      try {
        q = parse_rational(t.text);
      } catch (const Error& e) {
        fail(t, e.what());
      }
      auto n = std::make_shared<Ast>(*node(NodeKind::Number, t));
      n->number = q;
      return n;
    }
    case Tok::LParen: {
      ++k_;
      AstPtr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    case Tok::Ident: return ident();
    default: fail(t, "unexpected " + describe(t));
    }
  }

  AstPtr ident() {
    const Token& t = next();
    if (t.text == "i") return node(NodeKind::Imag, t);
    if (t.text == "hbar") return node(NodeKind::Hbar, t);
    if (t.text == "comm") {
      expect(Tok::LParen, "'(' after comm");
      AstPtr a = expr();
      expect(Tok::Comma, "',' in comm(,)");
      AstPtr b = expr();
      expect(Tok::RParen, "')' closing comm(,)");
      return node(NodeKind::Comm, t, {a, b});
    }
    if (t.text.rfind("Y_", 0) == 0) {
      static const std::string names[] = {"Y_-", "Y_+", "Y_0", "Y_1", "Y_2", "Y_3"};
      for (int a = 0; a < 6; ++a)
        if (t.text == names[a]) {
          auto n = std::make_shared<Ast>(*node(NodeKind::Hexa, t));
          n->hexa = a;
          return n;
        }
      fail(t, "bad hexaspherical index in '" + t.text + "' (expected Y_-, Y_+ or Y_0..Y_3)");
    }
    SignedAtom sa;
    try {
      sa = parse_atom(t.text);
    } catch (const ConstructionError& e) {
      fail(t, e.what());
    }
    auto n = std::make_shared<Ast>(*node(NodeKind::Atom, t));
    n->atom = sa.atom;
    n->sign = sa.sign;
    return n;
  }

  std::vector<Token> t_;
  std::size_t k_ = 0;
};

NCPoly composite(const Atom& a, const conformal::ObservableSet& o) {
  switch (a.kind) {
  case AtomKind::P: return o.P[a.i];
  case AtomKind::S: return o.S[a.i];
  case AtomKind::X: return o.X[a.i];
  case AtomKind::C: return o.C[a.i];
  case AtomKind::J: return o.J[a.i][a.j];
  case AtomKind::D: return o.D;
  case AtomKind::M: return o.M;
  case AtomKind::Minv: break;
  }
  throw ConstructionError("no composite for " + a.name());
}

NCPoly eval(const Ast& a, const RewriteSystem& rw, const conformal::ObservableSet& o) {
  auto kid = [&](int k) { return eval(*a.kids[k], rw, o); };
  switch (a.kind) {
  case NodeKind::Number: return NCPoly(GaussRational(a.number));
  case NodeKind::Imag: return NCPoly::imag();
  case NodeKind::Hbar: return NCPoly::hbar(1);
  case NodeKind::Atom: {
    NCPoly v = rw.contains(a.atom) ? NCPoly::atom(a.atom) : composite(a.atom, o);
    return a.sign < 0 ? -v : v;
  }
  case NodeKind::Hexa: return o.Y[a.hexa];
  case NodeKind::Neg: return -kid(0);
  case NodeKind::Add: return kid(0) + kid(1);
  case NodeKind::Sub: return kid(0) - kid(1);
  case NodeKind::Mul: return rw.product(kid(0), kid(1));
  case NodeKind::Sym: return rw.sym(kid(0), kid(1));
  case NodeKind::Comm: return rw.commutator(kid(0), kid(1));
  case NodeKind::Pow: return rw.power(kid(0), a.exponent);
  }
  return NCPoly();
}

} // namespace

AstPtr parse(const std::string& text) {
  Lexer lex(text);
  Parser p(lex.run());
  return p.top();
}

std::string ast_string(const Ast& a) {
  auto kid = [&](int k) { return ast_string(*a.kids[k]); };
  switch (a.kind) {
  case NodeKind::Number: return to_string(a.number);
  case NodeKind::Imag: return "i";
  case NodeKind::Hbar: return "hbar";
  case NodeKind::Atom: return a.sign < 0 ? "(-" + a.atom.name() + ")" : a.atom.name();
  case NodeKind::Hexa: return "Y_" + conformal::hex_name(a.hexa);
  case NodeKind::Neg: return "(-" + kid(0) + ")";
  case NodeKind::Add: return "(" + kid(0) + " + " + kid(1) + ")";
  case NodeKind::Sub: return "(" + kid(0) + " - " + kid(1) + ")";
  case NodeKind::Mul: return "(" + kid(0) + " * " + kid(1) + ")";
  case NodeKind::Sym: return "(" + kid(0) + " . " + kid(1) + ")";
  case NodeKind::Comm: return "comm(" + kid(0) + ", " + kid(1) + ")";
  case NodeKind::Pow: return "(" + kid(0) + "^" + std::to_string(a.exponent) + ")";
  }
  return "?";
}

NCPoly to_poly(const Ast& a) {
  auto kid = [&](int k) { return to_poly(*a.kids[k]); };
  switch (a.kind) {
  case NodeKind::Number: return NCPoly(GaussRational(a.number));
  case NodeKind::Imag: return NCPoly::imag();
  case NodeKind::Hbar: return NCPoly::hbar(1);
  case NodeKind::Atom: return NCPoly::atom(a.atom, a.sign);
  case NodeKind::Hexa: throw ConstructionError("Y_" + conformal::hex_name(a.hexa) + " needs a basis");
  case NodeKind::Neg: return -kid(0);
  case NodeKind::Add: return kid(0) + kid(1);
  case NodeKind::Sub: return kid(0) - kid(1);
  case NodeKind::Mul: return multiply(kid(0), kid(1));
  case NodeKind::Sym: return sym_product(kid(0), kid(1));
  case NodeKind::Comm: throw ConstructionError("comm(,) needs a basis");
  case NodeKind::Pow: {
    NCPoly base = kid(0), r(1);
    for (int k = 0; k < a.exponent; ++k) r = multiply(r, base);
    return r;
  }
  }
  return NCPoly();
}

NCPoly evaluate(const Ast& a, const conformal::Workbench& wb, Basis basis) {
  const RewriteSystem& rw = wb.system(basis);
  return rw.normalize(eval(a, rw, wb.observables(basis)));
}

} // namespace qhexa::cli
