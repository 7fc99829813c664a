#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

namespace qhexa {

/// Exact rational, backed by GMP.
using Rational = mpq_class;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

/// Gaussian rational a + b i with a, b exact rationals.
class GaussRational {
public:
  GaussRational() = default;
  GaussRational(long v) : re_(v) {}
  GaussRational(Rational re) : re_(std::move(re)) { re_.canonicalize(); }
  GaussRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussRational i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussRational conj() const { return raw(re_, -im_); }
  GaussRational times_i() const { return raw(-im_, re_); }
  GaussRational div_i() const { return raw(im_, -re_); }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o);
  GaussRational& operator/=(const GaussRational& o);

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  GaussRational operator-() const { return raw(-re_, -im_); }

  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

private:
  static GaussRational raw(Rational re, Rational im) {
    GaussRational g;
    g.re_ = std::move(re);
    g.im_ = std::move(im);
    return g;
  }

  Rational re_{0};
  Rational im_{0};
};

/// A Gaussian rational scaled by a non-negative power of hbar.
struct Coefficient {
  GaussRational value;
  int hbar = 0;
};

} // namespace qhexa
